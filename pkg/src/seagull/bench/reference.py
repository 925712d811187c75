"""Published MAE values for the triangle-area and solid-angle benchmarks.

Each entry is (baseline MAE, MAE with Seagull in the first hidden layer),
mean of 5 runs at 500 epochs.
"""

_ACTS = ("relu", "elu", "sigmoid", "tanh", "softplus")
_ROWS = ("identity", "log1p", "exp-div100", "sin", "sqrt-ratio")

_CLEAN = (
    ((0.105, 0.030), (0.059, 0.022), (0.172, 0.022), (0.205, 0.047), (0.047, 0.020)),
    ((0.032, 0.014), (0.024, 0.012), (0.048, 0.008), (0.076, 0.017), (0.018, 0.007)),
    ((0.137, 0.059), (0.092, 0.055), (0.254, 0.032), (0.225, 0.079), (0.069, 0.041)),
    ((0.082, 0.027), (0.042, 0.018), (0.106, 0.011), (0.169, 0.026), (0.030, 0.019)),
    ((0.024, 0.008), (0.015, 0.011), (0.072, 0.005), (0.054, 0.011), (0.011, 0.007)),
)

_NOISY = (
    ((0.126, 0.054), (0.078, 0.043), (0.159, 0.035), (0.236, 0.081), (0.059, 0.032)),
    ((0.041, 0.020), (0.027, 0.018), (0.042, 0.013), (0.087, 0.025), (0.022, 0.012)),
    ((0.160, 0.106), (0.123, 0.090), (0.185, 0.054), (0.266, 0.136), (0.094, 0.056)),
    ((0.092, 0.034), (0.056, 0.027), (0.271, 0.017), (0.174, 0.040), (0.032, 0.021)),
    ((0.026, 0.010), (0.018, 0.012), (0.038, 0.011), (0.054, 0.017), (0.013, 0.007)),
)


def _table(values):
    return {(row, act): values[i][j] for i, row in enumerate(_ROWS) for j, act in enumerate(_ACTS)}


TRIANGLE_CLEAN = _table(_CLEAN)
TRIANGLE_NOISY = _table(_NOISY)

# best-epoch MAE, ReLU only, keyed by training-set size
SOLID_ANGLE = {10_000: (0.108, 0.080), 50_000: (0.086, 0.043)}


def lookup(target: str, transform: str, activation: str, train_n: int, noisy: bool):
    """Published (baseline, seagull) pair for a cell, or None when none was reported."""
    if target == "triangle-area" and train_n == 10_000:
        return (TRIANGLE_NOISY if noisy else TRIANGLE_CLEAN).get((transform, activation))
    if target == "solid-angle" and transform == "identity" and activation == "relu" and not noisy:
        return SOLID_ANGLE.get(train_n)
    return None
