import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seagull.activations import (
    ELU,
    IDENTITY,
    RELU,
    SEAGULL,
    SIGMOID,
    SINE,
    SOFTPLUS,
    SQUARE,
    TANH,
    ActivationKind,
    is_even,
    logpow,
    parse_activation,
)

from conftest import rel_err

ALL = [RELU, ELU, SIGMOID, TANH, SOFTPLUS, SEAGULL, logpow(1.5), logpow(0.5), logpow(2.0, 0.0), SQUARE, SINE, IDENTITY]
EVEN_KINDS = [k for k in ALL if k.is_even]
finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_seagull_values():
    assert SEAGULL.eval(0.0) == 0.0
    assert SEAGULL.eval(1.0) == pytest.approx(math.log(2), abs=1e-15)
    assert SEAGULL.eval(-3.0) == SEAGULL.eval(3.0) == pytest.approx(math.log(10), abs=1e-15)


def test_other_values():
    assert SIGMOID.eval(0.0) == 0.5
    assert RELU.eval(-2.0) == 0.0
    assert ELU.eval(-1.0) == pytest.approx(math.exp(-1) - 1)
    assert ELU.eval(2.5) == 2.5
    assert SOFTPLUS.eval(0.0) == pytest.approx(math.log(2))


def test_seagull_derivative_values():
    assert SEAGULL.deriv(0.0) == 0.0
    assert SEAGULL.deriv(1.0) == 1.0
    assert RELU.deriv(0.0) == 0.0


@pytest.mark.parametrize("kind", ALL, ids=str)
def test_derivative_matches_finite_differences(kind):
    r = np.random.default_rng(7)
    x = r.uniform(-10, 10, size=1000)
    if kind.name in ("relu", "elu", "logpow"):
        x = x[np.abs(x) > 1e-4]
    h = 1e-7
    fd = (kind.eval(x + h) - kind.eval(x - h)) / (2 * h)
    assert rel_err(kind.deriv(x), fd).max() < 1e-5


def test_evenness_metadata():
    assert is_even(SEAGULL) and is_even(SQUARE) and is_even(logpow(0.5))
    assert not is_even(RELU)
    assert SINE.is_odd and not SINE.is_even
    for k in (RELU, ELU, SIGMOID, TANH, SOFTPLUS, IDENTITY):
        assert not k.is_even and not k.is_odd


@pytest.mark.parametrize("kind", EVEN_KINDS, ids=str)
@given(x=finite)
def test_evenness_is_bitwise(kind, x):
    assert kind.eval(x) == kind.eval(-x)


@pytest.mark.parametrize("kind", [k for k in ALL if not k.is_even], ids=str)
def test_non_even_kinds_break_evenness_somewhere(kind):
    x = np.linspace(0.1, 3, 50)
    assert np.any(kind.eval(x) != kind.eval(-x))


@pytest.mark.parametrize("kind", EVEN_KINDS, ids=str)
@given(x=finite)
def test_even_kinds_have_odd_derivatives(kind, x):
    assert abs(kind.deriv(-x) + kind.deriv(x)) <= 1e-12


@given(x=finite)
def test_seagull_nonnegative_zero_only_at_origin(x):
    v = SEAGULL.eval(x)
    assert v >= 0
    assert (v == 0) == (x == 0) or abs(x) < 1e-154  # x*x underflows below ~1e-162


def test_softplus_sigmoid_stable_at_extremes():
    x = np.linspace(-700, 700, 14001)
    with np.errstate(all="raise"):
        sp = SOFTPLUS.eval(x)
        d = SOFTPLUS.deriv(x)
        s = SIGMOID.eval(x)
    assert np.all(np.isfinite(sp)) and np.all(np.isfinite(d)) and np.all(np.isfinite(s))
    assert sp[-1] == 700.0 and sp[0] >= 0


def test_logpow_construction_rules():
    with pytest.raises(ValueError):
        ActivationKind("logpow", alpha=0.5, eps=0.0)
    with pytest.raises(ValueError):
        ActivationKind("logpow", alpha=-1.0)
    assert logpow(0.5).eps == 1e-2
    assert logpow(2.0).eps == 0.0
    # alpha=2, eps=0 is Seagull
    x = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(logpow(2.0).eval(x), SEAGULL.eval(x), rtol=1e-15)


def test_logpow_gradient_bounded_for_small_alpha():
    k = logpow(0.5)
    x = np.concatenate([-np.logspace(-12, 0, 50), np.logspace(-12, 0, 50)])
    bound = k.alpha / k.eps ** (1 - k.alpha)
    assert np.abs(k.deriv(x)).max() <= bound


@pytest.mark.parametrize(
    "text, kind",
    [
        ("relu", RELU),
        ("ELU", ELU),
        ("sigmoid", SIGMOID),
        ("tanh", TANH),
        ("softplus", SOFTPLUS),
        ("seagull", SEAGULL),
        ("square", SQUARE),
        ("sine", SINE),
        ("identity", IDENTITY),
        ("logpow:0.5:0.01", logpow(0.5, 0.01)),
        ("elu:0.5", ActivationKind("elu", alpha=0.5)),
    ],
)
def test_parse_names(text, kind):
    assert parse_activation(text) == kind
    assert parse_activation(kind.label) == kind


@pytest.mark.parametrize("bad", ["bogus", "logpow", "logpow:0.5:0", "relu:3", "logpow:x:1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_activation(bad)


def test_kinds_are_hashable_values():
    assert len({RELU, ActivationKind("relu"), SEAGULL}) == 2
