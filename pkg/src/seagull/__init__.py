"""Even ("Seagull") activations and a benchmark harness for partially exchangeable regression targets."""

__version__ = "0.1.0"
