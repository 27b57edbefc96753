"""Learning-based herding attacks against obstacle-avoiding mobile robots."""

__version__ = "0.1.0"
