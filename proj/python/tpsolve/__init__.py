"""Python bindings for the time-periodic solver library."""

from ._core import mixed_norm, run_experiment, solve

__all__ = ["mixed_norm", "run_experiment", "solve"]
