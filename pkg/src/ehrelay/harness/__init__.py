"""Sweeps, figure presets and the command-line interface."""

from .experiments import approximation_error, difference_lambda, lambda_crossing, optimize_rho
from .presets import PRESETS, run_preset
from .sweep import SweepResult, SweepRow, SweepSpec, run_sweep

__all__ = [
    "PRESETS",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "approximation_error",
    "difference_lambda",
    "lambda_crossing",
    "optimize_rho",
    "run_preset",
    "run_sweep",
]
