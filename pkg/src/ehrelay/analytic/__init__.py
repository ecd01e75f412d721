"""Closed-form error probabilities, their special-function kernels and quadrature oracles."""

from .ber import BerBreakdown, analytic_ber
from .meijer import MeijerGError, MeijerGResult, MeijerGSpec, meijer_g, meijer_g_detailed
from .quadrature import gauss_chebyshev
from .ser import SerValue, ber_overall

__all__ = [
    "BerBreakdown",
    "MeijerGError",
    "MeijerGResult",
    "MeijerGSpec",
    "SerValue",
    "analytic_ber",
    "ber_overall",
    "gauss_chebyshev",
    "meijer_g",
    "meijer_g_detailed",
]
