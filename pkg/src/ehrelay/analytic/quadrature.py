"""Gauss-Chebyshev rule used for the saturated-harvester integrals."""

from __future__ import annotations

import numpy as np

__all__ = ["chebyshev_nodes", "gauss_chebyshev"]


def chebyshev_nodes(a: float, b: float, chi: int):
    """Nodes ``x_i`` on ``(a, b)`` and the matching weights of :func:`gauss_chebyshev`."""
    if chi < 1:
        raise ValueError(f"chi must be at least 1, got {chi}")
    if not a < b:
        raise ValueError(f"need a < b, got ({a}, {b})")
    i = np.arange(1, chi + 1)
    y = np.cos((2 * i - 1) * np.pi / (2 * chi))
    x = 0.5 * (b - a) * y + 0.5 * (b + a)
    w = 0.5 * (b - a) * (np.pi / chi) * np.sqrt(1.0 - y * y)
    return x, w


def gauss_chebyshev(integrand, a: float, b: float, chi: int) -> float:
    """Approximate ``int_a^b f(x) dx`` with ``chi`` Chebyshev-Gauss nodes.

    The Chebyshev weight ``1/sqrt(1-y^2)`` is undone by the factor
    ``sqrt(1-y^2)``, so any smooth ``f`` can be passed.  ``integrand`` is called
    once per node with a float.
    """
    x, w = chebyshev_nodes(a, b, chi)
    return float(sum(wi * integrand(float(xi)) for xi, wi in zip(x, w)))
