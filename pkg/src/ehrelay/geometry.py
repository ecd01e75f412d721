"""Inter-vehicle distance models and path-loss transforms.

Distances are dimensionless multiples of a reference distance and the
path-loss ``d**-v`` is a linear power scale.  A uniformly distributed distance
``d ~ U(lo, hi)`` induces a power-law density on the path-loss ``Z = d**-v``
supported on ``(hi**-v, lo**-v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "DEFAULT_PATHLOSS_EXPONENT",
    "LinkGeometry",
    "pathloss",
    "pathloss_pdf",
    "pathloss_cdf",
    "product_pdf_u",
]

DEFAULT_PATHLOSS_EXPONENT = 2.7


@dataclass(frozen=True)
class LinkGeometry:
    """Distance model of one hop.

    ``deterministic`` geometries carry ``d``; ``uniform`` ones carry the
    interval ``(lo, hi)``.
    """

    kind: str = "uniform"
    d: Optional[float] = None
    lo: Optional[float] = 1.0
    hi: Optional[float] = 3.0
    v: float = DEFAULT_PATHLOSS_EXPONENT

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError(f"path-loss exponent must be positive, got {self.v}")
        if self.kind == "deterministic":
            if self.d is None or not self.d > 0:
                raise ValueError(f"deterministic distance must be positive, got {self.d}")
            object.__setattr__(self, "lo", None)
            object.__setattr__(self, "hi", None)
        elif self.kind == "uniform":
            if self.lo is None or self.hi is None:
                raise ValueError("uniform geometry needs lo and hi")
            if not 0 < self.lo < self.hi:
                raise ValueError(
                    f"uniform distance interval must satisfy 0 < lo < hi, got ({self.lo}, {self.hi})"
                )
            object.__setattr__(self, "d", None)
        else:
            raise ValueError(f"unknown geometry kind {self.kind!r}")

    @classmethod
    def deterministic(cls, d: float, v: float = DEFAULT_PATHLOSS_EXPONENT) -> "LinkGeometry":
        return cls(kind="deterministic", d=float(d), v=float(v))

    @classmethod
    def uniform(cls, lo: float = 1.0, hi: float = 3.0,
                v: float = DEFAULT_PATHLOSS_EXPONENT) -> "LinkGeometry":
        return cls(kind="uniform", lo=float(lo), hi=float(hi), v=float(v))

    @property
    def is_uniform(self) -> bool:
        return self.kind == "uniform"

    @property
    def support(self) -> tuple[float, float]:
        """Path-loss support ``(min, max)``; degenerate for fixed distances."""
        if self.is_uniform:
            return pathloss(self.hi, self.v), pathloss(self.lo, self.v)
        z = pathloss(self.d, self.v)
        return z, z

    @property
    def mean_distance(self) -> float:
        return 0.5 * (self.lo + self.hi) if self.is_uniform else self.d

    def sample_distance(self, rng: np.random.Generator, size=None):
        if self.is_uniform:
            return rng.uniform(self.lo, self.hi, size)
        return np.full(size, self.d) if size is not None else self.d

    def sample_pathloss(self, rng: np.random.Generator, size=None):
        return pathloss(self.sample_distance(rng, size), self.v)

    def to_dict(self) -> dict:
        if self.is_uniform:
            return {"kind": "uniform", "lo": self.lo, "hi": self.hi, "v": self.v}
        return {"kind": "deterministic", "d": self.d, "v": self.v}

    @classmethod
    def from_dict(cls, data: dict) -> "LinkGeometry":
        data = dict(data)
        kind = data.pop("kind", "uniform")
        v = float(data.pop("v", DEFAULT_PATHLOSS_EXPONENT))
        if kind == "deterministic":
            return cls.deterministic(data["d"], v)
        return cls.uniform(data.get("lo", 1.0), data.get("hi", 3.0), v)


def pathloss(d, v: float):
    """Linear path-loss ``d**-v``."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr <= 0):
        raise ValueError("distance must be positive")
    out = d_arr ** (-float(v))
    return float(out) if out.ndim == 0 else out


def pathloss_pdf(z, lo: float, hi: float, v: float):
    """Density of ``Z = d**-v`` for ``d ~ U(lo, hi)``; zero off the support."""
    if not 0 < lo < hi:
        raise ValueError(f"inverted or non-positive interval ({lo}, {hi})")
    z_arr = np.asarray(z, dtype=float)
    zmin, zmax = hi ** (-v), lo ** (-v)
    inside = (z_arr >= zmin) & (z_arr <= zmax)
    safe = np.where(inside, z_arr, 1.0)
    out = np.where(inside, safe ** (-1.0 - 1.0 / v) / (v * (hi - lo)), 0.0)
    return float(out) if out.ndim == 0 else out


def pathloss_cdf(z, lo: float, hi: float, v: float):
    """Distribution function of ``Z = d**-v`` for ``d ~ U(lo, hi)``."""
    if not 0 < lo < hi:
        raise ValueError(f"inverted or non-positive interval ({lo}, {hi})")
    z_arr = np.asarray(z, dtype=float)
    zmin, zmax = hi ** (-v), lo ** (-v)
    zc = np.clip(z_arr, zmin, zmax)
    # P(d**-v <= z) = P(d >= z**(-1/v))
    out = (hi - zc ** (-1.0 / v)) / (hi - lo)
    out = np.where(z_arr < zmin, 0.0, np.where(z_arr > zmax, 1.0, out))
    return float(out) if out.ndim == 0 else out


def product_pdf_u(u: float, x_params, srgeom: LinkGeometry, v: Optional[float] = None) -> float:
    """Density of the harvested power ``U = X Z`` under a uniform S-R distance.

    ``x_params`` is the Gamma-Gamma description of ``X`` and ``Z`` is the
    S-R path-loss.  Fixed distances have no density in this form; use
    ``x_params.scaled(pathloss(d, v)).pdf`` instead.
    """
    from .analytic.ser import harvested_power_pdf_uniform

    if not srgeom.is_uniform:
        raise ValueError("product_pdf_u needs a uniform S-R geometry; "
                         "for a fixed distance the harvested power is a scaled Gamma-Gamma")
    if v is not None and not math.isclose(v, srgeom.v):
        srgeom = LinkGeometry.uniform(srgeom.lo, srgeom.hi, v)
    return harvested_power_pdf_uniform(u, x_params, srgeom)
