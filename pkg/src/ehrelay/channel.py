"""Double-Rayleigh channels and the Gamma-Gamma fit of their MRC sums."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, gammaln, kve

from .config import EhConfig, FadingStats, SystemConfig

__all__ = [
    "GammaGammaParams",
    "double_rayleigh_pdf",
    "double_rayleigh_cdf",
    "epsilon_fit",
    "gamma_gamma_sum_params",
    "sample_double_rayleigh",
]

# fading orders of one double-Rayleigh branch in the Gamma-Gamma family
DOUBLE_RAYLEIGH_K = 1.0
DOUBLE_RAYLEIGH_M = 1.0


def sample_double_rayleigh(omega: float, rng: np.random.Generator, size=None):
    """Draw cascaded gains ``h = h1 * h2`` with ``E|h|**2 = omega``.

    Each factor is a circular complex Gaussian of power ``sqrt(omega)``.
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    std = math.sqrt(math.sqrt(omega) / 2.0)
    shape = (2,) if size is None else (2,) + tuple(np.atleast_1d(size))
    g = rng.standard_normal(shape + (2,)) * std
    h = g[..., 0] + 1j * g[..., 1]
    out = h[0] * h[1]
    return complex(out) if size is None else out


def double_rayleigh_pdf(y, ybar: float):
    """Density of ``|h|**2 / N_0`` for a double-Rayleigh channel with mean ``ybar``.

    ``(2/ybar) K_0(2 sqrt(y/ybar))``, which diverges logarithmically at
    ``y = 0``; that point returns ``inf``.
    """
    if not ybar > 0:
        raise ValueError("ybar must be positive")
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise ValueError("double-Rayleigh density is defined for y >= 0")
    z = 2.0 * np.sqrt(y_arr / ybar)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(y_arr > 0, 2.0 / ybar * kve(0, z) * np.exp(-z), np.inf)
    return float(out) if out.ndim == 0 else out


def _one_minus_zk1_series(z):
    # 1 - z K_1(z) = sum_k t**(k+1) / (k! (k+1)!) * (psi(k+1) + psi(k+2) - 2 log(z/2)),
    # t = z**2 / 4; avoids the cancellation of the direct form for small z
    t = z * z / 4.0
    log_half = np.log(z / 2.0)
    total = np.zeros_like(z)
    term = t.copy()
    for k in range(_SMALL_Z_TERMS):
        total += term * (digamma(k + 1.0) + digamma(k + 2.0) - 2.0 * log_half)
        term = term * t / ((k + 1.0) * (k + 2.0))
    return total


_SMALL_Z = 0.5
_SMALL_Z_TERMS = 12


def double_rayleigh_cdf(y, ybar: float):
    """``1 - 2 sqrt(y/ybar) K_1(2 sqrt(y/ybar))``."""
    y_arr = np.asarray(y, dtype=float)
    z = 2.0 * np.sqrt(np.maximum(y_arr, 0.0) / ybar)
    small = (z > 0) & (z < _SMALL_Z)
    with np.errstate(invalid="ignore", divide="ignore"):
        tail = np.where(z > 0, z * kve(1, np.where(z > 0, z, 1.0)) * np.exp(-z), 1.0)
        series = _one_minus_zk1_series(np.where(small, z, _SMALL_Z))
    out = np.where(small, series, 1.0 - tail)
    return float(out) if out.ndim == 0 else out


def epsilon_fit(k: float, m: float) -> float:
    """Shape correction of the Gamma-Gamma fit to a sum of Gamma-Gamma variates."""
    if not (k > 0 and m > 0):
        raise ValueError("k and m must be positive")
    return (-0.127 - 0.95 * k - 0.0058 * m) / (1.0 + 0.00124 * k + 0.98 * m)


@dataclass(frozen=True)
class GammaGammaParams:
    """Gamma-Gamma law with shapes ``k``, ``m`` and mean ``mean``.

    The density is ``psi x**(alpha-1) K_xi(2 sqrt(beta x))`` with
    ``alpha = (k+m)/2``, ``beta = k m / mean``, ``xi = k - m`` and
    ``psi = 2 beta**alpha / (Gamma(k) Gamma(m))``.
    """

    k: float
    m: float
    mean: float

    def __post_init__(self):
        if not (self.k > 0 and self.m > 0 and self.mean > 0):
            raise ValueError(f"Gamma-Gamma parameters must be positive: {self}")

    @property
    def alpha(self) -> float:
        return 0.5 * (self.k + self.m)

    @property
    def beta(self) -> float:
        return self.k * self.m / self.mean

    @property
    def xi(self) -> float:
        return self.k - self.m

    @property
    def log_psi(self) -> float:
        return math.log(2.0) + self.alpha * math.log(self.beta) - gammaln(self.k) - gammaln(self.m)

    @property
    def psi(self) -> float:
        return math.exp(self.log_psi)

    def scaled(self, factor: float) -> "GammaGammaParams":
        """Law of ``factor * X``."""
        return GammaGammaParams(self.k, self.m, self.mean * factor)

    def moment(self, r: float) -> float:
        """``E[X**r]`` for ``r > -min(k, m)``."""
        return math.exp(gammaln(self.k + r) + gammaln(self.m + r)
                        - gammaln(self.k) - gammaln(self.m) - r * math.log(self.beta))

    def pdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        if np.any(x_arr <= 0):
            raise ValueError("Gamma-Gamma density is evaluated for x > 0")
        z = 2.0 * np.sqrt(self.beta * x_arr)
        with np.errstate(divide="ignore"):
            logp = (self.log_psi + (self.alpha - 1.0) * np.log(x_arr)
                    + np.log(kve(self.xi, z)) - z)
        out = np.exp(logp)
        return float(out) if out.ndim == 0 else out

    def cdf(self, x):
        """Distribution function, ``G^{2,1}_{1,3}(beta x | 1; k, m, 0) / (Gamma(k) Gamma(m))``."""
        from .analytic.meijer import meijer_g

        scale = math.exp(-gammaln(self.k) - gammaln(self.m))
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([
            0.0 if xi <= 0 else
            scale * meijer_g(([1.0], []), ([self.k, self.m], [0.0]), self.beta * xi)
            for xi in x_arr
        ])
        out = np.clip(out, 0.0, 1.0)
        return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))

    def sample(self, rng: np.random.Generator, size=None):
        """Draw ``mean/(k m) * G_k * G_m`` with independent unit-scale gammas."""
        return self.mean / (self.k * self.m) * rng.gamma(self.k, size=size) * rng.gamma(self.m, size=size)


def gamma_gamma_sum_params(link: str, eh: EhConfig, ps: float, fading: FadingStats,
                           k: float = DOUBLE_RAYLEIGH_K,
                           m: float = DOUBLE_RAYLEIGH_M) -> GammaGammaParams:
    """Gamma-Gamma fit of the MRC sum on one hop.

    ``link="SR"`` describes the information SNR ``Theta`` at the relay;
    ``link="RD"`` describes the harvested power ``X`` before path-loss.  ``ps``
    is the linear source power.
    """
    if link == "SR":
        n = eh.ip_antennas
        per_branch = eh.ip_fraction * ps * fading.omega_h / fading.n0
    elif link == "RD":
        n = eh.eh_antennas
        per_branch = eh.eta * eh.eh_fraction * ps * fading.omega_h
    else:
        raise ValueError(f"link must be 'SR' or 'RD', got {link!r}")
    if n < 1:
        raise ValueError(f"{link} link needs at least one antenna")
    k_t = n * k + (n - 1) * epsilon_fit(k, m)
    m_t = n * m
    return GammaGammaParams(k_t, m_t, n * per_branch)


def link_params(config: SystemConfig) -> tuple[GammaGammaParams, GammaGammaParams | None]:
    """``(theta, x)`` Gamma-Gamma parameters; ``x`` is ``None`` when nothing is harvested."""
    theta = gamma_gamma_sum_params("SR", config.eh, config.ps, config.fading)
    if config.eh.eta * config.eh.eh_fraction == 0:
        return theta, None
    return theta, gamma_gamma_sum_params("RD", config.eh, config.ps, config.fading)
