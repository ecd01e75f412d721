"""Direct numerical integration of the link-level error probabilities.

Everything here is computed from the defining integrals with ``erfc``, the
modified Bessel function and adaptive quadrature; no Meijer G-function is
involved.  The module serves two purposes: it is the fallback path of
:mod:`ehrelay.analytic.ser` and the independent oracle the closed forms are
tested against.

Conventions
-----------
* Fading averages over a Gamma-Gamma law are integrated in ``t = log(x)``,
  which turns the density into a smooth bell with exponentially decaying
  tails.
* A uniform distance ``d ~ U(lo, hi)`` is averaged with Gauss-Legendre nodes in
  ``d`` (the integrands are analytic in ``d``).
* The double-Rayleigh average of ``a Q(sqrt(2 b snr Y))`` uses, for ``Y = E1 E2``
  with unit exponentials, the Rayleigh average over ``E2`` and then
  ``E[sqrt(cE/(1+cE))] = (k/2) e^(k/2) (K_1(k/2) - K_0(k/2))`` with ``k = 1/c``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc, kve

from ..channel import GammaGammaParams
from ..config import ModulationParams
from ..geometry import LinkGeometry, pathloss

__all__ = [
    "double_rayleigh_ser",
    "double_rayleigh_ser_quad",
    "gamma_gamma_cdf",
    "harvested_power_cdf_uniform",
    "harvested_power_pdf_uniform",
    "ser_rd_cond_uniform",
    "ser_rd_linear_det",
    "ser_rd_linear_uniform",
    "ser_rd_nl_det",
    "ser_rd_nl_det_parts",
    "ser_rd_nl_uniform",
    "ser_sr_conditional",
    "ser_sr_deterministic",
    "ser_sr_uniform",
]

EPSREL = 1e-10
LIMIT = 400
DISTANCE_NODES = 48


@lru_cache(maxsize=8)
def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _distance_rule(geom: LinkGeometry, n: int = DISTANCE_NODES):
    """Path-loss nodes and probability weights averaging over ``geom``."""
    if not geom.is_uniform:
        return np.array([pathloss(geom.d, geom.v)]), np.array([1.0])
    x, w = _legendre(n)
    d = 0.5 * (geom.hi - geom.lo) * x + 0.5 * (geom.hi + geom.lo)
    return d ** (-geom.v), 0.5 * w


def _quad(f, lo, hi, points=None):
    val, _ = quad(f, lo, hi, epsabs=0.0, epsrel=EPSREL, limit=LIMIT, points=points)
    return val


def _log_range(gg: GammaGammaParams) -> tuple[float, float]:
    """Range of ``log x`` outside which the density mass is below ~1e-17."""
    centre = math.log(gg.mean)
    lo = centre - 45.0 / min(gg.k, gg.m) - math.log(gg.k * gg.m + 1.0)
    hi = math.log(900.0 / gg.beta) + 1.0
    return lo, max(hi, centre + 1.0)


def _log_density(gg: GammaGammaParams):
    """``x f(x)`` as a function of ``t = log x``."""
    log_psi, alpha, beta, xi = gg.log_psi, gg.alpha, gg.beta, gg.xi

    def f(t):
        z = 2.0 * math.sqrt(beta) * math.exp(0.5 * t)
        kv = kve(xi, z)
        if kv == 0.0 or not math.isfinite(kv):
            return 0.0
        return math.exp(log_psi + alpha * t + math.log(kv) - z)

    return f


def _gg_expect(g, gg: GammaGammaParams, lo: float | None = None, hi: float | None = None):
    """``E[g(X); lo < X < hi]`` for a Gamma-Gamma ``X``; ``g`` maps x to a scalar."""
    t_lo, t_hi = _log_range(gg)
    if lo is not None:
        t_lo = max(t_lo, math.log(lo))
    if hi is not None:
        t_hi = min(t_hi, math.log(hi))
    if t_hi <= t_lo:
        return 0.0
    dens = _log_density(gg)
    centre = math.log(gg.mean)
    pts = [centre] if t_lo < centre < t_hi else None
    return _quad(lambda t: g(math.exp(t)) * dens(t), t_lo, t_hi, points=pts)


def gamma_gamma_cdf(gg: GammaGammaParams, x: float) -> float:
    """``P(X <= x)`` by quadrature of the density."""
    if x <= 0:
        return 0.0
    return min(1.0, _gg_expect(lambda _: 1.0, gg, hi=x))


def double_rayleigh_ser(mod: ModulationParams, snr):
    """``E[a Q(sqrt(2 b snr Y))]`` for a unit-mean double-Rayleigh power ``Y``."""
    c = mod.b * np.asarray(snr, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        half = 0.5 / np.where(c > 0, c, 1.0)
        big = half > 1e6
        safe = np.where(big, 1.0, half)
        inner = np.where(
            big,
            # z e^z (K_1(z) - K_0(z)) ~ sqrt(pi/(2z)) (1/2 - 3/(16z)); kve breaks down here
            np.sqrt(0.5 * np.pi / half) * (0.5 - 3.0 / (16.0 * half)),
            safe * (kve(1, safe) - kve(0, safe)),
        )
    out = 0.5 * mod.a * np.where(c > 0, 1.0 - inner, 1.0)
    return float(out) if out.ndim == 0 else out


def double_rayleigh_ser_quad(mod: ModulationParams, snr: float) -> float:
    """Same quantity as :func:`double_rayleigh_ser` by adaptive quadrature over ``E1``."""
    c = mod.b * snr
    if c <= 0:
        return 0.5 * mod.a

    def f(s):
        e = math.exp(s)
        ce = c * e
        root = math.sqrt(ce / (1.0 + ce))
        # 1 - root written without cancellation
        return math.exp(s - e) * (1.0 / (1.0 + ce)) / (1.0 + root)

    return 0.5 * mod.a * _quad(f, -80.0, 4.0, points=[-math.log(c)] if -80 < -math.log(c) < 4 else None)


def ser_sr_conditional(mod: ModulationParams, theta: GammaGammaParams, z: float) -> float:
    """S-R SER at a fixed path-loss ``z``: ``E[a Q(sqrt(2 b z Theta))]``."""
    bz = mod.b * z
    return _gg_expect(lambda x: 0.5 * mod.a * erfc(math.sqrt(bz * x)), theta)


def ser_sr_deterministic(mod, theta, d_sr: float, v: float) -> float:
    return ser_sr_conditional(mod, theta, pathloss(d_sr, v))


def ser_sr_uniform(mod: ModulationParams, theta: GammaGammaParams, geom: LinkGeometry) -> float:
    z, w = _distance_rule(geom)
    bz = mod.b * z
    return _gg_expect(lambda x: 0.5 * mod.a * float(np.dot(w, erfc(np.sqrt(bz * x)))), theta)


def ser_rd_cond_uniform(mod: ModulationParams, u: float, ybar: float, geom_rd: LinkGeometry) -> float:
    """R-D SER given harvested power ``u``, averaged over fading and distance."""
    l_rd, w = _distance_rule(geom_rd)
    return float(np.dot(w, double_rayleigh_ser(mod, ybar * u * l_rd)))


def harvested_power_pdf_uniform(u: float, x: GammaGammaParams, geom_sr: LinkGeometry) -> float:
    """Density of ``U = X Z`` with ``Z`` the path-loss of a uniform distance."""
    z, w = _distance_rule(geom_sr)
    return float(np.dot(w, x.pdf(u / z) / z))


def harvested_power_cdf_uniform(p: float, x: GammaGammaParams, geom_sr: LinkGeometry) -> float:
    """``P(X Z <= p)``."""
    z, w = _distance_rule(geom_sr)
    return float(sum(wi * gamma_gamma_cdf(x, p / zi) for zi, wi in zip(z, w)))


def ser_rd_linear_uniform(mod: ModulationParams, x: GammaGammaParams, geom_sr: LinkGeometry,
                          geom_rd: LinkGeometry, ybar: float) -> float:
    z, wz = _distance_rule(geom_sr)
    l, wl = _distance_rule(geom_rd)
    scale = ybar * np.outer(z, l)
    weight = np.outer(wz, wl)
    return _gg_expect(lambda xv: float(np.sum(weight * double_rayleigh_ser(mod, scale * xv))), x)


def ser_rd_linear_det(mod: ModulationParams, x: GammaGammaParams, l_sr: float, l_rd: float,
                      ybar: float) -> float:
    scale = ybar * l_sr * l_rd
    return _gg_expect(lambda xv: double_rayleigh_ser(mod, scale * xv), x)


def ser_rd_nl_det_parts(mod: ModulationParams, x: GammaGammaParams, l_sr: float, l_rd: float,
                        ybar: float, p_th: float) -> tuple[float, float, float]:
    """``(I1, I2, P(e | Phi = p_th))`` for the harvested power ``Phi = l_sr X``.

    ``I1 = E[P(e|Phi); Phi < p_th]`` and ``I2 = P(Phi < p_th)``.
    """
    cut = p_th / l_sr
    scale = ybar * l_sr * l_rd
    i1 = _gg_expect(lambda xv: double_rayleigh_ser(mod, scale * xv), x, hi=cut)
    i2 = gamma_gamma_cdf(x, cut)
    return i1, i2, double_rayleigh_ser(mod, ybar * l_rd * p_th)


def ser_rd_nl_det(mod, x, l_sr, l_rd, ybar, p_th) -> float:
    i1, i2, at_th = ser_rd_nl_det_parts(mod, x, l_sr, l_rd, ybar, p_th)
    return i1 + at_th * (1.0 - i2)


def ser_rd_nl_uniform(mod: ModulationParams, x: GammaGammaParams, geom_sr: LinkGeometry,
                      geom_rd: LinkGeometry, ybar: float, p_th: float) -> float:
    """``E[P(e | min(U, p_th))]`` with the clamp handled exactly per S-R node."""
    z, wz = _distance_rule(geom_sr)
    l, wl = _distance_rule(geom_rd)
    at_th = float(np.dot(wl, double_rayleigh_ser(mod, ybar * p_th * l)))
    total = 0.0
    for zi, wi in zip(z, wz):
        scale = ybar * zi * l
        below = _gg_expect(lambda xv: float(np.dot(wl, double_rayleigh_ser(mod, scale * xv))),
                           x, hi=p_th / zi)
        total += wi * (below + at_th * (1.0 - gamma_gamma_cdf(x, p_th / zi)))
    return total


def nl_uniform_j1(mod, x, geom_sr, geom_rd, ybar, p_th) -> float:
    """``J1 = E[P(e|U); U < p_th]`` by adaptive quadrature."""
    z, wz = _distance_rule(geom_sr)
    l, wl = _distance_rule(geom_rd)
    total = 0.0
    for zi, wi in zip(z, wz):
        scale = ybar * zi * l
        total += wi * _gg_expect(lambda xv: float(np.dot(wl, double_rayleigh_ser(mod, scale * xv))),
                                 x, hi=p_th / zi)
    return total
