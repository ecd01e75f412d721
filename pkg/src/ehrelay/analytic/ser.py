"""Closed-form symbol error rates of both hops in Meijer G-function form.

Every public function returns a :class:`SerValue` carrying the number, an
absolute error estimate and its provenance: ``"closed-form"`` when the value
came from the G-function expressions, ``"fallback"`` when the G-function path
failed or could not meet :data:`TARGET_RELATIVE_ERROR` and the quantity was
recomputed by direct quadrature (:mod:`ehrelay.analytic.direct`).

Notation follows :class:`ehrelay.channel.GammaGammaParams`: ``alpha``,
``beta``, ``xi`` and ``psi`` of the information SNR ``Theta`` (S-R hop) or of
the harvested power ``X`` before path-loss (R-D hop).  A uniform S-R distance
is ``U(f, g)``, a uniform R-D distance ``U(r, p)`` and ``v`` is the path-loss
exponent.  ``ybar`` is the mean R-D channel SNR per unit transmit power.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln, gammasgn

from ..channel import GammaGammaParams
from ..config import ModulationParams
from ..geometry import LinkGeometry, pathloss
from . import direct
from .meijer import MeijerGError, meijer_g_detailed
from .quadrature import gauss_chebyshev

__all__ = [
    "CLOSED_FORM",
    "FALLBACK",
    "SerValue",
    "TARGET_RELATIVE_ERROR",
    "ber_overall",
    "harvested_power_cdf_uniform",
    "harvested_power_pdf_uniform",
    "nl_det_i2",
    "nl_uniform_j1",
    "ser_rd_cond_uniform",
    "ser_rd_conditional",
    "ser_rd_linear_det",
    "ser_rd_linear_uniform",
    "ser_rd_nl_det",
    "ser_rd_nl_uniform",
    "ser_sr_conditional",
    "ser_sr_deterministic",
    "ser_sr_uniform",
]

log = logging.getLogger(__name__)

CLOSED_FORM = "closed-form"
FALLBACK = "fallback"

# a closed-form value whose estimated relative error exceeds this is replaced
# by the quadrature path
TARGET_RELATIVE_ERROR = 1e-6

# largest relative half-width of the saturation interval (see
# _saturation_bound) accepted in place of the saturating-harvester expression
SATURATION_BOUND_TARGET = 1e-5

# extra series terms tried before the NL deterministic series gives up
_MAX_SERIES_TERMS = 400

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class SerValue:
    """An error probability with its absolute error estimate and provenance."""

    value: float
    error: float = 0.0
    method: str = CLOSED_FORM
    note: str = ""

    def __float__(self) -> float:
        return self.value

    @property
    def closed_form(self) -> bool:
        return self.method == CLOSED_FORM


class _Inaccurate(ArithmeticError):
    pass


def _g(an, ap, bm, bq, x):
    return meijer_g_detailed((an, ap), (bm, bq), x)


class _Acc:
    """Sum of ``coef * G`` terms with error propagation, coefficients given as logs."""

    def __init__(self):
        self.value = 0.0
        self.error = 0.0
        self.mass = 0.0

    def add(self, log_coef: float, sign: float, res):
        if not math.isfinite(res.value):
            raise _Inaccurate("non-finite G-function value")
        coef = sign * math.exp(log_coef) if log_coef < 700 else math.inf
        if not math.isfinite(coef):
            raise _Inaccurate("coefficient overflow")
        term = coef * res.value
        self.value += term
        self.error += abs(coef) * res.error
        self.mass += abs(term)

    def result(self, note: str = "") -> SerValue:
        # rounding in the sum is relative to the largest terms, not the result
        err = self.error + 4e-16 * self.mass
        return SerValue(self.value, err, CLOSED_FORM, note)


def _difference(terms, conventions) -> SerValue:
    """Signed sum ``sum sign * exp(log_coef) * G(x)`` over ``terms``, best of several conventions.

    ``terms`` holds ``(log_coef, sign, x)``; ``conventions`` holds parameter
    sets ``(sign, an, ap, bm, bq)``.  The conventions differ by moving one
    Gamma ratio across the contour, which changes every G by a residue that
    the coefficients make equal for all terms, so the signed sum cancels it.
    The convention whose evaluation carries the smallest error estimate wins;
    with the residue left in, the sum can lose all digits to cancellation.
    """
    best, failure = None, None
    for conv_sign, an, ap, bm, bq in conventions:
        try:
            acc = _Acc()
            for log_coef, sign, x in terms:
                acc.add(log_coef, sign * conv_sign, _g(an, ap, bm, bq, x))
            out = acc.result()
        except (MeijerGError, _Inaccurate) as exc:
            failure = exc
            continue
        if best is None or out.error < best.error:
            best = out
    if best is None:
        raise _Inaccurate(str(failure))
    return best


def _checked(closed: Callable[[], SerValue], fallback: Callable[[], float], what: str,
             target: float = TARGET_RELATIVE_ERROR) -> SerValue:
    """Run the closed form, replacing it by ``fallback`` when it fails or is too inexact."""
    try:
        out = closed()
        if math.isfinite(out.value) and out.error <= target * abs(out.value):
            return out
        reason = f"estimated relative error {out.error / max(abs(out.value), 1e-300):.2e}"
    except (MeijerGError, _Inaccurate, OverflowError, ValueError) as exc:
        reason = str(exc)
    log.info("%s: closed form rejected (%s); using quadrature", what, reason)
    return SerValue(float(fallback()), 0.0, FALLBACK, reason)


def _uniform_bounds(geom: LinkGeometry) -> tuple[float, float]:
    if not geom.is_uniform:
        raise ValueError("this expression needs a uniformly distributed distance")
    return geom.lo, geom.hi


# ---------------------------------------------------------------- S -> R hop

def _tau_log(mod: ModulationParams, theta: GammaGammaParams) -> float:
    """``log tau = log(a psi / (4 sqrt(pi) beta**alpha))``."""
    return (math.log(mod.a) + theta.log_psi - math.log(4.0 * _SQRT_PI)
            - theta.alpha * math.log(theta.beta))


def _sr_conditional_closed(mod, theta, z) -> SerValue:
    al, xi = theta.alpha, theta.xi
    acc = _Acc()
    res = _g([1.0, 1.0 - al - xi / 2, 1.0 - al + xi / 2], [-al, 1.0],
             [0.0, 0.5, -al], [1.0], mod.b * z / theta.beta)
    acc.add(_tau_log(mod, theta), 1.0, res)
    return acc.result()


def ser_sr_conditional(mod: ModulationParams, theta: GammaGammaParams, z: float) -> SerValue:
    """S-R SER at a fixed path-loss ``z``: ``tau G^{3,3}_{5,4}(b z / beta)``."""
    return _checked(lambda: _sr_conditional_closed(mod, theta, z),
                    lambda: direct.ser_sr_conditional(mod, theta, z), "ser_sr_conditional")


def ser_sr_deterministic(mod: ModulationParams, theta: GammaGammaParams, d_sr: float,
                         v: float) -> SerValue:
    """S-R SER at the fixed distance ``d_sr``."""
    return ser_sr_conditional(mod, theta, pathloss(d_sr, v))


def _sr_uniform_closed(mod, theta, geom) -> SerValue:
    f, g = _uniform_bounds(geom)
    v = geom.v
    al, xi = theta.alpha, theta.xi
    base = _tau_log(mod, theta) - math.log((g - f) * v)
    # Xi(kappa) = kappa G^{3,4}_{6,5}(b / (kappa^v beta))
    terms = [(base + math.log(kappa), sign, mod.b / (kappa ** v * theta.beta))
             for kappa, sign in ((f, 1.0), (g, -1.0))]
    left = [1.0, 1.0 - al - xi / 2, 1.0 - al + xi / 2]
    return _difference(terms, [
        (1.0, left + [1.0 + 1.0 / v], [-al, 1.0], [0.0, 0.5, -al], [1.0 / v, 1.0]),
        (-1.0, left, [1.0 + 1.0 / v, -al, 1.0], [0.0, 0.5, -al, 1.0 / v], [1.0]),
    ])


def ser_sr_uniform(mod: ModulationParams, theta: GammaGammaParams, geom: LinkGeometry) -> SerValue:
    """S-R SER averaged over ``d_sr ~ U(f, g)``: ``tau (Xi(f) - Xi(g)) / ((g - f) v)``."""
    _uniform_bounds(geom)
    return _checked(lambda: _sr_uniform_closed(mod, theta, geom),
                    lambda: direct.ser_sr_uniform(mod, theta, geom), "ser_sr_uniform")


# ---------------------------------------------------------------- R -> D hop

def _rd_conditional_closed(mod, snr) -> SerValue:
    acc = _Acc()
    res = _g([1.0, 0.0, 0.0], [-1.0, 1.0], [0.0, 0.5, -1.0], [1.0], mod.b * snr)
    acc.add(math.log(mod.a / (2.0 * _SQRT_PI)), 1.0, res)
    return acc.result()


def ser_rd_conditional(mod: ModulationParams, snr: float) -> SerValue:
    """R-D SER for a double-Rayleigh link of mean SNR ``snr``.

    ``a / (2 sqrt(pi)) G^{3,3}_{5,4}(b snr)``; ``snr = ybar * L_rd * P_r``.
    """
    if snr <= 0:
        return SerValue(0.5 * mod.a)
    return _checked(lambda: _rd_conditional_closed(mod, snr),
                    lambda: direct.double_rayleigh_ser(mod, snr), "ser_rd_conditional")


def _rd_cond_uniform_closed(mod, u, ybar, geom_rd) -> SerValue:
    r, p = _uniform_bounds(geom_rd)
    v = geom_rd.v
    terms = [(math.log(mod.a * mu / (2.0 * _SQRT_PI * (p - r) * v)), sign,
              mod.b * ybar * u / mu ** v) for mu, sign in ((r, 1.0), (p, -1.0))]
    return _difference(terms, [
        (1.0, [1.0, 0.0, 0.0, 1.0 + 1.0 / v], [-1.0, 1.0], [0.0, 0.5, -1.0], [1.0 / v, 1.0]),
        (-1.0, [1.0, 0.0, 0.0], [1.0 + 1.0 / v, -1.0, 1.0], [0.0, 0.5, -1.0, 1.0 / v], [1.0]),
    ])


def ser_rd_cond_uniform(mod: ModulationParams, u: float, ybar: float,
                        geom_rd: LinkGeometry) -> SerValue:
    """R-D SER given the harvested power ``u``, averaged over ``d_rd ~ U(r, p)``.

    ``rho(r) - rho(p)`` with ``rho(mu)`` a ``G^{3,4}_{6,5}`` term.
    """
    _uniform_bounds(geom_rd)
    if u <= 0:
        return SerValue(0.5 * mod.a)
    return _checked(lambda: _rd_cond_uniform_closed(mod, u, ybar, geom_rd),
                    lambda: direct.ser_rd_cond_uniform(mod, u, ybar, geom_rd),
                    "ser_rd_cond_uniform")


def _pdf_u_closed(u, x: GammaGammaParams, geom_sr) -> SerValue:
    f, g = _uniform_bounds(geom_sr)
    v = geom_sr.v
    al, xi = x.alpha, x.xi
    base = x.log_psi - math.log(2.0 * v * (g - f)) + (al - 1.0) * math.log(u)
    c = -al - 1.0 / v
    terms = [(base + (1.0 + v * al) * math.log(kappa), sign, x.beta * kappa ** v * u)
             for kappa, sign in ((f, 1.0), (g, -1.0))]
    return _difference(terms, [
        (1.0, [1.0], [1.0 + c], [xi / 2, -xi / 2, c], [1.0]),
        (-1.0, [1.0, 1.0 + c], [], [xi / 2, -xi / 2], [c, 1.0]),
    ])


def harvested_power_pdf_uniform(u: float, x: GammaGammaParams, geom_sr: LinkGeometry) -> float:
    """Density of ``U = X Z`` for a uniform S-R distance (``G^{3,1}_{2,4}`` form)."""
    if u <= 0:
        return 0.0
    out = _checked(lambda: _pdf_u_closed(u, x, geom_sr),
                   lambda: direct.harvested_power_pdf_uniform(u, x, geom_sr),
                   "harvested_power_pdf_uniform", target=1e-6)
    return max(out.value, 0.0)


def _cdf_u_closed(p_th, x: GammaGammaParams, geom_sr) -> SerValue:
    f, g = _uniform_bounds(geom_sr)
    v = geom_sr.v
    al, xi = x.alpha, x.xi
    base = x.log_psi - math.log(2.0 * v * (g - f)) + al * math.log(p_th)
    c = -al - 1.0 / v
    terms = [(base + (1.0 + v * al) * math.log(kappa), sign, x.beta * p_th * kappa ** v)
             for kappa, sign in ((f, 1.0), (g, -1.0))]
    return _difference(terms, [
        (1.0, [1.0, 1.0 - al], [1.0 + c], [xi / 2, -xi / 2, c], [-al, 1.0]),
        (-1.0, [1.0, 1.0 - al, 1.0 + c], [], [xi / 2, -xi / 2], [c, -al, 1.0]),
    ])


def harvested_power_cdf_uniform(p_th: float, x: GammaGammaParams,
                                geom_sr: LinkGeometry) -> SerValue:
    """``J2 = P(U <= p_th)`` for ``U = X Z`` and a uniform S-R distance."""
    if p_th <= 0:
        return SerValue(0.0)
    out = _checked(lambda: _cdf_u_closed(p_th, x, geom_sr),
                   lambda: direct.harvested_power_cdf_uniform(p_th, x, geom_sr),
                   "harvested_power_cdf_uniform")
    return SerValue(min(max(out.value, 0.0), 1.0), out.error, out.method, out.note)


def _linear_uniform_closed(mod, x: GammaGammaParams, geom_sr, geom_rd, ybar) -> SerValue:
    f, g = _uniform_bounds(geom_sr)
    r, p = _uniform_bounds(geom_rd)
    v = geom_sr.v
    al, xi = x.alpha, x.xi
    by = mod.b * ybar
    base = (x.log_psi - math.log(2.0 * v * (g - f))
            + math.log(mod.a / (2.0 * v * (p - r) * _SQRT_PI)))
    c = -al - 1.0 / v
    terms = []
    for mu, kappa, sign in ((r, f, 1.0), (r, g, -1.0), (p, f, -1.0), (p, g, 1.0)):
        log_coef = (base + math.log(mu) + (1.0 + v * al) * math.log(kappa)
                    + al * (v * math.log(mu) - math.log(by)))
        terms.append((log_coef, sign, x.beta * kappa ** v * mu ** v / by))
    an = [1.0, 1.0 - al, 0.5 - al, 2.0 - al]
    bm = [xi / 2, -xi / 2, -al, 1.0 - al, 1.0 - al]
    bq = [2.0 - al, -al, 1.0]
    # the double pole at c carries a residue ~ x^c (A + B log x) that the
    # four-term combination cancels
    return _difference(terms, [
        (1.0, an, [1.0 + c, -al, 1.0 + c], bm[:2] + [c] + bm[2:] + [c], bq),
        (1.0, an + [1.0 + c, 1.0 + c], [-al], bm, [c, c] + bq),
    ])


def ser_rd_linear_uniform(mod: ModulationParams, x: GammaGammaParams, geom_sr: LinkGeometry,
                          geom_rd: LinkGeometry, ybar: float) -> SerValue:
    """R-D SER of the linear harvester with both distances uniform.

    Four ``G^{7,4}_{7,10}`` terms ``phi(mu, kappa)`` over the distance bounds.
    """
    _uniform_bounds(geom_sr)
    _uniform_bounds(geom_rd)
    return _checked(lambda: _linear_uniform_closed(mod, x, geom_sr, geom_rd, ybar),
                    lambda: direct.ser_rd_linear_uniform(mod, x, geom_sr, geom_rd, ybar),
                    "ser_rd_linear_uniform")


def nl_uniform_j1(mod: ModulationParams, x: GammaGammaParams, geom_sr: LinkGeometry,
                  geom_rd: LinkGeometry, ybar: float, p_th: float, chi: int) -> float:
    """``J1 = int_0^p_th P(e|U=u) f_U(u) du`` with ``chi`` Chebyshev nodes."""
    def integrand(u: float) -> float:
        return (ser_rd_cond_uniform(mod, u, ybar, geom_rd).value
                * harvested_power_pdf_uniform(u, x, geom_sr))

    return gauss_chebyshev(integrand, 0.0, p_th, chi)


def _saturation_bound(linear: SerValue, at_th: SerValue, below: SerValue) -> SerValue | None:
    """NL SER from the linear one when saturation is too rare to matter.

    With ``S = min(P, p_th)`` the NL SER lies in
    ``[SER_L, SER_L + P(e|p_th) P(P > p_th)]``.  When that interval is narrower
    than :data:`SATURATION_BOUND_TARGET` its midpoint is returned.
    """
    width = at_th.value * max(1.0 - below.value, 0.0) + at_th.value * below.error
    value = linear.value + 0.5 * width
    error = linear.error + 0.5 * width + at_th.error
    if linear.closed_form and error <= SATURATION_BOUND_TARGET * value:
        return SerValue(value, error, CLOSED_FORM, "saturation negligible")
    return None


def ser_rd_nl_uniform(mod: ModulationParams, x: GammaGammaParams, geom_sr: LinkGeometry,
                      geom_rd: LinkGeometry, ybar: float, p_th: float, chi: int,
                      allow_bound: bool = True) -> SerValue:
    """R-D SER of the saturating harvester with both distances uniform.

    ``J1 + P(e | U = p_th) (1 - J2)`` with ``J1`` from :func:`nl_uniform_j1`.
    When saturation is rare enough the linear closed form is returned instead
    (see :func:`_saturation_bound`); the Chebyshev nodes cannot resolve a
    harvested-power density concentrated far below ``p_th``.  Pass
    ``allow_bound=False`` to always use the ``chi``-node rule.
    """
    if chi < 1:
        raise ValueError(f"chi must be at least 1, got {chi}")
    _uniform_bounds(geom_sr)
    _uniform_bounds(geom_rd)
    at_th = ser_rd_cond_uniform(mod, p_th, ybar, geom_rd)
    j2 = harvested_power_cdf_uniform(p_th, x, geom_sr)
    if allow_bound:
        linear = ser_rd_linear_uniform(mod, x, geom_sr, geom_rd, ybar)
        shortcut = _saturation_bound(linear, at_th, j2)
        if shortcut is not None:
            return shortcut
    j1 = nl_uniform_j1(mod, x, geom_sr, geom_rd, ybar, p_th, chi)
    value = j1 + at_th.value * (1.0 - j2.value)
    methods = {at_th.method, j2.method}
    method = FALLBACK if FALLBACK in methods else CLOSED_FORM
    return SerValue(value, at_th.error + j2.error, method, f"Gauss-Chebyshev chi={chi}")


def _phi_params(x: GammaGammaParams, l_sr: float):
    """``(log psi_phi, beta_phi)`` of ``Phi = l_sr X``."""
    return x.log_psi - x.alpha * math.log(l_sr), x.beta / l_sr


def _linear_det_closed(mod, x: GammaGammaParams, l_sr, l_rd, ybar) -> SerValue:
    al, xi = x.alpha, x.xi
    log_psi_phi, beta_phi = _phi_params(x, l_sr)
    w = mod.b * l_rd * ybar
    res = _g([1.0, 1.0 - al, 0.5 - al, 2.0 - al], [-al],
             [xi / 2, -xi / 2, -al, 1.0 - al, 1.0 - al], [2.0 - al, -al, 1.0], beta_phi / w)
    acc = _Acc()
    acc.add(math.log(mod.a / (4.0 * _SQRT_PI)) + log_psi_phi - al * math.log(w), 1.0, res)
    return acc.result()


def ser_rd_linear_det(mod: ModulationParams, x: GammaGammaParams, l_sr: float, l_rd: float,
                      ybar: float) -> SerValue:
    """R-D SER of the linear harvester at fixed path-losses (``G^{5,4}_{5,8}`` form)."""
    return _checked(lambda: _linear_det_closed(mod, x, l_sr, l_rd, ybar),
                    lambda: direct.ser_rd_linear_det(mod, x, l_sr, l_rd, ybar),
                    "ser_rd_linear_det")


def _i2_closed(x: GammaGammaParams, l_sr, p_th) -> SerValue:
    al, xi = x.alpha, x.xi
    log_psi_phi, beta_phi = _phi_params(x, l_sr)
    res = _g([1.0, 1.0 - al], [], [xi / 2, -xi / 2], [-al, 1.0], beta_phi * p_th)
    acc = _Acc()
    acc.add(log_psi_phi + al * math.log(p_th) - math.log(2.0), 1.0, res)
    return acc.result()


def nl_det_i2(x: GammaGammaParams, l_sr: float, p_th: float) -> SerValue:
    """``I2 = P(l_sr X <= p_th)`` (``G^{2,2}_{2,4}`` form)."""
    out = _checked(lambda: _i2_closed(x, l_sr, p_th),
                   lambda: direct.gamma_gamma_cdf(x, p_th / l_sr), "nl_det_i2")
    return SerValue(min(max(out.value, 0.0), 1.0), out.error, out.method, out.note)


def _is_integer(value: float) -> bool:
    return abs(value - round(value)) < 1e-9


def _i1_series(mod, x: GammaGammaParams, l_sr, l_rd, ybar, p_th, chi) -> SerValue:
    """``I1`` from the ``csc(pi xi)`` series, adding terms until it converges."""
    al, xi = x.alpha, x.xi
    if _is_integer(xi):
        raise _Inaccurate(f"integer order xi={xi:g} puts the series on a csc pole")
    log_psi_phi, beta_phi = _phi_params(x, l_sr)
    arg = mod.b * p_th * l_rd * ybar
    lead = math.log(mod.a * _SQRT_PI / 4.0) + log_psi_phi - math.log(abs(math.sin(math.pi * xi)))
    lead_sign = math.copysign(1.0, math.sin(math.pi * xi))
    log_bp = math.log(beta_phi * p_th)

    acc = _Acc()
    last = []
    j = 0
    limit = chi
    while True:
        step = 0.0
        for zeta, sign in ((-xi, 1.0), (xi, -1.0)):
            c = al + j + zeta / 2
            gam_sign = gammasgn(j + zeta + 1.0)
            if gam_sign == 0:
                continue
            log_coef = (lead + (j + zeta / 2) * log_bp + al * math.log(p_th)
                        - gammaln(j + zeta + 1.0) - gammaln(j + 1.0))
            res = _g([1.0, 0.0, 0.0, 1.0 - c], [-1.0, 1.0], [0.0, 0.5, -1.0], [-c, 1.0], arg)
            before = acc.value
            acc.add(log_coef, sign * lead_sign * gam_sign, res)
            step += abs(acc.value - before)
        last.append(step)
        j += 1
        if j > limit:
            tail = max(last[-3:])
            if tail <= 0.1 * TARGET_RELATIVE_ERROR * abs(acc.value) or j >= _MAX_SERIES_TERMS:
                break
            limit = min(2 * limit, _MAX_SERIES_TERMS)
    out = acc.result(f"{j} series terms")
    return SerValue(out.value, out.error + max(last[-3:]), CLOSED_FORM, out.note)


def ser_rd_nl_det(mod: ModulationParams, x: GammaGammaParams, l_sr: float, l_rd: float,
                  ybar: float, p_th: float, chi: int) -> SerValue:
    """R-D SER of the saturating harvester at fixed path-losses.

    ``I1 + P(e | Phi = p_th) (1 - I2)``.  ``I1`` is the truncated Bessel series
    with at least ``chi + 1`` terms per order.  Where the series loses too
    much precision to cancellation (large ``beta_phi p_th``) and saturation is
    rare, the linear closed form bounds the answer tightly enough to be used;
    otherwise ``I1`` is integrated numerically and the result flagged.
    """
    if chi < 1:
        raise ValueError(f"chi must be at least 1, got {chi}")
    at_th = ser_rd_conditional(mod, ybar * l_rd * p_th)
    i2 = nl_det_i2(x, l_sr, p_th)
    try:
        i1 = _i1_series(mod, x, l_sr, l_rd, ybar, p_th, chi)
        value = i1.value + at_th.value * (1.0 - i2.value)
        error = i1.error + at_th.error + at_th.value * i2.error
        if error <= TARGET_RELATIVE_ERROR * value:
            method = CLOSED_FORM if at_th.closed_form and i2.closed_form else FALLBACK
            return SerValue(value, error, method, i1.note)
        reason = f"series error {error:.1e} on a value of {value:.1e}"
    except (MeijerGError, _Inaccurate, OverflowError) as exc:
        reason = str(exc)
    shortcut = _saturation_bound(ser_rd_linear_det(mod, x, l_sr, l_rd, ybar), at_th, i2)
    if shortcut is not None:
        return shortcut
    log.info("ser_rd_nl_det: %s; integrating I1 numerically", reason)
    i1q, _, _ = direct.ser_rd_nl_det_parts(mod, x, l_sr, l_rd, ybar, p_th)
    return SerValue(i1q + at_th.value * (1.0 - i2.value), 0.0, FALLBACK, reason)


# ---------------------------------------------------------------- end to end

def ber_overall(p_sr: float, p_rd: float, iota: int) -> float:
    """Upper bound ``(1 - (1 - p_sr)(1 - p_rd)) / iota`` on the end-to-end BER, in ``[0, 0.5]``."""
    if iota < 1:
        raise ValueError("iota must be a positive integer")
    p_sr = min(max(float(p_sr), 0.0), 1.0)
    p_rd = min(max(float(p_rd), 0.0), 1.0)
    return float(np.clip((1.0 - (1.0 - p_sr) * (1.0 - p_rd)) / iota, 0.0, 0.5))
