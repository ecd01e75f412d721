"""Derived experiments: power-split optimisation, quadrature error and distance gap."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..analytic import analytic_ber, direct, ser
from ..channel import link_params
from ..config import SystemConfig
from ..geometry import LinkGeometry
from ..montecarlo import BerEstimate, simulate_ber

__all__ = [
    "LambdaPoint",
    "approximation_error",
    "difference_lambda",
    "lambda_crossing",
    "optimize_rho",
    "power_at_ber",
    "quadrature_error",
    "rho_grid",
]


def optimize_rho(config: SystemConfig, grid) -> tuple[float, float]:
    """Grid value of ``rho`` with the lowest analytic BER, ties going to the smaller ``rho``.

    Points whose evaluation raises are skipped; if every point fails a
    ``RuntimeError`` chained to the last failure is raised.
    """
    values = sorted(float(r) for r in grid)
    if not values:
        raise ValueError("rho grid is empty")
    best = None
    error = None
    for rho in values:
        try:
            ber = analytic_ber(config.with_(rho=rho)).ber
        except (ArithmeticError, ValueError) as exc:
            error = exc
            continue
        if math.isfinite(ber) and (best is None or ber < best[1]):
            best = (rho, ber)
    if best is None:
        raise RuntimeError("analytic BER failed on the whole rho grid") from error
    return best


@dataclass(frozen=True)
class LambdaPoint:
    """Relative gap between simulation and the ``chi``-node analytic BER."""

    chi: int
    value: float
    analytic: float
    reference: float
    flag: str = "ok"


def approximation_error(config: SystemConfig, chi_grid, mc: BerEstimate | None = None,
                        min_errors: int = 100_000, max_bits: int = 10**8) -> list[LambdaPoint]:
    """``Lambda(chi) = |MC - analytic(chi)| / MC`` for each ``chi``.

    The analytic value always goes through the ``chi``-node rule (the
    saturation shortcut is disabled).  A simulation result can be passed in to
    share it between calls; otherwise one is run with ``min_errors`` errors.
    When the simulation sees no errors every point is flagged ``"undefined"``.
    """
    if mc is None:
        mc = simulate_ber(config, min_errors=min_errors, max_bits=max_bits)
    out = []
    for chi in chi_grid:
        chi = int(chi)
        a = analytic_ber(config, chi=chi, allow_bound=False).ber
        if mc.ber == 0.0:
            out.append(LambdaPoint(chi, math.nan, a, mc.ber, "undefined"))
        else:
            out.append(LambdaPoint(chi, abs(mc.ber - a) / mc.ber, a, mc.ber))
    return out


def quadrature_error(config: SystemConfig, chi_grid) -> list[LambdaPoint]:
    """Same ratio as :func:`approximation_error` with the adaptive-quadrature BER as reference."""
    _, x = link_params(config)
    exact = direct.ser_rd_nl_uniform(config.mod, x, config.geom_sr, config.geom_rd,
                                     config.fading.ybar, config.eh.p_th)
    p_sr = analytic_ber(config).ser_sr.value
    reference = ser.ber_overall(p_sr, exact, config.mod.iota)
    out = []
    for chi in chi_grid:
        a = analytic_ber(config, chi=int(chi), allow_bound=False).ber
        out.append(LambdaPoint(int(chi), abs(reference - a) / reference, a, reference))
    return out


def _deterministic(config: SystemConfig, d: float) -> SystemConfig:
    return config.with_(geom_sr=LinkGeometry.deterministic(d, config.v),
                        geom_rd=LinkGeometry.deterministic(d, config.v))


def difference_lambda(config: SystemConfig, model: str, d_grid) -> list[tuple[float, float]]:
    """``lambda(d)``: BER with the distance laws of ``config`` minus BER with both hops at ``d``."""
    cfg = config.with_(model=model)
    uniform = analytic_ber(cfg).ber
    return [(float(d), uniform - analytic_ber(_deterministic(cfg, float(d))).ber) for d in d_grid]


def lambda_crossing(config: SystemConfig, model: str, lo: float = 1.0, hi: float = 3.0,
                    xtol: float = 1e-4) -> float:
    """Distance where :func:`difference_lambda` changes sign."""
    cfg = config.with_(model=model)
    uniform = analytic_ber(cfg).ber

    def gap(d):
        return uniform - analytic_ber(_deterministic(cfg, d)).ber

    return brentq(gap, lo, hi, xtol=xtol)


def power_at_ber(config: SystemConfig, target: float, lo_db: float = -10.0,
                 hi_db: float = 80.0) -> float:
    """Source power in dB at which the analytic BER equals ``target``."""
    def f(ps_db):
        return math.log(analytic_ber(config.with_(ps_db=ps_db)).ber) - math.log(target)

    return brentq(f, lo_db, hi_db, xtol=1e-4)


def rho_grid(step: float = 0.05) -> np.ndarray:
    """``step, 2 step, ...`` strictly inside ``(0, 1)``, rounded to avoid float drift."""
    n = int(round(1.0 / step))
    return np.round(np.arange(1, n) * step, 10)
