"""Closed form against direct quadrature over a grid of source powers."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..analytic import direct, ser
from ..channel import link_params
from ..config import SystemConfig
from ..geometry import pathloss

__all__ = ["CLOSED_FORM_OPS", "AgreementRow", "DEFAULT_GRID", "dual_path_rows", "nl_uniform_rows"]

DEFAULT_GRID = tuple(range(0, 60, 5))
CLOSED_FORM_OPS = (
    "ser_sr_uniform",
    "ser_sr_deterministic",
    "ser_rd_cond_uniform",
    "ser_rd_linear_uniform",
    "ser_rd_linear_det",
    "ser_rd_nl_det",
)
# distance used for the fixed-distance operations
FIXED_DISTANCE = 2.0
# conditional R-D SER is checked at this fraction of the mean harvested power
POWER_FRACTION = 0.3


@dataclass(frozen=True)
class AgreementRow:
    op: str
    ps_db: float
    closed: float
    oracle: float
    method: str

    @property
    def relative_error(self) -> float:
        if self.oracle == 0.0:
            return 0.0 if self.closed == 0.0 else math.inf
        return abs(self.closed / self.oracle - 1.0)

    def passes(self, tol: float) -> bool:
        return self.method == ser.CLOSED_FORM and self.relative_error <= tol


def _pair(base: SystemConfig, ps_db: float):
    cfg = base.with_(ps_db=ps_db)
    theta, x = link_params(cfg)
    if x is None:
        raise ValueError("the agreement grid needs a configuration that harvests power")
    return cfg, theta, x


def dual_path_rows(base: SystemConfig | None = None, grid=DEFAULT_GRID) -> list[AgreementRow]:
    """Evaluate every closed-form operation and its oracle at each ``ps_db`` in ``grid``.

    Uniform operations use the distance laws of ``base``; fixed-distance ones
    put both nodes at :data:`FIXED_DISTANCE`.
    """
    base = SystemConfig() if base is None else base
    mod, v = base.mod, base.v
    loss = pathloss(FIXED_DISTANCE, v)
    rows = []
    for ps_db in grid:
        cfg, theta, x = _pair(base, ps_db)
        gs, gr, ybar, p_th = cfg.geom_sr, cfg.geom_rd, cfg.fading.ybar, cfg.eh.p_th
        u = POWER_FRACTION * x.mean
        pairs = [
            ("ser_sr_uniform", ser.ser_sr_uniform(mod, theta, gs), direct.ser_sr_uniform(mod, theta, gs)),
            ("ser_sr_deterministic", ser.ser_sr_deterministic(mod, theta, FIXED_DISTANCE, v),
             direct.ser_sr_deterministic(mod, theta, FIXED_DISTANCE, v)),
            ("ser_rd_cond_uniform", ser.ser_rd_cond_uniform(mod, u, ybar, gr),
             direct.ser_rd_cond_uniform(mod, u, ybar, gr)),
            ("ser_rd_linear_uniform", ser.ser_rd_linear_uniform(mod, x, gs, gr, ybar),
             direct.ser_rd_linear_uniform(mod, x, gs, gr, ybar)),
            ("ser_rd_linear_det", ser.ser_rd_linear_det(mod, x, loss, loss, ybar),
             direct.ser_rd_linear_det(mod, x, loss, loss, ybar)),
            ("ser_rd_nl_det", ser.ser_rd_nl_det(mod, x, loss, loss, ybar, p_th, cfg.chi),
             direct.ser_rd_nl_det(mod, x, loss, loss, ybar, p_th)),
        ]
        rows.extend(AgreementRow(op, float(ps_db), c.value, o, c.method) for op, c, o in pairs)
    return rows


def nl_uniform_rows(base: SystemConfig | None = None, grid=DEFAULT_GRID) -> list[AgreementRow]:
    """The Chebyshev-rule R-D SER with uniform distances against its oracle."""
    base = SystemConfig() if base is None else base
    rows = []
    for ps_db in grid:
        cfg, _, x = _pair(base, ps_db)
        value = ser.ser_rd_nl_uniform(cfg.mod, x, cfg.geom_sr, cfg.geom_rd, cfg.fading.ybar,
                                      cfg.eh.p_th, cfg.chi)
        oracle = direct.ser_rd_nl_uniform(cfg.mod, x, cfg.geom_sr, cfg.geom_rd, cfg.fading.ybar,
                                          cfg.eh.p_th)
        rows.append(AgreementRow("ser_rd_nl_uniform", float(ps_db), value.value, oracle, value.method))
    return rows
