"""End-to-end analytic BER of a :class:`~ehrelay.config.SystemConfig`."""

from __future__ import annotations

from dataclasses import dataclass

from ..channel import link_params
from ..config import SystemConfig
from ..geometry import pathloss
from . import direct, ser
from .ser import FALLBACK, SerValue

__all__ = ["BerBreakdown", "analytic_ber"]


@dataclass(frozen=True)
class BerBreakdown:
    """Bound on the end-to-end BER together with the per-hop SERs behind it."""

    ber: float
    ser_sr: SerValue
    ser_rd: SerValue

    @property
    def method(self) -> str:
        if self.ser_sr.closed_form and self.ser_rd.closed_form:
            return ser.CLOSED_FORM
        return FALLBACK


def _rd_ser(config: SystemConfig, x, chi: int, allow_bound: bool) -> SerValue:
    mod, eh = config.mod, config.eh
    gs, gr = config.geom_sr, config.geom_rd
    ybar = config.fading.ybar
    if x is None:
        # nothing harvested: the relay transmits with zero power
        return SerValue(min(0.5 * mod.a, 1.0), 0.0, ser.CLOSED_FORM, "no harvested power")
    if gs.is_uniform and gr.is_uniform:
        if eh.model == "L":
            return ser.ser_rd_linear_uniform(mod, x, gs, gr, ybar)
        return ser.ser_rd_nl_uniform(mod, x, gs, gr, ybar, eh.p_th, chi, allow_bound)
    if not gs.is_uniform and not gr.is_uniform:
        l_sr, l_rd = pathloss(gs.d, gs.v), pathloss(gr.d, gr.v)
        if eh.model == "L":
            return ser.ser_rd_linear_det(mod, x, l_sr, l_rd, ybar)
        return ser.ser_rd_nl_det(mod, x, l_sr, l_rd, ybar, eh.p_th, chi)
    # one fixed and one random distance has no closed form here
    if eh.model == "L":
        value = direct.ser_rd_linear_uniform(mod, x, gs, gr, ybar)
    else:
        value = direct.ser_rd_nl_uniform(mod, x, gs, gr, ybar, eh.p_th)
    return SerValue(value, 0.0, FALLBACK, "mixed distance models")


def analytic_ber(config: SystemConfig, chi: int | None = None,
                 allow_bound: bool = True) -> BerBreakdown:
    """Analytic upper bound on the BER of ``config``.

    ``chi`` overrides ``config.chi`` for the saturating-harvester quadrature;
    ``allow_bound`` is passed to :func:`ser.ser_rd_nl_uniform`.
    """
    chi = config.chi if chi is None else chi
    theta, x = link_params(config)
    gs = config.geom_sr
    if gs.is_uniform:
        p_sr = ser.ser_sr_uniform(config.mod, theta, gs)
    else:
        p_sr = ser.ser_sr_deterministic(config.mod, theta, gs.d, gs.v)
    p_rd = _rd_ser(config, x, chi, allow_bound)
    ber = ser.ber_overall(p_sr.value, p_rd.value, config.mod.iota)
    return BerBreakdown(ber, p_sr, p_rd)
