"""Harvested power at the relay and the per-hop received SNRs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import EhConfig

__all__ = ["SnrPair", "harvested_power", "received_snrs", "saturate"]


@dataclass(frozen=True)
class SnrPair:
    gamma_sr: float
    gamma_rd: float

    def __post_init__(self):
        for name in ("gamma_sr", "gamma_rd"):
            value = np.asarray(getattr(self, name))
            if np.any(~np.isfinite(value)) or np.any(value < 0):
                raise ValueError(f"{name} must be finite and non-negative")


def saturate(power, eh: EhConfig):
    """Apply the harvester model: identity for L, ``min(P, p_th)`` for NL."""
    if eh.model == "NL":
        return np.minimum(power, eh.p_th)
    return power


def _check_len(powers, expected: int, what: str):
    if np.shape(powers)[-1] != expected:
        raise ValueError(f"expected {expected} {what} channel powers, got {np.shape(powers)[-1]}")


def harvested_power(eh: EhConfig, ps: float, l_sr, channel_powers):
    """Power harvested at the relay from the harvesting branches.

    ``channel_powers`` holds ``|h_j|**2`` of the ``n_eh`` dedicated antennas
    (DA) or of all ``n_r`` antennas (PS) along its last axis.
    """
    powers = np.asarray(channel_powers, dtype=float)
    _check_len(powers, eh.eh_antennas, "harvesting")
    raw = eh.eta * eh.eh_fraction * ps * np.asarray(l_sr) * powers.sum(axis=-1)
    out = saturate(raw, eh)
    return float(out) if np.ndim(out) == 0 else out


def received_snrs(eh: EhConfig, ps: float, n0: float, l_sr, l_rd, h_powers, g_power) -> SnrPair:
    """Instantaneous SNRs of both hops.

    ``h_powers`` are the ``|h_i|**2`` of all ``n_r`` relay antennas, ordered
    with the harvesting antennas first in DA mode.  ``g_power`` is ``|g|**2``.
    """
    h = np.asarray(h_powers, dtype=float)
    _check_len(h, eh.n_r, "relay")
    if eh.mode == "DA":
        eh_part, ip_part = h[..., : eh.n_eh], h[..., eh.n_eh :]
    else:
        eh_part = ip_part = h
    theta = eh.ip_fraction * ps / n0 * ip_part.sum(axis=-1)
    gamma_sr = theta * np.asarray(l_sr)
    p_r = harvested_power(eh, ps, l_sr, eh_part)
    gamma_rd = p_r * np.asarray(l_rd) * np.asarray(g_power) / n0
    return SnrPair(gamma_sr, gamma_rd)
