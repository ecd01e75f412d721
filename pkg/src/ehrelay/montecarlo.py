"""Symbol-level Monte-Carlo simulation of the harvesting relay link.

Each trial draws fresh distances, fading gains, noise and ``log2 M`` random
bits, sends one Gray-mapped QAM symbol over the source-relay hop, combines the
information branches with MRC, hard-decodes at the relay and forwards the
re-modulated symbol with the harvested power.  Trials are processed in blocks;
block ``i`` uses its own generator seeded from ``(seed, i)`` so the outcome
depends only on the configuration and never on how blocks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import sample_double_rayleigh
from .config import ModulationParams, SystemConfig
from .harvester import saturate

__all__ = [
    "BerEstimate",
    "awgn_ber",
    "block_errors",
    "block_rng",
    "trial_errors",
    "mrc_combine",
    "qam_demap",
    "qam_map",
    "simulate_ber",
]

BLOCK_TRIALS = 1 << 15
Z95 = 1.959963984540054


@dataclass(frozen=True)
class BerEstimate:
    """Bit-error counts with a normal-approximation 95% half-width."""

    ber: float
    bit_errors: int
    bits: int
    half_width_95: float

    @classmethod
    def from_counts(cls, bit_errors: int, bits: int) -> "BerEstimate":
        if bits <= 0:
            raise ValueError("no bits were simulated")
        p = bit_errors / bits
        return cls(p, int(bit_errors), int(bits), Z95 * math.sqrt(p * (1.0 - p) / bits))


def _axis_levels(m_order: int):
    side = math.isqrt(m_order)
    bits = side.bit_length() - 1
    scale = math.sqrt(2.0 * (m_order - 1) / 3.0)
    return side, bits, scale


def _gray_to_level(gray: np.ndarray, nbits: int) -> np.ndarray:
    value = gray.copy()
    shift = 1
    while shift < nbits:
        value ^= value >> shift
        shift <<= 1
    return value


def _pam(bits: np.ndarray, side: int) -> np.ndarray:
    nbits = bits.shape[-1]
    weights = 1 << np.arange(nbits - 1, -1, -1)
    gray = bits.astype(np.int64) @ weights
    return 2 * _gray_to_level(gray, nbits) - (side - 1)


def _unpam(amp: np.ndarray, side: int, nbits: int) -> np.ndarray:
    level = np.clip(np.rint((amp + side - 1) / 2.0), 0, side - 1).astype(np.int64)
    gray = level ^ (level >> 1)
    shifts = np.arange(nbits - 1, -1, -1)
    return ((gray[..., None] >> shifts) & 1).astype(np.uint8)


def _modulate(bits: np.ndarray, m_order: int) -> np.ndarray:
    """Map ``(..., log2 M)`` bit arrays to unit-energy symbols."""
    side, nb, scale = _axis_levels(m_order)
    re = _pam(bits[..., :nb], side)
    im = _pam(bits[..., nb:], side)
    return (re + 1j * im) / scale


def _demodulate(symbols: np.ndarray, m_order: int) -> np.ndarray:
    side, nb, scale = _axis_levels(m_order)
    z = np.asarray(symbols) * scale
    return np.concatenate([_unpam(z.real, side, nb), _unpam(z.imag, side, nb)], axis=-1)


def qam_map(bits, m_order: int = 4) -> complex:
    """Gray-mapped square QAM symbol of unit average energy for ``log2 M`` bits.

    >>> qam_map([0, 0])
    (-0.7071067811865475-0.7071067811865475j)
    """
    arr = np.asarray(bits)
    iota = int(round(math.log2(m_order)))
    if arr.shape != (iota,):
        raise ValueError(f"expected {iota} bits for {m_order}-QAM, got shape {arr.shape}")
    if np.any((arr != 0) & (arr != 1)):
        raise ValueError("bits must be 0 or 1")
    return complex(_modulate(arr.astype(np.uint8), m_order))


def qam_demap(symbol: complex, m_order: int = 4) -> np.ndarray:
    """Minimum-distance decision, returned as the ``log2 M`` Gray bits."""
    return _demodulate(np.asarray(complex(symbol)), m_order)


def mrc_combine(received, gains) -> complex:
    """Maximum-ratio combination normalised to an estimate of the sent symbol.

    Returns ``sum(conj(g_i) r_i) / sum(|g_i|^2)``; with equal branch noise the
    post-combining SNR is the sum of the branch SNRs.
    """
    r = np.asarray(received, dtype=complex)
    g = np.asarray(gains, dtype=complex)
    if r.shape != g.shape:
        raise ValueError("received samples and gains must have the same shape")
    power = np.sum(np.abs(g) ** 2, axis=-1)
    out = np.sum(np.conj(g) * r, axis=-1) / power
    return complex(out) if np.ndim(out) == 0 else out


def _complex_noise(rng: np.random.Generator, n0: float, shape) -> np.ndarray:
    w = rng.standard_normal(tuple(shape) + (2,)) * math.sqrt(n0 / 2.0)
    return w[..., 0] + 1j * w[..., 1]


def trial_errors(config: SystemConfig, rng: np.random.Generator, trials: int) -> np.ndarray:
    """End-to-end bit errors of each of ``trials`` independent symbol transmissions."""
    eh, fading, mod = config.eh, config.fading, config.mod
    m_order = mod.m_order
    iota = mod.iota
    ps = config.ps

    l_sr = config.geom_sr.sample_pathloss(rng, trials)
    l_rd = config.geom_rd.sample_pathloss(rng, trials)
    h = sample_double_rayleigh(fading.omega_h, rng, (trials, eh.n_r))
    g = sample_double_rayleigh(fading.omega_g, rng, trials)
    bits = rng.integers(0, 2, size=(trials, iota), dtype=np.uint8)
    s = _modulate(bits, m_order)

    if eh.mode == "DA":
        h_eh, h_ip = h[:, : eh.n_eh], h[:, eh.n_eh :]
    else:
        h_eh = h_ip = h
    # information branches: amplitude sqrt((1 - rho) P_s L_sr) in PS mode
    amp_sr = np.sqrt(eh.ip_fraction * ps * l_sr)[:, None]
    gains = amp_sr * h_ip
    y = gains * s[:, None] + _complex_noise(rng, fading.n0, gains.shape)
    relay_bits = _demodulate(mrc_combine(y, gains), m_order)

    p_r = saturate(eh.eta * eh.eh_fraction * ps * l_sr * np.sum(np.abs(h_eh) ** 2, axis=1), eh)
    gain_rd = np.sqrt(p_r * l_rd) * g
    y_d = gain_rd * _modulate(relay_bits, m_order) + _complex_noise(rng, fading.n0, (trials,))
    with np.errstate(divide="ignore", invalid="ignore"):
        est = np.where(np.abs(gain_rd) > 0, y_d / gain_rd, y_d)
    dest_bits = _demodulate(est, m_order)
    return np.count_nonzero(dest_bits != bits, axis=1)


def block_errors(config: SystemConfig, rng: np.random.Generator, trials: int) -> int:
    """Total of :func:`trial_errors` over the block."""
    return int(trial_errors(config, rng, trials).sum())


def block_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for block ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def simulate_ber(config: SystemConfig, min_errors: int = 200, max_bits: int = 10**8,
                 block_trials: int = BLOCK_TRIALS) -> BerEstimate:
    """Simulate until ``min_errors`` bit errors or ``max_bits`` bits, whichever comes first.

    The run stops at the symbol whose errors bring the count to ``min_errors``,
    so the result does not depend on ``block_trials`` beyond the seeding of
    blocks.
    """
    if min_errors < 1:
        raise ValueError("min_errors must be positive")
    iota = config.mod.iota
    if max_bits < iota:
        raise ValueError(f"max_bits must allow at least one symbol ({iota} bits)")
    errors = bits = 0
    index = 0
    while errors < min_errors and bits < max_bits:
        trials = min(block_trials, (max_bits - bits) // iota)
        if trials == 0:
            break
        per_trial = trial_errors(config, block_rng(config.seed, index), trials)
        running = errors + np.cumsum(per_trial)
        hit = int(np.searchsorted(running, min_errors))
        used = min(hit + 1, trials)
        errors = int(running[used - 1])
        bits += used * iota
        index += 1
    return BerEstimate.from_counts(errors, bits)


def awgn_ber(mod: ModulationParams, snr_per_bit_db: float, bits: int, seed: int = 0) -> BerEstimate:
    """BER of the QAM mapper alone over AWGN; used to check the constellation."""
    rng = np.random.default_rng(seed)
    iota = mod.iota
    n = bits // iota
    b = rng.integers(0, 2, size=(n, iota), dtype=np.uint8)
    es_n0 = iota * 10.0 ** (snr_per_bit_db / 10.0)
    y = _modulate(b, mod.m_order) + _complex_noise(rng, 1.0 / es_n0, (n,))
    return BerEstimate.from_counts(int(np.count_nonzero(_demodulate(y, mod.m_order) != b)), n * iota)
