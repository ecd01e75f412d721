import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import erfc

from ehrelay.analytic import analytic_ber
from ehrelay.config import EhConfig, ModulationParams, SystemConfig
from ehrelay.montecarlo import (
    BerEstimate,
    awgn_ber,
    block_rng,
    mrc_combine,
    qam_demap,
    qam_map,
    simulate_ber,
    trial_errors,
)


@pytest.mark.parametrize("m_order", [4, 16])
def test_map_demap_identity_and_unit_energy(m_order):
    iota = int(math.log2(m_order))
    words = [np.array(w) for w in itertools.product([0, 1], repeat=iota)]
    symbols = [qam_map(w, m_order) for w in words]
    for w, s in zip(words, symbols):
        np.testing.assert_array_equal(qam_demap(s, m_order), w)
    assert np.mean(np.abs(symbols) ** 2) == pytest.approx(1.0, rel=1e-12)
    assert len(set(symbols)) == m_order


@pytest.mark.parametrize("m_order", [4, 16])
def test_gray_neighbours_differ_in_one_bit(m_order):
    iota = int(math.log2(m_order))
    words = [np.array(w) for w in itertools.product([0, 1], repeat=iota)]
    symbols = np.array([qam_map(w, m_order) for w in words])
    dmin = min(abs(a - b) for a, b in itertools.combinations(symbols, 2))
    for i, j in itertools.combinations(range(m_order), 2):
        if abs(symbols[i] - symbols[j]) < dmin * 1.001:
            assert np.count_nonzero(words[i] != words[j]) == 1


def test_qam_map_validation():
    with pytest.raises(ValueError):
        qam_map([0, 1, 1])
    with pytest.raises(ValueError):
        qam_map([0, 2])


def test_awgn_ber_matches_theory():
    # Gray 4-QAM: BER = Q(sqrt(2 Eb/N0))
    for ebn0_db, bits in ((6.0, 2 * 10**6), (9.6, 2 * 10**7)):
        est = awgn_ber(ModulationParams(), ebn0_db, bits, seed=3)
        theory = 0.5 * erfc(math.sqrt(10 ** (ebn0_db / 10)))
        sigma = math.sqrt(theory / est.bits)
        assert abs(est.ber - theory) < 4 * sigma


def test_mrc_single_branch_derotates():
    g = 0.3 - 0.4j
    s = qam_map([1, 0])
    assert mrc_combine([g * s], [g]) == pytest.approx(s)


@given(n=st.integers(1, 8), re=st.floats(-2, 2), im=st.floats(-2, 2))
def test_mrc_equal_gains_sum_snr(n, re, im):
    g = complex(re, im)
    if abs(g) < 1e-3:
        return
    gains = np.full(n, g)
    # with unit noise per branch the combiner output noise variance is 1/sum|g|^2
    post_snr = 1.0 / (1.0 / np.sum(np.abs(gains) ** 2))
    assert post_snr == pytest.approx(n * abs(g) ** 2, rel=1e-9)
    s = qam_map([0, 1])
    assert mrc_combine(gains * s, gains) == pytest.approx(s, rel=1e-12)


def test_mrc_post_combining_snr_per_realisation():
    rng = np.random.default_rng(4)
    gains = rng.standard_normal((1000, 4)) + 1j * rng.standard_normal((1000, 4))
    weights = np.conj(gains) / np.sum(np.abs(gains) ** 2, axis=1, keepdims=True)
    signal = np.abs(np.sum(weights * gains, axis=1)) ** 2
    noise = np.sum(np.abs(weights) ** 2, axis=1)
    np.testing.assert_allclose(signal / noise, np.sum(np.abs(gains) ** 2, axis=1), rtol=1e-9)


def test_mrc_shape_mismatch():
    with pytest.raises(ValueError):
        mrc_combine([1.0, 2.0], [1.0])


def test_no_harvesting_is_a_coin_flip():
    est = simulate_ber(SystemConfig(eh=EhConfig.ps(eta=0.0), ps_db=60.0), min_errors=2000)
    assert est.ber >= 0.4


def test_determinism_and_seed_dependence():
    cfg = SystemConfig(ps_db=20.0)
    a = simulate_ber(cfg, min_errors=300)
    assert simulate_ber(cfg, min_errors=300) == a
    assert simulate_ber(cfg.with_(seed=cfg.seed + 1), min_errors=300) != a


def test_block_streams_are_distinct():
    draws = [block_rng(7, i).integers(0, 2**63, 4) for i in range(4)]
    assert len({tuple(d) for d in draws}) == 4
    np.testing.assert_array_equal(block_rng(7, 2).integers(0, 2**63, 4), draws[2])


def test_stops_at_the_exact_trial():
    cfg = SystemConfig(ps_db=10.0)
    est = simulate_ber(cfg, min_errors=500, block_trials=1000)
    per_trial = np.concatenate([trial_errors(cfg, block_rng(cfg.seed, i), 1000) for i in range(10)])
    stop = int(np.searchsorted(np.cumsum(per_trial), 500)) + 1
    assert est.bits == 2 * stop
    assert est.bit_errors == int(per_trial[:stop].sum()) >= 500
    assert est.bit_errors <= 500 + 1


def test_bit_budget_respected():
    est = simulate_ber(SystemConfig(ps_db=70.0), min_errors=10**6, max_bits=10_000)
    assert est.bits == 10_000 and est.bit_errors < 10**6


def test_estimate_from_counts():
    est = BerEstimate.from_counts(100, 10_000)
    assert est.ber == 0.01
    assert est.half_width_95 == pytest.approx(1.959964 * math.sqrt(0.01 * 0.99 / 1e4), rel=1e-6)
    with pytest.raises(ValueError):
        BerEstimate.from_counts(0, 0)
    with pytest.raises(ValueError):
        simulate_ber(SystemConfig(), min_errors=0)


@pytest.mark.parametrize("eh", [EhConfig.ps(model="NL"), EhConfig.da(1, 3), EhConfig.da(3, 1, model="NL")])
@pytest.mark.parametrize("ps_db", [15.0, 35.0])
def test_simulation_below_the_union_bound(eh, ps_db):
    cfg = SystemConfig(eh=eh, ps_db=ps_db)
    est = simulate_ber(cfg, min_errors=400)
    assert est.ber <= analytic_ber(cfg).ber + 3 * est.half_width_95
