import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ehrelay.config import EhConfig
from ehrelay.harvester import SnrPair, harvested_power, received_snrs, saturate

powers = st.lists(st.floats(0.0, 100.0), min_size=3, max_size=3)


def test_harvested_power_examples():
    assert harvested_power(EhConfig.da(1, 1, eta=0.7), 1.0, 1.0, [2.0]) == pytest.approx(1.4)
    assert harvested_power(EhConfig.ps(n_r=2, rho=0.8, eta=0.7), 1.0, 1.0, [1.0, 1.0]) == pytest.approx(1.12)
    nl = EhConfig.da(1, 1, eta=1.0, model="NL", p_th=10.0)
    assert harvested_power(nl, 100.0, 1.0, [1.0]) == 10.0


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        harvested_power(EhConfig.da(2, 2), 1.0, 1.0, [1.0])
    with pytest.raises(ValueError):
        received_snrs(EhConfig.ps(n_r=4), 1.0, 1.0, 1.0, 1.0, [1.0, 1.0], 1.0)


def test_ps_information_branch_factor():
    eh = EhConfig.ps(n_r=1, rho=0.8)
    snr = received_snrs(eh, 10.0, 1.0, 1.0, 1.0, [1.0], 1.0)
    assert snr.gamma_sr == pytest.approx(0.2 * 10.0)


def test_da_information_antennas_only():
    eh = EhConfig.da(2, 3)
    h = [100.0, 100.0, 1.0, 2.0, 3.0]
    snr = received_snrs(eh, 1.0, 1.0, 1.0, 1.0, h, 1.0)
    assert snr.gamma_sr == pytest.approx(6.0)
    assert snr.gamma_rd == pytest.approx(0.7 * 200.0)


def test_nl_equals_l_below_threshold():
    h = [1e-3, 2e-3, 1e-3, 0.0]
    lin = received_snrs(EhConfig.ps(), 1.0, 1.0, 0.5, 0.5, h, 2.0)
    nl = received_snrs(EhConfig.ps(model="NL"), 1.0, 1.0, 0.5, 0.5, h, 2.0)
    assert nl == lin


@given(h=powers, extra=st.floats(0.0, 50.0), j=st.integers(0, 2), model=st.sampled_from(["L", "NL"]))
def test_harvested_power_monotone_in_channel(h, extra, j, model):
    eh = EhConfig.ps(n_r=3, model=model, p_th=500.0)
    bumped = list(h)
    bumped[j] += extra
    assert harvested_power(eh, 10.0, 0.5, bumped) >= harvested_power(eh, 10.0, 0.5, h)


@given(h=powers, eta=st.floats(0.0, 1.0), rho=st.floats(0.01, 0.98))
def test_harvested_power_monotone_in_eta_and_rho(h, eta, rho):
    base = EhConfig.ps(n_r=3, rho=rho, eta=eta, model="NL", p_th=500.0)
    more_eta = EhConfig.ps(n_r=3, rho=rho, eta=min(1.0, eta + 0.01), model="NL", p_th=500.0)
    more_rho = EhConfig.ps(n_r=3, rho=rho + 0.01, eta=eta, model="NL", p_th=500.0)
    p = harvested_power(base, 10.0, 0.5, h)
    assert harvested_power(more_eta, 10.0, 0.5, h) >= p
    assert harvested_power(more_rho, 10.0, 0.5, h) >= p


@given(h=powers, p_th=st.floats(0.1, 1e3))
def test_nl_never_exceeds_l(h, p_th):
    lin = harvested_power(EhConfig.ps(n_r=3, p_th=p_th), 10.0, 0.5, h)
    nl = harvested_power(EhConfig.ps(n_r=3, p_th=p_th, model="NL"), 10.0, 0.5, h)
    assert nl <= lin
    if lin <= p_th:
        assert nl == lin
    else:
        assert nl == p_th


@given(h=powers, rho=st.floats(0.01, 0.99), eta=st.floats(0.01, 1.0), l_sr=st.floats(0.01, 1.0))
def test_ps_identity_between_branches(h, rho, eta, l_sr):
    eh = EhConfig.ps(n_r=3, rho=rho, eta=eta)
    n0 = 0.5
    snr = received_snrs(eh, 10.0, n0, l_sr, 1.0, h, 1.0)
    harvested = harvested_power(eh, 10.0, l_sr, h)
    assert snr.gamma_sr * rho / (1 - rho) * eta * n0 == pytest.approx(harvested, rel=1e-12, abs=1e-300)


def test_vectorised_saturation():
    eh = EhConfig.ps(model="NL", p_th=2.0)
    np.testing.assert_array_equal(saturate(np.array([1.0, 3.0]), eh), [1.0, 2.0])


def test_snr_pair_rejects_negative():
    with pytest.raises(ValueError):
        SnrPair(-1.0, 1.0)
    with pytest.raises(ValueError):
        SnrPair(1.0, float("nan"))
