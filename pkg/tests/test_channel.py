import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats
from scipy.special import k0

from ehrelay.channel import (
    GammaGammaParams,
    double_rayleigh_cdf,
    double_rayleigh_pdf,
    epsilon_fit,
    gamma_gamma_sum_params,
    link_params,
    sample_double_rayleigh,
)
from ehrelay.config import EhConfig, FadingStats, SystemConfig

UNIT = FadingStats()


def _integrate_positive(f, scale=1.0):
    # split at the scale of the density to help QUADPACK with the tail
    head, _ = integrate.quad(f, 0.0, scale, limit=400, epsabs=0, epsrel=1e-12)
    tail, _ = integrate.quad(f, scale, np.inf, limit=400, epsabs=0, epsrel=1e-12)
    return head + tail


@pytest.mark.parametrize("omega", [1.0, 4.0])
def test_sample_mean_power(omega):
    rng = np.random.default_rng(11)
    h = sample_double_rayleigh(omega, rng, 10**6)
    assert np.mean(np.abs(h) ** 2) == pytest.approx(omega, rel=0.01)


def test_sample_moments_within_three_standard_errors():
    rng = np.random.default_rng(12)
    p = np.abs(sample_double_rayleigh(1.0, rng, 10**6)) ** 2
    # |h|^2 is a product of two unit exponentials: E = 1, E^2 = 4, E^4 = 576
    se_mean = math.sqrt((4.0 - 1.0) / p.size)
    se_sq = math.sqrt((576.0 - 16.0) / p.size)
    assert abs(p.mean() - 1.0) < 3 * se_mean
    assert abs(np.mean(p ** 2) - 4.0) < 3 * se_sq


def test_sample_matches_density_ks():
    rng = np.random.default_rng(13)
    y = np.abs(sample_double_rayleigh(1.0, rng, 10**6)) ** 2
    res = stats.kstest(y, lambda t: double_rayleigh_cdf(t, 1.0))
    assert res.statistic < 0.005


def test_scalar_sample_is_complex():
    h = sample_double_rayleigh(1.0, np.random.default_rng(0))
    assert isinstance(h, complex) and math.isfinite(abs(h))


@pytest.mark.parametrize("omega", [0.0, -1.0])
def test_non_positive_omega_rejected(omega):
    with pytest.raises(ValueError):
        sample_double_rayleigh(omega, np.random.default_rng(0))


def test_double_rayleigh_pdf_values():
    assert double_rayleigh_pdf(1.0, 1.0) == pytest.approx(2 * k0(2.0), rel=1e-14)
    assert double_rayleigh_pdf(0.0, 1.0) == math.inf
    with pytest.raises(ValueError):
        double_rayleigh_pdf(-1.0, 1.0)


def test_double_rayleigh_normalisation_and_mean():
    total = _integrate_positive(lambda y: double_rayleigh_pdf(y, 1.0))
    assert total == pytest.approx(1.0, abs=1e-8)
    mean = _integrate_positive(lambda y: y * double_rayleigh_pdf(y, 2.0), scale=2.0)
    assert mean == pytest.approx(2.0, abs=1e-6)


@given(y=st.floats(1e-6, 200.0), ybar=st.floats(0.1, 10.0))
def test_double_rayleigh_cdf_is_integral_of_pdf(y, ybar):
    # y = s**2 tames the logarithmic singularity of the density at zero
    area, _ = integrate.quad(lambda s: 2 * s * double_rayleigh_pdf(s * s, ybar), 0.0, math.sqrt(y),
                             limit=200, epsabs=0, epsrel=1e-11)
    assert double_rayleigh_cdf(y, ybar) == pytest.approx(area, rel=1e-7, abs=1e-12)


def test_epsilon_fit_examples():
    assert epsilon_fit(1.0, 1.0) == pytest.approx(-1.0828 / 1.98124, rel=1e-14)
    assert epsilon_fit(2.0, 1.0) == pytest.approx((-0.127 - 1.9 - 0.0058) / (1 + 0.00248 + 0.98), rel=1e-14)
    with pytest.raises(ValueError):
        epsilon_fit(0.0, 1.0)


def test_sum_params_table_rows():
    sr = gamma_gamma_sum_params("SR", EhConfig.ps(n_r=1, rho=0.8), 1.0, UNIT)
    assert (sr.k, sr.m) == (1.0, 1.0)
    assert sr.mean == pytest.approx(0.2)
    sr_da = gamma_gamma_sum_params("SR", EhConfig.da(1, 2), 1.0, UNIT)
    assert sr_da.k == pytest.approx(2 + epsilon_fit(1, 1))
    assert sr_da.k == pytest.approx(1.45347, abs=1e-5)
    assert sr_da.m == 2.0
    rd = gamma_gamma_sum_params("RD", EhConfig.da(1, 3, eta=0.7), 1.0, UNIT)
    assert (rd.k, rd.m, rd.mean) == (1.0, 1.0, pytest.approx(0.7))
    with pytest.raises(ValueError):
        gamma_gamma_sum_params("XY", EhConfig.ps(), 1.0, UNIT)


def test_no_harvest_gives_no_rd_params():
    _, x = link_params(SystemConfig(eh=EhConfig.ps(eta=0.0)))
    assert x is None


def test_derived_quantities():
    p = GammaGammaParams(1.4, 2.0, 3.0)
    assert p.xi == 1.4 - 2.0
    assert p.alpha == pytest.approx(1.7)
    assert p.beta == pytest.approx(2.8 / 3.0)
    assert p.psi > 0
    with pytest.raises(ValueError):
        GammaGammaParams(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        p.pdf(0.0)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("mode", ["PS", "DA"])
@pytest.mark.parametrize("link", ["SR", "RD"])
def test_gamma_gamma_pdf_normalised_and_mean_matched(n, mode, link):
    eh = EhConfig.ps(n_r=n) if mode == "PS" else EhConfig.da(n, n)
    p = gamma_gamma_sum_params(link, eh, 1.0, UNIT)
    total = _integrate_positive(p.pdf, scale=p.mean)
    assert total == pytest.approx(1.0, abs=1e-6)
    mean = _integrate_positive(lambda t: t * p.pdf(t), scale=p.mean)
    assert mean == pytest.approx(p.mean, rel=5e-3)


def test_single_branch_reduces_to_double_rayleigh():
    p = gamma_gamma_sum_params("RD", EhConfig.da(1, 1, eta=1.0), 2.0, UNIT)
    y = np.geomspace(1e-3, 50.0, 30)
    np.testing.assert_allclose(p.pdf(y), double_rayleigh_pdf(y, 2.0), rtol=1e-12)


def test_cdf_matches_quadrature():
    p = GammaGammaParams(1.45, 2.0, 2.0)
    for x in (0.1, 1.0, 5.0):
        area, _ = integrate.quad(p.pdf, 0.0, x, epsrel=1e-11, limit=200)
        assert p.cdf(x) == pytest.approx(area, rel=1e-8)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fit_against_simulated_mrc_sum(n):
    # the fit error grows with n and is about 0.0196 at n = 4, so the sample
    # has to be large enough that its own noise stays well below the margin
    rng = np.random.default_rng(100 + n)
    p = gamma_gamma_sum_params("RD", EhConfig.da(n, 1, eta=1.0), 1.0, UNIT)
    s = np.sort(np.concatenate([
        (np.abs(sample_double_rayleigh(1.0, rng, (10**6, n))) ** 2).sum(axis=-1) for _ in range(8)
    ]))
    q = np.quantile(s, np.linspace(0.001, 0.999, 999))
    empirical = np.searchsorted(s, q, side="right") / s.size
    assert np.max(np.abs(empirical - p.cdf(q))) < 0.02


def test_sampler_mean():
    p = GammaGammaParams(1.45, 2.0, 3.0)
    draws = p.sample(np.random.default_rng(5), 200_000)
    assert draws.mean() == pytest.approx(3.0, rel=0.01)
