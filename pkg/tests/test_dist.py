import math

import numpy as np
import pytest
from scipy import integrate, optimize

from potevt import dist
from potevt.dist import GpdParams, LogNormalParams, NormalParams
from potevt.errors import DomainError


def test_normal_pdf_examples():
    assert dist.normal_pdf(0.0, NormalParams(0, 1)) == pytest.approx(0.3989423, abs=1e-7)
    assert dist.normal_pdf(5.0, NormalParams(5, 4)) == pytest.approx(0.1994711, abs=1e-7)
    p = NormalParams(0, 1)
    assert dist.normal_pdf(1.0, p) == dist.normal_pdf(-1.0, p)
    assert dist.normal_pdf(1.0, p) == pytest.approx(0.2419707, abs=1e-7)


def test_normal_peak_height_at_mean():
    p = NormalParams(2.0, 0.3)
    grid = np.linspace(-3, 7, 10001)
    assert dist.normal_pdf(grid, p).max() <= p.peak_height
    assert dist.normal_pdf(p.mu, p) == pytest.approx(p.peak_height, rel=1e-15)


def test_lognormal_pdf_examples():
    assert dist.lognormal_pdf(1.0, LogNormalParams(0, 1)) == pytest.approx(0.3989423, abs=1e-7)
    with pytest.raises(DomainError):
        dist.lognormal_pdf(0.0, LogNormalParams(0, 1))


def test_lognormal_mode_by_optimizer():
    p = LogNormalParams(0, 1)
    res = optimize.minimize_scalar(lambda x: -dist.lognormal_pdf(x, p), bounds=(1e-3, 5),
                                   method="bounded", options={"xatol": 1e-10})
    assert res.x == pytest.approx(0.3678794, abs=1e-6)
    assert p.mode == pytest.approx(math.exp(-1), rel=1e-15)


@pytest.mark.parametrize("y, xi, beta, expected", [
    (0.0, 0.3, 1.0, 0.0),
    (0.0, -0.5, 2.0, 0.0),
    (1.0, 1.0, 1.0, 0.5),
    (2.0, -0.5, 1.0, 1.0),
    (3.0, -0.5, 1.0, 1.0),
    (-1.0, 0.2, 1.0, 0.0),
    (2 * math.log(2), 0.0, 2.0, 0.5),
])
def test_gpd_cdf_examples(y, xi, beta, expected):
    assert dist.gpd_cdf(y, GpdParams(xi, beta)) == pytest.approx(expected, abs=1e-15)


def test_gpd_quantile_examples():
    assert dist.gpd_quantile(0.0, GpdParams(0.4, 3.0)) == 0.0
    assert dist.gpd_quantile(0.5, GpdParams(1.0, 1.0)) == pytest.approx(1.0, rel=1e-15)
    for bad in (-0.1, 1.0, 1.5):
        with pytest.raises(DomainError):
            dist.gpd_quantile(bad, GpdParams(0.1, 1.0))


def _bisect_quantile(prob, p):
    # oracle: search gpd_cdf directly, no use of the closed-form inverse
    lo, hi = 0.0, 1.0
    while dist.gpd_cdf(hi, p) < prob and hi < p.upper:
        hi = min(2 * hi, p.upper)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if dist.gpd_cdf(mid, p) < prob:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("xi", [-0.5, -1e-9, 0.0, 1e-9, 0.3, 1.0])
def test_quantile_matches_bisection(xi):
    p = GpdParams(xi, 1.7)
    for prob in (0.01, 0.3, 0.5, 0.9, 0.999):
        q = dist.gpd_quantile(prob, p)
        assert q == pytest.approx(_bisect_quantile(prob, p), rel=1e-10, abs=1e-12)


def test_round_trip_grid():
    probs = np.linspace(0.0, 0.999, 10)
    xis = [-0.5, -0.2, -1e-9, 0.0, 1e-9, 0.1, 0.5, 1.0, 2.0, 3.0]
    betas = [0.01, 0.5, 1.0, 2.0, 7.0, 10.0, 30.0, 100.0, 1e3, 1e4]
    worst = 0.0
    count = 0
    for xi in xis:
        for beta in betas:
            p = GpdParams(xi, beta)
            q = dist.gpd_quantile(probs, p)
            worst = max(worst, float(np.max(np.abs(dist.gpd_cdf(q, p) - probs))))
            count += probs.size
    assert count == 1000
    assert worst <= 1e-12


def test_branch_continuity():
    for y in (0.5, 1.0, 5.0):
        a = dist.gpd_cdf(y, GpdParams(1e-9, 1.0))
        b = dist.gpd_cdf(y, GpdParams(0.0, 1.0))
        assert abs(a - b) <= 1e-8


def test_gpd_loglik_examples():
    assert dist.gpd_loglik([1, 2], GpdParams(0, 1)) == pytest.approx(-3.0, abs=1e-15)
    assert dist.gpd_loglik([2], GpdParams(0, 2)) == pytest.approx(-1 - math.log(2), abs=1e-12)
    assert dist.gpd_loglik([3], GpdParams(-0.5, 1)) == -math.inf
    assert dist.gpd_loglik([-0.1, 1.0], GpdParams(0.2, 1)) == -math.inf
    with pytest.raises(DomainError):
        dist.gpd_loglik([], GpdParams(0.2, 1))


def test_gpd_params_validation():
    for xi, beta in ((0.1, 0.0), (0.1, -1.0), (math.nan, 1.0)):
        with pytest.raises(DomainError):
            GpdParams(xi, beta)
    assert GpdParams(-0.5, 1.0).upper == 2.0
    assert GpdParams(0.5, 1.0).upper == math.inf


def test_normal_cdf_examples():
    for mu, s2 in ((0, 1), (3.5, 0.2), (-10, 40)):
        assert dist.normal_cdf(mu, NormalParams(mu, s2)) == 0.5
    p = NormalParams(0, 1)
    oracle, _ = integrate.quad(lambda t: dist.normal_pdf(t, p), -np.inf, 1.0, epsabs=1e-14)
    assert oracle == pytest.approx(0.8413447, abs=1e-7)
    assert dist.normal_cdf(1.0, p) == pytest.approx(oracle, abs=1e-12)


def test_lognormal_cdf_examples():
    p = LogNormalParams(0.7, 0.4)
    assert dist.lognormal_cdf(math.exp(0.7), p) == pytest.approx(0.5, abs=1e-15)
    assert dist.lognormal_cdf(0.0, p) == 0.0
    assert dist.lognormal_cdf(-3.0, p) == 0.0
    oracle, _ = integrate.quad(lambda t: dist.lognormal_pdf(t, p), 0, 2.5, epsabs=1e-14)
    assert dist.lognormal_cdf(2.5, p) == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("cdf, params, lo, hi", [
    (dist.normal_cdf, NormalParams(1, 2), -30, 30),
    (dist.lognormal_cdf, LogNormalParams(0, 1), -1, 1e4),
    (dist.gpd_cdf, GpdParams(0.3, 1), -1, 1e6),
    (dist.gpd_cdf, GpdParams(-0.4, 2), -1, 10),
    (dist.gpd_cdf, GpdParams(0, 1), -1, 100),
])
def test_cdfs_monotone_with_limits(cdf, params, lo, hi):
    grid = np.linspace(lo, hi, 20001)
    v = cdf(grid, params)
    assert np.all(np.diff(v) >= 0)
    assert v[0] == pytest.approx(0.0, abs=1e-9)
    assert v[-1] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("pdf, params, lo, hi", [
    (dist.normal_pdf, NormalParams(1, 2), -np.inf, np.inf),
    (dist.lognormal_pdf, LogNormalParams(0.2, 0.5), 0, np.inf),
    (dist.gpd_pdf, GpdParams(0.3, 1.5), 0, np.inf),
    (dist.gpd_pdf, GpdParams(0.0, 1.5), 0, np.inf),
    (dist.gpd_pdf, GpdParams(-0.4, 2.0), 0, 5.0),
])
def test_pdfs_integrate_to_one(pdf, params, lo, hi):
    total, _ = integrate.quad(lambda t: pdf(t, params), lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)
    grid = np.linspace(max(lo, -50) + 1e-9, min(hi, 50), 1001)
    assert np.all(np.asarray(pdf(grid, params)) >= 0)


def test_lognormal_is_normal_of_log():
    p = LogNormalParams(0.3, 0.8)
    q = NormalParams(0.3, 0.8)
    x = np.geomspace(1e-4, 1e4, 2001)
    assert np.max(np.abs(dist.lognormal_pdf(x, p) - dist.normal_pdf(np.log(x), q) / x)) <= 1e-12


def test_gpd_logpdf_matches_pdf_derivative_of_cdf():
    p = GpdParams(0.25, 1.3)
    y = np.linspace(0.1, 20, 50)
    h = 1e-5
    fd = (dist.gpd_cdf(y + h, p) - dist.gpd_cdf(y - h, p)) / (2 * h)
    assert np.allclose(dist.gpd_pdf(y, p), fd, rtol=1e-7)


def test_logpdfs_agree_with_pdfs():
    p = NormalParams(1.0, 0.5)
    x = np.linspace(-3, 5, 11)
    assert np.allclose(dist.normal_logpdf(x, p), np.log(dist.normal_pdf(x, p)), atol=1e-13)
    q = LogNormalParams(0.2, 0.3)
    x = np.linspace(0.1, 6, 11)
    assert np.allclose(dist.lognormal_logpdf(x, q), np.log(dist.lognormal_pdf(x, q)), atol=1e-13)


def test_scalar_in_scalar_out():
    assert isinstance(dist.gpd_cdf(1.0, GpdParams(0.1, 1)), float)
    assert dist.gpd_cdf([1.0, 2.0], GpdParams(0.1, 1)).shape == (2,)
