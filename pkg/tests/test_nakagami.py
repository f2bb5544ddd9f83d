import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special as sp
import scipy.stats

from nakafit import NakagamiParams, analytic_moment, as_block, block_log_likelihood, log_pdf, pdf, sample


def test_params_validation():
    with pytest.raises(ValueError):
        NakagamiParams(m=0.0, sigma=1.0)
    with pytest.raises(ValueError):
        NakagamiParams(m=1.0, sigma=-2.0)
    with pytest.raises(ValueError):
        NakagamiParams(m=math.nan, sigma=1.0)


def test_omega_bridge_round_trips():
    p = NakagamiParams.from_omega(4.0, 1.0)
    assert p.sigma == 0.25
    assert p.omega == 1.0
    q = NakagamiParams(m=2.5, sigma=0.8)
    assert NakagamiParams.from_omega(q.m, q.omega).sigma == pytest.approx(q.sigma, rel=1e-15)


def test_as_block_rejects_bad_input():
    with pytest.raises(ValueError):
        as_block([])
    with pytest.raises(ValueError):
        as_block([1.0, 0.0])
    with pytest.raises(ValueError):
        as_block([1.0, -3.0])
    with pytest.raises(ValueError):
        as_block([1.0, math.inf])


def test_log_pdf_rayleigh_point():
    # m = 1, sigma = 1 reduces to 2 x exp(-x^2)
    p = NakagamiParams(m=1.0, sigma=1.0)
    assert log_pdf(p, 1.0) == pytest.approx(math.log(2.0) - 1.0, abs=1e-12)


def test_log_pdf_direct_arithmetic():
    # ln2 - lnGamma(2) - 2 ln(1/2) + 3 ln(1) - 1/(1/2) = 3 ln2 - 2
    p = NakagamiParams(m=2.0, sigma=0.5)
    assert log_pdf(p, 1.0) == pytest.approx(3.0 * math.log(2.0) - 2.0, abs=1e-12)


def test_log_pdf_domain_errors():
    p = NakagamiParams(m=1.0, sigma=1.0)
    with pytest.raises(ValueError):
        log_pdf(p, 0.0)
    with pytest.raises(ValueError):
        log_pdf(p, -1.0)


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0, 8.0])
@pytest.mark.parametrize("sigma", [0.5, 1.0, 4.0])
def test_pdf_normalizes(m, sigma):
    # split at the bulk and add the analytic x^2 ~ Gamma tail beyond the window
    p = NakagamiParams(m=m, sigma=sigma)
    peak = math.sqrt(m * sigma)
    hi = math.sqrt(sigma * (m + 20.0 * math.sqrt(m) + 60.0))
    head, _ = scipy.integrate.quad(lambda x: pdf(p, x), 1e-14, peak, limit=200)
    tail, _ = scipy.integrate.quad(lambda x: pdf(p, x), peak, hi, limit=200)
    assert head + tail == pytest.approx(1.0, abs=1e-6)


def test_pdf_normalizes_tightly_on_finite_window():
    p = NakagamiParams(m=1.0, sigma=1.0)
    total, _ = scipy.integrate.quad(lambda x: pdf(p, x), 1e-14, 20.0, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_block_log_likelihood_is_sum_of_log_pdfs():
    p = NakagamiParams(m=1.0, sigma=1.0)
    one = block_log_likelihood(p, [1.0])
    assert one == pytest.approx(math.log(2.0) - 1.0, abs=1e-12)
    assert block_log_likelihood(p, [1.0, 1.0]) == pytest.approx(2.0 * one, rel=1e-14)
    q = NakagamiParams(m=3.0, sigma=0.7)
    block = [1.0, 2.0, 0.5]
    expected = sum(log_pdf(q, x) for x in block)
    assert block_log_likelihood(q, block) == pytest.approx(expected, rel=1e-14)


def test_sample_deterministic_given_seed():
    p = NakagamiParams(m=2.0, sigma=0.5)
    a = sample(p, 1000, seed=42)
    b = sample(p, 1000, seed=42)
    assert np.array_equal(a, b)
    c = sample(p, 1000, seed=43)
    assert not np.array_equal(a, c)


def test_sample_positive_support():
    p = NakagamiParams(m=0.5, sigma=1.0)
    x = sample(p, 50000, seed=7)
    assert np.all(x > 0.0)
    assert np.all(np.isfinite(x))


@pytest.mark.parametrize(
    "m,sigma",
    [(1.0, 1.0), (4.0, 0.25)],
)
def test_sample_second_moment_band(m, sigma):
    # E[x^2] = m*sigma, Var[x^2] = m*sigma^2 from the Gamma representation
    n = 100_000
    p = NakagamiParams(m=m, sigma=sigma)
    x = sample(p, n, seed=123)
    stderr = math.sqrt(m * sigma * sigma / n)
    assert abs(float(np.mean(x * x)) - m * sigma) < 3.0 * stderr


def test_sample_fourth_moment_band():
    n = 100_000
    p = NakagamiParams(m=2.0, sigma=1.0)
    x = sample(p, n, seed=99)
    x4 = (x * x) ** 2
    # Var[x^4] = E[x^8] - E[x^4]^2 via the Gamma rising-factorial moments
    e8 = (2 * 3 * 4 * 5)  # m(m+1)(m+2)(m+3) at m=2, sigma=1
    e4 = analytic_moment(p, 4)
    band = 4.0 * math.sqrt((e8 - e4 * e4) / n)
    assert abs(float(np.mean(x4)) - e4) < band


@pytest.mark.parametrize("m,sigma", [(0.7, 1.3), (1.0, 1.0), (5.0, 0.2)])
def test_sampler_law_kolmogorov_smirnov(m, sigma):
    # analytic CDF: regularized lower incomplete gamma of x^2/sigma at shape m
    p = NakagamiParams(m=m, sigma=sigma)
    x = sample(p, 10_000, seed=2024)
    stat, _ = scipy.stats.kstest(x, lambda t: sp.gammainc(m, t * t / sigma))
    assert stat < 1.628 / math.sqrt(10_000)  # 1% critical value


def test_analytic_moments():
    p = NakagamiParams(m=1.0, sigma=1.0)
    assert analytic_moment(p, 2) == pytest.approx(1.0, rel=1e-15)
    assert analytic_moment(p, 4) == pytest.approx(2.0, rel=1e-15)
    q = NakagamiParams(m=2.0, sigma=1.0)
    assert analytic_moment(q, 4) == pytest.approx(6.0, rel=1e-15)
    with pytest.raises(ValueError):
        analytic_moment(p, 3)
    with pytest.raises(ValueError):
        analytic_moment(p, 8)


def test_sample_rejects_bad_count():
    p = NakagamiParams(m=1.0, sigma=1.0)
    with pytest.raises(ValueError):
        sample(p, 0, seed=1)
