import math

import pytest

import holegaf


def test_variance_closed_form():
    m = holegaf.Model.hyperbolic(0.5)
    assert holegaf.sigma_sq_series(m, 0.9) == pytest.approx(2.2941573387056179, rel=1e-12)
    assert holegaf.sigma_sq(m, 0.9) == pytest.approx((1 - 0.81) ** -0.5, rel=1e-14)


def test_sampling_is_deterministic():
    m = holegaf.Model.hyperbolic(1.0)
    a = holegaf.sample(m, 3, 7, 20)
    assert len(a) == 21
    assert a == holegaf.sample(m, 3, 7, 20)
    assert a != holegaf.sample(m, 3, 8, 20)


def test_spectrum_trace():
    m = holegaf.Model.hyperbolic(2.0)
    lam = holegaf.circulant_eigenvalues(m, 0.8, 16)
    assert sum(lam) == pytest.approx(16 * (1 - 0.64) ** -2, rel=1e-10)
    cov = holegaf.covariance_matrix(m, 0.8, 4)
    assert cov.shape == (4, 4)


def test_l1_hole_probability_covers_oracle():
    m = holegaf.Model.hyperbolic(1.0)
    e = holegaf.estimate_direct(m, 0.5, 4000, seed=1)
    oracle = holegaf.determinantal_oracle(0.5)
    assert oracle == pytest.approx(0.68853753712033972, rel=1e-12)
    assert e["p_low"] <= oracle <= e["p_high"]


def test_special_functions():
    assert holegaf.exp_integral_e1(1.0) == pytest.approx(0.21938393439552027, rel=1e-13)
    assert holegaf.neg_moment_quadrature(0.5, 1.0, 0.0) == pytest.approx(math.gamma(0.75), rel=1e-10)


def test_envelope_and_errors():
    env = holegaf.envelope(1.0, 0.9)
    assert env["regime"] == "crit"
    assert env["lower"] == pytest.approx(math.pi ** 2 / 12 / 0.1)
    with pytest.raises(holegaf.HolegafError):
        holegaf.envelope(1.0, 1.5)
    with pytest.raises(ValueError):
        holegaf.Model.hyperbolic(-1.0)


def test_quick_verify():
    ok, table = holegaf.verify(full=False)
    assert ok
    assert "ALL PASS" in table
