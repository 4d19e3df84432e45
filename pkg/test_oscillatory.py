"""
测试驻相振荡积分
"""

import math

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from modules.errors import RegimeError
from modules.oscillatory import (
    OscJob, amplitude_scale_check, coefficient_bounds, derivative_job, filon_integrate, fresnel_oracle,
    g_lower_bound_check, ibp_machinery_check, off_range_scan, oscillatory_integral_I, phase, phase_gradient,
    phase_identities_check, quadratic_phase_moments, self_consistency, sp_scan, stationary_hessian, vdc_1d,
    vdc_polar,
)


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.7, 4.0])
def test_stationary_point(theta):
    assert abs(phase(1.0, theta, theta)) < 1e-12
    fx, fphi = phase_gradient(1.0, theta, theta)
    assert abs(fx) < 1e-12 and abs(fphi) < 1e-12
    assert np.linalg.det(stationary_hessian(theta)) == pytest.approx(-36.0)


def test_phase_identities():
    rng = np.random.default_rng(11)
    x = rng.uniform(0.5, 2.0, 2000)
    phi = rng.uniform(0, 2 * math.pi, 2000)
    for theta in (0.0, 0.9, 2.2):
        res = phase_identities_check(x, phi, theta)
        scale = 1.0 + float(np.max(np.abs(phase(x, phi, theta))))
        assert res["decomposition"] < 1e-11 * scale
        assert res["g_identity"] < 1e-11
        assert res["g_mixed"] < 1e-6
        assert res["stationary_det"] < 1e-10
        assert res["hessian_det"] < 1e-10


def test_g_lower_bounds():
    margins = g_lower_bound_check()
    assert margins["large_x_margin"] > 0
    assert margins["small_x_margin"] > 0


def test_coefficient_bounds():
    bounds = coefficient_bounds(0.4)
    assert bounds["q"] <= 6 + 1e-12
    assert bounds["r"] <= 12 + 1e-12
    assert bounds["p"] < 12


def _brute_moments(a, b, eta, n=400):
    nodes, weights = leggauss(n)
    tau = eta * nodes
    base = eta * weights * np.exp(1j * (a * tau ** 2 + b * tau))
    return [np.sum(base * tau ** k) for k in range(3)]


@pytest.mark.parametrize("a, b, eta", [
    (1e-3, 2.0, 0.5), (3.0, 2.0, 0.5), (50.0, -7.0, 0.4), (-20.0, 3.0, 0.3), (5.0, 400.0, 0.1), (0.0, 0.0, 1.0),
])
def test_quadratic_phase_moments(a, b, eta):
    got = quadratic_phase_moments(a, b, eta)
    for value, expected in zip(got, _brute_moments(a, b, eta)):
        assert complex(value) == pytest.approx(expected, abs=1e-11)


@pytest.mark.parametrize("shift, gamma", [(0.0, 0), (0.3, 0), (0.3, 1), (-1.0, 1)])
def test_filon_against_fresnel_oracle(shift, gamma):
    lam = 100.0
    value = filon_integrate(lam, np.square, lambda x: x ** gamma * np.exp(-(x - shift) ** 2), -8.0, 8.0, 4000)
    expected = fresnel_oracle(lam, shift, gamma)
    assert abs(value - expected) < 1e-6 * abs(fresnel_oracle(lam))


def test_fresnel_oracle_orders():
    with pytest.raises(RegimeError):
        fresnel_oracle(10.0, gamma=2)
    assert fresnel_oracle(0.0) == pytest.approx(math.sqrt(math.pi))


def test_filon_invalid_interval():
    with pytest.raises(RegimeError):
        filon_integrate(1.0, np.square, np.ones_like, 1.0, 0.0, 10)
    with pytest.raises(RegimeError):
        filon_integrate(1.0, np.square, np.ones_like, 0.0, 1.0, 0)


def test_vdc_1d_slope():
    df, summary = vdc_1d([128.0, 256.0, 512.0, 1024.0])
    assert len(df) == 4
    assert summary["pass"]
    assert summary["slope"] == pytest.approx(-0.5, abs=0.1)


def test_vdc_1d_odd_moment_vanishes():
    _, summary = vdc_1d([128.0, 256.0], gamma=1)
    assert summary["pass"]


@pytest.mark.parametrize("f", [lambda x: x ** 3, lambda x: x ** 2 + x])
def test_vdc_1d_requires_nondegenerate_stationary_point(f):
    with pytest.raises(RegimeError):
        vdc_1d([128.0], f)


def test_vdc_1d_scale_range():
    with pytest.raises(RegimeError):
        vdc_1d([4.0], X=lambda lam: 10.0)


@pytest.mark.parametrize("kwargs", [{"lam": 0.0}, {"rho": -1.0}, {"X": 0.5}])
def test_invalid_osc_job(kwargs):
    params = {"lam": 1.0, "theta": 0.0, "rho": 1.0, "amplitude": lambda x, phi: x, **kwargs}
    with pytest.raises(RegimeError):
        OscJob(**params)


def test_zero_amplitude_integral():
    job = OscJob(5.0, 0.3, 1.0, lambda x, phi: np.zeros_like(x))
    assert oscillatory_integral_I(job) == 0


def test_integral_matches_direct_quadrature():
    job = OscJob.bump(1.0, 0.3, 1.0)
    r1, r2 = job.interval
    nodes, weights = leggauss(300)
    x = r1 + (r2 - r1) / 2 * (nodes + 1)
    phi = 2 * math.pi * np.arange(512) / 512
    X, P = np.meshgrid(x, phi, indexing="ij")
    integrand = np.exp(2j * math.pi * job.lam * phase(X, P, job.theta)) * job.amplitude(X, P)
    direct = np.sum((r2 - r1) / 2 * weights[:, None] * integrand) * 2 * math.pi / 512
    assert oscillatory_integral_I(job) == pytest.approx(direct, rel=1e-4)
    assert self_consistency(job) < 1e-3


def test_derivative_job_orders():
    job = OscJob.bump(1.0, 0.3, 1.0)
    with pytest.raises(RegimeError):
        derivative_job(job, 2, 1)
    with pytest.raises(RegimeError):
        derivative_job(job, -1, 0)
    x, phi = np.array([1.05]), np.array([0.2])
    lam_job = derivative_job(job, 1, 0)
    expected = 2j * math.pi * job.lam * phase(x, phi, job.theta) * job.amplitude(x, phi)
    assert lam_job.amplitude(x, phi) == pytest.approx(expected)


def test_scan_ranges():
    with pytest.raises(RegimeError):
        off_range_scan(1.0, 0.3)
    with pytest.raises(RegimeError):
        sp_scan(4.0, 0.3, [10.0])
    with pytest.raises(RegimeError):
        vdc_polar([64.0], 0, 0, support=(1.2, 2.0))


def test_sp_scan_envelope():
    df, summary = sp_scan(1.0, 0.3, [20.0, 40.0], orders=((0, 0),))
    assert len(df) == 2
    assert summary["pass"]


def test_ibp_requires_separated_support():
    with pytest.raises(RegimeError):
        ibp_machinery_check(OscJob.bump(1.0, 0.3, 1.0), 1)


def test_ibp_chain_holds_far_from_stationary_point():
    rho = 3.0
    job = OscJob.bump(80.0 / (rho ** 2 * (rho + 1)), 0.3, rho)
    result = ibp_machinery_check(job, 1)
    assert result["pass"]
    assert result["margin"] >= 1


def test_amplitude_scale_check():
    df = amplitude_scale_check(OscJob.bump(1.0, 0.3, 1.0))
    assert len(df) == 6
    base = df[(df["alpha"] == 0) & (df["beta"] == 0)]["ratio"].iloc[0]
    assert base == pytest.approx(1.0, rel=1e-2)
