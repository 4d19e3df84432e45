"""
测试 GL3(ℂ) Hankel 变换
"""

import cmath
import math

import numpy as np
import pytest

from modules.errors import RegimeError
from modules.hankel_gl3 import (
    HankelJob, decay_Q, gamma_factor_Gm, hankel_transform, hankel_transform_kernel, kernel_asymptotic,
    kernel_asymptotic_polar, mellin_separation, pre_bound_scan, regime_of, separation_report, separation_window,
    small_z_bound_scan, w_tilde,
)
from modules.spectral_weight import SpectralWeight


@pytest.fixture(scope="module")
def radial_job():
    return HankelJob.bump(0)


def test_gamma_factor_at_center():
    assert gamma_factor_Gm(0.5, 0) == pytest.approx(1.0)


@pytest.mark.parametrize("m", [0, 1, 2, 5])
def test_gamma_factor_unimodular_on_critical_line(m):
    s = 0.5 + 1j * np.array([0.3, 2.0, 17.0])
    assert np.allclose(np.abs(gamma_factor_Gm(s, m)), 1.0)
    assert np.allclose(gamma_factor_Gm(s, m), gamma_factor_Gm(s, -m))


def test_gamma_factor_pole():
    with pytest.raises(RegimeError):
        gamma_factor_Gm(0.0, 0)
    with pytest.raises(RegimeError):
        gamma_factor_Gm(-0.5, 1)


@pytest.mark.parametrize("kwargs", [
    {"r1": 2.0, "r2": 1.0},
    {"angular_nodes": 32, "max_orders": 32},
    {"mu": 0.7},
])
def test_invalid_jobs(kwargs):
    with pytest.raises(RegimeError):
        HankelJob(w=lambda z: np.zeros_like(z), **kwargs)


def test_composite_requires_large_lambda():
    with pytest.raises(RegimeError):
        HankelJob.composite(SpectralWeight(), 2.0)


def test_angular_coefficients_of_pure_order():
    job = HankelJob.bump(3)
    orders, coeffs = job.angular_coefficients()
    energy = np.abs(coeffs).max(axis=0)
    assert orders[np.argmax(energy)] == -3
    assert np.all(energy[orders != -3] < 1e-10 * energy.max())


def test_pure_order_input_gives_pure_order_output():
    job = HankelJob.bump(2)
    u = 3.0 * cmath.exp(0.4j)
    alpha = 1.1
    rotated = hankel_transform(job, u * cmath.exp(1j * alpha))
    assert rotated == pytest.approx(cmath.exp(-2j * alpha) * hankel_transform(job, u), rel=1e-6)


def test_radial_input_gives_radial_output(radial_job):
    values = hankel_transform(radial_job, 5.0 * np.exp(1j * np.array([0.0, 1.0, 2.5])))
    assert np.allclose(values, values[0], rtol=1e-8)


def test_hankel_transform_rejects_zero(radial_job):
    with pytest.raises(RegimeError):
        hankel_transform(radial_job, 0)


def test_kernel_asymptotic_regime():
    with pytest.raises(RegimeError):
        kernel_asymptotic(10.0)
    with pytest.raises(RegimeError):
        kernel_asymptotic(2000.0, K=2)


def test_kernel_asymptotic_magnitude():
    z = cmath.rect(2000.0, 0.3)
    assert abs(kernel_asymptotic(z)) <= 3 * 2000.0 ** (-2 / 3) + 1e-15


def test_kernel_branch_independent():
    first = kernel_asymptotic_polar(5000.0, 0.7)
    second = kernel_asymptotic_polar(5000.0, 0.7 + 2 * math.pi)
    assert first == pytest.approx(second, rel=1e-9, abs=1e-12)


def test_kernel_route_regime(radial_job):
    with pytest.raises(RegimeError):
        hankel_transform_kernel(radial_job, 100.0)


def test_w_tilde_needs_lambda(radial_job):
    with pytest.raises(RegimeError):
        w_tilde(radial_job, 10.0)


def test_regime_classification():
    Q, eps = 1e10, 0.05
    assert regime_of(1000.0, 0.5, Q, eps) == "small_lambda"
    assert regime_of(2.0, 5.0, Q, eps) == "small_y"
    assert regime_of(1000.0, 4.0, Q, eps) == "negligible"
    assert regime_of(1000.0, 10.0, Q, eps) == "resonance"
    assert regime_of(1000.0, 25.0, Q, eps) == "negligible"


def test_decay_Q():
    assert decay_Q(1.0, 1.0, 1.0, 1.0) == pytest.approx(40.0)
    assert decay_Q(1.0, 1.0, 2.0, 1.0, A_double_prime=1) == pytest.approx(80.0)


def test_bounds_on_bump(radial_job):
    df = pre_bound_scan(radial_job, [cmath.rect(r, 0.4) for r in (1.0, 10.0, 100.0)])
    assert len(df) == 15
    assert (df["ratio"] <= 100).all()
    df = small_z_bound_scan(radial_job, [cmath.rect(r, 0.4) for r in (1e-3, 1e-2, 1e-1)])
    assert (df["ratio"] <= 100).all()


def test_default_job_resolves_mellin_line(radial_job):
    assert radial_job.radial_nodes >= radial_job.required_radial_nodes
    assert HankelJob.bump(0, tau_max=800.0).required_radial_nodes == 416


def test_transform_stable_under_refinement(radial_job):
    u = cmath.rect(100.0, 0.4)
    fine = HankelJob.bump(0, radial_nodes=320, tau_max=400.0)
    bound = radial_job.sup_norm() / abs(u) ** (2 / 3)
    assert abs(hankel_transform(radial_job, u) - hankel_transform(fine, u)) < 1e-3 * bound


def test_separation_window():
    values = separation_window(np.array([1.0, 0.3, 3.9, 5.0, 10.0, 0.1]))
    assert values[0] == values[1] == values[2] == 1.0
    assert 0 < values[3] < 1
    assert values[4] == values[5] == 0.0


def test_mellin_separation_domain():
    with pytest.raises(RegimeError):
        mellin_separation(lambda u: np.ones_like(u), 0.0)


def test_separation_of_angular_character():
    sep = mellin_separation(lambda u: (u / np.abs(u)) ** 3, 10.0, 128, 16)
    column = np.abs(sep.coeffs).max(axis=0)
    assert sep.m[np.argmax(column)] == 3
    assert np.all(column[sep.m != 3] < 1e-12)


def test_separation_reconstructs_smooth_input():
    report = separation_report(lambda u: np.exp(-np.abs(np.log(np.abs(u) / 10.0)) ** 2) * np.cos(np.angle(u)),
                               10.0, 512, 16, points=50, seed=3)
    assert report["reconstruction_error"] < 1e-5
    assert report["parseval_error"] < 1e-12
