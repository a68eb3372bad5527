"""Ladder rung identities and the end-to-end transform verification."""

import math

import pytest

from nvk.errors import DomainError
from nvk.kernels import kernel_1d, ladder_weight, ladder_z_sum
from nvk.ladder import (
    ladder_closed_form,
    rung_prefactors,
    verify_final_step,
    verify_full_reduction,
    verify_main_theorem,
    verify_step,
)
from nvk.measures import PushforwardLadder
from nvk.quadrature import QuadratureConfig
from nvk.representation import RepresentationData
from nvk.sampling import (
    draw_atomic_data,
    draw_convex_coefficients,
    draw_ladder_coefficients,
    draw_upper_point,
    rng_for,
)
from nvk.transform import ladder_to_coefficients

PI = math.pi


def test_middle_rung_spot(cfg):
    lhs, rhs = verify_step(3, 0, (1.0, 1.0), (1j, 1j, 1j), (0.0, 0.0), cfg)
    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


def test_two_rung_descent(cfg):
    rng = rng_for(20)
    for _ in range(4):
        b = draw_ladder_coefficients(rng, 4)
        z = draw_upper_point(rng, 4)
        t = tuple(rng.uniform(-2, 2, 3))
        lhs, rhs = verify_step(4, 0, b, z, t, cfg)
        assert abs(lhs - rhs) <= 1e-7 * abs(rhs)
        lhs, rhs = verify_step(3, 1, b, z, t[:2], cfg)
        assert abs(lhs - rhs) <= 1e-7 * abs(rhs)


def test_rung_prefactor_scales_with_coefficient(cfg):
    # Doubling b_{m-1} halves the pi/b_{m-1} prefactor; the recomputed
    # right side still matches quadrature of the rescaled kernel.
    z = (0.5 + 1j, -0.2 + 0.8j, 1.5j)
    t = (0.4, -0.3)
    b1 = (0.7, 0.9)
    b2 = (0.7, 1.8)
    lhs1, rhs1 = verify_step(3, 0, b1, z, t, cfg)
    lhs2, rhs2 = verify_step(3, 0, b2, z, t, cfg)
    assert abs(lhs1 - rhs1) <= 1e-7 * abs(rhs1)
    assert abs(lhs2 - rhs2) <= 1e-7 * abs(rhs2)


def test_final_rung_two_variables(cfg):
    lhs, rhs = verify_final_step(2, (1.0,), (1j, 1j), 0.0, cfg)
    assert abs(rhs - PI * 1j / 2) < 1e-15
    assert abs(lhs - rhs) <= 1e-8


def test_final_rung_three_variables(cfg):
    lhs, rhs = verify_final_step(3, (0.5, 1.0), (1j, 1j, 1j), 0.0, cfg)
    # prod_{j=2}^{2} b_j / beta_3 = 1 / 2
    assert abs(rhs - PI * 0.5 * kernel_1d(1j, 0.0)) < 1e-15
    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


def test_weighted_sums_reproduce_convex_combination():
    # The ratio of the fully-integrated weighted sums equals the convex
    # combination of the coordinates.
    rng = rng_for(21)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        b = draw_ladder_coefficients(rng, n)
        z = draw_upper_point(rng, n)
        ks = ladder_to_coefficients(b)
        ratio = ladder_z_sum(1, n - 1, b, z) / ladder_weight(1, n - 1, b)
        want = sum(k * zj for k, zj in zip(ks, z))
        assert abs(ratio - want) <= 1e-13 * abs(want)


def test_full_reduction_two_variables(cfg):
    lhs, rhs = verify_full_reduction(2, (1.0,), (1j, 1j), 0.0, cfg)
    assert abs(rhs - PI * 1j / 2) < 1e-15
    assert abs(lhs - rhs) <= 1e-8


def test_full_reduction_three_variables(cfg_nested):
    lhs, rhs = verify_full_reduction(3, (1.0, 1.0), (1j, 2j, 3j), 1.0, cfg_nested)
    assert abs(rhs - PI ** 2 / 3 * kernel_1d(2j, 1.0)) < 1e-15
    assert abs(lhs - rhs) <= 1e-6 * abs(rhs)


def test_full_reduction_large_n_rejected(cfg):
    with pytest.raises(DomainError):
        verify_full_reduction(4, (1.0, 1.0, 1.0), (1j, 1j, 1j, 1j), 0.0, cfg)


def test_rung_prefactors_telescope():
    rng = rng_for(22)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        b = draw_ladder_coefficients(rng, n)
        got, want = rung_prefactors(b)
        assert abs(got - want) <= 1e-13 * want


def test_ladder_closed_form_matches_quadrature(pi_delta0, cfg):
    from nvk.measures import integrate
    from nvk.kernels import kernel_nd

    mu = PushforwardLadder(pi_delta0, (1.0,), 2.0)
    z = (0.3 + 1.1j, -0.6 + 0.7j)
    closed = ladder_closed_form(z, mu)
    quad = integrate(mu, lambda *ts: kernel_nd(z, ts), cfg)
    assert abs(closed - quad.value) <= 1e-8 * abs(closed)


def test_main_theorem_inverse_function(pi_delta0, cfg):
    data = RepresentationData(0.0, (0.0,), pi_delta0)
    rng = rng_for(23)
    zs = [draw_upper_point(rng, 2) for _ in range(5)]
    rep = verify_main_theorem(data, (0.5, 0.5), zs, cfg)
    assert rep.max_closed_form_error <= 1e-12
    assert rep.max_quadrature_error <= 1e-7
    for z, (reference, _, _) in zip(zs, rep.samples):
        assert abs(reference - (-2.0 / (z[0] + z[1]))) < 1e-13


def test_main_theorem_three_variables_closed_path(cfg):
    rng = rng_for(24)
    data = draw_atomic_data(rng)
    zs = [draw_upper_point(rng, 3) for _ in range(5)]
    rep = verify_main_theorem(data, (0.5, 0.25, 0.25), zs, cfg, quadrature=False)
    assert rep.max_closed_form_error <= 1e-12


def test_main_theorem_three_variables_quadrature_path(pi_delta0):
    data = RepresentationData(0.2, (0.4,), pi_delta0)
    rng = rng_for(26)
    k = (0.5, 0.3, 0.2)
    zs = [draw_upper_point(rng, 3) for _ in range(20)]
    rep = verify_main_theorem(data, k, zs, QuadratureConfig(rel_tol=1e-7, abs_tol=1e-10))
    assert rep.max_quadrature_error <= 1e-7
    assert rep.max_closed_form_error <= 1e-12


def test_main_theorem_closed_path_scales_to_five_variables(cfg):
    rng = rng_for(27)
    data = draw_atomic_data(rng)
    k = draw_convex_coefficients(rng, 5)
    zs = [draw_upper_point(rng, 5) for _ in range(5)]
    rep = verify_main_theorem(data, k, zs, cfg, quadrature=False)
    assert rep.max_closed_form_error <= 1e-12


def test_main_theorem_zero_coefficient_routes_through_general(pi_delta0, cfg_nested):
    data = RepresentationData(0.0, (0.0,), pi_delta0)
    rng = rng_for(25)
    zs = [draw_upper_point(rng, 2) for _ in range(3)]
    rep = verify_main_theorem(data, (1.0, 0.0), zs, cfg_nested)
    assert rep.max_closed_form_error == 0.0  # closed path not exercised
    assert rep.max_quadrature_error <= 1e-7


def test_rung_report_collects_samples(cfg):
    from nvk.ladder import rung_report

    rep = rung_report(3, 1, sample_count=5, seed=3, cfg=cfg)
    assert (rep.m, rep.d, rep.sample_count) == (3, 1, 5)
    assert len(rep.samples) == 5
    assert rep.max_rel_error <= 1e-7
    rep = rung_report(2, 2, sample_count=5, seed=4, cfg=cfg)
    assert rep.max_rel_error <= 1e-7


def test_verify_step_preconditions(cfg):
    with pytest.raises(DomainError):
        verify_step(2, 0, (1.0,), (1j, 1j), (0.0,), cfg)
