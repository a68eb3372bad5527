"""Growth/Nevanlinna checkers and the planar pushforward classifier."""

import math

import pytest

from nvk.cli import CLASSIFICATION_FIXTURES, fixture_base_measure
from nvk.conditions import (
    Case,
    MeasureTraits,
    check_cubic_condition,
    check_growth,
    check_nevanlinna_2var,
    check_nevanlinna_nvar,
    classify_pushforward2d,
    default_z_grid,
    derive_traits,
    growth_inner_rational,
    growth_inner_value,
    nevanlinna_inner_rational,
    nevanlinna_inner_value,
    nevanlinna_modulus_scale,
    nevanlinna_zero_tolerance,
)
from nvk.errors import DomainError
from nvk.measures import (
    Atomic,
    LebesgueDensity,
    Product,
    Pushforward2D,
    lebesgue,
    zero_measure,
)
from nvk.quadrature import QuadratureConfig
from nvk.residues import line_integral
from nvk.sampling import rng_for
from nvk.transform import transform
from nvk.representation import RepresentationData

PI = math.pi
GENERIC_Z2 = (0.5 + 1.5j, -0.3 + 0.8j)


def test_growth_product(pi_delta0, cfg):
    r = check_growth(Product((pi_delta0, lebesgue())), cfg)
    assert r.converged
    assert abs(r.value - PI * PI) < 1e-9


def test_growth_antidiagonal_pushforward(pi_delta0, cfg):
    # Inner integral pi(beta-delta)/(t1^2(beta*gamma-alpha*delta)^2+(beta-delta)^2)
    # evaluated at the atom t1 = 0 gives pi/2.
    r = check_growth(Pushforward2D(pi_delta0, 1, 1, 1, -1), cfg)
    assert r.converged
    assert abs(r.value - PI * PI / 2) < 1e-9


def test_growth_divergent_density(cfg):
    r = check_growth(LebesgueDensity(2, density=lambda a, b: 1.0 + a * a), cfg)
    assert r.diverged


def test_nevanlinna_2var_antidiagonal_vanishes(pi_delta0, cfg):
    mu = Pushforward2D(pi_delta0, 1, 1, 1, -1)
    for z in default_z_grid(2, 5):
        v = check_nevanlinna_2var(mu, z, cfg)
        s = nevanlinna_modulus_scale(mu, z, QuadratureConfig(rel_tol=1e-6, abs_tol=1e-9))
        assert abs(v.value) <= nevanlinna_zero_tolerance(s)


def test_nevanlinna_2var_diagonal_closed_form(pi_delta0, cfg):
    # beta*delta = 1 > 0 and zero determinant: the inner integral is
    # 4 pi i beta delta / (-delta z1 + beta conj(z2))^3 at the atom.
    mu = Pushforward2D(pi_delta0, 0, 1, 0, 1)
    v = check_nevanlinna_2var(mu, (1j, 1j), cfg)
    assert abs(v.value - PI ** 2 / 2) < 1e-9
    z1, z2 = GENERIC_Z2
    v = check_nevanlinna_2var(mu, (z1, z2), cfg)
    want = PI * 4j * PI / (-z1 + z2.conjugate()) ** 3
    assert abs(v.value - want) < 1e-8 * abs(want)


def test_nevanlinna_single_atom_cannot_cancel(cfg):
    mu = Atomic.single(1.0, 0.0, 0.0)
    z1, z2 = 1j, 2j
    v = check_nevanlinna_2var(mu, (z1, z2), cfg)
    want = 1.0 / (z1 ** 2 * z2.conjugate() ** 2)
    assert abs(v.value - want) < 1e-12
    assert abs(v.value) > 1e-3


def test_nevanlinna_forms_agree_in_nullity(pi_delta0, cfg):
    # The sign-vector sum and the squared-kernel form are equivalent as
    # "for all z" conditions: on fixtures they vanish together.
    fixtures = [
        (Pushforward2D(pi_delta0, 1, 1, 1, -1), True),
        (Pushforward2D(pi_delta0, 1, 0, 1, 1), True),
        (Pushforward2D(pi_delta0, 0, 1, 0, 1), False),
        (Atomic.single(1.0, 0.0, 0.0), False),
    ]
    for mu, should_vanish in fixtures:
        v_sum = abs(check_nevanlinna_nvar(mu, GENERIC_Z2, cfg).value)
        v_sq = abs(check_nevanlinna_2var(mu, GENERIC_Z2, cfg).value)
        if should_vanish:
            assert v_sum < 1e-8 and v_sq < 1e-8
        else:
            assert v_sum > 1e-6 and v_sq > 1e-6


def test_nevanlinna_nvar_three_variable_atom(cfg):
    mu = Atomic.single(1.0, 0.0, 0.0, 0.0)
    z = (0.5 + 1.5j, -0.3 + 0.8j, 1.1 + 0.6j)
    v = check_nevanlinna_nvar(mu, z, cfg)
    assert abs(v.value) > 1e-3


def test_transformed_measure_passes_both_conditions(pi_delta0, cfg_nested):
    data = RepresentationData(0.0, (0.0,), pi_delta0)
    mu = transform(data, (0.5, 0.25, 0.25)).mu
    g = check_growth(mu, cfg_nested)
    assert g.converged and not g.diverged
    rng = rng_for(42)
    for _ in range(2):
        z = tuple(rng.uniform(-2, 2) + 1j * rng.uniform(0.4, 2) for _ in range(3))
        v = check_nevanlinna_nvar(mu, z, cfg_nested)
        assert abs(v.value) <= 1e-7


@pytest.mark.parametrize(
    "name,coeffs,kind,expected_case,expected_rep", CLASSIFICATION_FIXTURES)
def test_classifier_decision_table(name, coeffs, kind, expected_case, expected_rep, cfg):
    mu1 = fixture_base_measure(kind)
    traits = derive_traits(mu1, cfg, coefficients=coeffs)
    got = classify_pushforward2d(*coeffs, traits)
    assert got.case == expected_case
    assert got.representing == expected_rep


def test_classifier_indeterminate_without_cubic_information():
    traits = MeasureTraits(False, True, True, None)
    got = classify_pushforward2d(1, 1, 1, 2, traits)
    assert got.case == Case.III2B
    assert got.representing is None


def test_traits_invariants():
    with pytest.raises(DomainError):
        MeasureTraits(is_zero=True, is_finite=False, satisfies_1var_growth=True)
    with pytest.raises(DomainError):
        MeasureTraits(is_zero=False, is_finite=True, satisfies_1var_growth=False)


def test_derive_traits(pi_delta0, cfg):
    tr = derive_traits(pi_delta0, cfg)
    assert (tr.is_zero, tr.is_finite, tr.satisfies_1var_growth) == (False, True, True)
    tr = derive_traits(lebesgue(), cfg, coefficients=(1, 1, 1, 2))
    assert (tr.is_zero, tr.is_finite, tr.satisfies_1var_growth) == (False, False, True)
    assert tr.satisfies_cubic_condition is True
    tr = derive_traits(zero_measure(1), cfg)
    assert tr.is_zero and tr.satisfies_cubic_condition is True


def test_cubic_condition(pi_delta0, cfg):
    assert check_cubic_condition(1.0, 2.0, 1.0, zero_measure(1), cfg=cfg)
    assert not check_cubic_condition(1.0, 2.0, 1.0, pi_delta0, [(1j, 1j)], cfg)
    assert check_cubic_condition(1.0, 2.0, 1.0, lebesgue(),
                                 [(1j, 1j), (0.5 + 2j, -1 + 1j)], cfg)
    with pytest.raises(DomainError):
        check_cubic_condition(0.0, 2.0, 1.0, pi_delta0, cfg=cfg)


def test_growth_inner_closed_forms_match_oracle():
    rng = rng_for(5)
    for _ in range(15):
        al, ga = rng.uniform(-2, 2, 2)
        be = rng.uniform(0.3, 2) * rng.choice([-1.0, 1.0])
        de = rng.uniform(0.3, 2) * rng.choice([-1.0, 1.0])
        t1 = float(rng.uniform(-2, 2))
        got = line_integral(growth_inner_rational(al, be, ga, de, t1))
        want = growth_inner_value(al, be, ga, de, t1)
        assert abs(got - want) <= 1e-10 * abs(want)
    # beta = 0 branch
    got = line_integral(growth_inner_rational(0.7, 0.0, -0.3, 1.4, 0.9))
    want = growth_inner_value(0.7, 0.0, -0.3, 1.4, 0.9)
    assert abs(got - want) <= 1e-12 * abs(want)


def test_nevanlinna_inner_closed_forms_match_oracle():
    rng = rng_for(6)
    for _ in range(15):
        al, ga = rng.uniform(-2, 2, 2)
        sign = float(rng.choice([-1.0, 1.0]))
        be, de = sign * rng.uniform(0.3, 2, 2)
        t1 = float(rng.uniform(-2, 2))
        z1 = rng.uniform(-2, 2) + 1j * rng.uniform(0.3, 2)
        z2 = rng.uniform(-2, 2) + 1j * rng.uniform(0.3, 2)
        got = line_integral(nevanlinna_inner_rational(al, be, ga, de, t1, z1, z2))
        want = nevanlinna_inner_value(al, be, ga, de, t1, z1, z2)
        assert abs(got - want) <= 1e-10 * abs(want)
    # Opposite signs: identically zero.
    got = line_integral(nevanlinna_inner_rational(0.3, 1.2, -0.4, -0.9, 0.5,
                                                  0.3 + 2j, -0.5 + 1j))
    assert abs(got) < 1e-10
    assert nevanlinna_inner_value(0.3, 1.2, -0.4, -0.9, 0.5, 0.3 + 2j, -0.5 + 1j) == 0
