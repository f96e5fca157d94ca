import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import pmf_strategy
from discretepl.errors import NegativeMass, NotNormalized
from discretepl.measures import (
    Pmf,
    RealFn,
    counting_entropy,
    delta,
    dual_gap,
    expectation,
    from_weights,
    gibbs_optimizer,
    log_laplace,
    pmf,
    relative_entropy,
    uniform_on,
)

F = Fraction


def test_pmf_point_mass():
    assert pmf(0, [1]) == Pmf(0, (F(1),))


def test_pmf_gap_support():
    nu = pmf(0, [F(1, 2), 0, F(1, 2)])
    assert nu.support_points() == [0, 2]
    assert nu.mass(1) == 0


def test_pmf_not_normalized_deficit():
    with pytest.raises(NotNormalized) as err:
        pmf(0, [F(1, 3), F(1, 3), F(1, 4)])
    assert err.value.deficit == F(1, 12)


def test_pmf_negative_mass():
    with pytest.raises(NegativeMass):
        pmf(0, [F(3, 2), F(-1, 2)])


def test_pmf_trims_zeros():
    nu = pmf(-3, [0, 0, F(1, 2), F(1, 2), 0])
    assert nu.offset == -1
    assert len(nu.masses) == 2


def test_entropy_point_mass_is_zero():
    assert counting_entropy(delta(0)) == 0.0


def test_entropy_two_equal_atoms():
    assert counting_entropy(uniform_on([0, 1])) == pytest.approx(-math.log(2), abs=1e-12)


def test_entropy_quarter_three_quarters_against_mpmath():
    import mpmath

    mpmath.mp.dps = 50
    expected = float(
        mpmath.mpf(1) / 4 * mpmath.log(mpmath.mpf(1) / 4) + mpmath.mpf(3) / 4 * mpmath.log(mpmath.mpf(3) / 4)
    )
    got = counting_entropy(pmf(0, [F(1, 4), F(3, 4)]))
    assert got == pytest.approx(expected, abs=1e-14)


@given(pmf_strategy())
@settings(max_examples=150)
def test_pmf_invariants(nu):
    assert sum(nu.masses, F(0)) == 1
    assert nu.masses[0] > 0 and nu.masses[-1] > 0
    # trimming is idempotent
    assert pmf(nu.offset, nu.masses) == nu


def test_pmf_invariants_large_seeded_batch(rng):
    from discretepl.campaign import random_pmf

    for _ in range(1000):
        nu = random_pmf(rng, 20, 32)
        assert sum(nu.masses, F(0)) == 1
        assert pmf(nu.offset, nu.masses) == nu


@given(pmf_strategy())
@settings(max_examples=80)
def test_entropy_translation_invariant(nu):
    assert counting_entropy(nu.translate(17)) == counting_entropy(nu)
    assert counting_entropy(nu.translate(-5)) == counting_entropy(nu)


def test_relative_entropy_identical_is_exactly_zero():
    nu = from_weights(-2, [1, 5, 2])
    assert relative_entropy(nu, nu) == 0.0


def test_relative_entropy_single_atom_ratio():
    assert relative_entropy(delta(1), uniform_on([0, 1])) == pytest.approx(math.log(2), abs=1e-12)


def test_relative_entropy_support_violation():
    assert relative_entropy(delta(2), uniform_on([0, 1])) == math.inf


def test_relative_entropy_nonnegative_and_positive_off_diagonal(rng):
    for _ in range(300):
        nu = from_weights(0, [rng.randint(1, 20) for _ in range(rng.randint(1, 8))])
        mu = from_weights(0, [rng.randint(1, 20) for _ in range(rng.randint(1, 8))])
        kl = relative_entropy(nu, mu)
        assert kl >= -1e-12
        if nu == mu:
            assert kl == 0.0
    # a visible mass difference forces a strictly positive divergence
    nu = pmf(0, [F(1, 2), F(1, 2)])
    mu = pmf(0, [F(1, 4), F(3, 4)])
    assert relative_entropy(nu, mu) > 1e-3


def test_log_laplace_counting_singleton():
    assert log_laplace(RealFn(5, (0.0,))) == 0.0


def test_log_laplace_uniform_base_of_zero():
    assert log_laplace(RealFn(0, (0.0, 0.0)), uniform_on([0, 1])) == pytest.approx(0.0, abs=1e-15)


def test_log_laplace_counting_log3():
    phi = RealFn(0, (0.0, math.log(3)))
    assert log_laplace(phi) == pytest.approx(math.log(4), abs=1e-12)


def test_gibbs_uniform_fixpoint():
    phi = RealFn(0, (0.0, 0.0))
    assert gibbs_optimizer(phi, uniform_on([0, 1])) == uniform_on([0, 1])


def test_gibbs_log3_counting():
    phi = RealFn(0, (0.0, math.log(3)))
    nu = gibbs_optimizer(phi)
    assert abs(float(nu.mass(0)) - 0.25) < 1e-12
    assert abs(float(nu.mass(1)) - 0.75) < 1e-12


def test_dual_gap_vanishes(rng):
    for _ in range(60):
        width = rng.randint(1, 30)
        phi = RealFn(rng.randint(-10, 10), tuple(rng.uniform(-4, 4) for _ in range(width)))
        gap = dual_gap(phi)
        assert -1e-12 <= gap <= 1e-10
        base = from_weights(phi.offset, [rng.randint(1, 9) for _ in range(width)])
        gap = dual_gap(phi, base)
        assert -1e-12 <= gap <= 1e-10


def test_duality_upper_bound_over_random_measures(rng):
    # int phi dnu - H(nu|base) never beats the log-Laplace transform, with
    # equality attained at the Gibbs optimizer
    for _ in range(500):
        width = rng.randint(1, 30)
        offset = rng.randint(-10, 10)
        phi = RealFn(offset, tuple(rng.uniform(-4, 4) for _ in range(width)))
        bound = log_laplace(phi)
        for _ in range(100):
            nu = from_weights(offset, [rng.randint(0, 6) or 1 for _ in range(width)])
            value = expectation(phi, nu) - counting_entropy(nu)
            assert value <= bound + 1e-10
        nu_star = gibbs_optimizer(phi)
        attained = expectation(phi, nu_star) - counting_entropy(nu_star)
        assert attained == pytest.approx(bound, abs=1e-10)
