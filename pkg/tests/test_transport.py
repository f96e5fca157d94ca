import math
from fractions import Fraction

import pytest

import oracles
from discretepl.campaign import (
    LOG_CONCAVE_FAMILIES,
    _pmf_in_window,
    random_concave_weights,
    rational_log_concave_family,
)
from discretepl.errors import ConstraintViolated, OutsidePositiveWindow
from discretepl.measures import RealFn, delta, from_weights, log_of_fraction, pmf, uniform_on
from discretepl.transport import (
    closed_form_cost,
    cost_mu,
    cost_nonnegativity_check,
    curvature_cost,
    dual_product_check,
    gaussian_weights,
    geometric_weights,
    is_log_concave,
    log_concavity_witness,
    log_interpolant,
    ot_cost,
    ot_cost_float,
    positive_window,
    transport_entropy_check,
    weights_concavity_witness,
)

F = Fraction


def test_cost_vanishes_on_diagonal_and_neighbours():
    mu = rational_log_concave_family("geometric-half", 6)
    for x in range(-5, 5):
        assert cost_mu(mu, x, x) == pytest.approx(0.0, abs=1e-14)
        assert cost_mu(mu, x, x + 1) == pytest.approx(0.0, abs=1e-14)
        assert cost_mu(mu, x + 1, x) == pytest.approx(0.0, abs=1e-14)
    w = geometric_weights(6)
    for x in range(-5, 5):
        assert cost_mu(w, x, x) == 0
        assert cost_mu(w, x, x + 1) == 0


def test_geometric_cost_example():
    assert cost_mu(geometric_weights(5), -1, 1) == 2


def test_gaussian_cost_example():
    assert cost_mu(gaussian_weights(5), 0, 2) == 4


def test_closed_forms():
    assert closed_form_cost("geometric", 3, 5) == 0
    assert closed_form_cost("geometric", -2, 3) == 4
    assert closed_form_cost("gaussian", 0, 3) == 8


def test_closed_forms_match_weight_costs_exactly():
    gw, zw = geometric_weights(15), gaussian_weights(15)
    for x in range(-15, 16):
        for y in range(-15, 16):
            assert cost_mu(gw, x, y) == closed_form_cost("geometric", x, y)
            assert cost_mu(zw, x, y) == closed_form_cost("gaussian", x, y)


def test_cost_symmetry(rng):
    w = gaussian_weights(10)
    for _ in range(200):
        x, y = rng.randint(-10, 10), rng.randint(-10, 10)
        assert cost_mu(w, x, y) == cost_mu(w, y, x)


def test_cost_outside_window():
    with pytest.raises(OutsidePositiveWindow):
        cost_mu(geometric_weights(3), 0, 4)
    with pytest.raises(OutsidePositiveWindow):
        cost_mu(uniform_on([0, 1]), 0, 1)  # midpoints fine but window helper trips on gaps
        cost_mu(pmf(0, [F(1, 2), F(0), F(1, 2)]), 0, 2)


def test_log_concavity_examples():
    assert is_log_concave(delta(0))
    assert is_log_concave(rational_log_concave_family("geometric-half", 10))
    bad = from_weights(0, [F(4), F(1), F(4)])
    assert log_concavity_witness(bad) == 1


def test_log_concavity_interior_zero_is_witnessed():
    assert log_concavity_witness(pmf(0, [F(1, 2), F(0), F(1, 2)])) == 1


def test_log_interpolant_values():
    mu = rational_log_concave_family("geometric-half", 6)
    assert log_interpolant(mu, 2.0) == pytest.approx(log_of_fraction(mu.mass(2)), abs=1e-14)
    mid = (log_of_fraction(mu.mass(2)) + log_of_fraction(mu.mass(3))) / 2
    assert log_interpolant(mu, 2.5) == pytest.approx(mid, abs=1e-14)


def test_log_interpolant_concavity_agrees_with_exact_check(rng):
    for _ in range(500):
        width = rng.randint(3, 10)
        weights = [rng.randint(1, 40) for _ in range(width)]
        mu = from_weights(rng.randint(-5, 5), weights)
        window = positive_window(mu)
        second_diffs = [
            log_interpolant(mu, x - 1) - 2 * log_interpolant(mu, float(x)) + log_interpolant(mu, x + 1)
            for x in range(window.start + 1, window.stop - 1)
        ]
        float_concave = all(d <= 1e-9 for d in second_diffs)
        assert float_concave == is_log_concave(mu)


def test_cost_nonnegativity():
    assert cost_nonnegativity_check(geometric_weights(8))
    assert cost_nonnegativity_check(gaussian_weights(8))
    bad = from_weights(0, [F(4), F(1), F(4)])
    assert not cost_nonnegativity_check(bad)
    assert cost_mu(bad, 0, 2) < 0  # the witness pair exhibits a negative cost


def test_log_concave_weights_yield_nonnegative_costs(rng):
    for _ in range(1000):
        w = random_concave_weights(rng, 10)
        assert weights_concavity_witness(w) is None
        assert cost_nonnegativity_check(w)


def test_ot_diagonal_is_free():
    mu = rational_log_concave_family("binomial", 6)
    nu = from_weights(-2, [1, 3, 2])
    result = ot_cost(curvature_cost(mu), nu, nu)
    assert result.cost_exact == 0
    assert all(x == y for x, y, _ in result.plan.atoms)


def test_ot_between_diracs_is_the_cost():
    w = gaussian_weights(8)
    result = ot_cost(curvature_cost(w), delta(-2), delta(3))
    assert result.cost_exact == cost_mu(w, -2, 3)


def test_ot_matches_vertex_enumeration(rng):
    mu = rational_log_concave_family("geometric-two-thirds", 8)
    cost = curvature_cost(mu)
    for _ in range(60):
        nu0 = _pmf_in_window(rng, range(-8, 9), 16, 4)
        nu1 = _pmf_in_window(rng, range(-8, 9), 16, 4)
        xs, ys = nu0.support_points(), nu1.support_points()
        matrix = [[F(float(cost.evaluate(x, y))) for y in ys] for x in xs]
        expected = oracles.min_cost_over_vertices([nu0.mass(x) for x in xs], [nu1.mass(y) for y in ys], matrix)
        assert ot_cost(cost, nu0, nu1).cost_exact == expected


def test_ot_strong_duality_and_slackness(rng):
    mu = rational_log_concave_family("gaussian-half", 7)
    cost = curvature_cost(mu)
    for _ in range(40):
        nu0 = _pmf_in_window(rng, range(-7, 8), 12, 5)
        nu1 = _pmf_in_window(rng, range(-7, 8), 12, 5)
        result = ot_cost(cost, nu0, nu1, want_duals=True)
        u, v = result.dual_u, result.dual_v
        dual_value = sum(float(m) * u.value(x) for x, m in nu0.support()) + sum(
            float(m) * v.value(y) for y, m in nu1.support()
        )
        assert dual_value == pytest.approx(result.cost, abs=1e-10)
        for x in nu0.window():
            for y in nu1.window():
                assert u.value(x) + v.value(y) <= float(cost.evaluate(x, y)) + 1e-9
        for x, y, _ in result.plan.atoms:
            assert u.value(x) + v.value(y) == pytest.approx(float(cost.evaluate(x, y)), abs=1e-9)


def test_ot_symmetry_and_zero_self_cost(rng):
    mu = rational_log_concave_family("uniform", 6)
    cost = curvature_cost(mu)
    for _ in range(25):
        nu0 = _pmf_in_window(rng, range(-6, 7), 10, 5)
        nu1 = _pmf_in_window(rng, range(-6, 7), 10, 5)
        assert ot_cost(cost, nu0, nu0).cost_exact == 0
        assert ot_cost(cost, nu0, nu1).cost_exact == ot_cost(cost, nu1, nu0).cost_exact


def test_ot_float_path_agrees(rng):
    mu = rational_log_concave_family("geometric-half", 7)
    cost = curvature_cost(mu)
    for _ in range(10):
        nu0 = _pmf_in_window(rng, range(-7, 8), 12, 6)
        nu1 = _pmf_in_window(rng, range(-7, 8), 12, 6)
        exact = ot_cost(cost, nu0, nu1).cost
        assert ot_cost_float(cost, nu0, nu1) == pytest.approx(exact, abs=1e-9)


def test_transport_entropy_identical_measures():
    mu = rational_log_concave_family("geometric-half", 6)
    check = transport_entropy_check(mu, mu, mu)
    assert check.lhs == pytest.approx(0.0, abs=1e-12)
    assert check.rhs == pytest.approx(0.0, abs=1e-12)
    assert check.holds


def test_transport_entropy_dirac_pair_closed_form():
    # masses are powers of 1/2, so the curvature cost is (integer) * log 2
    mu = rational_log_concave_family("geometric-half", 8)
    a, b = -3, 5
    check = transport_entropy_check(mu, delta(a), delta(b))
    assert check.lhs == pytest.approx(closed_form_cost("geometric", a, b) * math.log(2), abs=1e-9)
    assert check.rhs == pytest.approx(-log_of_fraction(mu.mass(a)) - log_of_fraction(mu.mass(b)), abs=1e-9)
    assert check.holds


def test_transport_entropy_random_campaign(rng):
    for family in LOG_CONCAVE_FAMILIES:
        mu = rational_log_concave_family(family, 10)
        for _ in range(60):
            nu0 = _pmf_in_window(rng, range(-10, 11), 24, 8)
            nu1 = _pmf_in_window(rng, range(-10, 11), 24, 8)
            assert transport_entropy_check(mu, nu0, nu1).holds


def test_transport_entropy_window_violation():
    mu = rational_log_concave_family("uniform", 3)
    with pytest.raises(OutsidePositiveWindow):
        transport_entropy_check(mu, delta(5), delta(0))


def test_dual_product_zero_potentials():
    mu = rational_log_concave_family("gaussian-half", 5)
    window = positive_window(mu)
    zero = RealFn(window.start, (0.0,) * len(window))
    assert dual_product_check(mu, zero, zero) == pytest.approx(1.0, abs=1e-12)


def test_dual_product_from_ot_duals(rng):
    mu = rational_log_concave_family("binomial", 6)
    cost = curvature_cost(mu)
    window = positive_window(mu)
    for _ in range(20):
        nu0 = _pmf_in_window(rng, window, 10, 4)
        nu1 = _pmf_in_window(rng, window, 10, 4)
        result = ot_cost(cost, nu0, nu1, want_duals=True)
        # extend the dual potentials by their window values; feasibility on
        # the full window requires filling outside the pmf windows too
        u_vals, v_vals = [], []
        for x in window:
            try:
                u_vals.append(result.dual_u.value(x))
            except KeyError:
                u_vals.append(min(float(cost.evaluate(x, y)) - result.dual_v.value(y) for y in result.dual_v.window()))
        u = RealFn(window.start, tuple(u_vals))
        for y in window:
            try:
                v_vals.append(result.dual_v.value(y))
            except KeyError:
                v_vals.append(min(float(cost.evaluate(x, y)) - u.value(x) for x in window))
        v = RealFn(window.start, tuple(v_vals))
        assert dual_product_check(mu, u, v, slack=1e-9) <= 1 + 1e-10


def test_dual_product_infeasible_pair():
    mu = rational_log_concave_family("uniform", 3)
    window = positive_window(mu)
    big = RealFn(window.start, (1.0,) * len(window))
    with pytest.raises(ConstraintViolated):
        dual_product_check(mu, big, big)


def test_pmf_and_logweight_costs_agree():
    # masses proportional to (1/2)^{|x|} match the weights w(x) = -|x| up to
    # the factor log 2, which passes through the cost
    mu = rational_log_concave_family("geometric-half", 8)
    gw = geometric_weights(8)
    for x in range(-8, 9):
        for y in range(-8, 9):
            assert cost_mu(mu, x, y) == pytest.approx(float(cost_mu(gw, x, y)) * math.log(2), abs=1e-9)
