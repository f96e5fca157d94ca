from fractions import Fraction

import pytest
from hypothesis import given, settings

import oracles
from conftest import pmf_strategy
from discretepl.coupling import (
    Coupling,
    binary_lattice_couplings,
    check_marginals,
    coupling_from_atoms,
    is_staircase,
    meet_join_pushforward,
    monotone_coupling,
    pushforward,
    quantile,
)
from discretepl.displacement import m_minus, m_plus
from discretepl.errors import SupportNotBinary
from discretepl.measures import delta, from_weights, pmf, uniform_on

F = Fraction


def test_quantile_point_mass():
    assert quantile(delta(5), F(1, 2)) == 5


def test_quantile_exact_crossing():
    nu = uniform_on([0, 1])
    assert quantile(nu, F(1, 2)) == 0  # F(0) = 1/2 >= 1/2, inf attained
    assert quantile(nu, F(1, 2) + F(1, 1000)) == 1


def test_quantile_rejects_bad_level():
    with pytest.raises(ValueError):
        quantile(delta(0), F(0))


def test_monotone_coupling_of_diracs():
    pi = monotone_coupling(delta(0), delta(1))
    assert pi.atoms == ((0, 1, F(1)),)


def test_monotone_coupling_split_atom():
    pi = monotone_coupling(uniform_on([0, 2]), delta(1))
    assert pi.atoms == ((0, 1, F(1, 2)), (2, 1, F(1, 2)))


def test_monotone_coupling_is_the_unique_staircase_vertex():
    # exactly one extreme coupling is monotone, and it is ours
    nu0 = uniform_on([0, 2])
    nu1 = delta(1)
    xs, ys = nu0.support_points(), nu1.support_points()
    vertices = oracles.transport_vertices([nu0.mass(x) for x in xs], [nu1.mass(y) for y in ys])
    staircase = []
    for vertex in vertices:
        atoms = tuple(sorted((xs[i], ys[j], f) for (i, j), f in vertex.items()))
        c = Coupling(atoms, nu0, nu1)
        if is_staircase(c):
            staircase.append(atoms)
    assert staircase == [monotone_coupling(nu0, nu1).atoms]


def test_binary_lattice_case_i_matches_stated_masses():
    nu1 = pmf(0, [F(3, 4), F(1, 4)])
    nu2 = pmf(0, [F(1, 2), F(1, 2)])
    pi, pi_tilde = binary_lattice_couplings(nu1, nu2)
    assert pi.mass(0, 0) == F(1, 2)
    assert pi.mass(0, 1) == F(1, 4)
    assert pi.mass(1, 0) == 0
    assert pi.mass(1, 1) == F(1, 4)
    assert pi_tilde.atoms == pi.atoms
    assert pi_tilde.marginal0 == nu1 and pi_tilde.marginal1 == nu2


def test_binary_lattice_identical_marginals_is_diagonal():
    nu = pmf(0, [F(2, 5), F(3, 5)])
    pi, pi_tilde = binary_lattice_couplings(nu, nu)
    assert pi.atoms == ((0, 0, F(2, 5)), (1, 1, F(3, 5)))
    assert pi_tilde.atoms == pi.atoms


def test_binary_lattice_case_ii_swaps_off_diagonal():
    nu1 = pmf(0, [F(1, 4), F(3, 4)])
    nu2 = pmf(0, [F(1, 2), F(1, 2)])
    pi, pi_tilde = binary_lattice_couplings(nu1, nu2)
    assert pi.mass(1, 0) == F(1, 4) and pi.mass(0, 1) == 0
    assert pi.mass(0, 0) == F(1, 4) and pi.mass(1, 1) == F(1, 2)
    assert pi_tilde.mass(0, 1) == F(1, 4) and pi_tilde.mass(1, 0) == 0
    # push-forward marginals come out in swapped order
    assert pi_tilde.marginal0 == nu2 and pi_tilde.marginal1 == nu1


def test_binary_lattice_rejects_wide_support():
    with pytest.raises(SupportNotBinary):
        binary_lattice_couplings(uniform_on([0, 2]), delta(0))


def test_binary_lattice_agrees_with_quantile_merge(rng):
    # in both cases pi is the quantile-merge monotone coupling of (nu1, nu2);
    # the case split only shows in which order S#pi couples the marginals
    for _ in range(400):
        w = [rng.randint(0, 16), rng.randint(0, 16)]
        v = [rng.randint(0, 16), rng.randint(0, 16)]
        if sum(w) == 0:
            w[0] = 1
        if sum(v) == 0:
            v[1] = 1
        nu1, nu2 = from_weights(0, w), from_weights(0, v)
        pi, pi_tilde = binary_lattice_couplings(nu1, nu2)
        assert check_marginals(pi)
        assert pi.marginal0 == nu1 and pi.marginal1 == nu2
        assert pi.atoms == monotone_coupling(nu1, nu2).atoms
        assert pi_tilde.atoms == meet_join_pushforward(pi).atoms
        if nu2.mass(0) <= nu1.mass(0):
            assert pi_tilde.atoms == pi.atoms
            assert pi_tilde.marginal0 == nu1 and pi_tilde.marginal1 == nu2
        else:
            assert pi_tilde.marginal0 == nu2 and pi_tilde.marginal1 == nu1


def test_no_meet_join_coupling_exists_in_two_dimensions():
    # hard-coded witness: nu1 uniform on {(1,0),(0,1)}, nu2 uniform on
    # {(0,0),(1,1)}; neither orientation admits a coupling whose meet/join
    # image is again a coupling (exact LP feasibility check)
    nu1 = [F(0), F(1, 2), F(1, 2), F(0)]
    nu2 = [F(1, 2), F(0), F(0), F(1, 2)]
    assert not oracles.meet_join_coupling_feasible(nu1, nu2, swap_targets=False)
    assert not oracles.meet_join_coupling_feasible(nu1, nu2, swap_targets=True)


def test_two_dimensional_counterexample_found_by_grid_search():
    # exhaustive search over all pairs with masses on the 1/2-grid finds the
    # witness above (and the witness really is among the infeasible pairs)
    def half_grid():
        out = []
        for a in range(3):
            for b in range(3 - a):
                for c in range(3 - a - b):
                    d = 2 - a - b - c
                    out.append([F(a, 2), F(b, 2), F(c, 2), F(d, 2)])
        return out

    witness = ([F(0), F(1, 2), F(1, 2), F(0)], [F(1, 2), F(0), F(0), F(1, 2)])
    infeasible = []
    for nu1 in half_grid():
        for nu2 in half_grid():
            if not oracles.meet_join_coupling_feasible(nu1, nu2, False) and not oracles.meet_join_coupling_feasible(
                nu1, nu2, True
            ):
                infeasible.append((nu1, nu2))
    assert infeasible
    assert witness in [tuple(pair) for pair in infeasible] or (list(witness[0]), list(witness[1])) in infeasible


@given(pmf_strategy(), pmf_strategy())
@settings(max_examples=200, deadline=None)
def test_monotone_coupling_contracts(nu0, nu1):
    pi = monotone_coupling(nu0, nu1)
    assert check_marginals(pi)
    assert pi.total() == 1
    assert is_staircase(pi)
    assert len(pi.atoms) <= len(nu0.support_points()) + len(nu1.support_points()) - 1
    assert all(p > 0 for _, _, p in pi.atoms)


def test_uniqueness_of_staircase_vertex_small_supports(rng):
    for _ in range(60):
        nu0 = from_weights(rng.randint(-3, 3), [rng.randint(1, 9) for _ in range(rng.randint(1, 3))])
        nu1 = from_weights(rng.randint(-3, 3), [rng.randint(1, 9) for _ in range(rng.randint(1, 3))])
        xs, ys = nu0.support_points(), nu1.support_points()
        vertices = oracles.transport_vertices([nu0.mass(x) for x in xs], [nu1.mass(y) for y in ys])
        staircase = [
            v for v in vertices if is_staircase(Coupling(tuple(sorted((xs[i], ys[j], f) for (i, j), f in v.items())), nu0, nu1))
        ]
        assert len(staircase) == 1
        atoms = tuple(sorted((xs[i], ys[j], f) for (i, j), f in staircase[0].items()))
        assert atoms == monotone_coupling(nu0, nu1).atoms


def test_pushforward_floor_and_ceiling():
    pi = coupling_from_atoms([(0, 1, F(1))])
    assert pushforward(pi, m_minus) == delta(0)
    assert pushforward(pi, m_plus) == delta(1)


def test_pushforward_two_atoms():
    pi = monotone_coupling(uniform_on([0, 2]), delta(1))
    assert pushforward(pi, m_minus) == uniform_on([0, 1])
    assert pushforward(pi, m_plus) == uniform_on([1, 2])
