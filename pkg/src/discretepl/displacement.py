"""Midpoint measures along the monotone coupling and displacement convexity of entropy.

For the monotone coupling pi of (nu0, nu1), the floor/ceiling midpoint maps

    m_minus(x, y) = floor((x+y)/2),    m_plus(x, y) = ceil((x+y)/2)

define nu_minus = m_minus # pi and nu_plus = m_plus # pi.  The exact rational
ratio sum

    P = sum over atoms of  nu_minus(m-) nu_plus(m+) / (nu0(x) nu1(y)) * pi(x,y)

satisfies P <= 1, and Jensen's inequality turns that into the entropy
inequality  H(nu-|m) + H(nu+|m) <= H(nu0|m) + H(nu1|m)  with m the counting
measure.  This module computes all of these plus the level-set and chain
combinatorics that drive the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .coupling import Coupling, is_staircase, monotone_coupling, pushforward
from .errors import NotMonotone, PreconditionViolated
from .measures import ZERO, Pmf, counting_entropy, log_of_fraction


def m_minus(x: int, y: int) -> int:
    return (x + y) // 2  # floor division floors toward -inf, also for negatives


def m_plus(x: int, y: int) -> int:
    return -((-x - y) // 2)


@dataclass(frozen=True)
class MidpointPair:
    """nu_minus, nu_plus and the monotone coupling they were pushed from.

    Mass-center conservation holds exactly:
    mean(nu_minus) + mean(nu_plus) = mean(marginal0) + mean(marginal1),
    since m_minus + m_plus = x + y pointwise.
    """

    nu_minus: Pmf
    nu_plus: Pmf
    pi: Coupling


def midpoint_measures(nu0: Pmf, nu1: Pmf) -> MidpointPair:
    pi = monotone_coupling(nu0, nu1)
    return MidpointPair(pushforward(pi, m_minus), pushforward(pi, m_plus), pi)


def pair_ratio_sum(pair: MidpointPair) -> Fraction:
    """Exact P for an already-built midpoint pair."""
    nu0 = pair.pi.marginal0
    nu1 = pair.pi.marginal1
    total = ZERO
    for x, y, p in pair.pi.atoms:
        # denominators are positive on supp(pi) by the marginal contract
        total += pair.nu_minus.mass(m_minus(x, y)) * pair.nu_plus.mass(m_plus(x, y)) / (nu0.mass(x) * nu1.mass(y)) * p
    return total


def midpoint_ratio_sum(nu0: Pmf, nu1: Pmf) -> Fraction:
    """Exact rational P; always <= 1.  Off-support terms never arise (0/0 is never formed)."""
    return pair_ratio_sum(midpoint_measures(nu0, nu1))


@dataclass(frozen=True)
class DisplacementReport:
    """Entropy bookkeeping for one (nu0, nu1) pair.

    `gap` is H(nu0)+H(nu1) - H(nu-)-H(nu+) (counting-measure entropies,
    floats) and is >= -1e-12.  `jensen_certificate` is the exact-ratio sum
    sum pi log(ratio), which equals -gap up to float error and is bounded by
    log(ratio_sum) by concavity of log.
    """

    pair: MidpointPair
    entropy0: float
    entropy1: float
    entropy_minus: float
    entropy_plus: float
    gap: float
    jensen_certificate: float
    ratio_sum: Fraction
    log_ratio_sum: float


def displacement_gap(nu0: Pmf, nu1: Pmf) -> DisplacementReport:
    pair = midpoint_measures(nu0, nu1)
    h0 = counting_entropy(nu0)
    h1 = counting_entropy(nu1)
    hm = counting_entropy(pair.nu_minus)
    hp = counting_entropy(pair.nu_plus)
    certificate = 0.0
    for x, y, p in pair.pi.atoms:
        ratio = pair.nu_minus.mass(m_minus(x, y)) * pair.nu_plus.mass(m_plus(x, y)) / (nu0.mass(x) * nu1.mass(y))
        certificate += float(p) * log_of_fraction(ratio)
    p_sum = pair_ratio_sum(pair)
    return DisplacementReport(
        pair=pair,
        entropy0=h0,
        entropy1=h1,
        entropy_minus=hm,
        entropy_plus=hp,
        gap=h0 + h1 - hm - hp,
        jensen_certificate=certificate,
        ratio_sum=p_sum,
        log_ratio_sum=log_of_fraction(p_sum) if p_sum > 0 else -math.inf,
    )


@dataclass(frozen=True)
class LevelSet:
    """Atoms of the coupling whose m_minus image is `a`; at most two of them."""

    a: int
    pairs: tuple[tuple[int, int], ...]


def level_sets(pi: Coupling) -> list[LevelSet]:
    """Partition of supp(pi) by m_minus value, sorted by level.

    Requires a staircase-monotone coupling; under monotonicity each level
    holds one or two atoms, and a two-atom level consists of neighbours
    differing by one unit in exactly one coordinate, the lower of which has
    an even coordinate sum.
    """
    if not is_staircase(pi):
        raise NotMonotone("level sets are only defined for staircase couplings")
    groups: dict[int, list[tuple[int, int]]] = {}
    for x, y, _ in pi.atoms:
        groups.setdefault(m_minus(x, y), []).append((x, y))
    sets = [LevelSet(a, tuple(sorted(ps))) for a, ps in sorted(groups.items())]
    for ls in sets:
        if len(ls.pairs) > 2:
            raise AssertionError(f"level {ls.a} has {len(ls.pairs)} atoms; staircase invariant broken")
        if len(ls.pairs) == 2:
            (x0, y0), (x1, y1) = ls.pairs
            if (x1 - x0) + (y1 - y0) != 1 or (x0 + y0) % 2 != 0:
                raise AssertionError(f"level {ls.a} pair structure violated: {ls.pairs}")
    return sets


@dataclass(frozen=True)
class ElemRecord:
    """Floor/ceiling midpoint predicates for an ordered pair of lattice points.

    Both equivalences are evaluated from both sides so they can be checked
    independently:

    * floors agree  iff  the points are adjacent (coordinate gap sum 1) and
      the lower coordinate sum is even; in that case the ceiling moves up by
      exactly one.
    * when floors differ by >= 2 the ceilings must differ; when floors
      differ by exactly 1, ceilings agree iff the points are adjacent with
      odd lower coordinate sum.
    """

    floor_equal: bool
    adjacent_even: bool
    item1_iff: bool
    item1_ceil_shift: bool
    floor_gap: int
    ceil_equal: bool
    adjacent_odd: bool
    item2_iff: bool

    @property
    def all_hold(self) -> bool:
        return self.item1_iff and self.item1_ceil_shift and self.item2_iff


def floor_ceil_iffs(x1: int, y1: int, x2: int, y2: int) -> ElemRecord:
    if not (x1 <= x2 and y1 <= y2 and (x1, y1) != (x2, y2)):
        raise PreconditionViolated("need x1<=x2, y1<=y2 and distinct points")
    a1, a2 = m_minus(x1, y1), m_minus(x2, y2)
    c1, c2 = m_plus(x1, y1), m_plus(x2, y2)
    adjacent = (x2 - x1) + (y2 - y1) == 1
    floor_equal = a1 == a2
    adjacent_even = adjacent and (x1 + y1) % 2 == 0
    item1_iff = floor_equal == adjacent_even
    item1_ceil_shift = (not floor_equal) or (c2 == c1 + 1)
    gap = a2 - a1
    ceil_equal = c1 == c2
    adjacent_odd = adjacent and (x1 + y1) % 2 != 0
    if gap >= 2:
        item2_iff = not ceil_equal
    elif gap == 1:
        item2_iff = ceil_equal == adjacent_odd
    else:
        item2_iff = True  # item 2 only constrains pairs with distinct floors
    return ElemRecord(
        floor_equal=floor_equal,
        adjacent_even=adjacent_even,
        item1_iff=item1_iff,
        item1_ceil_shift=item1_ceil_shift,
        floor_gap=gap,
        ceil_equal=ceil_equal,
        adjacent_odd=adjacent_odd,
        item2_iff=item2_iff,
    )


@dataclass(frozen=True)
class ChainRecord:
    """One maximal run of m_minus levels whose m_plus images overlap.

    A singleton run is an *isolated* level: its m_plus image meets neither
    neighbour's.  For every m_plus value b touched by the run, nu_plus(b)
    must be exactly the run's atom mass sent to b (`plus_decomposition_exact`),
    and the per-value coefficients

        alpha[b] = sum over run atoms with m_plus = b of
                   nu_minus(m_minus) pi(x,y) / (nu0(x) nu1(y))

    are all <= 1, which bounds the run's ratio contribution by its mass.
    """

    levels: tuple[int, ...]
    isolated: bool
    plus_values: tuple[int, ...]
    alphas: dict[int, Fraction]
    mass: Fraction
    ratio_contribution: Fraction
    plus_decomposition_exact: bool

    @property
    def bound_holds(self) -> bool:
        return all(a <= 1 for a in self.alphas.values()) and self.ratio_contribution <= self.mass


def chain_diagnostics(pair: MidpointPair) -> list[ChainRecord]:
    """Label each level as isolated or chained and verify the per-chain bound."""
    sets = level_sets(pair.pi)
    mass_at = {(x, y): p for x, y, p in pair.pi.atoms}
    plus_img = {ls.a: {m_plus(x, y) for x, y in ls.pairs} for ls in sets}

    runs: list[list[LevelSet]] = []
    for ls in sets:
        if runs and runs[-1][-1].a == ls.a - 1 and plus_img[runs[-1][-1].a] & plus_img[ls.a]:
            runs[-1].append(ls)
        else:
            runs.append([ls])

    nu0 = pair.pi.marginal0
    nu1 = pair.pi.marginal1
    records = []
    for run in runs:
        alphas: dict[int, Fraction] = {}
        sent: dict[int, Fraction] = {}
        mass = ZERO
        contribution = ZERO
        for ls in run:
            for x, y in ls.pairs:
                p = mass_at[(x, y)]
                b = m_plus(x, y)
                coeff = pair.nu_minus.mass(ls.a) * p / (nu0.mass(x) * nu1.mass(y))
                alphas[b] = alphas.get(b, ZERO) + coeff
                sent[b] = sent.get(b, ZERO) + p
                mass += p
                contribution += coeff * pair.nu_plus.mass(b)
        records.append(
            ChainRecord(
                levels=tuple(ls.a for ls in run),
                isolated=len(run) == 1,
                plus_values=tuple(sorted(alphas)),
                alphas=alphas,
                mass=mass,
                ratio_contribution=contribution,
                plus_decomposition_exact=all(pair.nu_plus.mass(b) == q for b, q in sent.items()),
            )
        )
    return records
