"""Finitely supported probability mass functions on Z and entropy functionals.

Masses are exact `fractions.Fraction` values, so every mass-only identity
(normalization, marginals, ratio sums) can be checked with rational
equality.  Logarithmic quantities (entropies, log-Laplace transforms) are
IEEE doubles in natural log; the package-wide tolerances are 1e-10 for
two-sided identities and 1e-12 slack for one-sided inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import NegativeMass, NotNormalized

ZERO = Fraction(0)
ONE = Fraction(1)

#: two-sided float identities are asserted to this tolerance
EQ_TOL = 1e-10
#: one-sided float inequalities get this much slack
INEQ_SLACK = 1e-12


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like '3/4' and floats (exact binary value) to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str, float)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def log_of_fraction(q: Fraction) -> float:
    """Natural log of a positive rational, safe for huge numerators/denominators."""
    if q <= 0:
        raise ValueError("log of a non-positive rational")
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class Pmf:
    """Probability mass function stored on a contiguous window of Z.

    `masses[i]` is the mass at `offset + i`.  Canonical form: the first and
    last entries are strictly positive (zeros may occur inside), and the
    masses sum to 1 exactly.  Instances are immutable; build them with
    :func:`pmf` which validates and trims.
    """

    offset: int
    masses: tuple[Fraction, ...]

    def window(self) -> range:
        return range(self.offset, self.offset + len(self.masses))

    def mass(self, x: int) -> Fraction:
        i = x - self.offset
        if 0 <= i < len(self.masses):
            return self.masses[i]
        return ZERO

    def support(self) -> Iterator[tuple[int, Fraction]]:
        for i, m in enumerate(self.masses):
            if m > 0:
                yield self.offset + i, m

    def support_points(self) -> list[int]:
        return [x for x, _ in self.support()]

    def mean(self) -> Fraction:
        return sum((Fraction(x) * m for x, m in self.support()), ZERO)

    def translate(self, t: int) -> "Pmf":
        return Pmf(self.offset + t, self.masses)

    def __str__(self) -> str:
        body = " ".join(str(m) for m in self.masses)
        return f"{self.offset}; {body}"


def pmf(offset: int, masses: Sequence) -> Pmf:
    """Validated, canonically trimmed Pmf from a window of rational masses."""
    ms = [as_fraction(m) for m in masses]
    for m in ms:
        if m < 0:
            raise NegativeMass(f"negative mass {m}")
    total = sum(ms, ZERO)
    if total != ONE:
        raise NotNormalized(ONE - total)
    lo = 0
    while ms[lo] == 0:
        lo += 1
    hi = len(ms) - 1
    while ms[hi] == 0:
        hi -= 1
    return Pmf(offset + lo, tuple(ms[lo : hi + 1]))


def delta(x: int) -> Pmf:
    return Pmf(x, (ONE,))


def uniform_on(points: Sequence[int]) -> Pmf:
    """Equal mass on the given (not necessarily contiguous) points."""
    pts = set(points)
    lo, hi = min(pts), max(pts)
    share = Fraction(1, len(pts))
    masses = [share if x in pts else ZERO for x in range(lo, hi + 1)]
    return pmf(lo, masses)


def from_weights(offset: int, weights: Sequence) -> Pmf:
    """Normalize non-negative rational weights exactly."""
    ws = [as_fraction(w) for w in weights]
    total = sum(ws, ZERO)
    if total <= 0:
        raise NotNormalized(ONE)
    return pmf(offset, [w / total for w in ws])


@dataclass(frozen=True)
class RealFn:
    """Real-valued function on a finite contiguous window of Z.

    Values may be floats or Fractions; operations only assume they support
    arithmetic and comparison.
    """

    offset: int
    values: tuple

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("RealFn needs a non-empty window")

    def window(self) -> range:
        return range(self.offset, self.offset + len(self.values))

    def value(self, x: int):
        i = x - self.offset
        if not 0 <= i < len(self.values):
            raise KeyError(f"{x} outside window {self.window()}")
        return self.values[i]

    def value_or(self, x: int, default=0):
        i = x - self.offset
        if 0 <= i < len(self.values):
            return self.values[i]
        return default


def counting_entropy(nu: Pmf) -> float:
    """Entropy relative to counting measure: sum nu(x) log nu(x) over the support.

    Always <= 0 because every atom is <= 1.  Invariant under translation.
    """
    return sum(float(m) * log_of_fraction(m) for _, m in nu.support())


def relative_entropy(nu: Pmf, mu: Pmf) -> float:
    """sum nu(x) log(nu(x)/mu(x)); +inf when nu charges a mu-null point.

    Non-negative by Jensen; exactly 0.0 when nu == mu.
    """
    acc = 0.0
    for x, m in nu.support():
        q = mu.mass(x)
        if q == 0:
            return math.inf
        acc += float(m) * log_of_fraction(m / q)
    return acc


def _logsumexp(exponents: list[float]) -> float:
    top = max(exponents)
    if math.isinf(top):
        return top
    return top + math.log(sum(math.exp(e - top) for e in exponents))


def log_laplace(phi: RealFn, base: Pmf | None = None) -> float:
    """log of sum e^{phi(x)} base(x); `base=None` means counting weight 1 per window point.

    The two base conventions (counting window vs. probability base) are
    deliberately kept separate and are never mixed: pair this with
    :func:`counting_entropy` or :func:`relative_entropy` accordingly.
    """
    if base is None:
        return _logsumexp([float(v) for v in phi.values])
    exponents = []
    for x, m in base.support():
        exponents.append(float(phi.value(x)) + log_of_fraction(m))
    return _logsumexp(exponents)


def expectation(phi: RealFn, nu: Pmf) -> float:
    """Integral of phi against nu (float)."""
    return sum(float(m) * float(phi.value(x)) for x, m in nu.support())


def gibbs_optimizer(phi: RealFn, base: Pmf | None = None) -> Pmf:
    """The maximizer of nu -> int phi dnu - H(nu|base): nu*(x) proportional to e^{phi(x)} base(x).

    Weights are exponentiated in float then normalized exactly, so the
    result is a valid Pmf with rational masses; the dual gap
    log_laplace(phi) - (int phi dnu* - H(nu*|base)) vanishes to 1e-10.
    """
    if base is None:
        xs = list(phi.window())
        log_base = {x: 0.0 for x in xs}
    else:
        xs = [x for x, _ in base.support()]
        log_base = {x: log_of_fraction(base.mass(x)) for x in xs}
    shift = max(float(phi.value(x)) + log_base[x] for x in xs)
    weights = {x: Fraction(math.exp(float(phi.value(x)) + log_base[x] - shift)) for x in xs}
    total = sum(weights.values(), ZERO)
    lo, hi = min(xs), max(xs)
    masses = [weights.get(x, ZERO) / total for x in range(lo, hi + 1)]
    return pmf(lo, masses)


def dual_gap(phi: RealFn, base: Pmf | None = None) -> float:
    """log_laplace(phi, base) minus the variational value at the Gibbs optimizer."""
    nu = gibbs_optimizer(phi, base)
    ent = counting_entropy(nu) if base is None else relative_entropy(nu, base)
    return log_laplace(phi, base) - (expectation(phi, nu) - ent)
