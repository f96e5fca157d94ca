"""Lattice checks on the discrete cube {0,1}^n.

The multiplicative four-functions hypothesis f(x)g(y) <= h(x^y)k(xvy) and
its conclusion (sum f)(sum g) <= (sum h)(sum k) are checked exactly when the
values are rational.  The additive form works on exponents and is checked
through two routes (log-domain comparison and float exponentiation into the
multiplicative checker) that must agree.

Cube functions are stored as length-2^n vectors; bit i of the index is
coordinate i, so meet/join of index vectors are bitwise AND/OR and slicing
on the last coordinate is a contiguous split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DimensionMismatch, LengthMismatch, SupportNotBinary
from .measures import RealFn


@dataclass(frozen=True)
class CubeFn:
    """Function on {0,1}^n as a 2^n vector (rationals or floats)."""

    n: int
    values: tuple

    def __post_init__(self):
        if self.n < 1 or len(self.values) != 2**self.n:
            raise ValueError(f"need 2^{self.n} values, got {len(self.values)}")

    def slice_last(self, a: int) -> "CubeFn":
        """Restriction h^a fixing the last coordinate to a."""
        half = 2 ** (self.n - 1)
        return CubeFn(self.n - 1, self.values[a * half : (a + 1) * half])


def bits_of(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> i) & 1 for i in range(n))


def meet(x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    """Componentwise min; meet(x,y) + join(x,y) = x + y componentwise."""
    if len(x) != len(y):
        raise LengthMismatch(f"lengths {len(x)} != {len(y)}")
    return tuple(min(a, b) for a, b in zip(x, y))


def join(x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    """Componentwise max."""
    if len(x) != len(y):
        raise LengthMismatch(f"lengths {len(x)} != {len(y)}")
    return tuple(max(a, b) for a, b in zip(x, y))


def _same_dimension(*fns: CubeFn) -> int:
    n = fns[0].n
    if any(f.n != n for f in fns):
        raise DimensionMismatch(f"dimensions {[f.n for f in fns]} differ")
    return n


@dataclass(frozen=True)
class HypothesisCheck:
    ok: bool
    witness: tuple | None  # (x_bits, y_bits, lhs, rhs) of the first failing pair


def check_4ft_hypothesis(f: CubeFn, g: CubeFn, h: CubeFn, k: CubeFn) -> HypothesisCheck:
    """Exhaustive check of f(x)g(y) <= h(x^y)k(xvy) over all 4^n pairs.

    Exact for rational values.  Values must be non-negative.
    """
    n = _same_dimension(f, g, h, k)
    for fn in (f, g, h, k):
        if any(v < 0 for v in fn.values):
            raise ValueError("multiplicative form needs non-negative values")
    size = 2**n
    for x in range(size):
        fx = f.values[x]
        for y in range(size):
            lhs = fx * g.values[y]
            rhs = h.values[x & y] * k.values[x | y]
            if lhs > rhs:
                return HypothesisCheck(False, (bits_of(x, n), bits_of(y, n), lhs, rhs))
    return HypothesisCheck(True, None)


def check_4ft_conclusion(f: CubeFn, g: CubeFn, h: CubeFn, k: CubeFn):
    """(lhs, rhs, holds) for (sum f)(sum g) <= (sum h)(sum k), exact sums."""
    _same_dimension(f, g, h, k)
    lhs = sum(f.values) * sum(g.values)
    rhs = sum(h.values) * sum(k.values)
    return lhs, rhs, lhs <= rhs


@dataclass(frozen=True)
class AdditiveCheck:
    hypothesis_ok: bool
    hyp_witness: tuple | None
    lhs: float  # log sum e^{h1} + log sum e^{h2}
    rhs: float  # log sum e^{h3} + log sum e^{h4}
    conclusion_ok: bool

    @property
    def ok(self) -> bool:
        return self.hypothesis_ok and self.conclusion_ok


def _log_sum_exp(values) -> float:
    top = max(float(v) for v in values)
    return top + math.log(sum(math.exp(float(v) - top) for v in values))


def check_4ft_additive(h1: CubeFn, h2: CubeFn, h3: CubeFn, h4: CubeFn, tol: float = 1e-9) -> AdditiveCheck:
    """Additive form h1(x)+h2(y) <= h3(x^y)+h4(xvy) with log-sum conclusion.

    Route one compares value sums and log-sum-exps directly; route two
    shifts the exponents (preserving both sides), exponentiates into floats
    and defers to the multiplicative checker.  The two routes must agree to
    `tol`, otherwise an AssertionError flags a numerics bug.
    """
    n = _same_dimension(h1, h2, h3, h4)
    size = 2**n
    hyp_ok = True
    witness = None
    for x in range(size):
        for y in range(size):
            lhs = float(h1.values[x]) + float(h2.values[y])
            rhs = float(h3.values[x & y]) + float(h4.values[x | y])
            if lhs > rhs:
                hyp_ok = False
                witness = (bits_of(x, n), bits_of(y, n), lhs, rhs)
                break
        if not hyp_ok:
            break
    lhs_log = _log_sum_exp(h1.values) + _log_sum_exp(h2.values)
    rhs_log = _log_sum_exp(h3.values) + _log_sum_exp(h4.values)
    conclusion_ok = lhs_log <= rhs_log + tol

    # second route: shift so exp() stays in range, then multiplicative check
    a = max(float(v) for v in h1.values)
    b = max(float(v) for v in h2.values)
    half = 0.5 * (a + b)
    exp1 = CubeFn(n, tuple(math.exp(float(v) - a) for v in h1.values))
    exp2 = CubeFn(n, tuple(math.exp(float(v) - b) for v in h2.values))
    exp3 = CubeFn(n, tuple(math.exp(float(v) - half) for v in h3.values))
    exp4 = CubeFn(n, tuple(math.exp(float(v) - half) for v in h4.values))
    mult_hyp = check_4ft_hypothesis(exp1, exp2, exp3, exp4)
    # tolerate float round-off at exact-equality pairs
    if mult_hyp.ok != hyp_ok:
        _, _, wl, wr = mult_hyp.witness if not mult_hyp.ok else witness
        if abs(wl - wr) > tol * max(1.0, abs(wl)):
            raise AssertionError("additive and multiplicative routes disagree on the hypothesis")
    m_lhs, m_rhs, _ = check_4ft_conclusion(exp1, exp2, exp3, exp4)
    mult_concl = math.log(m_lhs) - math.log(m_rhs) <= tol if m_lhs > 0 and m_rhs > 0 else m_lhs <= m_rhs
    if mult_concl != conclusion_ok:
        raise AssertionError("additive and multiplicative routes disagree on the conclusion")
    return AdditiveCheck(hyp_ok, witness, lhs_log, rhs_log, conclusion_ok)


@dataclass(frozen=True)
class Functional:
    """Functional on two-point functions, monotone in each of the two values.

    Monotonicity is what lets the recursive tensorization propagate the
    lattice hypothesis, and holds for every built-in (each is a sup of
    affine maps with non-negative coefficients).
    """

    name: str
    pair_fn: Callable[[float, float], float]

    def __call__(self, u0, u1) -> float:
        return self.pair_fn(u0, u1)


def functional_power(phi: Functional, h: CubeFn) -> float:
    """Tensorized value: apply phi recursively over the last coordinate.

    For the log-mean-exp functional this equals log int e^h dm_n over the
    uniform measure m_n, and for the mean functional it is the plain mean.
    """
    if h.n == 1:
        return phi(h.values[0], h.values[1])
    return phi(functional_power(phi, h.slice_last(0)), functional_power(phi, h.slice_last(1)))


def log_mean_exp(h: CubeFn) -> float:
    """Direct log int e^h dm_n (uniform m_n); the non-recursive route."""
    return _log_sum_exp(h.values) - h.n * math.log(2)


def mean_value(h: CubeFn) -> float:
    return sum(float(v) for v in h.values) / 2**h.n


def variance_band_functional(f: CubeFn):
    """sup over probabilities (p, 1-p) of  int f dnu - int (density^2)/2 dm_1.

    Writing d = f(0) - f(1), the optimizer p* = (d+2)/4 is interior exactly
    when d lies in [-2, 2], giving mean(f) + d^2/8 - 1/2; outside the band
    the sup sits at a vertex and equals max(f) - 1.  Exact for rational
    values.  (Equivalently Var(f)/2 + mean(f) - 1/2 inside the band, which
    is continuous across the band edge, unlike the variant without the 1/2
    factor on the variance.)
    """
    if f.n != 1:
        raise ValueError("variance-band functional is defined on two-point functions")
    f0, f1 = f.values
    d = f0 - f1
    if -2 <= d <= 2:
        return (f0 + f1) / 2 + d * d / 8 - Fraction(1, 2)
    return max(f0, f1) - 1


PHI_ENTROPY = Functional("log-mean-exp", lambda u0, u1: _log_sum_exp((u0, u1)) - math.log(2))
PHI_MEAN = Functional("mean", lambda u0, u1: (float(u0) + float(u1)) / 2)
PHI_QUADRATIC = Functional(
    "variance-band", lambda u0, u1: variance_band_functional(CubeFn(1, (float(u0), float(u1))))
)


@dataclass(frozen=True)
class CubeReduction:
    """Outcome of restricting a binary-supported quadruple on Z to the cube {0,1}.

    On {0,1} the floor/ceiling midpoints coincide with meet/join, so the
    integer-line hypothesis for the zero-extended functions is equivalent to
    the n=1 cube hypothesis, and the line conclusion specializes to
    (f(0)+f(1))(g(0)+g(1)) <= (h(0)+h(1))(k(0)+k(1)).
    """

    cube_fns: tuple[CubeFn, CubeFn, CubeFn, CubeFn]
    cube_hypothesis_ok: bool
    line_hypothesis_ok: bool
    equivalent: bool
    lhs: object
    rhs: object
    conclusion_ok: bool


def restrict_to_binary_cube(f: RealFn, g: RealFn, h: RealFn, k: RealFn, window: int = 3) -> CubeReduction:
    """Check the line/cube equivalence for non-negative functions supported in {0,1}.

    The line hypothesis is verified exhaustively on [-window, window+1]^2;
    outside {0,1} a zero factor makes it vacuous.
    """
    for fn in (f, g, h, k):
        for x in fn.window():
            v = fn.value(x)
            if v < 0:
                raise ValueError("values must be non-negative")
            if v > 0 and x not in (0, 1):
                raise SupportNotBinary(f"positive value at {x}")
    cubes = tuple(CubeFn(1, (fn.value_or(0), fn.value_or(1))) for fn in (f, g, h, k))
    cube_check = check_4ft_hypothesis(*cubes)
    line_ok = True
    from .displacement import m_minus, m_plus

    for x in range(-window, window + 2):
        for y in range(-window, window + 2):
            lhs = f.value_or(x) * g.value_or(y)
            rhs = h.value_or(m_minus(x, y)) * k.value_or(m_plus(x, y))
            if lhs > rhs:
                line_ok = False
                break
        if not line_ok:
            break
    lhs, rhs, concl = check_4ft_conclusion(*cubes)
    return CubeReduction(
        cube_fns=cubes,
        cube_hypothesis_ok=cube_check.ok,
        line_hypothesis_ok=line_ok,
        equivalent=cube_check.ok == line_ok,
        lhs=lhs,
        rhs=rhs,
        conclusion_ok=concl,
    )


def random_hypothesis_quadruple(rng, n: int, resolution: int = 32):
    """Random rational quadruple satisfying the multiplicative hypothesis.

    Draws positive rational values, repairs them into a log-supermodular
    function by sweeping meet/join pairs (raising the meet/join values to
    the max of an offending pair) until a fixpoint, then returns scaled
    copies (alpha*u, beta*u, alpha*u, beta*u).  The output is re-validated
    with the exhaustive checker before being returned.
    """
    size = 2**n
    vals = [Fraction(rng.randint(1, resolution)) for _ in range(size)]
    changed = True
    while changed:
        changed = False
        for x in range(size):
            for y in range(x + 1, size):
                lo, hi = x & y, x | y
                if vals[x] * vals[y] > vals[lo] * vals[hi]:
                    top = max(vals[x], vals[y])
                    if vals[lo] < top:
                        vals[lo] = top
                        changed = True
                    if vals[hi] < top:
                        vals[hi] = top
                        changed = True
    u = CubeFn(n, tuple(vals))
    alpha = Fraction(rng.randint(1, resolution), rng.randint(1, resolution))
    beta = Fraction(rng.randint(1, resolution), rng.randint(1, resolution))
    f = CubeFn(n, tuple(alpha * v for v in vals))
    g = CubeFn(n, tuple(beta * v for v in vals))
    quad = (f, g, f, g)
    check = check_4ft_hypothesis(*quad)
    if not check.ok:
        raise AssertionError(f"generator produced an invalid instance: {check.witness}")
    return quad
