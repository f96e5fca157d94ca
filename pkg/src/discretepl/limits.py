"""Discrete-to-continuous experiments.

Three experiment families, each producing per-n report rows suitable for
CSV export:

* `pl_limit_experiment`: discretize a continuous quadruple F,G,H,K on the
  grid x_i = -N + 2iN/n with the shifted-max rule for H and K, check the
  integer-line midpoint hypothesis on the grid, and track the
  Riemann-scaled product inequality toward the continuous one.
* `clt_experiment`: push a midpoint triple f,g,h (h convex) onto the cube
  via the standardized coordinate sum, evaluate the three binomial
  expectations exactly in the weights (big-integer binomials, no 2^n
  enumeration), verify the product inequality with the truncated h, and
  track convergence to standard Gaussian integrals.
* `rescaled_displacement_experiment`: round compactly supported laws to the
  lattice (1/n)Z by floor(nX)/n, run the displacement-convexity check there
  (index arithmetic reduces it to the Z machinery), and compare discrete
  relative entropies against their continuous counterparts.

Continuous targets come from an adaptive-quadrature oracle (scipy) at
1e-10 accuracy, independent of the experiment code paths.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .displacement import displacement_gap, m_minus, m_plus
from .errors import (
    ConvexityWitnessFailed,
    HypothesisFailedOnGrid,
    SupportExceedsWindow,
)
from .measures import ZERO, Pmf, RealFn, pmf

#: exhaustive grid-hypothesis checks up to this n; sampled above
EXHAUSTIVE_LIMIT = 512


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid x_i = -N + 2iN/n, i = 0..n, on [-N, N]."""

    half_width: float
    n: int

    def __post_init__(self):
        if self.n < 1 or self.half_width <= 0:
            raise ValueError("need n >= 1 and a positive half-width")

    def point(self, i: int) -> float:
        return -self.half_width + 2 * i * self.half_width / self.n

    def points(self) -> list[float]:
        return [self.point(i) for i in range(self.n + 1)]

    def step(self) -> float:
        return 2 * self.half_width / self.n


@dataclass(frozen=True)
class ContFn:
    """Closed-form function on R with a declared window of interest."""

    fn: Callable[[float], float]
    window: tuple[float, float]
    name: str = ""

    def __call__(self, x: float) -> float:
        return self.fn(x)


def discretize_quadruple(F: ContFn, G: ContFn, H: ContFn, K: ContFn, grid: GridSpec):
    """Grid restriction: f(i)=F(x_i), g(i)=G(x_i), and the shifted maxima

        h(i) = max(H(x_i), H(x_i + N/n)),  k(i) = max(K(x_i), K(x_i - N/n)),

    all zero outside {0..n}.  The half-step shifts absorb the parity error
    x_i/2 + x_j/2 = x_{floor((i+j)/2)} + (0 or N/n), so the line midpoint
    hypothesis on indices follows from the continuous one.
    """
    half_step = grid.half_width / grid.n
    f = RealFn(0, tuple(F(grid.point(i)) for i in range(grid.n + 1)))
    g = RealFn(0, tuple(G(grid.point(i)) for i in range(grid.n + 1)))
    h = RealFn(0, tuple(max(H(grid.point(i)), H(grid.point(i) + half_step)) for i in range(grid.n + 1)))
    k = RealFn(0, tuple(max(K(grid.point(i)), K(grid.point(i) - half_step)) for i in range(grid.n + 1)))
    return f, g, h, k


def grid_hypothesis_witness(f: RealFn, g: RealFn, h: RealFn, k: RealFn, sample: int | None = None, seed: int = 0):
    """First (i, j) with f(i)g(j) > h(floor)k(ceil), or None.

    Checks all pairs when `sample` is None, otherwise the diagonal band plus
    a seeded random sample of that size.
    """
    n = len(f.values) - 1
    if sample is None:
        pairs = ((i, j) for i in range(n + 1) for j in range(n + 1))
    else:
        rng = random.Random(seed)
        band = [(i, min(n, i + d)) for i in range(n + 1) for d in (0, 1, 2)]
        rand = [(rng.randint(0, n), rng.randint(0, n)) for _ in range(sample)]
        pairs = band + rand
    for i, j in pairs:
        if f.values[i] * g.values[j] > h.value_or(m_minus(i, j)) * k.value_or(m_plus(i, j)):
            return i, j
    return None


@dataclass(frozen=True)
class PlRow:
    n: int
    lhs: float
    rhs: float
    ratio: float
    target: float
    rel_err: float
    holds: bool


def interval_integral(fn: Callable[[float], float], a: float, b: float) -> float:
    """Adaptive quadrature at 1e-10 target accuracy (target oracle)."""
    from scipy.integrate import quad

    value, _ = quad(fn, a, b, epsabs=1e-10, epsrel=1e-10, limit=500)
    return value


def pl_limit_experiment(F: ContFn, G: ContFn, H: ContFn, K: ContFn, half_width: float, n_list: Sequence[int]):
    """Riemann-scaled product inequality along a refining grid.

    For each n, the discretized quadruple must satisfy the line hypothesis
    on the grid (exhaustively for n <= 512, sampled above; failures raise
    HypothesisFailedOnGrid), and the row records

        lhs = (2N/n)^2 (sum f)(sum g)  <=  rhs = (2N/n)^2 (sum h)(sum k)

    together with the ratio lhs/rhs and its continuous target
    (int F int G) / (int H int K) over [-N, N].
    """
    num = interval_integral(F, -half_width, half_width) * interval_integral(G, -half_width, half_width)
    den = interval_integral(H, -half_width, half_width) * interval_integral(K, -half_width, half_width)
    target = num / den if den > 0 else math.nan
    rows = []
    for n in n_list:
        grid = GridSpec(half_width, n)
        f, g, h, k = discretize_quadruple(F, G, H, K, grid)
        witness = grid_hypothesis_witness(f, g, h, k, sample=None if n <= EXHAUSTIVE_LIMIT else 20000, seed=n)
        if witness is not None:
            raise HypothesisFailedOnGrid(f"grid hypothesis fails at (i,j)={witness} for n={n}")
        scale = grid.step() ** 2
        lhs = scale * sum(f.values) * sum(g.values)
        rhs = scale * sum(h.values) * sum(k.values)
        ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
        rel = abs(ratio - target) / abs(target) if target and not math.isnan(target) else abs(ratio)
        rows.append(PlRow(n, lhs, rhs, ratio, target, rel, lhs <= rhs))
    return rows


@dataclass(frozen=True)
class CltRow:
    n: int
    value_f: float
    value_g: float
    value_h: float
    lhs: float
    rhs: float
    holds: bool
    target_f: float
    target_g: float
    target_h: float
    rel_err_f: float
    rel_err_g: float
    rel_err_h: float


def gaussian_exp_integral(fn: Callable[[float], float]) -> float:
    """int e^{fn(x)} dgamma(x) for the standard Gaussian, by quadrature."""
    from scipy.integrate import quad

    value, _ = quad(
        lambda x: math.exp(min(fn(x), 700.0) - x * x / 2),
        -math.inf,
        math.inf,
        epsabs=1e-10,
        epsrel=1e-10,
        limit=500,
    )
    return value / math.sqrt(2 * math.pi)


def _check_midpoint_convex(h: Callable[[float], float], window: tuple[float, float], samples: int = 400) -> None:
    rng = random.Random(7)
    lo, hi = window
    for _ in range(samples):
        a = rng.uniform(lo, hi)
        b = rng.uniform(lo, hi)
        if h((a + b) / 2) > (h(a) + h(b)) / 2 + 1e-9:
            raise ConvexityWitnessFailed(f"midpoint convexity of h fails at ({a}, {b})")


def binomial_weights(n: int) -> list[float]:
    """comb(n, k) / 2^n for k = 0..n, from exact big-integer binomials.

    The running binomial is exact; only the final scaling is floated (top 55
    bits + ldexp), so each weight is accurate to a unit in the last place
    and underflowing tails are exactly 0.0.
    """
    weights = []
    c = 1
    for k in range(n + 1):
        if k:
            c = c * (n - k + 1) // k
        bits = c.bit_length()
        if bits - n < -1080:
            weights.append(0.0)
            continue
        shift = max(0, bits - 55)
        weights.append(math.ldexp(c >> shift, shift - n))
    return weights


def clt_experiment(f: ContFn, g: ContFn, h: ContFn, n_list: Sequence[int], lam: float = 1.0):
    """Binomial expectations of the standardized-sum push-forwards.

    The cube functions depend only on the coordinate sum S, so each
    expectation is a binomial average over the standardized points
    t_k = (k - n/2)/(sqrt(n)/2), with exact big-integer binomial weights.
    With M the max absolute grid value, the product inequality

        E[e^{F_n}] E[e^{G_n}] <= E[e^{min(H_n, 3M)}]^2

    is recorded per n, alongside convergence of all three expectations to
    their standard Gaussian integrals.  `lam` rescales the arguments by
    sqrt(lam) (the flat-to-Gaussian reweighting step).
    """
    root = math.sqrt(lam)
    fe = (lambda x: f(root * x)) if lam != 1.0 else f.fn
    ge = (lambda x: g(root * x)) if lam != 1.0 else g.fn
    he = (lambda x: h(root * x)) if lam != 1.0 else h.fn
    _check_midpoint_convex(he, h.window)
    tf = gaussian_exp_integral(fe)
    tg = gaussian_exp_integral(ge)
    th = gaussian_exp_integral(he)
    rows = []
    for n in n_list:
        half_sqrt = math.sqrt(n) / 2
        points = [(k - n / 2) / half_sqrt for k in range(n + 1)]
        weights = binomial_weights(n)
        fv = [fe(t) for t in points]
        gv = [ge(t) for t in points]
        hv = [he(t) for t in points]
        bound = max(max(abs(v) for v in fv), max(abs(v) for v in gv), max(abs(v) for v in hv))
        ef = sum(w * math.exp(v) for w, v in zip(weights, fv))
        eg = sum(w * math.exp(v) for w, v in zip(weights, gv))
        eh = sum(w * math.exp(min(v, 3 * bound)) for w, v in zip(weights, hv))
        lhs, rhs = ef * eg, eh * eh
        rows.append(
            CltRow(
                n=n,
                value_f=ef,
                value_g=eg,
                value_h=eh,
                lhs=lhs,
                rhs=rhs,
                holds=lhs <= rhs * (1 + 1e-12),
                target_f=tf,
                target_g=tg,
                target_h=th,
                rel_err_f=abs(ef - tf) / tf,
                rel_err_g=abs(eg - tg) / tg,
                rel_err_h=abs(eh - th) / th,
            )
        )
    return rows


@dataclass(frozen=True)
class UniformInterval:
    """Uniform law on [a, b) with rational endpoints; exact cell probabilities."""

    a: Fraction
    b: Fraction

    def cell_masses(self, n: int, half_width: int) -> Pmf:
        if not (-half_width <= self.a < self.b <= half_width):
            raise SupportExceedsWindow(f"[{self.a},{self.b}) not inside [-{half_width},{half_width})")
        lo = math.floor(self.a * n)
        hi = math.ceil(self.b * n) - 1
        masses = []
        for k in range(lo, hi + 1):
            left = max(self.a, Fraction(k, n))
            right = min(self.b, Fraction(k + 1, n))
            masses.append(max(right - left, ZERO) / (self.b - self.a))
        return pmf(lo, masses)

    def continuous_entropy(self, half_width: int) -> float:
        # H(uniform[a,b) | uniform[-K,K)) = log(2K / (b - a))
        return math.log(2 * half_width / float(self.b - self.a))


@dataclass(frozen=True)
class PointMass:
    """Deterministic law at a rational point: a single lattice cell after rounding."""

    c: Fraction

    def cell_masses(self, n: int, half_width: int) -> Pmf:
        if not -half_width <= self.c < half_width:
            raise SupportExceedsWindow(f"{self.c} not inside [-{half_width},{half_width})")
        return pmf(math.floor(self.c * n), [Fraction(1)])

    def continuous_entropy(self, half_width: int) -> None:
        return None  # not absolutely continuous


@dataclass(frozen=True)
class DispRow:
    n: int
    entropy0: float
    entropy1: float
    entropy_minus: float
    entropy_plus: float
    gap: float
    ratio_sum: Fraction
    reference_shift: float
    cont0: float | None
    cont1: float | None
    jensen0_ok: bool | None
    jensen1_ok: bool | None
    holds: bool


def rescaled_displacement_experiment(dist0, dist1, half_width: int, n_list: Sequence[int]):
    """Displacement convexity on (1/n)Z via floor(nX)/n rounding.

    The lattice index map k <-> k/n reduces everything to the integer
    machinery; entropies relative to the uniform reference on the 2nK cells
    are counting entropies plus the explicit shift log(2nK), which cancels
    in the displacement gap.  When a continuous relative entropy is
    available, the row also records the rounding monotonicity
    H(nu_i^n | mu^n) <= H(nu_i | mu) (+1e-9).
    """
    rows = []
    for n in n_list:
        nu0 = dist0.cell_masses(n, half_width)
        nu1 = dist1.cell_masses(n, half_width)
        shift = math.log(2 * n * half_width)
        report = displacement_gap(nu0, nu1)
        cont0 = dist0.continuous_entropy(half_width)
        cont1 = dist1.continuous_entropy(half_width)
        h0 = report.entropy0 + shift
        h1 = report.entropy1 + shift
        rows.append(
            DispRow(
                n=n,
                entropy0=h0,
                entropy1=h1,
                entropy_minus=report.entropy_minus + shift,
                entropy_plus=report.entropy_plus + shift,
                gap=report.gap,
                ratio_sum=report.ratio_sum,
                reference_shift=shift,
                cont0=cont0,
                cont1=cont1,
                jensen0_ok=None if cont0 is None else h0 <= cont0 + 1e-9,
                jensen1_ok=None if cont1 is None else h1 <= cont1 + 1e-9,
                holds=report.gap >= -1e-10,
            )
        )
    return rows


def _gauss_bump(x: float) -> float:
    return math.exp(-x * x)


PL_DEMOS = {
    # hypothesis F(x)G(y) <= H(m)K(m), m=(x+y)/2, holds by the parallelogram
    # identity x^2 + y^2 >= (x+y)^2/2 (shift x,y for the off-center pair)
    "gaussian": (
        ContFn(_gauss_bump, (-6.0, 6.0), "exp(-x^2)"),
        ContFn(_gauss_bump, (-6.0, 6.0), "exp(-x^2)"),
        ContFn(_gauss_bump, (-6.0, 6.0), "exp(-x^2)"),
        ContFn(_gauss_bump, (-6.0, 6.0), "exp(-x^2)"),
        6.0,
    ),
    "shifted-gaussian": (
        ContFn(lambda x: math.exp(-((x - 1) ** 2)), (-6.0, 6.0), "exp(-(x-1)^2)"),
        ContFn(lambda x: math.exp(-((x + 1) ** 2)), (-6.0, 6.0), "exp(-(x+1)^2)"),
        ContFn(_gauss_bump, (-6.0, 6.0), "exp(-x^2)"),
        ContFn(_gauss_bump, (-6.0, 6.0), "exp(-x^2)"),
        6.0,
    ),
    "zero": (
        ContFn(lambda x: 0.0, (-4.0, 4.0), "0"),
        ContFn(lambda x: 0.0, (-4.0, 4.0), "0"),
        ContFn(_gauss_bump, (-4.0, 4.0), "exp(-x^2)"),
        ContFn(_gauss_bump, (-4.0, 4.0), "exp(-x^2)"),
        4.0,
    ),
}

CLT_DEMOS = {
    # (f(x)+g(y))/2 <= h((x+y)/2): equality for the linear triple; for the
    # quadratic one, dropping -x^2/4 terms only lowers the left side
    "linear": (
        ContFn(lambda x: x, (-8.0, 8.0), "x"),
        ContFn(lambda x: x, (-8.0, 8.0), "x"),
        ContFn(lambda x: x, (-8.0, 8.0), "x"),
    ),
    "quadratic": (
        ContFn(lambda x: x - x * x / 4, (-8.0, 8.0), "x - x^2/4"),
        ContFn(lambda x: x - x * x / 4, (-8.0, 8.0), "x - x^2/4"),
        ContFn(lambda x: x, (-8.0, 8.0), "x"),
    ),
}

DISP_DEMOS = {
    "same-uniform": (UniformInterval(Fraction(0), Fraction(1)), UniformInterval(Fraction(0), Fraction(1)), 1),
    "two-uniform": (UniformInterval(Fraction(-1), Fraction(0)), UniformInterval(Fraction(0), Fraction(1)), 1),
    "dirac-uniform": (PointMass(Fraction(0)), UniformInterval(Fraction(0), Fraction(1)), 1),
}
