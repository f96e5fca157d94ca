"""Curvature cost of a positive reference pmf, log-concavity, and exact optimal transport.

The curvature cost of a reference measure mu is

    c_mu(x, y) = log[ mu(m-) mu(m+) / (mu(x) mu(y)) ],   m-/+ = floor/ceil midpoints,

which vanishes on the diagonal and on adjacent pairs, and is non-negative
whenever mu is log-concave.  mu may be given either as a rational Pmf or as
rational log-weights w with mu(x) proportional to e^{w(x)}; in the latter
case c_mu = w(m-) + w(m+) - w(x) - w(y) is exact and normalization cancels,
so truncating an infinite family to a window does not change the cost.

The transport cost T_c(nu0, nu1) = inf over couplings of the integral of c
is a finite linear program, solved exactly by successive shortest paths
with potentials over rational arithmetic.  Returned dual potentials satisfy
u(x) + v(y) <= c(x, y) with equality on the support of the optimal plan.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .coupling import Coupling
from .displacement import m_minus, m_plus
from .errors import InfeasibleCost, ConstraintViolated, OutsidePositiveWindow
from .measures import (
    ZERO,
    Pmf,
    RealFn,
    as_fraction,
    log_of_fraction,
    relative_entropy,
)


@dataclass(frozen=True)
class LogWeights:
    """Unnormalized log-mass on a contiguous window: mu(x) proportional to e^{weights[x-offset]}."""

    offset: int
    weights: tuple[Fraction, ...]

    def window(self) -> range:
        return range(self.offset, self.offset + len(self.weights))

    def weight(self, x: int) -> Fraction:
        i = x - self.offset
        if not 0 <= i < len(self.weights):
            raise OutsidePositiveWindow(f"{x} outside window {self.window()}")
        return self.weights[i]

    def log_mass(self, x: int) -> float:
        """log mu(x) including the normalization constant (float)."""
        return float(self.weight(x)) - self.log_normalizer()

    def log_normalizer(self) -> float:
        top = max(float(w) for w in self.weights)
        return top + math.log(sum(math.exp(float(w) - top) for w in self.weights))


def geometric_weights(half_width: int) -> LogWeights:
    """w(x) = -|x| on [-K, K]: two-sided geometric-type weights."""
    return LogWeights(-half_width, tuple(Fraction(-abs(x)) for x in range(-half_width, half_width + 1)))


def gaussian_weights(half_width: int) -> LogWeights:
    """w(x) = -2 x^2 on [-K, K]: Gaussian-type weights."""
    return LogWeights(-half_width, tuple(Fraction(-2 * x * x) for x in range(-half_width, half_width + 1)))


def positive_window(mu: Pmf) -> range:
    """Maximal contiguous window on which mu is strictly positive.

    Raises OutsidePositiveWindow when the positive support is not contiguous
    (curvature costs are only defined relative to a positive window).
    """
    pts = mu.support_points()
    lo, hi = pts[0], pts[-1]
    if any(mu.mass(x) == 0 for x in range(lo, hi + 1)):
        raise OutsidePositiveWindow("positive support is not contiguous")
    return range(lo, hi + 1)


@dataclass(frozen=True)
class CostFn:
    """Evaluable cost on Z^2; `evaluate` may return Fractions (exact) or floats."""

    name: str
    symmetric: bool
    evaluate: Callable[[int, int], object]


def cost_mu(mu: Pmf | LogWeights, x: int, y: int):
    """Curvature cost at (x, y): exact Fraction for log-weights, float for a rational Pmf."""
    lo_mid, hi_mid = m_minus(x, y), m_plus(x, y)
    if isinstance(mu, LogWeights):
        return mu.weight(lo_mid) + mu.weight(hi_mid) - mu.weight(x) - mu.weight(y)
    window = positive_window(mu)
    for z in (x, y, lo_mid, hi_mid):
        if z not in window:
            raise OutsidePositiveWindow(f"{z} outside positive window {window}")
    ratio = mu.mass(lo_mid) * mu.mass(hi_mid) / (mu.mass(x) * mu.mass(y))
    return log_of_fraction(ratio)


def curvature_cost(mu: Pmf | LogWeights) -> CostFn:
    name = "curvature(log-weights)" if isinstance(mu, LogWeights) else "curvature(pmf)"
    return CostFn(name, True, lambda x, y: cost_mu(mu, x, y))


def closed_form_cost(kind: str, x: int, y: int) -> int:
    """Closed forms of the curvature cost for the two reference families.

    geometric (w = -|x|):  2 min(|x|,|y|) when x and y have opposite signs, else 0.
    gaussian  (w = -2x^2): (x-y)^2 for even x+y, (x-y)^2 - 1 for odd x+y.
    """
    if kind == "geometric":
        return 2 * min(abs(x), abs(y)) if x * y < 0 else 0
    if kind == "gaussian":
        d2 = (x - y) ** 2
        return d2 if (x + y) % 2 == 0 else d2 - 1
    raise ValueError(f"unknown closed-form kind {kind!r}")


def is_log_concave(mu: Pmf) -> bool:
    return log_concavity_witness(mu) is None


def log_concavity_witness(mu: Pmf) -> int | None:
    """First x violating mu(x-1) mu(x+1) <= mu(x)^2, or None.

    An interior zero between positive masses is a violation at that point; a
    zero outside the contiguous positive window is not.
    """
    pts = mu.support_points()
    for x in range(pts[0] + 1, pts[-1]):
        if mu.mass(x - 1) * mu.mass(x + 1) > mu.mass(x) ** 2:
            return x
    return None


def weights_concavity_witness(w: LogWeights) -> int | None:
    """First x with w(x-1) + w(x+1) > 2 w(x), or None; exact."""
    win = w.window()
    for x in range(win.start + 1, win.stop - 1):
        if w.weight(x - 1) + w.weight(x + 1) > 2 * w.weight(x):
            return x
    return None


def log_interpolant(mu: Pmf, t: float) -> float:
    """Piecewise-linear interpolation of log mu between floor(t) and ceil(t).

    mu is log-concave iff this interpolant is concave.
    """
    lo = math.floor(t)
    hi = math.ceil(t)
    window = positive_window(mu)
    if lo not in window or hi not in window:
        raise OutsidePositiveWindow(f"[{lo},{hi}] outside positive window {window}")
    log_lo = log_of_fraction(mu.mass(lo))
    if hi == lo:
        return log_lo
    frac = t - lo
    return (1 - frac) * log_lo + frac * log_of_fraction(mu.mass(hi))


def cost_nonnegativity_check(mu: Pmf | LogWeights) -> bool:
    """Exhaustive exact check of c_mu >= 0 over the positive window."""
    if isinstance(mu, LogWeights):
        window = list(mu.window())
        for x in window:
            for y in window:
                if cost_mu(mu, x, y) < 0:
                    return False
        return True
    window = list(positive_window(mu))
    for x in window:
        for y in window:
            # exact rational form of the log-ratio sign
            if mu.mass(m_minus(x, y)) * mu.mass(m_plus(x, y)) < mu.mass(x) * mu.mass(y):
                return False
    return True


@dataclass(frozen=True)
class TransportPlanResult:
    cost: float
    cost_exact: Fraction  # exact optimum for the rationalized costs
    plan: Coupling
    dual_u: RealFn | None
    dual_v: RealFn | None


def _rational_cost_matrix(cost: CostFn, xs: Sequence[int], ys: Sequence[int]) -> list[list[Fraction]]:
    rows = []
    for x in xs:
        row = []
        for y in ys:
            value = cost.evaluate(x, y)
            if isinstance(value, float) and math.isinf(value):
                raise InfeasibleCost(f"cost infinite at ({x},{y})")
            row.append(as_fraction(value))
        rows.append(row)
    return rows


def _successive_shortest_paths(a: list[Fraction], b: list[Fraction], cost: list[list[Fraction]]):
    """Exact min-cost transportation by shortest augmenting paths with potentials.

    Nodes 0..m-1 are sources, m..m+n-1 sinks.  All forward arcs (i -> j)
    have infinite capacity; backward arcs exist where flow is positive.
    Potentials keep reduced costs non-negative so Dijkstra applies after the
    first (arc-length-one) initialization.
    """
    m, n = len(a), len(b)
    supply = list(a)
    demand = list(b)
    flow: dict[tuple[int, int], Fraction] = {}
    # initial potentials: shortest one-arc distances from the active sources
    pot = [ZERO] * m + [min(cost[i][j] for i in range(m)) for j in range(n)]
    counter = itertools.count()
    remaining = sum(supply, ZERO)
    while remaining > 0:
        dist: dict[int, Fraction] = {}
        prev: dict[int, tuple[int, int, int]] = {}  # node -> (from, j_or_i, direction)
        heap = []
        for i in range(m):
            if supply[i] > 0:
                dist[i] = ZERO
                heapq.heappush(heap, (ZERO, next(counter), i))
        settled: set[int] = set()
        while heap:
            d, _, node = heapq.heappop(heap)
            if node in settled:
                continue
            settled.add(node)
            if node < m:
                i = node
                for j in range(n):
                    rc = cost[i][j] + pot[i] - pot[m + j]
                    nd = d + rc
                    if m + j not in settled and (m + j not in dist or nd < dist[m + j]):
                        dist[m + j] = nd
                        prev[m + j] = (i, j, +1)
                        heapq.heappush(heap, (nd, next(counter), m + j))
            else:
                j = node - m
                for (i, jj), f in flow.items():
                    if jj != j or f <= 0:
                        continue
                    rc = -cost[i][j] + pot[m + j] - pot[i]
                    nd = d + rc
                    if i not in settled and (i not in dist or nd < dist[i]):
                        dist[i] = nd
                        prev[i] = (i, j, -1)
                        heapq.heappush(heap, (nd, next(counter), i))
        target = None
        for j in range(n):
            if demand[j] > 0 and (m + j) in dist:
                if target is None or dist[m + j] < dist[m + target]:
                    target = j
        if target is None:
            raise InfeasibleCost("no augmenting path to a sink with remaining demand")
        d_target = dist[m + target]
        # walk the path backwards, collecting arcs and the bottleneck
        path = []
        node = m + target
        while node in prev:
            i, j, direction = prev[node]
            path.append((i, j, direction))
            node = i if direction == +1 else m + j
        path.reverse()
        source = path[0][0]
        amount = min(supply[source], demand[target])
        for i, j, direction in path:
            if direction == -1:
                amount = min(amount, flow[(i, j)])
        for i, j, direction in path:
            if direction == +1:
                flow[(i, j)] = flow.get((i, j), ZERO) + amount
            else:
                flow[(i, j)] -= amount
        supply[source] -= amount
        demand[target] -= amount
        remaining -= amount
        for node in range(m + n):
            pot[node] += min(dist.get(node, d_target), d_target)
    return flow, pot


def ot_cost(cost: CostFn, nu0: Pmf, nu1: Pmf, want_duals: bool = False) -> TransportPlanResult:
    """Exact optimal transport cost between two finitely supported measures.

    Float costs are rationalized to their exact binary values, so the
    returned plan and value are the exact optimum of the rationalized
    program; `cost` is the float image of that exact value.
    """
    xs = nu0.support_points()
    ys = nu1.support_points()
    a = [nu0.mass(x) for x in xs]
    b = [nu1.mass(y) for y in ys]
    rc = _rational_cost_matrix(cost, xs, ys)
    flow, pot = _successive_shortest_paths(a, b, rc)
    atoms = sorted((xs[i], ys[j], f) for (i, j), f in flow.items() if f > 0)
    plan = Coupling(tuple(atoms), nu0, nu1)
    exact = sum((rc[i][j] * f for (i, j), f in flow.items() if f > 0), ZERO)
    dual_u = dual_v = None
    if want_duals:
        u = {x: -pot[i] for i, x in enumerate(xs)}
        v = {y: pot[len(xs) + j] for j, y in enumerate(ys)}
        # Extend feasibly to the full windows: first u via the support v,
        # then v via the extended u; on the supports the originals are
        # reproduced (a complementary-slackness pair attains each min), and
        # u(x)+v(y) <= c(x,y) holds on the whole window product.
        for x in nu0.window():
            if x not in u:
                u[x] = min(as_fraction(cost.evaluate(x, y)) - v[y] for y in ys)
        for y in nu1.window():
            if y not in v:
                v[y] = min(as_fraction(cost.evaluate(x, y)) - u[x] for x in nu0.window())
        dual_u = RealFn(nu0.offset, tuple(float(u[x]) for x in nu0.window()))
        dual_v = RealFn(nu1.offset, tuple(float(v[y]) for y in nu1.window()))
    return TransportPlanResult(float(exact), exact, plan, dual_u, dual_v)


def ot_cost_float(cost: CostFn, nu0: Pmf, nu1: Pmf) -> float:
    """Float fast path through scipy's LP solver; must agree with `ot_cost` to 1e-9."""
    import numpy as np
    from scipy.optimize import linprog

    xs = nu0.support_points()
    ys = nu1.support_points()
    m, n = len(xs), len(ys)
    c = np.array([float(cost.evaluate(x, y)) for x in xs for y in ys])
    a_eq = np.zeros((m + n, m * n))
    for i in range(m):
        a_eq[i, i * n : (i + 1) * n] = 1.0
    for j in range(n):
        a_eq[m + j, j::n] = 1.0
    b_eq = np.array([float(nu0.mass(x)) for x in xs] + [float(nu1.mass(y)) for y in ys])
    res = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise InfeasibleCost(res.message)
    return float(res.fun)


@dataclass(frozen=True)
class TransportEntropyCheck:
    lhs: float  # transport cost
    rhs: float  # H(nu0|mu) + H(nu1|mu)
    holds: bool


def transport_entropy_check(mu: Pmf | LogWeights, nu0: Pmf, nu1: Pmf, slack: float = 1e-10) -> TransportEntropyCheck:
    """T_{c_mu}(nu0, nu1) <= H(nu0|mu) + H(nu1|mu), with float slack.

    Both supports must live inside the positive window of mu.
    """
    window = mu.window() if isinstance(mu, LogWeights) else positive_window(mu)
    for nu in (nu0, nu1):
        for x in nu.support_points():
            if x not in window:
                raise OutsidePositiveWindow(f"support point {x} outside positive window")
    lhs = ot_cost(curvature_cost(mu), nu0, nu1).cost
    if isinstance(mu, LogWeights):
        rhs = _relative_entropy_logweights(nu0, mu) + _relative_entropy_logweights(nu1, mu)
    else:
        rhs = relative_entropy(nu0, mu) + relative_entropy(nu1, mu)
    return TransportEntropyCheck(lhs, rhs, lhs <= rhs + slack)


def _relative_entropy_logweights(nu: Pmf, mu: LogWeights) -> float:
    log_z = mu.log_normalizer()
    return sum(float(m) * (log_of_fraction(m) - float(mu.weight(x)) + log_z) for x, m in nu.support())


def dual_product_check(mu: Pmf | LogWeights, u: RealFn, v: RealFn, slack: float = 1e-12) -> float:
    """Product (sum e^u dmu)(sum e^v dmu) under the constraint u + v <= c_mu.

    Verifies the constraint pointwise on the positive window first (raising
    ConstraintViolated with a witness), then returns the product, which is
    <= 1 + 1e-10 for any feasible pair.
    """
    window = list(mu.window() if isinstance(mu, LogWeights) else positive_window(mu))
    for x in window:
        for y in window:
            excess = float(u.value(x)) + float(v.value(y)) - float(cost_mu(mu, x, y))
            if excess > slack:
                raise ConstraintViolated(x, y, excess)
    if isinstance(mu, LogWeights):
        log_mass = {x: mu.log_mass(x) for x in window}
    else:
        log_mass = {x: log_of_fraction(mu.mass(x)) for x in window}
    int_u = sum(math.exp(float(u.value(x)) + log_mass[x]) for x in window)
    int_v = sum(math.exp(float(v.value(y)) + log_mass[y]) for y in window)
    return int_u * int_v
