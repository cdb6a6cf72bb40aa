"""Exact lower and upper bounds on the square-to-linear ratio of a curve.

Lower bounds come from scanning sample pairs of a polyline. Upper bounds
come from a best-first branch and bound over pairs of recursion cells of a
self-similar curve, with every cell bounded by the image box of its map.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .curves import (ROOT, Cell, Point, PolylineCurve, SelfSimilarCurveSpec, dist_sq, vertex_depth,
                     vertices)
from .errors import BudgetExhausted, DomainError
from .rational import approx, fmt, to_rational

log = logging.getLogger(__name__)

EXACT_LOWER = "exact-lower"
EXACT_UPPER = "exact-upper"
EXACT = "exact"


class SlrValue(NamedTuple):
    value: Fraction
    kind: str


@dataclass(frozen=True)
class WitnessPair:
    t1: Fraction
    t2: Fraction
    p1: Point
    p2: Point

    def __post_init__(self):
        if not self.t1 < self.t2:
            raise DomainError("witness times must satisfy t1 < t2")

    @property
    def ratio(self) -> Fraction:
        return dist_sq(self.p1, self.p2) / (self.t2 - self.t1)

    def to_json(self) -> dict:
        return {"t1": fmt(self.t1), "t2": fmt(self.t2),
                "p1": [fmt(self.p1.x), fmt(self.p1.y)],
                "p2": [fmt(self.p2.x), fmt(self.p2.y)]}


def _better(value, key, best_value, best_key) -> bool:
    if best_value is None or value > best_value:
        return True
    return value == best_value and key < best_key


def max_pair_ratio(X, Y, T) -> tuple[Fraction, int, int]:
    """Max over i < j of ((X_j-X_i)^2 + (Y_j-Y_i)^2) / (T_j - T_i) on integer arrays.

    Scans index offsets one at a time (vectorized along the offset) and
    stops once no remaining offset can reach the incumbent: the squared
    distance is at most the squared diameter and the time gap at offset k
    only grows with k. Ties go to the smallest (i, j).
    """
    n = len(X)
    diam_sq = int((X.max() - X.min()) ** 2 + (Y.max() - Y.min()) ** 2)
    best = None
    bi = bj = -1
    for k in range(1, n):
        dt = T[k:] - T[:-k]
        min_dt = int(dt.min())
        if best is not None and Fraction(diam_sq, min_dt) < best:
            break
        dx = X[k:] - X[:-k]
        dy = Y[k:] - Y[:-k]
        sq = dx * dx + dy * dy
        fr = sq.astype(float) / dt.astype(float)
        top = fr.max()
        if best is not None and top < float(best) * (1 - 1e-9):
            continue
        for i in np.flatnonzero(fr >= top * (1 - 1e-9)):
            i = int(i)
            val = Fraction(int(sq[i]), int(dt[i]))
            if _better(val, (i, i + k), best, (bi, bj)):
                best, bi, bj = val, i, i + k
    return best, bi, bj


def pair_scan(curve: PolylineCurve) -> tuple[Fraction, int, int]:
    """Exact best sample pair of ``curve`` as (ratio, i, j)."""
    X, Y, T, cden, tden = curve.integer_arrays()
    best, i, j = max_pair_ratio(X, Y, T)
    return best * Fraction(tden, cden * cden), i, j


def pairwise_slr_lower(curve: PolylineCurve) -> tuple[SlrValue, WitnessPair]:
    value, i, j = pair_scan(curve)
    a, b = curve.samples[i], curve.samples[j]
    return SlrValue(value, EXACT_LOWER), WitnessPair(a.t, b.t, a.p, b.p)


# Branch and bound ----------------------------------------------------------

def _box_maxdist_sq(p, q) -> Fraction:
    dx = max(q[2] - p[0], p[2] - q[0])
    dy = max(q[3] - p[1], p[3] - q[1])
    return dx * dx + dy * dy


@dataclass(frozen=True)
class CellPair:
    a: Cell
    b: Cell
    box_a: tuple
    box_b: tuple

    @property
    def time_gap(self) -> Fraction:
        return self.b.t0 - (self.a.t0 + self.a.w)


@dataclass
class UpperBoundResult:
    upper: SlrValue
    lower: SlrValue
    witness: WitnessPair | None
    nodes_expanded: int
    converged: bool
    junction_types: int = 0


def _check_reducible(spec: SelfSimilarCurveSpec) -> None:
    for k, (m, w) in enumerate(zip(spec.sub_maps, spec.time_weights)):
        r_sq = m.similarity_ratio_sq()
        if r_sq is None:
            raise DomainError(f"sub-map {k} is not a similarity; upper bound unsupported")
        if r_sq > w:
            raise DomainError(f"sub-map {k} expands ratios (r^2={r_sq} > w={w})")
        if r_sq != w:
            raise DomainError(
                f"sub-map {k} is not measure preserving (r^2={r_sq}, w={w}); "
                "junction reduction needs r^2 == w")


def _single_point(spec: SelfSimilarCurveSpec) -> bool:
    if any((m.a, m.b, m.c, m.d) != (0, 0, 0, 0) for m in spec.sub_maps):
        return False
    return len({(m.tx, m.ty) for m in spec.sub_maps}) == 1


@dataclass
class _Search:
    spec: SelfSimilarCurveSpec
    lower: Fraction = Fraction(0)
    witness: WitnessPair | None = None
    heap: list = field(default_factory=list)
    nodes: int = 0

    def box(self, cell: Cell):
        return cell.map.unit_square_box()

    def observe(self, a: Cell, b: Cell) -> None:
        """Feed exact curve points at cell ends into the lower bound."""
        spec = self.spec
        ends_a = ((a.t0, a.map(spec.entry_point)), (a.t0 + a.w, a.map(spec.exit_point)))
        ends_b = ((b.t0, b.map(spec.entry_point)), (b.t0 + b.w, b.map(spec.exit_point)))
        for t1, p1 in ends_a:
            for t2, p2 in ends_b:
                if t2 <= t1:
                    continue
                r = dist_sq(p1, p2) / (t2 - t1)
                if r > self.lower or self.witness is None:
                    self.lower = r
                    self.witness = WitnessPair(t1, t2, p1, p2)

    def push(self, a: Cell, b: Cell, box_a=None, box_b=None) -> None:
        box_a = box_a or self.box(a)
        box_b = box_b or self.box(b)
        gap = b.t0 - (a.t0 + a.w)
        assert gap > 0
        bound = _box_maxdist_sq(box_a, box_b) / gap
        self.observe(a, b)
        if bound > self.lower:
            heapq.heappush(self.heap, (-bound, a.path, b.path, CellPair(a, b, box_a, box_b)))

    def top(self) -> Fraction:
        while self.heap and -self.heap[0][0] <= self.lower:
            heapq.heappop(self.heap)
        return -self.heap[0][0] if self.heap else self.lower

    def expand(self) -> None:
        _, _, _, node = heapq.heappop(self.heap)
        self.nodes += 1
        kids_a = node.a.children(self.spec)
        kids_b = node.b.children(self.spec)
        boxes_b = [self.box(c) for c in kids_b]
        for ca in kids_a:
            ba = self.box(ca)
            for cb, bb in zip(kids_b, boxes_b):
                self.push(ca, cb, ba, bb)


def _junction_key(a: Cell, b: Cell):
    r = a.map.inverse().compose(b.map)
    return (r.a, r.b, r.c, r.d, r.tx, r.ty)


def slr_upper_bound(spec: SelfSimilarCurveSpec, target_gap, budget: int = 200_000) -> UpperBoundResult:
    """Sound upper bound on the square-to-linear ratio of ``spec``.

    Every pair of distinct times separates into two different cells at
    some level, and a measure-preserving similarity leaves the ratio
    unchanged, so it suffices to bound pairs in distinct top-level cells.
    Cells adjacent in time have no gap; their pairs are split once more and
    the pair of touching children is again an adjacent pair whose shape,
    up to similarity, comes from a finite set of junction types. Each type
    is enumerated once and contributes its gapped child pairs as nodes.
    """
    target_gap = to_rational(target_gap)
    if target_gap <= 0:
        raise DomainError("target_gap must be positive")
    if _single_point(spec):
        return UpperBoundResult(SlrValue(Fraction(0), EXACT_UPPER), SlrValue(Fraction(0), EXACT_LOWER),
                                None, 0, True)
    _check_reducible(spec)
    search = _Search(spec)
    n = spec.n_cells
    top = ROOT.children(spec)
    junctions = [(top[k], top[k + 1]) for k in range(n - 1)]
    for i in range(n):
        for j in range(i + 2, n):
            search.push(top[i], top[j])
    seen = set()
    while junctions:
        a, b = junctions.pop(0)
        key = _junction_key(a, b)
        if key in seen:
            continue
        seen.add(key)
        kids_a, kids_b = a.children(spec), b.children(spec)
        for i, ca in enumerate(kids_a):
            for j, cb in enumerate(kids_b):
                if i == n - 1 and j == 0:
                    continue
                search.push(ca, cb)
        junctions.append((kids_a[-1], kids_b[0]))
        if len(seen) > 10_000:
            raise BudgetExhausted("junction types do not close up", partial=search)
    if search.witness is None:
        raise BudgetExhausted("no valid bound could be formed", partial=search)
    while search.heap and search.nodes < budget:
        if search.top() - search.lower <= target_gap or not search.heap:
            break
        search.expand()
    upper = search.top()
    converged = upper - search.lower <= target_gap
    if not converged:
        log.warning("branch and bound stopped at budget: gap %s", approx(upper - search.lower))
    return UpperBoundResult(SlrValue(upper, EXACT_UPPER), SlrValue(search.lower, EXACT_LOWER),
                            search.witness, search.nodes, converged, len(seen))


@dataclass
class BoundsResult:
    curve: str
    lower: SlrValue
    upper: SlrValue
    witness: WitnessPair
    depth: int
    scan_depth: int
    lower_source: str
    nodes_expanded: int
    converged: bool

    def to_json(self, with_approx: bool = True) -> dict:
        out = {
            "curve": self.curve,
            "depth": self.depth,
            "scan_depth": self.scan_depth,
            "lower": fmt(self.lower.value),
            "upper": fmt(self.upper.value),
            "witness": self.witness.to_json(),
            "lower_source": self.lower_source,
            "nodes_expanded": self.nodes_expanded,
            "converged": self.converged,
        }
        if with_approx:
            out["approx"] = {"lower": approx(self.lower.value), "upper": approx(self.upper.value)}
        return out


def slr_bounds(spec: SelfSimilarCurveSpec, target_gap, max_depth: int = 5,
               budget: int = 200_000) -> BoundsResult:
    """Bracket the ratio of ``spec`` between an exact lower and upper bound.

    Vertex scans run at depth 1, 2, ... up to ``max_depth``; the branch and
    bound supplies the upper bound together with its own vertex witness
    (usually from a deeper level than is practical to scan). The lower
    bound is the better of the two.
    """
    target_gap = to_rational(target_gap)
    if target_gap <= 0:
        raise DomainError("target_gap must be positive")
    ub = slr_upper_bound(spec, target_gap, budget)
    upper = ub.upper.value
    lower, witness, depth, source = None, None, 0, ""
    for d in range(1, max_depth + 1):
        value, w = pairwise_slr_lower(vertices(spec, d))
        depth = d
        if lower is None or value.value > lower:
            lower, witness, source = value.value, w, f"vertices(depth={d})"
        if upper - max(lower, ub.lower.value) <= target_gap:
            break
    if ub.witness is not None and ub.lower.value > lower:
        lower, witness, source = ub.lower.value, ub.witness, "branch-and-bound cell ends"
    assert lower <= upper
    wdepth = max(vertex_depth(spec, witness.t1) or 0, vertex_depth(spec, witness.t2) or 0)
    return BoundsResult(spec.name, SlrValue(lower, EXACT_LOWER), SlrValue(upper, EXACT_UPPER),
                        witness, wdepth, depth, source, ub.nodes_expanded, upper - lower <= target_gap)
