"""Discrete ratio of linear orderings of an m x n lattice and exact optimum search.

The discrete ratio of an ordering is max over index pairs i < j of the
squared Euclidean distance between the lattice points divided by j - i,
in raw lattice units.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .rational import fmt
from .slr import max_pair_ratio

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class GridOrdering:
    rows: int
    cols: int
    order: tuple[tuple[int, int], ...]

    def __post_init__(self):
        order = tuple((int(r), int(c)) for r, c in self.order)
        object.__setattr__(self, "order", order)
        if self.rows < 1 or self.cols < 1:
            raise DomainError("grid dimensions must be positive")
        expected = {(r, c) for r in range(self.rows) for c in range(self.cols)}
        if len(order) != len(expected) or set(order) != expected:
            raise DomainError("ordering is not a permutation of the grid points")


class DiscreteRatio(NamedTuple):
    value: Fraction
    witness: tuple[int, int]


def discrete_ratio(ordering: GridOrdering) -> DiscreteRatio:
    if len(ordering.order) < 2:
        raise DomainError("need at least two lattice points")
    arr = np.array(ordering.order, dtype=np.int64)
    value, i, j = max_pair_ratio(arr[:, 0], arr[:, 1], np.arange(len(arr), dtype=np.int64))
    return DiscreteRatio(value, (i, j))


def boustrophedon(rows: int, cols: int, by_columns: bool = False) -> GridOrdering:
    if by_columns:
        order = [(r if c % 2 == 0 else rows - 1 - r, c) for c in range(cols) for r in range(rows)]
    else:
        order = [(r, c if r % 2 == 0 else cols - 1 - c) for r in range(rows) for c in range(cols)]
    return GridOrdering(rows, cols, tuple(order))


def grid_symmetries(rows: int, cols: int):
    """Maps (r, c) -> (r', c') preserving the grid: D4 when square, else the Klein group."""
    m, n = rows - 1, cols - 1
    syms = [
        lambda r, c: (r, c),
        lambda r, c: (m - r, c),
        lambda r, c: (r, n - c),
        lambda r, c: (m - r, n - c),
    ]
    if rows == cols:
        syms += [
            lambda r, c: (c, r),
            lambda r, c: (n - c, r),
            lambda r, c: (c, m - r),
            lambda r, c: (n - c, m - r),
        ]
    return syms


def first_point_orbits(rows: int, cols: int) -> list[tuple[int, int]]:
    """Row-major smallest representative of every symmetry orbit of grid points."""
    syms = grid_symmetries(rows, cols)
    reps = set()
    for r in range(rows):
        for c in range(cols):
            reps.add(min(s(r, c) for s in syms))
    return sorted(reps)


_STEP_OK = {
    None: lambda dr, dc: True,
    "king": lambda dr, dc: max(abs(dr), abs(dc)) == 1,
    "rook": lambda dr, dc: abs(dr) + abs(dc) == 1,
}


def _search_orbit(rows: int, cols: int, first: tuple[int, int], incumbent: Fraction,
                  budget: int, moves: str | None):
    """DFS over orderings starting at ``first``; only strictly better ones are kept.

    Returns ``(value, order, nodes, complete)``; ``value`` is None when
    nothing beat ``incumbent``.
    """
    points = [(r, c) for r in range(rows) for c in range(cols)]
    total = len(points)
    step_ok = _STEP_OK[moves]
    inc_num, inc_den = incumbent.numerator, incumbent.denominator
    best_order = None
    best_value = None
    nodes = 0
    order = [first]
    used = {first}
    # running max ratio of the partial ordering, as a fraction (num, den)
    stack_max = [(0, 1)]

    def dfs() -> bool:
        nonlocal nodes, inc_num, inc_den, best_order, best_value
        L = len(order)
        if L == total:
            num, den = stack_max[-1]
            best_value = Fraction(num, den)
            inc_num, inc_den = best_value.numerator, best_value.denominator
            best_order = tuple(order)
            return True
        last = order[-1]
        for q in points:
            if q in used or not step_ok(q[0] - last[0], q[1] - last[1]):
                continue
            nodes += 1
            if nodes > budget:
                return False
            mnum, mden = stack_max[-1]
            ok = True
            for i, p in enumerate(order):
                dr, dc = p[0] - q[0], p[1] - q[1]
                d2 = dr * dr + dc * dc
                gap = L - i
                # prune when d2 / gap >= incumbent
                if d2 * inc_den >= inc_num * gap:
                    ok = False
                    break
                if d2 * mden > mnum * gap:
                    mnum, mden = d2, gap
            if not ok:
                continue
            order.append(q)
            used.add(q)
            stack_max.append((mnum, mden))
            finished = dfs()
            stack_max.pop()
            used.discard(q)
            order.pop()
            if not finished:
                return False
        return True

    complete = dfs()
    return best_value, best_order, nodes, complete


@dataclass
class OptimumResult:
    best: DiscreteRatio
    ordering: GridOrdering
    proven: bool
    nodes: int

    def to_json(self) -> dict:
        return {"m": self.ordering.rows, "n": self.ordering.cols,
                "optimum": fmt(self.best.value),
                "ordering": [list(p) for p in self.ordering.order],
                "witness": list(self.best.witness),
                "proven": self.proven, "nodes": self.nodes}


def optimal_ordering(m: int, n: int, budget: int = DEFAULT_BUDGET, moves: str | None = None,
                     workers: int = 1) -> OptimumResult:
    """Exact minimum discrete ratio over orderings of the m x n grid.

    The first point is fixed to one representative per symmetry orbit and
    each orbit is searched depth first, seeded with the better boustrophedon
    ordering as incumbent. Orbits run independently, each with the full
    budget, so the answer does not depend on ``workers``. Equal optima are
    resolved in favour of the earliest orbit, then the earliest ordering in
    row-major DFS order.
    """
    if m < 1 or n < 1 or m * n < 2:
        raise DomainError("need m, n >= 1 and m*n >= 2")
    if moves not in _STEP_OK:
        raise DomainError(f"unknown move restriction {moves!r}")
    seeds = [boustrophedon(m, n), boustrophedon(m, n, by_columns=True)]
    seed = min(seeds, key=lambda o: discrete_ratio(o).value)
    incumbent = discrete_ratio(seed).value
    orbits = first_point_orbits(m, n)
    args = [(m, n, first, incumbent, budget, moves) for first in orbits]
    if workers > 1 and len(orbits) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_orbit, *zip(*args)))
    else:
        results = [_search_orbit(*a) for a in args]
    best_value, best_order = incumbent, seed.order
    nodes, proven = 0, True
    for value, order, k_nodes, complete in results:
        nodes += k_nodes
        proven = proven and complete
        if value is not None and value < best_value:
            best_value, best_order = value, order
    ordering = GridOrdering(m, n, best_order)
    best = discrete_ratio(ordering)
    assert best.value == best_value
    return OptimumResult(best, ordering, proven, nodes)


def random_ordering(m: int, n: int, rng: np.random.Generator) -> GridOrdering:
    pts = [(r, c) for r in range(m) for c in range(n)]
    idx = rng.permutation(len(pts))
    return GridOrdering(m, n, tuple(pts[i] for i in idx))


def apply_symmetry(ordering: GridOrdering, sym) -> GridOrdering:
    return GridOrdering(ordering.rows, ordering.cols, tuple(sym(r, c) for r, c in ordering.order))

