"""Exact curve models: sampled polylines and self-similar square-filling curves.

A self-similar curve is given by an ordered list of affine sub-maps, each
sending the unit square onto one cell, and a time weight per sub-map. The
curve spends ``time_weights[k]`` of the unit interval inside cell ``k`` and
recursion inside every cell repeats the whole pattern.
"""

from __future__ import annotations

import json
from dataclasses import InitVar, dataclass, field
from fractions import Fraction
from itertools import accumulate
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, NotVisitedError, SpecError
from .rational import common_denominator, fmt, to_rational

ZERO = Fraction(0)
ONE = Fraction(1)


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    def __sub__(self, other: Point) -> Point:  # type: ignore[override]
        return Point(self.x - other.x, self.y - other.y)

    def norm_sq(self) -> Fraction:
        return self.x * self.x + self.y * self.y


def point(x, y) -> Point:
    return Point(to_rational(x), to_rational(y))


def dist_sq(p: Point, q: Point) -> Fraction:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


class ParamSample(NamedTuple):
    t: Fraction
    p: Point


class VisitMoments(NamedTuple):
    first: Fraction
    last: Fraction


@dataclass(frozen=True)
class PolylineCurve:
    """Finite exact sample of a curve on [0, 1]."""

    samples: tuple[ParamSample, ...]

    def __post_init__(self):
        samples = tuple(ParamSample(to_rational(s[0]), point(*s[1])) for s in self.samples)
        object.__setattr__(self, "samples", samples)
        if len(samples) < 2:
            raise DomainError("a polyline curve needs at least two samples")
        if samples[0].t != 0 or samples[-1].t != 1:
            raise DomainError("sample times must start at 0 and end at 1")
        for a, b in zip(samples, samples[1:]):
            if not a.t < b.t:
                raise DomainError(f"sample times not strictly increasing at t={b.t}")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> list[Fraction]:
        return [s.t for s in self.samples]

    @property
    def points(self) -> list[Point]:
        return [s.p for s in self.samples]

    def integer_arrays(self):
        """Scale to integer coordinates and times for fast exact scans.

        Returns ``(X, Y, T, coord_den, time_den)`` with ``x = X / coord_den``
        and ``t = T / time_den``. Arrays are int64 when every derived
        quantity fits, otherwise Python-int object arrays.
        """
        pts = self.points
        cden = common_denominator([c for p in pts for c in p])
        tden = common_denominator(self.times)
        xs = [int(p.x * cden) for p in pts]
        ys = [int(p.y * cden) for p in pts]
        ts = [int(t * tden) for t in self.times]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
        # 16 links of squared span must fit, plus headroom for products
        small = 32 * span * span < 2**62 and max(ts) < 2**62
        dtype = np.int64 if small else object
        return (np.array(xs, dtype=dtype), np.array(ys, dtype=dtype),
                np.array(ts, dtype=dtype), cden, tden)


@dataclass(frozen=True)
class AffineMap:
    """``p -> [[a, b], [c, d]] p + (tx, ty)`` with exact coefficients."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    tx: Fraction
    ty: Fraction

    @classmethod
    def from_lists(cls, matrix, translation) -> AffineMap:
        (a, b), (c, d) = matrix
        tx, ty = translation
        return cls(*(to_rational(v) for v in (a, b, c, d, tx, ty)))

    def __call__(self, p: Point) -> Point:
        return Point(self.a * p.x + self.b * p.y + self.tx,
                     self.c * p.x + self.d * p.y + self.ty)

    def compose(self, inner: AffineMap) -> AffineMap:
        """Return ``self o inner``."""
        return AffineMap(
            self.a * inner.a + self.b * inner.c,
            self.a * inner.b + self.b * inner.d,
            self.c * inner.a + self.d * inner.c,
            self.c * inner.b + self.d * inner.d,
            self.a * inner.tx + self.b * inner.ty + self.tx,
            self.c * inner.tx + self.d * inner.ty + self.ty,
        )

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> AffineMap:
        det = self.det
        if det == 0:
            raise DomainError("singular affine map has no inverse")
        a, b, c, d = self.d / det, -self.b / det, -self.c / det, self.a / det
        return AffineMap(a, b, c, d, -(a * self.tx + b * self.ty), -(c * self.tx + d * self.ty))

    def similarity_ratio_sq(self) -> Fraction | None:
        """Squared scale factor if the map is a similarity, else None."""
        col1 = self.a * self.a + self.c * self.c
        col2 = self.b * self.b + self.d * self.d
        if col1 != col2 or self.a * self.b + self.c * self.d != 0:
            return None
        return col1

    @property
    def axis_aligned(self) -> bool:
        return (self.b == 0 and self.c == 0) or (self.a == 0 and self.d == 0)

    def unit_square_box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Bounding box ``(xlo, ylo, xhi, yhi)`` of the image of the unit square."""
        xs = (self.tx, self.tx + self.a, self.tx + self.b, self.tx + self.a + self.b)
        ys = (self.ty, self.ty + self.c, self.ty + self.d, self.ty + self.c + self.d)
        return min(xs), min(ys), max(xs), max(ys)

    def to_json(self) -> dict:
        return {"matrix": [[fmt(self.a), fmt(self.b)], [fmt(self.c), fmt(self.d)]],
                "translation": [fmt(self.tx), fmt(self.ty)]}


IDENTITY = AffineMap(ONE, ZERO, ZERO, ONE, ZERO, ZERO)


@dataclass(frozen=True)
class SelfSimilarCurveSpec:
    sub_maps: tuple[AffineMap, ...]
    time_weights: tuple[Fraction, ...]
    entry_point: Point
    exit_point: Point
    name: str = "custom"
    check_coverage: InitVar[bool] = True
    coverage: str = field(default="unchecked", compare=False)

    def __post_init__(self, check_coverage: bool):
        object.__setattr__(self, "sub_maps", tuple(self.sub_maps))
        object.__setattr__(self, "time_weights", tuple(to_rational(w) for w in self.time_weights))
        object.__setattr__(self, "entry_point", point(*self.entry_point))
        object.__setattr__(self, "exit_point", point(*self.exit_point))
        self._validate()
        if check_coverage:
            status = coverage_status(self)
            if status == "fails":
                raise SpecError("coverage", "sub-map images do not tile the unit square")
            object.__setattr__(self, "coverage", status)

    def _validate(self) -> None:
        maps, weights = self.sub_maps, self.time_weights
        if not maps:
            raise SpecError("sub_maps", "at least one sub-map is required")
        if len(maps) != len(weights):
            raise SpecError("weights_count", f"{len(maps)} sub-maps but {len(weights)} time weights")
        if any(w <= 0 for w in weights):
            raise SpecError("weights_positive", "every time weight must be positive")
        if sum(weights) != 1:
            raise SpecError("weights_sum", f"time weights sum to {sum(weights)}, not 1")
        for k, m in enumerate(maps):
            xlo, ylo, xhi, yhi = m.unit_square_box()
            if xlo < 0 or ylo < 0 or xhi > 1 or yhi > 1:
                raise SpecError("contained", f"sub-map {k} leaves the unit square")
        for k in range(len(maps) - 1):
            if maps[k](self.exit_point) != maps[k + 1](self.entry_point):
                raise SpecError("continuity", f"cells {k} and {k + 1} do not meet")
        if maps[0](self.entry_point) != self.entry_point:
            raise SpecError("entry", "first cell does not start at the entry point")
        if maps[-1](self.exit_point) != self.exit_point:
            raise SpecError("exit", "last cell does not end at the exit point")

    @property
    def n_cells(self) -> int:
        return len(self.sub_maps)

    @property
    def cumulative_times(self) -> list[Fraction]:
        """Start times of the cells followed by 1."""
        return [ZERO, *accumulate(self.time_weights)]

    def to_json(self) -> dict:
        return {
            "sub_maps": [m.to_json() for m in self.sub_maps],
            "time_weights": [fmt(w) for w in self.time_weights],
            "entry": [fmt(self.entry_point.x), fmt(self.entry_point.y)],
            "exit": [fmt(self.exit_point.x), fmt(self.exit_point.y)],
        }


def coverage_status(spec: SelfSimilarCurveSpec) -> str:
    """``"verified"``, ``"unverified"`` (non axis-aligned maps) or ``"fails"``."""
    if not all(m.axis_aligned for m in spec.sub_maps):
        return "unverified"
    boxes = [m.unit_square_box() for m in spec.sub_maps]
    area = sum((b[2] - b[0]) * (b[3] - b[1]) for b in boxes)
    if area != 1:
        return "fails"
    for i, p in enumerate(boxes):
        for q in boxes[i + 1:]:
            if min(p[2], q[2]) > max(p[0], q[0]) and min(p[3], q[3]) > max(p[1], q[1]):
                return "fails"
    return "verified"


def spec_from_json(data: dict, name: str = "custom") -> SelfSimilarCurveSpec:
    try:
        maps = [AffineMap.from_lists(m["matrix"], m["translation"]) for m in data["sub_maps"]]
        weights = [to_rational(w) for w in data["time_weights"]]
        entry = point(*data["entry"])
        exit_ = point(*data["exit"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("schema", str(exc)) from exc
    return SelfSimilarCurveSpec(tuple(maps), tuple(weights), entry, exit_, name=name)


def load_spec(path: str | Path) -> SelfSimilarCurveSpec:
    path = Path(path)
    with path.open() as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError("schema", f"{path}: {exc}") from exc
    return spec_from_json(data, name=path.stem)


def eval_curve(spec: SelfSimilarCurveSpec, t, depth: int) -> Point:
    """Image of ``t`` under ``depth`` levels of recursion, exactly.

    Cell boundaries resolve to the exact curve point (the shared corner);
    otherwise, when depth runs out, the entry point of the innermost cell
    is returned, which is within one cell diameter of the true image.
    """
    t = to_rational(t)
    if not 0 <= t <= 1:
        raise DomainError(f"t={t} outside [0, 1]")
    if depth < 1:
        raise DomainError("depth must be >= 1")
    cum = spec.cumulative_times
    m = IDENTITY
    for _ in range(depth):
        if t == 0:
            return m(spec.entry_point)
        if t == 1:
            return m(spec.exit_point)
        # ties at a boundary go to the earlier cell
        k = next(i for i in range(spec.n_cells) if t <= cum[i + 1])
        t = (t - cum[k]) / spec.time_weights[k]
        m = m.compose(spec.sub_maps[k])
    if t == 1:
        return m(spec.exit_point)
    return m(spec.entry_point)


def vertex_depth(spec: SelfSimilarCurveSpec, t, limit: int = 64) -> int | None:
    """Smallest depth at which ``t`` is a vertex time (0 for t in {0, 1})."""
    t = to_rational(t)
    cum = spec.cumulative_times
    for d in range(limit + 1):
        if t == 0 or t == 1:
            return d
        k = next(i for i in range(spec.n_cells) if t <= cum[i + 1])
        t = (t - cum[k]) / spec.time_weights[k]
    return None


@dataclass(frozen=True)
class Cell:
    """One cell of the recursion tree: composite map, start time, duration."""

    path: tuple[int, ...]
    map: AffineMap
    t0: Fraction
    w: Fraction

    def children(self, spec: SelfSimilarCurveSpec) -> list[Cell]:
        out = []
        t = self.t0
        for k, (m, wk) in enumerate(zip(spec.sub_maps, spec.time_weights)):
            out.append(Cell(self.path + (k,), self.map.compose(m), t, self.w * wk))
            t += self.w * wk
        return out


ROOT = Cell((), IDENTITY, ZERO, ONE)


def cells_at_depth(spec: SelfSimilarCurveSpec, depth: int) -> list[Cell]:
    cells = [ROOT]
    for _ in range(depth):
        cells = [c for cell in cells for c in cell.children(spec)]
    return cells


def vertices(spec: SelfSimilarCurveSpec, depth: int) -> PolylineCurve:
    """Cell entry points at ``depth`` plus the global exit point."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    cells = cells_at_depth(spec, depth)
    samples = [ParamSample(c.t0, c.map(spec.entry_point)) for c in cells]
    samples.append(ParamSample(ONE, spec.exit_point))
    return PolylineCurve(tuple(samples))


def first_last_moments(curve: PolylineCurve, target: Point, tol=0) -> VisitMoments:
    tol = to_rational(tol)
    if tol < 0:
        raise DomainError("tolerance must be non-negative")
    target = point(*target)
    hits = [s.t for s in curve.samples if dist_sq(s.p, target) <= tol * tol]
    if not hits:
        raise NotVisitedError(f"no sample within {tol} of {target}")
    return VisitMoments(min(hits), max(hits))


# Catalog -------------------------------------------------------------------

def _edge_map(entry: Point, exit_: Point, cell_lo: Point, scale: Fraction) -> AffineMap:
    """Similarity sending (0,0)->entry and (1,0)->exit, unit square onto the cell."""
    ux, uy = (exit_.x - entry.x) / scale, (exit_.y - entry.y) / scale
    for vx, vy in ((-uy, ux), (uy, -ux)):
        m = AffineMap(ux * scale, vx * scale, uy * scale, vy * scale, entry.x, entry.y)
        if m.unit_square_box() == (cell_lo.x, cell_lo.y, cell_lo.x + scale, cell_lo.y + scale):
            return m
    raise SpecError("catalog", "entry/exit pair does not fit its cell")


def _diag_map(entry: Point, exit_: Point, scale: Fraction) -> AffineMap:
    """Axis-aligned map sending (0,0)->entry and (1,1)->exit."""
    sx = (exit_.x - entry.x)
    sy = (exit_.y - entry.y)
    assert abs(sx) == scale and abs(sy) == scale
    return AffineMap(sx, ZERO, ZERO, sy, entry.x, entry.y)


def _hilbert() -> SelfSimilarCurveSpec:
    h = Fraction(1, 2)
    maps = (
        AffineMap(ZERO, h, h, ZERO, ZERO, ZERO),
        AffineMap(h, ZERO, ZERO, h, ZERO, h),
        AffineMap(h, ZERO, ZERO, h, h, h),
        AffineMap(ZERO, -h, -h, ZERO, ONE, h),
    )
    return SelfSimilarCurveSpec(maps, (Fraction(1, 4),) * 4, Point(ZERO, ZERO),
                                Point(ONE, ZERO), name="hilbert")


def _peano9() -> SelfSimilarCurveSpec:
    s = Fraction(1, 3)
    # corner sequence of the classical Peano traversal in thirds
    corners = [(0, 0), (1, 1), (0, 2), (1, 3), (2, 2), (1, 1), (2, 0), (3, 1), (2, 2), (3, 3)]
    pts = [Point(Fraction(x, 3), Fraction(y, 3)) for x, y in corners]
    maps = tuple(_diag_map(pts[k], pts[k + 1], s) for k in range(9))
    return SelfSimilarCurveSpec(maps, (Fraction(1, 9),) * 9, Point(ZERO, ZERO),
                                Point(ONE, ONE), name="peano9")


def _serpentine9() -> SelfSimilarCurveSpec:
    s = Fraction(1, 3)
    cells = [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (1, 1), (1, 0), (2, 0)]
    corners = [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (3, 2), (2, 2), (2, 1), (2, 0), (3, 0)]
    pts = [Point(Fraction(x, 3), Fraction(y, 3)) for x, y in corners]
    maps = tuple(
        _edge_map(pts[k], pts[k + 1], Point(Fraction(cx, 3), Fraction(cy, 3)), s)
        for k, (cx, cy) in enumerate(cells)
    )
    return SelfSimilarCurveSpec(maps, (Fraction(1, 9),) * 9, Point(ZERO, ZERO),
                                Point(ONE, ZERO), name="serpentine9")


_CATALOG = {"hilbert": _hilbert, "peano9": _peano9, "serpentine9": _serpentine9}
CATALOG_NAMES = tuple(_CATALOG)


def catalog(name: str) -> SelfSimilarCurveSpec:
    try:
        return _CATALOG[name]()
    except KeyError:
        raise LookupError(f"unknown curve {name!r}; choose from {', '.join(_CATALOG)}") from None
