"""Diameter-disk containment and antipodal visit checks on sampled curves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .curves import Point, PolylineCurve, SelfSimilarCurveSpec, dist_sq, point
from .errors import DomainError, NoWitnessError, UnderSampledError
from .rational import fmt, to_rational


class Disk(NamedTuple):
    center: Point
    radius_sq: Fraction


def diameter_disk(p: Point, q: Point) -> Disk:
    center = Point((p.x + q.x) / 2, (p.y + q.y) / 2)
    return Disk(center, dist_sq(p, q) / 4)


@dataclass(frozen=True)
class Violation:
    index: int
    t: Fraction
    p: Point
    excess: Fraction  # squared distance to center minus squared radius
    on_boundary: bool = False
    ratios: tuple[Fraction, Fraction] | None = None

    def to_json(self) -> dict:
        out = {"index": self.index, "t": fmt(self.t), "p": [fmt(self.p.x), fmt(self.p.y)],
               "excess": fmt(self.excess), "on_boundary": self.on_boundary}
        if self.ratios is not None:
            out["ratios"] = [fmt(r) for r in self.ratios]
        return out


@dataclass
class ContainmentReport:
    disk: Disk
    violations: list[Violation]
    boundary: list[Violation]

    @property
    def contained(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        c = self.disk.center
        return {"center": [fmt(c.x), fmt(c.y)], "radius_sq": fmt(self.disk.radius_sq),
                "contained": self.contained,
                "violations": [v.to_json() for v in self.violations],
                "boundary": [v.to_json() for v in self.boundary]}


def circle_containment_check(curve: PolylineCurve, a_idx: int, b_idx: int) -> ContainmentReport:
    """Samples strictly between ``a_idx`` and ``b_idx`` outside the diameter disk.

    Samples exactly on the circle are listed separately together with the
    ratios of the two sub-pairs they split the endpoint pair into; the
    maximality of those ratios is reported, not enforced.
    """
    if not 0 <= a_idx < b_idx < len(curve):
        raise DomainError(f"need 0 <= a_idx < b_idx < {len(curve)}, got {a_idx}, {b_idx}")
    sa, sb = curve.samples[a_idx], curve.samples[b_idx]
    disk = diameter_disk(sa.p, sb.p)
    violations, boundary = [], []
    for k in range(a_idx + 1, b_idx):
        s = curve.samples[k]
        excess = dist_sq(s.p, disk.center) - disk.radius_sq
        if excess > 0:
            violations.append(Violation(k, s.t, s.p, excess))
        elif excess == 0:
            ratios = (dist_sq(sa.p, s.p) / (s.t - sa.t), dist_sq(s.p, sb.p) / (sb.t - s.t))
            boundary.append(Violation(k, s.t, s.p, excess, True, ratios))
    return ContainmentReport(disk, violations, boundary)


@dataclass(frozen=True)
class AntipodeWitness:
    boundary_point: Point
    antipode: Point
    e_first: Fraction
    f_time: Fraction
    e_last: Fraction

    def __post_init__(self):
        if not self.e_first <= self.f_time <= self.e_last:
            raise DomainError("witness times out of order")

    def to_json(self) -> dict:
        return {"boundary_point": [fmt(self.boundary_point.x), fmt(self.boundary_point.y)],
                "antipode": [fmt(self.antipode.x), fmt(self.antipode.y)],
                "e_first": fmt(self.e_first), "f_time": fmt(self.f_time),
                "e_last": fmt(self.e_last)}


def _visit_times(curve: PolylineCurve, target: Point, tol_sq: Fraction) -> list[Fraction]:
    return [s.t for s in curve.samples if dist_sq(s.p, target) <= tol_sq]


def antipode_pair_find(curve: PolylineCurve, boundary: Sequence[Point], center: Point,
                       tol=0) -> AntipodeWitness:
    """First boundary point whose visit span contains a visit of its antipode.

    A boundary point counts as visited at every sample within Euclidean
    distance ``tol``. Every boundary point and its antipode must be
    visited; otherwise the sample is too coarse to say anything.
    """
    tol = to_rational(tol)
    if tol < 0:
        raise DomainError("tolerance must be non-negative")
    tol_sq = tol * tol
    center = point(*center)
    boundary = [point(*q) for q in boundary]
    visits = {}
    for q in boundary:
        anti = Point(2 * center.x - q.x, 2 * center.y - q.y)
        for r in (q, anti):
            if r not in visits:
                times = _visit_times(curve, r, tol_sq)
                if not times:
                    raise UnderSampledError(r, f"boundary point ({fmt(r.x)}, {fmt(r.y)}) "
                                               f"has no sample within {fmt(tol)}")
                visits[r] = times
    for q in boundary:
        anti = Point(2 * center.x - q.x, 2 * center.y - q.y)
        first, last = min(visits[q]), max(visits[q])
        inside = [t for t in visits[anti] if first <= t <= last]
        if inside:
            return AntipodeWitness(q, anti, first, min(inside), last)
    raise NoWitnessError("no antipodal witness at this sampling; refine the curve")


def square_boundary(steps: int) -> list[Point]:
    """Points k/steps along the unit-square boundary, counter-clockwise from (0,0)."""
    if steps < 1:
        raise DomainError("steps must be positive")
    out = []
    for k in range(steps):
        out.append(Point(Fraction(k, steps), Fraction(0)))
    for k in range(steps):
        out.append(Point(Fraction(1), Fraction(k, steps)))
    for k in range(steps):
        out.append(Point(Fraction(steps - k, steps), Fraction(1)))
    for k in range(steps):
        out.append(Point(Fraction(0), Fraction(steps - k, steps)))
    return out


def _sides(p: Point) -> set[str]:
    sides = set()
    if p.x == 0:
        sides.add("left")
    if p.x == 1:
        sides.add("right")
    if p.y == 0:
        sides.add("bottom")
    if p.y == 1:
        sides.add("top")
    return sides


_OPPOSITE = {"left": "right", "right": "left", "bottom": "top", "top": "bottom"}


def opposite_sides_check(spec: SelfSimilarCurveSpec) -> bool:
    """Whether entry and exit lie on opposite closed sides of the unit square."""
    for name, p in (("entry", spec.entry_point), ("exit", spec.exit_point)):
        if not (0 <= p.x <= 1 and 0 <= p.y <= 1) or not _sides(p):
            raise DomainError(f"{name} point ({fmt(p.x)}, {fmt(p.y)}) is not on the boundary")
    exit_sides = _sides(spec.exit_point)
    return any(_OPPOSITE[s] in exit_sides for s in _sides(spec.entry_point))
