"""Symbolic chain configurations in the unit square and their exact minima.

Vertices are fixed at A=(0,0), B=(0,1), C=(1,1), D=(1,0). Two free points
carry the unknowns: E=(1/2 - x, 0) on side AD and G=(1/2, y) on the vertical
midline. The squared-length sum of a chain through these points is a
quadratic form in (x, y); its exact minimum over the box is what each case
asserts.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import DomainError
from .rational import fmt, to_rational

F = Fraction


class Affine(NamedTuple):
    """``c0 + cx*x + cy*y``."""

    c0: Fraction
    cx: Fraction = F(0)
    cy: Fraction = F(0)

    def __sub__(self, other: Affine) -> Affine:  # type: ignore[override]
        return Affine(self.c0 - other.c0, self.cx - other.cx, self.cy - other.cy)


class SymbolicPoint(NamedTuple):
    label: str
    x: Affine
    y: Affine


@dataclass(frozen=True)
class QuadraticForm:
    """``xx*x^2 + xy*x*y + yy*y^2 + x*x + y*y + c``."""

    xx: Fraction = F(0)
    xy: Fraction = F(0)
    yy: Fraction = F(0)
    x: Fraction = F(0)
    y: Fraction = F(0)
    c: Fraction = F(0)

    def __add__(self, other: QuadraticForm) -> QuadraticForm:
        return QuadraticForm(*(a + b for a, b in zip(self.coefficients(), other.coefficients())))

    def coefficients(self) -> tuple[Fraction, ...]:
        return (self.xx, self.xy, self.yy, self.x, self.y, self.c)

    def __call__(self, x, y) -> Fraction:
        return (self.xx * x * x + self.xy * x * y + self.yy * y * y
                + self.x * x + self.y * y + self.c)

    @property
    def convex(self) -> bool:
        return self.xx >= 0 and self.yy >= 0 and 4 * self.xx * self.yy - self.xy ** 2 >= 0

    def critical_point(self) -> tuple[Fraction, Fraction] | None:
        """Unique stationary point, or None when the Hessian is singular."""
        det = 4 * self.xx * self.yy - self.xy ** 2
        if det == 0:
            return None
        # [2xx xy; xy 2yy] (x, y) = (-x, -y)
        px = (-self.x * 2 * self.yy + self.xy * self.y) / det
        py = (-self.y * 2 * self.xx + self.xy * self.x) / det
        return px, py

    def to_json(self) -> dict:
        names = ("xx", "xy", "yy", "x", "y", "1")
        return {n: fmt(v) for n, v in zip(names, self.coefficients())}

    def __str__(self) -> str:
        names = ("x^2", "x*y", "y^2", "x", "y", "")
        out = ""
        for v, n in zip(self.coefficients(), names):
            if not v:
                continue
            mag = abs(v)
            term = n if (mag == 1 and n) else (f"{mag}*{n}" if n else f"{mag}")
            out += (" - " if v < 0 else " + ") + term if out else ("-" if v < 0 else "") + term
        return out or "0"


def _square(e: Affine) -> QuadraticForm:
    return QuadraticForm(e.cx * e.cx, 2 * e.cx * e.cy, e.cy * e.cy,
                         2 * e.c0 * e.cx, 2 * e.c0 * e.cy, e.c0 * e.c0)


def expand_chain(chain: Sequence[SymbolicPoint]) -> QuadraticForm:
    """Exact sum of squared link lengths along ``chain``."""
    if len(chain) < 2:
        raise DomainError("a chain needs at least two points")
    for p in chain:
        if not (isinstance(p.x, Affine) and isinstance(p.y, Affine)):
            raise DomainError(f"point {p.label!r} has a non-affine coordinate")
    total = QuadraticForm()
    for a, b in zip(chain, chain[1:]):
        total = total + _square(b.x - a.x) + _square(b.y - a.y)
    return total


class Box(NamedTuple):
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def contains(self, x, y) -> bool:
        return self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi


def _min_1d(a: Fraction, b: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    """Minimizer of ``a t^2 + b t`` on [lo, hi] for a >= 0 (smallest on ties)."""
    if a > 0:
        return min(max(-b / (2 * a), lo), hi)
    return hi if b < 0 else lo


def minimize_form(form: QuadraticForm, box: Box) -> tuple[tuple[Fraction, Fraction], Fraction]:
    """Exact minimum of a convex quadratic form over a box.

    Candidates are the stationary point (if unique and inside), the
    minimizer along each of the four edges, and the corners. When the
    Hessian is singular the minimum set is a line or the whole plane, which
    always meets the boundary, so edges suffice. Ties go to the
    lexicographically smallest point.
    """
    if not form.convex:
        raise DomainError("form is not convex; refusing to minimize")
    if box.x_lo > box.x_hi or box.y_lo > box.y_hi:
        raise DomainError("empty domain")
    cands = []
    crit = form.critical_point()
    if crit is not None and box.contains(*crit):
        cands.append(crit)
    for y in (box.y_lo, box.y_hi):
        cands.append((_min_1d(form.xx, form.xy * y + form.x, box.x_lo, box.x_hi), y))
    for x in (box.x_lo, box.x_hi):
        cands.append((x, _min_1d(form.yy, form.xy * x + form.y, box.y_lo, box.y_hi)))
    cands += [(x, y) for x in (box.x_lo, box.x_hi) for y in (box.y_lo, box.y_hi)]
    best = min(cands, key=lambda p: (form(*p), p))
    return best, form(*best)


# Printed forms ---------------------------------------------------------------

class _Poly(dict):
    """Sparse bivariate polynomial ``{(i, j): coeff}`` for parsing printed forms."""

    def __add__(self, o):
        o = _lift(o)
        out = _Poly(self)
        for k, v in o.items():
            out[k] = out.get(k, F(0)) + v
        return out

    def __neg__(self):
        return _Poly({k: -v for k, v in self.items()})

    def __sub__(self, o):
        return self + (-_lift(o))

    def __mul__(self, o):
        o = _lift(o)
        out = _Poly()
        for (i, j), v in self.items():
            for (k, l), w in o.items():
                out[(i + k, j + l)] = out.get((i + k, j + l), F(0)) + v * w
        return out

    def __pow__(self, n: int):
        out = _lift(F(1))
        for _ in range(n):
            out = out * self
        return out


def _lift(v) -> _Poly:
    return v if isinstance(v, _Poly) else _Poly({(0, 0): F(v)})


_IMPLICIT_MUL = re.compile(r"(?<=[\d)a-z])\s*(?=[(a-z])|(?<=\))\s*(?=\d)")


def parse_form(text: str) -> QuadraticForm:
    """Parse a printed form such as ``(x^2+y^2)+2(1/4+y^2)`` exactly.

    Supports + - * / ^, parentheses, integer literals, the variables x and
    y and implicit multiplication. Numbers are exact rationals.
    """
    src = _IMPLICIT_MUL.sub("*", text.replace(" ", "")).replace("^", "**")
    tree = ast.parse(src, mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return _lift(F(node.value))
        if isinstance(node, ast.Name) and node.id in ("x", "y"):
            return _Poly({(1, 0) if node.id == "x" else (0, 1): F(1)})
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise DomainError("exponent must be a literal integer")
                return ev(node.left) ** node.right.value
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if set(right) - {(0, 0)}:
                    raise DomainError("division by a non-constant")
                return left * _lift(1 / right.get((0, 0), F(0)))
        raise DomainError(f"unsupported syntax in form: {ast.dump(node)}")

    poly = ev(tree)
    if any(i + j > 2 for (i, j), v in poly.items() if v):
        raise DomainError("printed form has degree above 2")
    g = lambda i, j: poly.get((i, j), F(0))  # noqa: E731
    return QuadraticForm(g(2, 0), g(1, 1), g(0, 2), g(1, 0), g(0, 1), g(0, 0))


# Built-in cases ----------------------------------------------------------------

_X = Affine(F(0), F(1), F(0))
_HALF_MINUS_X = Affine(F(1, 2), F(-1), F(0))
_Y = Affine(F(0), F(0), F(1))


def _const(label: str, x, y) -> SymbolicPoint:
    return SymbolicPoint(label, Affine(F(x)), Affine(F(y)))


POINTS = {
    "A": _const("A", 0, 0),
    "B": _const("B", 0, 1),
    "C": _const("C", 1, 1),
    "D": _const("D", 1, 0),
    "E": SymbolicPoint("E", _HALF_MINUS_X, Affine(F(0))),
    "G": SymbolicPoint("G", Affine(F(1, 2)), _Y),
}


def chain_from_letters(letters: str, points: dict | None = None) -> list[SymbolicPoint]:
    points = points or POINTS
    return [points[ch] for ch in letters]


@dataclass(frozen=True)
class QuadraticFormCase:
    name: str
    letters: str
    chain: tuple[SymbolicPoint, ...]
    domain: Box
    expected_min: Fraction
    expected_argmin: tuple | None = None
    printed: str | None = None
    lower_bound_only: bool = False
    note: str = ""


_E_BOX = Box(F(-1, 2), F(1, 2), F(0), F(1))


def _case(name, letters, expected_min, argmin=None, printed=None, lower_only=False, note=""):
    return QuadraticFormCase(name, letters, tuple(chain_from_letters(letters)), _E_BOX,
                             F(expected_min), argmin, printed, lower_only, note)


def builtin_cases() -> list[QuadraticFormCase]:
    # opposite-sides configuration: S=A, then A O B C O D, E=D; O=(x, 0)
    soe_points = dict(POINTS, O=SymbolicPoint("O", _X, Affine(F(0))), S=POINTS["A"], Z=POINTS["D"])
    soe = QuadraticFormCase(
        "SOE", "SAOBCODE", tuple(chain_from_letters("SAOBCODZ", soe_points)),
        Box(F(0), F(1), F(0), F(1)), F(4), (F(1, 2), None),
        "0+2x^2+1+1+1+2(1-x)^2+0",
        note="S=A and end point E=D; O=(x,0) on AD",
    )
    third, quarter = F(1, 3), F(1, 4)
    return [
        soe,
        _case("AEBCDE", "AEBCDE", F(11, 3), printed="3x^2-x+3+3/4"),
        _case("ABECDE", "ABECDE", 4, lower_only=True, note="no printed form; checked min >= 4"),
        _case("ABECED", "ABECED", 4, lower_only=True, note="no printed form; checked min >= 4"),
        _case("AEBCED", "AEBCED", 4, lower_only=True, note="no printed form; checked min >= 4"),
        _case("1a", "GEAGBCDE", F(11, 3), (F(0), third),
              "(x^2+y^2)+(1/2-x)^2+(1/4+y^2)+(1/4+(1-y)^2)+2+(1/2+x)^2"),
        _case("1b", "GEABGCDE", F(11, 3), (F(0), 2 * third),
              "(x^2+y^2)+(1/2-x)^2+1+(1/4+(1-y)^2)+(1/4+(1-y)^2)+1+(1/2+x)^2"),
        _case("1c", "GEABCGDE", F(11, 3), (F(0), third),
              "(x^2+y^2)+(1/2-x)^2+2+(1/4+(1-y)^2)+(1/4+y^2)+(1/2+x)^2",
              note="printed label 1b (second occurrence)"),
        _case("2a", "EGAGBCDE", F(29, 8), (-quarter, quarter),
              "(x^2+y^2)+2 (1/4+y^2)+(1/4+(1-y)^2)+2+(1/2+x)^2"),
        _case("2b", "EGABGCDE", F(31, 8), (-quarter, F(1, 2)),
              "(x^2+y^2)+(1/4+y^2)+1+2(1/4+(1-y)^2)+1+(1/2+x)^2"),
        _case("2c", "EGABCGDE", F(29, 8), (-quarter, quarter),
              "(x^2+y^2)+(1/4+y^2)+2+(1/4+(1-y)^2)+(1/4+y^2)+(1/2+x)^2",
              note="printed label 2b (second occurrence)"),
    ]


@dataclass
class CaseResult:
    case: QuadraticFormCase
    derived: QuadraticForm
    argmin: tuple[Fraction, Fraction]
    minimum: Fraction
    printed_match: bool | None
    critical_match: bool | None
    passed: bool
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        c = self.case
        exp_arg = None
        if c.expected_argmin is not None:
            exp_arg = [fmt(v) if v is not None else None for v in c.expected_argmin]
        return {
            "name": c.name,
            "chain": c.letters,
            "derived_form": self.derived.to_json(),
            "printed_form": c.printed,
            "printed_match": self.printed_match,
            "computed_argmin": [fmt(v) for v in self.argmin],
            "computed_min": fmt(self.minimum),
            "expected_min": ("≥ " if c.lower_bound_only else "") + fmt(c.expected_min),
            "expected_argmin": exp_arg,
            "mismatch": fmt(self.minimum - c.expected_min),
            "note": c.note,
            "pass": self.passed,
            "failures": self.failures,
        }


def verify_case(case: QuadraticFormCase, form: QuadraticForm | None = None) -> CaseResult:
    """Minimize the case's form and compare with its expected values.

    ``form`` overrides the form derived from the chain (fault injection).
    """
    derived = form if form is not None else expand_chain(case.chain)
    failures = []
    if not derived.convex:
        failures.append("form is not convex")
        return CaseResult(case, derived, (F(0), F(0)), F(0), None, None, False, failures)
    argmin, minimum = minimize_form(derived, case.domain)
    printed_match = None
    if case.printed is not None:
        printed_match = parse_form(case.printed) == derived
        if not printed_match:
            failures.append(f"derived form {derived} differs from printed {case.printed}")
    if case.lower_bound_only:
        if minimum < case.expected_min:
            failures.append(f"minimum {minimum} below claimed bound {case.expected_min}")
    elif minimum != case.expected_min:
        failures.append(f"minimum {minimum} != expected {case.expected_min} "
                        f"(mismatch {minimum - case.expected_min})")
    if case.expected_argmin is not None:
        for axis, got, want in zip("xy", argmin, case.expected_argmin):
            if want is not None and got != want:
                failures.append(f"argmin {axis}={got} != expected {want}")
    crit = derived.critical_point()
    critical_match = None
    if crit is not None and case.domain.contains(*crit):
        critical_match = tuple(crit) == tuple(argmin)
        if not critical_match:
            failures.append("interior stationary point differs from reported argmin")
    return CaseResult(case, derived, argmin, minimum, printed_match, critical_match,
                      not failures, failures)


LABEL_NOTE = ("sub-case labels are normalized to 1a/1b/1c and 2a/2b/2c in order of "
              "appearance; the source prints 1b and 2b twice")


def verify_all_cases(only: Sequence[str] | None = None) -> list[CaseResult]:
    cases = builtin_cases()
    if only:
        unknown = set(only) - {c.name for c in cases}
        if unknown:
            raise LookupError(f"unknown case(s): {', '.join(sorted(unknown))}")
        cases = [c for c in cases if c.name in only]
    return [verify_case(c) for c in cases]


def perturbed(case: QuadraticFormCase, offset) -> QuadraticForm:
    """The case's derived form with ``offset`` added to its constant term."""
    form = expand_chain(case.chain)
    return replace(form, c=form.c + to_rational(offset))
