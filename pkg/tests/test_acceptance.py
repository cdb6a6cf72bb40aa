"""Acceptance criteria, one test each. Every test prints a single PASS/FAIL line."""

import time
from contextlib import contextmanager
from fractions import Fraction as F

import numpy as np
import pytest

from oracles import brute_lattice_optimum
from synthetic import endpoint_dominant, pushed_out
from slrkit.cases import builtin_cases, expand_chain, parse_form, verify_case
from slrkit.certificates import Chain, best_chain, certificate_value, max_link_ratio
from slrkit.curves import CATALOG_NAMES, catalog, point, vertices
from slrkit.geometry import antipode_pair_find, circle_containment_check, opposite_sides_check, square_boundary
from slrkit.lattice import optimal_ordering
from slrkit.slr import pairwise_slr_lower, slr_upper_bound

FLOOR = F(29, 8)
# midpoint of the depth-5 vertex lower bound and the gap-1/20 upper bound, frozen from the first run
HILBERT_BRACKET_MIDPOINT = F(19419, 3641)
LATTICE_3X3_OPTIMUM = F(2)


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, limit_s, title):
        start = time.perf_counter()
        ok, detail = False, ""
        try:
            state = {}
            yield state
            elapsed = time.perf_counter() - start
            ok = elapsed < limit_s
            detail = state.get("detail", "")
            if not ok:
                detail += f" runtime {elapsed:.1f}s over {limit_s}s"
        except AssertionError as exc:
            detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
            raise
        finally:
            elapsed = time.perf_counter() - start
            with capsys.disabled():
                print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {title} "
                      f"({elapsed:.2f}s) {detail}".rstrip())
        assert ok, detail
    return run


def test_criterion_1_case_minima(criterion):
    expected = {
        "SOE": (F(4), (F(1, 2), None)),
        "AEBCDE": (F(11, 3), None),
        "1a": (F(11, 3), (F(0), F(1, 3))),
        "1b": (F(11, 3), (F(0), F(2, 3))),
        "1c": (F(11, 3), (F(0), F(1, 3))),
        "2a": (F(29, 8), (F(-1, 4), F(1, 4))),
        "2b": (F(31, 8), (F(-1, 4), F(1, 2))),
        "2c": (F(29, 8), (F(-1, 4), F(1, 4))),
    }
    with criterion(1, 1.0, "case suite exact minima") as st:
        cases = {c.name: c for c in builtin_cases()}
        for name, (minimum, argmin) in expected.items():
            r = verify_case(cases[name])
            assert r.passed, f"{name}: {r.failures}"
            assert r.minimum == minimum, f"{name}: min {r.minimum} != {minimum}"
            if argmin:
                for got, want in zip(r.argmin, argmin):
                    assert want is None or got == want, f"{name}: argmin {r.argmin} != {argmin}"
        st["detail"] = f"{len(expected)} minima exact"


def test_criterion_2_rederivation(criterion):
    with criterion(2, 1.0, "printed forms re-derived from chains") as st:
        checked = 0
        for case in builtin_cases():
            if case.printed is None:
                continue
            derived, printed = expand_chain(case.chain), parse_form(case.printed)
            assert derived == printed, f"{case.name}: derived {derived} vs printed {printed}"
            checked += 1
        assert checked == 8
        st["detail"] = f"{checked} forms match"


def test_criterion_3_chain_inequality(criterion):
    rng = np.random.default_rng(20261016)
    with criterion(3, 30.0, "chain inequality on 10000 random chains") as st:
        equal_cases = 0
        for _ in range(10_000):
            n = int(rng.integers(2, 9))
            steps = rng.integers(1, 50, size=n - 1)
            times = np.concatenate([[0], np.cumsum(steps)])
            coords = rng.integers(-20, 21, size=(n, 2))
            den = int(rng.integers(1, 13))
            chain = Chain(tuple((F(int(t), 7), (F(int(a), den), F(int(b), den)))
                                for t, (a, b) in zip(times, coords)))
            value = certificate_value(chain).value
            top = max_link_ratio(chain)[0]
            assert top >= value, f"max link {top} < value {value}"
            assert (top == value) == (len(set(chain.link_ratios())) == 1)
            equal_cases += top == value
        # constructed equal-ratio chains reach equality; one stretched step makes it strict
        for k in range(1, 200):
            q = [F(int(v), 3) for v in rng.integers(1, 9, size=int(rng.integers(2, 8)))]
            s = F(int(rng.integers(1, 6)), 2)
            t, x = F(0), F(0)
            nodes = [(t, (x, 0))]
            for qi in q:
                t, x = t + qi * qi, x + s * qi
                nodes.append((t, (x, 0)))
            chain = Chain(tuple(nodes))
            assert certificate_value(chain).value == max_link_ratio(chain)[0] == s * s
            j = 1 + k % len(q)
            stretched = Chain(tuple((tt + (F(1, 5) if i >= j else 0), p) for i, (tt, p) in enumerate(nodes)))
            assert certificate_value(stretched).value < max_link_ratio(stretched)[0]
        st["detail"] = f"{equal_cases} random equalities"


def test_criterion_4_hilbert_bracket(criterion):
    with criterion(4, 300.0, "Hilbert sound bracket (depth-5 lower, width <= 0.05)") as st:
        spec = catalog("hilbert")
        lower = pairwise_slr_lower(vertices(spec, 5))[0].value
        ub = slr_upper_bound(spec, F(1, 20))
        upper = ub.upper.value
        width = upper - lower
        st["detail"] = f"lower={float(lower):.6f} upper={float(upper):.6f} width={float(width):.6f}"
        assert lower > FLOOR and upper > FLOOR
        assert lower <= upper
        assert (lower + upper) / 2 == HILBERT_BRACKET_MIDPOINT
        assert width <= F(1, 20), f"bracket width {float(width):.4f} exceeds 0.05 ({st['detail']})"


def test_criterion_5_peano(criterion):
    with criterion(5, 120.0, "peano9 opposite sides and certificate > 4") as st:
        spec = catalog("peano9")
        assert opposite_sides_check(spec)
        cert = best_chain(vertices(spec, 3), 8)
        assert cert.value > 4, f"certificate {cert.value}"
        st["detail"] = f"certificate={cert.value}"


def test_criterion_6_universal_floor(criterion):
    with criterion(6, 300.0, "catalog certificates >= 3.5 at depth 4") as st:
        values = {}
        for name in CATALOG_NAMES:
            values[name] = best_chain(vertices(catalog(name), 4), 8).value
            assert values[name] >= F(7, 2), f"{name}: {values[name]}"
        st["detail"] = " ".join(f"{k}={float(v):.4f}" for k, v in values.items())


def test_criterion_7_lattice(criterion):
    with criterion(7, 60.0, "3x3 lattice optimum matches brute force") as st:
        res = optimal_ordering(3, 3)
        assert res.proven
        oracle = brute_lattice_optimum(3, 3)
        assert res.best.value == oracle == LATTICE_3X3_OPTIMUM, f"{res.best.value} vs {oracle}"
        st["detail"] = f"optimum={res.best.value}"


def test_criterion_8_geometry(criterion):
    rng = np.random.default_rng(8)
    with criterion(8, 30.0, "containment and antipode predicates") as st:
        for _ in range(100):
            curve = endpoint_dominant(rng)
            assert circle_containment_check(curve, 0, len(curve) - 1).contained
        for _ in range(100):
            curve, _k = pushed_out(rng)
            assert circle_containment_check(curve, 0, len(curve) - 1).violations
        center = point(F(1, 2), F(1, 2))
        for name, depth in (("hilbert", 4), ("peano9", 3)):
            w = antipode_pair_find(vertices(catalog(name), depth), square_boundary(16), center, F(1, 16))
            assert w.e_first <= w.f_time <= w.e_last
        st["detail"] = "200 synthetic curves, 2 antipode witnesses"
