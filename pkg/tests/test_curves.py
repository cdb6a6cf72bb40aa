import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from slrkit.curves import (
    AffineMap, PolylineCurve, SelfSimilarCurveSpec, cells_at_depth, catalog, eval_curve,
    first_last_moments, load_spec, point, spec_from_json, vertex_depth, vertices, CATALOG_NAMES,
)
from slrkit.errors import DomainError, NotVisitedError, SpecError


@pytest.fixture(scope="module")
def hilbert():
    return catalog("hilbert")


def test_hilbert_endpoints_and_midpoint(hilbert):
    assert eval_curve(hilbert, 0, 3) == point(0, 0)
    assert eval_curve(hilbert, 1, 3) == point(1, 0)
    assert eval_curve(hilbert, F(1, 2), 3) == point(F(1, 2), F(1, 2))


def test_hilbert_quarter_points(hilbert):
    # first-level cell junctions: left column middle, centre, right column middle
    assert eval_curve(hilbert, F(1, 4), 1) == point(0, F(1, 2))
    assert eval_curve(hilbert, F(3, 4), 1) == point(1, F(1, 2))


def test_eval_rejects_out_of_range(hilbert):
    with pytest.raises(DomainError):
        eval_curve(hilbert, F(5, 4), 2)
    with pytest.raises(DomainError):
        eval_curve(hilbert, -1, 2)
    with pytest.raises(DomainError):
        eval_curve(hilbert, 0.5, 2)


def test_vertex_counts():
    for name in CATALOG_NAMES:
        spec = catalog(name)
        for d in (1, 2, 3):
            assert len(vertices(spec, d)) == spec.n_cells ** d + 1


def test_hilbert_depth2_vertices(hilbert):
    curve = vertices(hilbert, 2)
    assert len(curve) == 17
    assert curve.times == [F(k, 16) for k in range(17)]
    for p in curve.points:
        assert 4 % p.x.denominator == 0 and 4 % p.y.denominator == 0
        assert 0 <= p.x <= 1 and 0 <= p.y <= 1


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_refinement_keeps_coarse_vertices(name):
    spec = catalog(name)
    coarse = {s.t: s.p for s in vertices(spec, 2).samples}
    fine = {s.t: s.p for s in vertices(spec, 3).samples}
    for t, p in coarse.items():
        assert fine[t] == p


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_eval_matches_vertices(name):
    spec = catalog(name)
    for d in (1, 2, 3):
        for s in vertices(spec, d).samples:
            assert eval_curve(spec, s.t, d) == s.p
            assert eval_curve(spec, s.t, d + 2) == s.p


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_consecutive_vertices_stay_within_a_cell(name):
    spec = catalog(name)
    d = 3
    side = F(1, round(spec.n_cells ** 0.5)) ** d
    curve = vertices(spec, d)
    for a, b in zip(curve.points, curve.points[1:]):
        assert (a.x - b.x) ** 2 + (a.y - b.y) ** 2 <= 2 * side * side


def test_vertex_depth(hilbert):
    assert vertex_depth(hilbert, 0) == 0
    assert vertex_depth(hilbert, F(1, 4)) == 1
    assert vertex_depth(hilbert, F(3, 16)) == 2
    assert vertex_depth(hilbert, F(1, 3), limit=20) is None


def test_cells_tile_time(hilbert):
    cells = cells_at_depth(hilbert, 2)
    assert cells[0].t0 == 0
    for a, b in zip(cells, cells[1:]):
        assert a.t0 + a.w == b.t0
    assert cells[-1].t0 + cells[-1].w == 1


def test_catalog_shapes():
    h, p, s = catalog("hilbert"), catalog("peano9"), catalog("serpentine9")
    assert (h.n_cells, p.n_cells, s.n_cells) == (4, 9, 9)
    assert set(h.time_weights) == {F(1, 4)}
    assert p.entry_point == point(0, 0) and p.exit_point == point(1, 1)
    assert s.exit_point == point(1, 0)
    for spec in (h, p, s):
        assert spec.coverage == "verified"
        for m in spec.sub_maps:
            assert m.similarity_ratio_sq() is not None


def test_catalog_unknown():
    with pytest.raises(LookupError):
        catalog("moore")


def test_first_last_moments():
    curve = PolylineCurve(((0, (0, 0)), (F(1, 3), (1, 0)), (F(2, 3), (0, 0)), (1, (1, 1))))
    assert first_last_moments(curve, (0, 0)) == (0, F(2, 3))
    assert first_last_moments(curve, (1, 1)) == (1, 1)
    assert first_last_moments(curve, (F(1, 10), 0), tol=F(1, 5)) == (0, F(2, 3))
    with pytest.raises(NotVisitedError):
        first_last_moments(curve, (F(1, 2), F(1, 2)))
    with pytest.raises(DomainError):
        first_last_moments(curve, (0, 0), tol=-1)


def test_hilbert_visits_center_once(hilbert):
    m = first_last_moments(vertices(hilbert, 3), (F(1, 2), F(1, 2)))
    assert m.first == m.last == F(1, 2)


@pytest.mark.parametrize("samples, msg", [
    (((0, (0, 0)),), "two samples"),
    (((0, (0, 0)), (F(1, 2), (1, 0))), "end at 1"),
    (((0, (0, 0)), (F(1, 2), (1, 0)), (F(1, 2), (1, 1)), (1, (0, 1))), "increasing"),
])
def test_polyline_validation(samples, msg):
    with pytest.raises(DomainError, match=msg):
        PolylineCurve(samples)


def _hilbert_json():
    return catalog("hilbert").to_json()


def test_json_round_trip(tmp_path):
    path = tmp_path / "h.json"
    path.write_text(json.dumps(_hilbert_json()))
    spec = load_spec(path)
    assert spec.sub_maps == catalog("hilbert").sub_maps
    assert spec.name == "h"
    assert vertices(spec, 3) == vertices(catalog("hilbert"), 3)


@pytest.mark.parametrize("mutate, invariant", [
    (lambda d: d.update(time_weights=["1/4", "1/4", "1/4", "1/8"]), "weights_sum"),
    (lambda d: d.update(time_weights=["1/2", "1/2", "1/4", "-1/4"]), "weights_positive"),
    (lambda d: d.update(time_weights=["1/2", "1/2"]), "weights_count"),
    (lambda d: d["sub_maps"].reverse(), "continuity"),
    (lambda d: d.update(entry=["0/1", "1/1"]), "continuity"),
    (lambda d: d["sub_maps"][1].update(translation=["1/1", "1/2"]), "contained"),
    (lambda d: d.pop("exit"), "schema"),
    (lambda d: d.update(sub_maps=[]), "sub_maps"),
])
def test_loader_names_invariant(mutate, invariant):
    data = _hilbert_json()
    mutate(data)
    with pytest.raises(SpecError) as exc:
        spec_from_json(data)
    assert exc.value.invariant == invariant


def test_coverage_failure():
    # two cells traversing the bottom half twice: continuous but overlapping
    h = F(1, 2)
    m0 = AffineMap(h, F(0), F(0), h, F(0), F(0))
    m1 = AffineMap(h, F(0), F(0), h, h, F(0))
    with pytest.raises(SpecError) as exc:
        SelfSimilarCurveSpec((m0, m1, m0.compose(AffineMap(1, 0, 0, 1, 1, 0)), m1),
                             (F(1, 4),) * 4, (0, 0), (1, 0))
    assert exc.value.invariant in ("continuity", "coverage")


def test_malformed_json_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SpecError) as exc:
        load_spec(path)
    assert exc.value.invariant == "schema"


def test_affine_map_algebra():
    m = catalog("hilbert").sub_maps[3]
    assert m.inverse().compose(m) == AffineMap(1, 0, 0, 1, 0, 0)
    assert m.similarity_ratio_sq() == F(1, 4)
    assert m.det == F(-1, 4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CATALOG_NAMES), st.integers(0, 80), st.integers(1, 3))
def test_eval_lands_in_its_cell(name, k, d):
    spec = catalog(name)
    n = spec.n_cells ** d
    k = k % n
    cell = cells_at_depth(spec, d)[k]
    t = cell.t0 + cell.w / 3
    p = eval_curve(spec, t, d + 2)
    xlo, ylo, xhi, yhi = cell.map.unit_square_box()
    assert xlo <= p.x <= xhi and ylo <= p.y <= yhi
