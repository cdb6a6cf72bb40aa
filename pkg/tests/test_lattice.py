from fractions import Fraction as F

import numpy as np
import pytest

from oracles import brute_lattice_optimum, brute_lattice_ratio
from slrkit.errors import DomainError
from slrkit.lattice import (
    GridOrdering, apply_symmetry, boustrophedon, discrete_ratio, first_point_orbits, grid_symmetries,
    optimal_ordering, random_ordering,
)


def test_two_points():
    res = optimal_ordering(1, 2)
    assert res.best.value == 1 and res.proven


def test_row_major_three_by_three():
    order = tuple((r, c) for r in range(3) for c in range(3))
    ratio = discrete_ratio(GridOrdering(3, 3, order))
    # (0,2) -> (1,0) at gap 1
    assert ratio.value == 5
    assert ratio.value == brute_lattice_ratio(order)


def test_boustrophedon_ratio():
    b = boustrophedon(3, 3)
    assert b.order[:4] == ((0, 0), (0, 1), (0, 2), (1, 2))
    assert discrete_ratio(b).value == brute_lattice_ratio(b.order) == 2


def test_two_by_two_rotation():
    res = optimal_ordering(2, 2)
    assert res.best.value == 1
    assert res.proven
    # the optimum walks the square around: every step is a unit move
    order = res.ordering.order
    for a, b in zip(order, order[1:]):
        assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


@pytest.mark.parametrize("m, n", [(1, 3), (1, 5), (2, 2), (2, 3), (3, 2), (2, 4)])
def test_matches_brute_force(m, n):
    res = optimal_ordering(m, n)
    assert res.proven
    assert res.best.value == brute_lattice_optimum(m, n)
    assert discrete_ratio(res.ordering).value == brute_lattice_ratio(res.ordering.order)


def test_frozen_small_optima():
    assert optimal_ordering(2, 3).best.value == F(5, 3)


def test_random_orderings_never_beat_optimum():
    opt = optimal_ordering(2, 3).best.value
    rng = np.random.default_rng(11)
    for _ in range(1000):
        o = random_ordering(2, 3, rng)
        assert discrete_ratio(o).value >= opt


@pytest.mark.parametrize("m, n", [(3, 3), (2, 4), (3, 4)])
def test_symmetry_invariance(m, n):
    rng = np.random.default_rng(m * 10 + n)
    for _ in range(20):
        o = random_ordering(m, n, rng)
        v = discrete_ratio(o).value
        for sym in grid_symmetries(m, n):
            assert discrete_ratio(apply_symmetry(o, sym)).value == v
        assert discrete_ratio(GridOrdering(m, n, o.order[::-1])).value == v


def test_orbits():
    assert first_point_orbits(3, 3) == [(0, 0), (0, 1), (1, 1)]
    assert first_point_orbits(2, 3) == [(0, 0), (0, 1)]


def test_budget_exhaustion_reports_unproven():
    res = optimal_ordering(4, 4, budget=1000)
    assert not res.proven
    assert res.best.value == discrete_ratio(res.ordering).value
    assert res.best.value <= discrete_ratio(boustrophedon(4, 4)).value


def test_deterministic_across_workers():
    a = optimal_ordering(3, 3, workers=1)
    b = optimal_ordering(3, 3, workers=3)
    assert a.to_json() == b.to_json()


def test_move_restrictions():
    rook = optimal_ordering(2, 3, moves="rook")
    king = optimal_ordering(2, 3, moves="king")
    free = optimal_ordering(2, 3)
    assert rook.best.value >= king.best.value >= free.best.value
    for a, b in zip(rook.ordering.order, rook.ordering.order[1:]):
        assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
    with pytest.raises(DomainError):
        optimal_ordering(2, 3, moves="knight")


def test_invalid_inputs():
    with pytest.raises(DomainError):
        GridOrdering(2, 2, ((0, 0), (0, 1), (1, 0), (1, 0)))
    with pytest.raises(DomainError):
        optimal_ordering(1, 1)


def test_json_shape():
    data = optimal_ordering(2, 2).to_json()
    assert data["optimum"] == "1/1"
    assert set(data) == {"m", "n", "optimum", "ordering", "witness", "proven", "nodes"}
