import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ordtope.equations import (
    Arrangement,
    Atom,
    DistanceEquation,
    Interval,
    Node,
    ball,
    cosine,
    equation_from_json,
    equation_to_json,
    hausdorff,
    hausdorff_eq,
    isomorphic,
    partition,
    point_location,
    point_location_cosine,
    point_location_direct,
    sgn_star,
    solve,
    solve_decision,
)
from ordtope.errors import FormulationMismatchError, NoSolutionError, ShapeError
from ordtope.spaces import FiniteSpace

LINE = FiniteSpace((0, 1, 2, 5), "l1")


def eq(root, space=LINE):
    return DistanceEquation(space, root)


def test_ball_solution():
    assert solve(eq(Node("union", (ball(1),))), 1).indicator == (0, 1, 2)
    assert solve(eq(Node("union", (ball(0),))), 1).indicator == (1,)


def test_union_and_intersection():
    shell = Atom(Interval(-4, -3))  # distance in [3, 4]
    u = solve(eq(Node("union", (ball(0, 0), shell))), 1).indicator
    assert u == (0, 3)
    i = solve(eq(Node("intersect", (ball(2, 0), ball(2, 2)))), None).indicator
    assert i == (0, 1, 2)


def test_open_interval_endpoints():
    atom = Atom(Interval(-1, 0, lo_closed=False))
    assert solve(eq(Node("union", (atom,))), 1).indicator == (1,)


def test_dimension_mismatch():
    with pytest.raises(ShapeError):
        solve(eq(Node("union", (ball(1),))), (1, 2))


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=12, unique=True), st.integers(-20, 20),
       st.integers(0, 15))
def test_ball_matches_brute_force(pts, q, eps):
    sp = FiniteSpace(tuple(pts), "l1")
    got = solve(eq(Node("union", (ball(eps),)), sp), q).indicator
    assert got == tuple(i for i, x in enumerate(pts) if abs(x - q) <= eps)


def test_solve_decision_is_seeded():
    e = eq(Node("union", (ball(5),)))
    picks = {solve_decision(e, 0, seed=s) for s in range(30)}
    assert picks <= {0, 1, 2, 3} and len(picks) > 1
    assert solve_decision(e, 0, seed=7) == solve_decision(e, 0, seed=7)
    with pytest.raises(NoSolutionError):
        solve_decision(eq(Node("union", (Atom(Interval(-100, -99)),))), 0)


def test_partition_and_isomorphism():
    a = eq(Node("union", (ball(1, 0), ball(1, 5))))
    cells = partition(a)
    assert sorted(sum(cells, ())) == [0, 1, 2, 3]
    b = eq(Node("union", (ball(1, 2), ball(1, 5))))
    assert isomorphic(a, b) == (len(cells) == len(partition(b)))


def test_json_round_trip():
    obj = {"metric": "l1", "points": [0, 1, 2, 5], "op": "union",
           "atoms": [{"q": [1], "interval": [-1, 0]}], "children": []}
    e = equation_from_json(obj)
    assert solve(e).indicator == (0, 1, 2)
    again = equation_from_json(dict(equation_to_json(e), points=[0, 1, 2, 5]))
    assert solve(again).indicator == (0, 1, 2)


def test_hausdorff_example():
    assert hausdorff([0, 1], [0, 2]) == 1
    assert hausdorff_eq([[0, 1], [0, 5]], [0, 2], Interval(-1, 0)).indicator == (0,)


pointsets = st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=6)


@given(pointsets, pointsets, pointsets)
def test_hausdorff_metric_properties(a, b, c):
    assert hausdorff(a, b) == hausdorff(b, a)
    assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-9
    assert hausdorff(a, a) == 0


def test_unit_box():
    box = Arrangement((([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0]),))
    assert point_location_direct(box, (0.5, 0.5)) == [0]
    assert point_location_direct(box, (2, 0.5)) == []


def test_sign_sum_needs_square_system():
    box = Arrangement((([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0]),))
    with pytest.raises(FormulationMismatchError):
        point_location(box, (0.5, 0.5))


def test_sgn_star_and_cosine():
    assert sgn_star(0) == -1 and sgn_star(2) == 1
    assert cosine((1, -1), (1, 1)) == 0
    assert cosine((-1, -1), (1, 1)) == -1


def test_zero_row_rejected():
    with pytest.raises(ShapeError):
        Arrangement((([[0, 0]], [1]),))


@given(st.integers(1, 4), st.randoms(use_true_random=False))
def test_formulations_agree(n, rnd):
    polys = []
    for _ in range(10):
        a = [[rnd.choice([-2, -1, 1, 2]) * (i == j) + rnd.randint(-1, 1) * (i != j)
              for j in range(n)] for i in range(n)]
        polys.append((a, [rnd.randint(-3, 3) for _ in range(n)]))
    arr = Arrangement(tuple(polys))
    q = tuple(Fraction(rnd.randint(-6, 6), 2) for _ in range(n))
    direct = point_location_direct(arr, q)
    assert point_location(arr, q) == direct
    assert point_location_cosine(arr, q) == direct
