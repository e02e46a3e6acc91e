"""Distance equations ``d(X, q) + k = 0`` over finite spaces, and their solvers.

An atom is solved by the points whose distance to ``q`` lies in ``-K`` for
its offset interval ``K``; atoms combine with union and intersection.  A
closed ball of radius eps is the atom with ``K = [-eps, 0]``.  All solvers
are exact linear scans.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence, Union

from .errors import DomainError, FormulationMismatchError, NoSolutionError, ShapeError
from .spaces import FiniteSpace, metric_fn


@dataclass(frozen=True)
class Interval:
    lo: Any
    hi: Any
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, x) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def negated(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.hi_closed, self.lo_closed)


@dataclass(frozen=True)
class Atom:
    """``d(x, q) + k = 0`` for some k in ``offsets``; ``q=None`` uses the solve-time query."""

    offsets: Interval
    q: Any = None


@dataclass(frozen=True)
class Node:
    op: str
    children: tuple

    def __post_init__(self):
        if self.op not in ("union", "intersect"):
            raise ValueError(f"unknown op {self.op!r}")
        object.__setattr__(self, "children", tuple(self.children))


Tree = Union[Atom, Node]


def ball(eps, q=None) -> Atom:
    return Atom(Interval(-eps, 0), q)


@dataclass(frozen=True)
class DistanceEquation:
    space: Any
    root: Tree

    def atoms(self) -> list[Atom]:
        out = []

        def walk(t):
            if isinstance(t, Atom):
                out.append(t)
            else:
                for c in t.children:
                    walk(c)
        walk(self.root)
        return out


@dataclass(frozen=True)
class SolutionSet:
    indicator: tuple[int, ...]

    def __len__(self):
        return len(self.indicator)

    def __iter__(self):
        return iter(self.indicator)


def _points_and_metric(space):
    if isinstance(space, FiniteSpace):
        return space.points, space.metric
    pts = tuple(p if isinstance(p, (list, tuple)) else (p,) for p in space)
    return pts, "l2"


def _vec(q):
    return tuple(q) if isinstance(q, (list, tuple)) else (q,)


def _solve_atom(atom: Atom, points, dist, q) -> set[int]:
    raw = atom.q if atom.q is not None else q
    if raw is None:
        raise ShapeError("atom has no query point")
    center = _vec(raw)
    if points and len(center) != len(points[0]):
        raise ShapeError(f"query dimension {len(center)} != space dimension {len(points[0])}")
    k_range = atom.offsets.negated()
    return {i for i, x in enumerate(points) if dist(x, center) in k_range}


def _solve_tree(t: Tree, points, dist, q) -> set[int]:
    if isinstance(t, Atom):
        return _solve_atom(t, points, dist, q)
    parts = [_solve_tree(c, points, dist, q) for c in t.children]
    if not parts:
        return set()
    if t.op == "union":
        return set().union(*parts)
    return set.intersection(*parts)


def solve(eq: DistanceEquation, q=None) -> SolutionSet:
    points, metric = _points_and_metric(eq.space)
    if not points:
        return SolutionSet(())
    if q is not None and len(_vec(q)) != len(points[0]):
        raise ShapeError("query dimension does not match the space")
    return SolutionSet(tuple(sorted(_solve_tree(eq.root, points, metric_fn(metric), q))))


def solve_decision(eq: DistanceEquation, q=None, seed: int = 0) -> int:
    """One solution index drawn uniformly, deterministic for a given seed."""
    sol = solve(eq, q)
    if not sol.indicator:
        raise NoSolutionError("the equation has no solution")
    return random.Random(seed).choice(sol.indicator)


def partition(eq: DistanceEquation, q=None) -> list[tuple[int, ...]]:
    """Group points by which atoms they satisfy; each group is one cell."""
    points, metric = _points_and_metric(eq.space)
    dist = metric_fn(metric)
    sols = [_solve_atom(a, points, dist, q) for a in eq.atoms()]
    cells: dict[tuple, list[int]] = {}
    for i in range(len(points)):
        cells.setdefault(tuple(i in s for s in sols), []).append(i)
    return [tuple(v) for _, v in sorted(cells.items())]


def isomorphic(a: DistanceEquation, b: DistanceEquation, q=None) -> bool:
    return len(partition(a, q)) == len(partition(b, q))


# -- Hausdorff -----------------------------------------------------------------

def hausdorff(x: Sequence, y: Sequence, metric="l2"):
    if not x or not y:
        raise DomainError("Hausdorff distance needs two nonempty sets")
    d = metric_fn(metric)
    xs, ys = [_vec(p) for p in x], [_vec(p) for p in y]
    forward = max(min(d(a, b) for b in ys) for a in xs)
    backward = max(min(d(a, b) for a in xs) for b in ys)
    return max(forward, backward)


def hausdorff_eq(subsets: Sequence[Sequence], query: Sequence, offsets: Interval,
                 metric="l2") -> SolutionSet:
    """Indices i with ``H(X_i, Q) + k = 0`` for some k in ``offsets``."""
    target = offsets.negated()
    return SolutionSet(tuple(i for i, s in enumerate(subsets)
                             if hausdorff(s, query, metric) in target))


# -- point location ------------------------------------------------------------

@dataclass(frozen=True)
class Arrangement:
    """Polytopes ``A_i q <= b_i``; each ``A_i`` is a list of rows."""

    polytopes: tuple

    def __post_init__(self):
        polys = []
        for a, b in self.polytopes:
            a = [tuple(row) for row in a]
            b = tuple(b)
            if len(a) != len(b):
                raise ShapeError("A and b disagree in row count")
            if any(all(v == 0 for v in row) for row in a):
                raise ShapeError("constraint rows must be nonzero")
            polys.append((a, b))
        object.__setattr__(self, "polytopes", tuple(polys))


def sgn_star(x) -> int:
    return 1 if x > 0 else -1


def _residuals(a, b, q):
    q = _vec(q)
    if any(len(row) != len(q) for row in a):
        raise ShapeError("constraint width does not match query dimension")
    return [sum(r * c for r, c in zip(row, q)) - bj for row, bj in zip(a, b)]


def point_location_direct(arr: Arrangement, q) -> list[int]:
    return [i for i, (a, b) in enumerate(arr.polytopes)
            if all(r <= 0 for r in _residuals(a, b, q))]


def _require_square(a, q):
    if len(a) != len(_vec(q)):
        raise FormulationMismatchError(
            f"sign-sum form needs as many constraints as dimensions ({len(a)} vs {len(_vec(q))})")


def point_location(arr: Arrangement, q) -> list[int]:
    """Polytope i contains q iff ``dim q + sum sgn*(A_j q - b_j) = 0``."""
    n = len(_vec(q))
    out = []
    for i, (a, b) in enumerate(arr.polytopes):
        _require_square(a, q)
        if n + sum(sgn_star(r) for r in _residuals(a, b, q)) == 0:
            out.append(i)
    return out


def nearest_vertex(residuals) -> tuple[int, ...]:
    """Closest n-cube vertex componentwise, with ties at 0 sent to -1."""
    return tuple(sgn_star(r) for r in residuals)


def cosine(u, v) -> Fraction:
    """Exact cosine for +/-1 vectors (both norms are sqrt(n))."""
    dot = sum(a * b for a, b in zip(u, v))
    return Fraction(dot, len(u))


def point_location_cosine(arr: Arrangement, q) -> list[int]:
    n = len(_vec(q))
    ones = (1,) * n
    out = []
    for i, (a, b) in enumerate(arr.polytopes):
        _require_square(a, q)
        v = nearest_vertex(_residuals(a, b, q))
        if n + n * cosine(v, ones) == 0:
            out.append(i)
    return out


# -- JSON form -----------------------------------------------------------------

def _atom_from_json(obj) -> Atom:
    lo, hi = obj["interval"]
    closed = obj.get("closed", [True, True])
    return Atom(Interval(lo, hi, closed[0], closed[1]), obj.get("q"))


def _node_from_json(obj) -> Node:
    kids = [_atom_from_json(a) for a in obj.get("atoms", [])]
    kids += [_node_from_json(c) for c in obj.get("children", [])]
    return Node(obj.get("op", "union"), tuple(kids))


def equation_from_json(obj: dict, space=None) -> DistanceEquation:
    """Parse ``{metric, atoms: [{q, interval}], op, children: [...]}``."""
    if space is None:
        space = FiniteSpace(tuple(obj["points"]), obj.get("metric", "l2"))
    elif "metric" in obj and isinstance(space, FiniteSpace):
        space = FiniteSpace(space.points, obj["metric"])
    return DistanceEquation(space, _node_from_json(obj))


def equation_to_json(eq: DistanceEquation) -> dict:
    def node(t):
        if isinstance(t, Atom):
            raise ValueError("root must be a node")
        atoms = [{"q": list(_vec(c.q)) if c.q is not None else None,
                  "interval": [c.offsets.lo, c.offsets.hi],
                  "closed": [c.offsets.lo_closed, c.offsets.hi_closed]}
                 for c in t.children if isinstance(c, Atom)]
        children = [node(c) for c in t.children if isinstance(c, Node)]
        return {"op": t.op, "atoms": atoms, "children": children}

    root = eq.root if isinstance(eq.root, Node) else Node("union", (eq.root,))
    out = node(root)
    if isinstance(eq.space, FiniteSpace) and isinstance(eq.space.metric, str):
        out["metric"] = eq.space.metric
    return out
