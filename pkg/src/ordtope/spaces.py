"""Finite discrete distance spaces.

Points are stored as given (ints and Fractions stay exact for the l1 and
l-infinity metrics).  The cut metric keeps the convention d = 1 when two
neighborhoods intersect and d = 0 otherwise, so a space is discrete exactly
when every off-diagonal entry is zero.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from .errors import ShapeError, UndefinedRadiusError

METRICS = ("l1", "l2", "linf")


def _as_vector(p) -> tuple:
    if isinstance(p, (list, tuple, np.ndarray)):
        return tuple(p)
    return (p,)


def lp_distance(x, y, metric: str = "l2"):
    x, y = _as_vector(x), _as_vector(y)
    if len(x) != len(y):
        raise ShapeError(f"dimension mismatch: {len(x)} vs {len(y)}")
    diffs = [abs(a - b) for a, b in zip(x, y)]
    if metric == "l1":
        return sum(diffs)
    if metric == "linf":
        return max(diffs, default=0)
    if metric == "l2":
        return math.sqrt(sum(float(d) ** 2 for d in diffs))
    raise ValueError(f"unknown metric {metric!r}")


def metric_fn(metric) -> Callable:
    if callable(metric):
        return metric
    return lambda x, y: lp_distance(x, y, metric)


@dataclass(frozen=True)
class DistanceMatrix:
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, ij):
        return self.entries[ij]

    def to_csv(self) -> str:
        return "".join(",".join(str(v) for v in row) + "\n" for row in self.entries.tolist())


@dataclass(frozen=True)
class FiniteSpace:
    """Points plus a metric name, a callable, or a custom distance matrix."""

    points: tuple
    metric: Any = "l2"

    def __post_init__(self):
        pts = tuple(_as_vector(p) for p in self.points)
        if not pts:
            raise ShapeError("a space needs at least one point")
        if len({len(p) for p in pts}) != 1:
            raise ShapeError("point dimensions differ")
        object.__setattr__(self, "points", pts)
        if isinstance(self.metric, (list, np.ndarray)):
            m = np.asarray(self.metric, dtype=object if _exact(self.metric) else float)
            if m.shape != (len(pts), len(pts)):
                raise ShapeError("custom matrix does not match the number of points")
            if any(m[i, i] != 0 for i in range(len(pts))) or not _symmetric(m):
                raise ShapeError("custom matrix needs a zero diagonal and symmetry")
            object.__setattr__(self, "metric", m)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self):
        return len(self.points)

    def distance(self, i: int, j: int):
        if isinstance(self.metric, np.ndarray):
            return self.metric[i, j]
        return metric_fn(self.metric)(self.points[i], self.points[j])

    def norm_inf(self):
        """Largest absolute coordinate over all points."""
        return max(abs(c) for p in self.points for c in p)

    @classmethod
    def from_json(cls, text: str) -> "FiniteSpace":
        data = json.loads(text)
        if isinstance(data, list):
            return cls(tuple(data))
        return cls(tuple(data["points"]), data.get("metric", "l2"))


def _exact(values) -> bool:
    flat = np.asarray(values, dtype=object).ravel()
    return all(isinstance(v, (int, Fraction)) for v in flat)


def _symmetric(m: np.ndarray) -> bool:
    n = m.shape[0]
    return all(m[i, j] == m[j, i] for i in range(n) for j in range(i + 1, n))


def build_distance_matrix(space: FiniteSpace) -> DistanceMatrix:
    n = len(space)
    if isinstance(space.metric, np.ndarray):
        return DistanceMatrix(space.metric.copy())
    exact = space.metric in ("l1", "linf") and _exact(space.points)
    out = np.zeros((n, n), dtype=object if exact else float)
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = space.distance(i, j)
    return DistanceMatrix(out)


@dataclass
class AxiomReport:
    symmetric: bool
    zero_diag: bool
    triangle_ok: bool
    violations: list = field(default_factory=list)


def check_metric_axioms(d: DistanceMatrix | Sequence) -> AxiomReport:
    """Exhaustive check; triangle violations are listed as (i, j, k) with d[i,k] > d[i,j] + d[j,k]."""
    m = d.entries if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=object)
    n = m.shape[0]
    zero = all(m[i, i] == 0 for i in range(n))
    sym = _symmetric(m)
    violations = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)
                  if m[i, k] > m[i, j] + m[j, k]]
    return AxiomReport(sym, zero, not violations, violations)


def cut_metric(points: Sequence, neighborhoods, metric: str = "l2") -> tuple[DistanceMatrix, bool]:
    """1 where neighborhoods intersect, 0 where disjoint; diagonal held at 0.

    ``neighborhoods`` is a radius, a list of per-point radii (closed balls), or
    a list of explicit sets.
    """
    pts = [_as_vector(p) for p in points]
    n = len(pts)
    if isinstance(neighborhoods, (int, float, Fraction)):
        neighborhoods = [neighborhoods] * n
    if len(neighborhoods) != n:
        raise ShapeError("one neighborhood per point is required")
    out = np.zeros((n, n), dtype=int)
    dist = metric_fn(metric)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = neighborhoods[i], neighborhoods[j]
            if isinstance(a, (set, frozenset)):
                hit = bool(set(a) & set(b))
            else:
                hit = dist(pts[i], pts[j]) <= a + b
            out[i, j] = out[j, i] = int(hit)
    return DistanceMatrix(out), int(out.sum()) == 0


def characteristic_radius(d: DistanceMatrix | FiniteSpace):
    """Minimum off-diagonal distance."""
    if isinstance(d, FiniteSpace):
        d = build_distance_matrix(d)
    n = d.size
    if n < 2:
        raise UndefinedRadiusError("characteristic radius needs at least two points")
    return min(d.entries[i, j] for i in range(n) for j in range(n) if i != j)


def compactness(space: FiniteSpace):
    return space.norm_inf() - characteristic_radius(space)


def code_length_bound(x) -> int:
    """Bits per coordinate, ceil(log2(M + 1)) for M the largest entry."""
    flat = np.asarray(x, dtype=object).ravel()
    m = max((int(v) for v in flat), default=0)
    if m < 0 or any(int(v) < 0 for v in flat):
        raise ValueError("entries must be non-negative")
    return m.bit_length()


def pack_fixed_width(x: Sequence[Sequence[int]], bits: int) -> int:
    """Concatenate non-negative ints into one integer, ``bits`` bits each."""
    out = 0
    for v in (int(c) for row in x for c in row):
        if v >> bits if bits else v:
            raise ValueError(f"{v} does not fit in {bits} bits")
        out = (out << bits) | v
    return out


def unpack_fixed_width(code: int, bits: int, shape: tuple[int, int]) -> list[list[int]]:
    rows, cols = shape
    mask = (1 << bits) - 1
    flat = []
    for _ in range(rows * cols):
        flat.append(code & mask if bits else 0)
        code >>= bits
    flat.reverse()
    return [flat[r * cols:(r + 1) * cols] for r in range(rows)]
