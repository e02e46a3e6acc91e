"""Distortion and dilation of mappings between finite point sets."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .errors import DilationInfeasibleError, DomainError

_SCIPY_METRIC = {"l1": "cityblock", "l2": "euclidean", "linf": "chebyshev"}


def _array(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    return a.reshape(-1, 1) if a.ndim == 1 else a


def _images(f, x: np.ndarray) -> np.ndarray:
    if callable(f):
        return _array([np.atleast_1d(f(p)) for p in x])
    y = _array(f)
    if y.shape[0] != x.shape[0]:
        raise ValueError("need one image per point")
    return y


def pair_distances(x, metric="l2") -> np.ndarray:
    return pdist(_array(x), _SCIPY_METRIC.get(metric, metric))


def cross_distances(x, y, metric="l2") -> np.ndarray:
    return cdist(_array(x), _array(y), _SCIPY_METRIC.get(metric, metric))


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, dict):
        return {k: _jsonable(w) for k, w in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(w) for w in v]
    if isinstance(v, np.generic):
        return v.item()
    return v


@dataclass
class MappingReport:
    """``k1``/``k2`` follow the definition directly: the smallest values >= 1 with
    ``d/k1 <= d' <= k2*d``.  ``scale`` and ``distortion`` give the same data
    with the global scale factored out (``distortion = max ratio / min ratio``).
    """

    k1: float
    k2: float
    scale: float
    distortion: float
    pairs: int
    c1: float | None = None
    c2: float | None = None
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return _jsonable(asdict(self))


def measure_distortion(f, x, metric="l2", image_metric="l2",
                       bounds: tuple[float, float] | None = None) -> MappingReport:
    pts = _array(x)
    if pts.shape[0] < 2:
        raise DomainError("distortion needs at least two points")
    ys = _images(f, pts)
    dx = pair_distances(pts, metric)
    dy = pair_distances(ys, image_metric)
    mask = dx > 0
    if not mask.any():
        raise DomainError("every pair coincides in the domain")
    ratios = dy[mask] / dx[mask]
    lo, hi = float(ratios.min()), float(ratios.max())
    k1 = math.inf if lo == 0 else max(1.0, 1.0 / lo)
    k2 = max(1.0, hi)
    scale = math.sqrt(lo * hi) if lo > 0 else 0.0
    distortion = math.inf if lo == 0 else hi / lo
    violations = []
    if bounds is not None:
        b1, b2 = bounds
        n = pts.shape[0]
        iu = np.triu_indices(n, 1)
        bad = (dy < dx / b1) | (dy > dx * b2)
        violations = [(int(i), int(j)) for i, j in zip(iu[0][bad], iu[1][bad])]
    return MappingReport(k1, k2, scale, distortion, int(mask.sum()), violations=violations)


def random_projection(x, d: int, seed: int = 0, identity: bool = False) -> np.ndarray:
    """Project rows of ``x`` with a seeded standard-normal matrix scaled by 1/sqrt(d)."""
    if d < 1:
        raise ValueError("target dimension must be >= 1")
    pts = _array(x)
    if identity:
        if d != pts.shape[1]:
            raise ValueError("identity override needs d equal to the input dimension")
        return pts.copy()
    r = np.random.default_rng(seed).standard_normal((pts.shape[1], d))
    return pts @ r / math.sqrt(d)


def fraction_within(x, y, factor: float, metric="l2") -> float:
    """Share of pairs whose distance ratio lies in [1/factor, factor]."""
    dx = pair_distances(x, metric)
    dy = pair_distances(y, metric)
    mask = dx > 0
    ratios = dy[mask] / dx[mask]
    return float(np.mean((ratios >= 1 / factor) & (ratios <= factor)))


def _ball_sizes(dmat: np.ndarray, eps: float) -> np.ndarray:
    return (dmat <= eps).sum(axis=1)


@dataclass
class DilationReport:
    c1: float
    c2: float
    per_eps: list
    c2_predicted: float

    def to_json(self) -> dict:
        return _jsonable(asdict(self))


def measure_dilation(f, x, eps_grid: Sequence[float], metric="l2", image_metric="l2",
                     widen_steps: int = 64) -> DilationReport:
    """Compare the largest ball solutions before and after mapping.

    For each eps the image radius eps' starts at eps and doubles until every
    image of a domain solution lies inside the matching image solution.
    """
    pts = _array(x)
    ys = _images(f, pts)
    dx = cross_distances(pts, pts, metric)
    dy = cross_distances(ys, ys, image_metric)
    c1 = c2 = 1.0
    per_eps = []
    for eps in eps_grid:
        inside_x = dx <= eps
        # smallest eps' with containment: largest image distance over each domain ball
        need = float(np.where(inside_x, dy, 0.0).max())
        eps_p = eps
        for _ in range(widen_steps):
            if eps_p >= need:
                break
            if eps_p == 0:
                break
            eps_p *= 2
        if eps_p < need:
            raise DilationInfeasibleError(f"containment not reached for eps={eps}")
        max_x = int(_ball_sizes(dx, eps).max())
        max_y = int(_ball_sizes(dy, eps_p).max())
        e_c1 = max(1.0, max_x / max_y)
        e_c2 = max(1.0, max_y / max_x)
        c1, c2 = max(c1, e_c1), max(c2, e_c2)
        per_eps.append({"eps": eps, "eps_prime": eps_p, "max_x": max_x, "max_y": max_y,
                        "c1": e_c1, "c2": e_c2})
    n = pts.shape[0]
    return DilationReport(c1, c2, per_eps, 1 + math.log(n) / n)


@dataclass
class BallCounts:
    image: int
    domain_wide: int
    domain_narrow: int
    holds: bool


def ball_counts(x, y, eps: float, k1: float, k2: float, metric="l2", image_metric="l2") -> BallCounts:
    """Counts over q ranging through ``x`` (closed balls, self included).

    ``holds`` reports whether image <= domain_wide - domain_narrow.
    """
    pts = _array(x)
    ys = _images(y, pts)
    dx = cross_distances(pts, pts, metric)
    dy = cross_distances(ys, ys, image_metric)
    a = int(_ball_sizes(dy, eps).max())
    b = int(_ball_sizes(dx, eps * k1).max())
    c = int(_ball_sizes(dx, eps / k2).max())
    return BallCounts(a, b, c, a <= b - c)
