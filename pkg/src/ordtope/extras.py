"""Sphere sampling, bead sort and a radial basis interpolant."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy.spatial.distance import pdist

from .errors import DomainError, ShapeError, SingularKernelError, WidthError


# -- Sibuya sampling -----------------------------------------------------------

def sibuya_batch(n: int, samples: int, seed: int = 0) -> np.ndarray:
    """``samples`` uniform points on the unit sphere in R^n (n even), one per row.

    Sorted uniform spacings g_1..g_m (m = n/2) sum to 1; coordinate pair j is
    sqrt(g_j) * (cos 2 pi u_j, sin 2 pi u_j).
    """
    if n < 2 or n % 2:
        raise ShapeError("dimension must be even and >= 2")
    if samples < 0:
        raise ValueError("samples must be >= 0")
    m = n // 2
    rng = np.random.default_rng(seed)
    cuts = np.sort(rng.random((samples, m - 1)), axis=1)
    edges = np.hstack([np.zeros((samples, 1)), cuts, np.ones((samples, 1))])
    radius = np.sqrt(np.diff(edges, axis=1))
    angle = 2 * np.pi * rng.random((samples, m))
    out = np.empty((samples, n))
    out[:, 0::2] = radius * np.cos(angle)
    out[:, 1::2] = radius * np.sin(angle)
    return out


def sibuya_sphere(n: int, seed: int = 0) -> np.ndarray:
    return sibuya_batch(n, 1, seed)[0]


@dataclass
class ConcentrationStats:
    mean: float
    std: float
    counts: list
    edges: list


def concentration_stats(n: int, samples: int, seed: int = 0, bins: int = 20) -> ConcentrationStats:
    """Mean, std and histogram of all pairwise l2 distances between sampled points."""
    if samples < 2:
        raise ValueError("need at least two samples")
    d = pdist(sibuya_batch(n, samples, seed))
    counts, edges = np.histogram(d, bins=bins, range=(0.0, 2.0))
    return ConcentrationStats(float(d.mean()), float(d.std()), counts.tolist(), edges.tolist())


# -- bead sort -----------------------------------------------------------------

def bead_matrix(values: Sequence[int], M: int) -> np.ndarray:
    """Row i holds v_i ones followed by zeros (width M)."""
    v = np.asarray(values, dtype=np.int64)
    if v.size and (v.min() < 0 or v.max() > M):
        raise WidthError(f"values must lie in [0, {M}]")
    return (np.arange(M)[None, :] < v[:, None]).astype(np.int8)


def gravity(mat: np.ndarray) -> np.ndarray:
    """Drop beads to the highest row indices, column by column (popcount re-stacking)."""
    n = mat.shape[0]
    counts = mat.sum(axis=0)
    return (np.arange(n)[:, None] >= n - counts[None, :]).astype(np.int8)


def gravity_step(mat: np.ndarray, parity: int) -> np.ndarray:
    """One odd-even pass of the (1, 0) -> (0, 1) swap on rows (j, j+1), j = parity mod 2."""
    out = mat.copy()
    top = out[parity:-1:2]
    bottom = out[parity + 1::2]
    h = min(len(top), len(bottom))
    top, bottom = top[:h], bottom[:h]
    swap = (top == 1) & (bottom == 0)
    top[swap], bottom[swap] = 0, 1
    out[parity:parity + 2 * h:2] = top
    out[parity + 1:parity + 1 + 2 * h:2] = bottom
    return out


def gravity_trace(mat: np.ndarray) -> list[np.ndarray]:
    """States of the swap rule from ``mat`` until two passes change nothing."""
    states = [mat.copy()]
    parity = 0
    idle = 0
    while idle < 2:
        nxt = gravity_step(states[-1], parity)
        if np.array_equal(nxt, states[-1]):
            idle += 1
        else:
            idle = 0
            states.append(nxt)
        parity ^= 1
    return states


def bead_sort(values: Sequence[int], M: int) -> list[int]:
    return gravity(bead_matrix(values, M)).sum(axis=1).tolist()


# -- RBF interpolation ---------------------------------------------------------

RBF_DPS = 40


def gaussian(sigma: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda r: np.exp(-(r / sigma) ** 2)


@dataclass
class RbfInterpolant:
    """Evaluator ``f(x) = sum_k c_k phi(|1/||x|| - 1/||x_k|||)``.

    With the default Gaussian, coefficients are held as mpmath matrices and
    evaluation runs at ``RBF_DPS`` digits, since the kernel matrix is badly
    conditioned when norms cluster.
    """

    centers: np.ndarray
    coefficients: object
    sigma: float
    kernel: Callable | None = None

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = 1.0 / np.linalg.norm(x, axis=1)
        if self.kernel is not None:
            out = self.kernel(np.abs(t[:, None] - self.centers[None, :])) @ self.coefficients
        else:
            with mpmath.workdps(RBF_DPS):
                phi = _gauss_matrix(t, self.centers, self.sigma)
                out = np.array((phi * self.coefficients).tolist(), dtype=float)
        return out[0] if out.shape[0] == 1 else out


def _gauss_matrix(rows, cols, sigma) -> "mpmath.matrix":
    s = mpmath.mpf(sigma)
    return mpmath.matrix([[mpmath.exp(-((mpmath.mpf(a) - mpmath.mpf(b)) / s) ** 2) for b in cols]
                          for a in rows])


def rbf_interpolant(points, kernel: Callable | None = None, sigma: float | None = None) -> RbfInterpolant:
    """Interpolate x_i from 1/||x_i|| with a radial kernel.

    The default kernel is Gaussian with width equal to the median nonzero gap
    between consecutive sorted 1/||x|| values.
    """
    x = np.atleast_2d(np.asarray(points, dtype=float))
    norms = np.linalg.norm(x, axis=1)
    if (norms == 0).any():
        raise DomainError("points must be nonzero")
    t = 1.0 / norms
    order = np.argsort(t, kind="stable")
    gaps = np.diff(t[order])
    dup = np.flatnonzero(gaps <= 1e-12 * t[order][1:])
    if dup.size:
        i, j = sorted((int(order[dup[0]]), int(order[dup[0] + 1])))
        raise SingularKernelError(f"points {i} and {j} have equal norms", (i, j))
    if sigma is None:
        sigma = float(np.median(gaps)) if gaps.size else 1.0
    if kernel is not None:
        coef = np.linalg.solve(kernel(np.abs(t[:, None] - t[None, :])), x)
        return RbfInterpolant(t, coef, sigma, kernel)
    with mpmath.workdps(RBF_DPS):
        coef = mpmath.inverse(_gauss_matrix(t, t, sigma)) * mpmath.matrix(x.tolist())
    return RbfInterpolant(t, coef, sigma)
