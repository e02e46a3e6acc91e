"""Order curves, rank oracles and search over implicitly ordered code spaces.

The code space is every exponent vector in ``{0..k}^n`` mapped to its l-code.
A :class:`RankOracle` answers "how many codes lie below v" without sorting
the space: the meet-in-the-middle strategy sorts only the two half-spaces.
Binary search over rank then locates a target with O(n) probes.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from .codes import GCode, LCode
from .errors import BudgetError, CorruptOracleError
from .numeric import (
    DEFAULT_BUDGET,
    FixedLog,
    PrimeBasis,
    exponent_sums,
    index_to_exponents,
    required_digits,
)

MITM_MAX_SIZE = 2**30
STRATEGIES = ("enumerate", "meet-in-the-middle")


@dataclass(frozen=True)
class OrderEntry:
    rank: int
    value: Any
    preimage: Any


@dataclass(frozen=True)
class OrderCurve:
    entries: tuple[OrderEntry, ...]

    def __len__(self):
        return len(self.entries)

    @property
    def values(self) -> list:
        return [e.value for e in self.entries]

    @property
    def preimages(self) -> list:
        return [e.preimage for e in self.entries]


def _sort_value(v):
    if isinstance(v, LCode):
        return v.sum.to_fraction()
    if isinstance(v, FixedLog):
        return v.to_fraction()
    if isinstance(v, GCode):
        return v.value
    return v


def order_curve(codes: Sequence, preimages: Sequence | None = None) -> OrderCurve:
    """Sort codes ascending; ties go to the lexicographically smaller preimage.

    LCode inputs use their exponent vectors as preimages; otherwise the
    preimage is taken from ``preimages`` or defaults to the input position.
    """
    items = []
    for i, c in enumerate(codes):
        if preimages is not None:
            pre = preimages[i]
        elif isinstance(c, LCode):
            pre = c.exponents
        else:
            pre = i
        value = c.sum if isinstance(c, LCode) else c
        items.append((_sort_value(c), pre, value))
    items.sort(key=lambda t: (t[0], t[1]))
    return OrderCurve(tuple(OrderEntry(r, v, p) for r, (_, p, v) in enumerate(items)))


def curve_to_csv(curve: OrderCurve) -> str:
    """CSV with columns rank,value_mantissa,digits,preimage (preimage ';'-joined)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "value_mantissa", "digits", "preimage"])
    for e in curve.entries:
        if isinstance(e.value, FixedLog):
            mant, digits = e.value.mantissa, e.value.digits
        else:
            mant, digits = e.value, 0
        pre = ";".join(str(x) for x in e.preimage) if isinstance(e.preimage, tuple) else e.preimage
        w.writerow([e.rank, mant, digits, pre])
    return buf.getvalue()


def finite_differences(curve: OrderCurve | Sequence) -> list:
    values = curve.values if isinstance(curve, OrderCurve) else list(curve)
    if len(values) < 2:
        raise ValueError("need at least two values")
    return [b - a for a, b in zip(values, values[1:])]


def is_compact_order(curve: OrderCurve | Sequence) -> bool:
    """True iff consecutive values form an arithmetic progression."""
    diffs = finite_differences(curve)
    return all(d == diffs[0] for d in diffs)


# -- rank oracle ---------------------------------------------------------------

@dataclass
class RankOracle:
    """Counts codes of ``{0..k}^n`` (over ``basis``) lying below a value.

    Values are compared as integer mantissas at ``digits`` places, which
    defaults to :func:`required_digits` for the domain.
    """

    basis: PrimeBasis
    n: int
    k: int = 1
    strategy: str = "meet-in-the-middle"
    digits: int | None = None
    budget: int = DEFAULT_BUDGET
    rank_calls: int = field(default=0, init=False)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.n < 1 or self.n > len(self.basis):
            raise ValueError(f"n must be in 1..{len(self.basis)}")
        self.size = (self.k + 1) ** self.n
        if self.strategy == "enumerate" and self.size > self.budget:
            raise BudgetError(f"domain of {self.size} codes exceeds budget {self.budget}")
        if self.strategy == "meet-in-the-middle" and self.size > MITM_MAX_SIZE:
            raise BudgetError(f"domain of {self.size} codes exceeds {MITM_MAX_SIZE}")
        if self.digits is None:
            self.digits = required_digits(self.basis, self.n, self.k, self.budget)
        self.basis = self.basis.at_digits(self.digits)
        logs = self.basis.log_mantissas[: self.n]
        self.logs = logs
        self.max_value = self.k * sum(logs)
        self._dtype = np.int64 if self.max_value < 2**62 else object
        if self.strategy == "enumerate":
            sums = exponent_sums(logs, self.k, self._dtype)
            self._order = np.argsort(sums, kind="stable")
            self._sorted = sums[self._order]
        else:
            self.split = self.n // 2
            left = exponent_sums(logs[: self.split], self.k, self._dtype)
            self._left_order = np.argsort(left, kind="stable")
            self._left = left[self._left_order]
            self._right = exponent_sums(logs[self.split:], self.k, self._dtype)

    # -- counting
    def count_below(self, threshold: int) -> int:
        """Number of codes whose mantissa is < threshold."""
        self.rank_calls += 1
        if self.strategy == "enumerate":
            return int(np.searchsorted(self._sorted, threshold, side="left"))
        return int(np.searchsorted(self._left, threshold - self._right, side="left").sum())

    def threshold(self, v) -> int | None:
        """Smallest mantissa not below ``v``; None means +infinity."""
        if isinstance(v, float) and math.isinf(v):
            return None if v > 0 else -1
        if isinstance(v, LCode):
            v = v.sum
        q = v.to_fraction() if isinstance(v, FixedLog) else Fraction(v)
        q *= 10**self.digits
        return -((-q.numerator) // q.denominator)

    def value_fixed(self, mantissa: int) -> FixedLog:
        return FixedLog(int(mantissa), self.digits)

    # -- unranking
    def value_at(self, r: int) -> int:
        """Mantissa of the code at rank ``r`` (0-based)."""
        if not 0 <= r < self.size:
            raise IndexError(r)
        if self.strategy == "enumerate":
            return int(self._sorted[r])
        lo, hi = 0, self.max_value
        while lo < hi:
            mid = (lo + hi) // 2
            if self.count_below(mid + 1) >= r + 1:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def preimages_of(self, mantissa: int) -> list[tuple[int, ...]]:
        """All exponent vectors whose code equals ``mantissa``, in index order."""
        if self.strategy == "enumerate":
            a = np.searchsorted(self._sorted, mantissa, side="left")
            b = np.searchsorted(self._sorted, mantissa, side="right")
            idx = sorted(int(i) for i in self._order[a:b])
        else:
            need = mantissa - self._right
            a = np.searchsorted(self._left, need, side="left")
            b = np.searchsorted(self._left, need, side="right")
            width = (self.k + 1) ** self.split
            idx = []
            for j in np.flatnonzero(b > a):
                for pos in range(a[j], b[j]):
                    idx.append(int(j) * width + int(self._left_order[pos]))
            idx.sort()
        return [index_to_exponents(i, self.n, self.k) for i in idx]

    def unrank(self, r: int) -> tuple[FixedLog, tuple[int, ...]]:
        m = self.value_at(r)
        below = self.count_below(m)
        upto = self.count_below(m + 1)
        if not below <= r < upto:
            raise CorruptOracleError(f"rank {r} not within [{below}, {upto}) for value {m}")
        return self.value_fixed(m), self.preimages_of(m)[r - below]

    def all_sums(self) -> np.ndarray:
        """Codes in index order (mixed radix, a_1 least significant)."""
        return exponent_sums(self.logs, self.k, self._dtype)


def rank(v, oracle: RankOracle) -> int:
    """Exact count of domain codes with value strictly below ``v``."""
    t = oracle.threshold(v)
    if t is None:
        return oracle.size
    if t <= 0:
        return 0
    return oracle.count_below(t)


def unrank(r: int, oracle: RankOracle) -> tuple[FixedLog, tuple[int, ...]]:
    return oracle.unrank(r)


@dataclass(frozen=True)
class SearchResult:
    preimage: tuple[int, ...] | None
    comparisons: int
    rank: int | None
    rank_calls: int

    @property
    def found(self) -> bool:
        return self.preimage is not None


def order_search(target, oracle: RankOracle) -> SearchResult:
    """Binary search on rank space; each probe unranks and compares to ``target``.

    No sort of the full space is performed.  Raises CorruptOracleError if
    probed values are not monotone in rank.
    """
    if isinstance(target, LCode):
        target = target.sum
    t = target.to_fraction() if isinstance(target, FixedLog) else Fraction(target)
    scale = 10**oracle.digits
    calls0 = oracle.rank_calls
    lo, hi = 0, oracle.size - 1
    comparisons = 0
    seen: list[tuple[int, int]] = []
    while lo <= hi:
        mid = (lo + hi) // 2
        m = oracle.value_at(mid)
        for r_prev, m_prev in seen:
            if (r_prev < mid and m_prev > m) or (r_prev > mid and m_prev < m):
                raise CorruptOracleError(f"ranks {r_prev} and {mid} out of order")
        seen.append((mid, m))
        comparisons += 1
        c = Fraction(m, scale)
        if c == t:
            _, pre = oracle.unrank(mid)
            return SearchResult(pre, comparisons, mid, oracle.rank_calls - calls0)
        if c < t:
            lo = mid + 1
        else:
            hi = mid - 1
    return SearchResult(None, comparisons, None, oracle.rank_calls - calls0)


def linear_scan(target, oracle: RankOracle) -> tuple[int | None, int]:
    """Baseline: scan codes in index order. Returns (index or None, probes)."""
    if isinstance(target, LCode):
        target = target.sum
    t = oracle.threshold(target)
    sums = oracle.all_sums()
    if t is None:
        return None, len(sums)
    hit = np.flatnonzero(sums == t)
    exact = Fraction(t, 10**oracle.digits) == (target.to_fraction() if isinstance(target, FixedLog)
                                              else Fraction(target))
    if len(hit) == 0 or not exact:
        return None, len(sums)
    return int(hit[0]), int(hit[0]) + 1


# -- counting ------------------------------------------------------------------

def count_coprime(n: int, primes: Sequence[int]) -> int:
    """Integers in [1, n] divisible by none of ``primes`` (inclusion-exclusion)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    total = 0
    for r in range(len(primes) + 1):
        sign = -1 if r % 2 else 1
        for sub in combinations(primes, r):
            total += sign * (n // math.prod(sub))
    return total


def totient_formula(n: int, primes: Sequence[int]) -> Fraction:
    """``n * prod(1 - 1/p)``; equals :func:`count_coprime` when every p divides n."""
    out = Fraction(n)
    for p in primes:
        out *= Fraction(p - 1, p)
    return out
