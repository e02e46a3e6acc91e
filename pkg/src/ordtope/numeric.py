"""Exact base-10 fixed-point logarithms and ordered prime bases.

Every code in the package is built on truncated decimal logarithms of primes.
Truncation is computed with interval arithmetic (``mpmath.iv``), widening the
working precision until the requested digit prefix is certain, so results are
bit-identical on every platform.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

import numpy as np
from mpmath import iv
from mpmath.libmp import to_int

from .errors import (
    DomainError,
    EmptyBasisError,
    InvalidProgressionError,
    PrecisionUndecidableError,
)

DEFAULT_DIGITS = 6
DEFAULT_BUDGET = 2**20
MAX_GAP_DIGITS = 4096

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_U64 = 2**64
# 2.3025850930 > ln 10
_LN10_UPPER = Fraction(23025850930, 10**10)

_iv_lock = threading.Lock()


@total_ordering
@dataclass(frozen=True)
class FixedLog:
    """A decimal fixed-point number ``mantissa * 10**-digits``."""

    mantissa: int
    digits: int

    def __post_init__(self):
        if self.digits < 1:
            raise ValueError("digits must be >= 1")

    @classmethod
    def from_decimal(cls, text: str | Decimal, digits: int | None = None) -> "FixedLog":
        """Parse a decimal string. Extra digits beyond ``digits`` are truncated toward zero."""
        d = Decimal(text)
        exp = -d.as_tuple().exponent
        if digits is None:
            digits = max(1, exp)
        scaled = d.scaleb(digits)
        return cls(int(scaled.to_integral_value(rounding="ROUND_DOWN")), digits)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 10**self.digits)

    def __float__(self):
        return self.mantissa / 10**self.digits

    def rescale(self, digits: int) -> "FixedLog":
        """Change precision; reducing digits truncates toward zero."""
        if digits == self.digits:
            return self
        if digits > self.digits:
            return FixedLog(self.mantissa * 10 ** (digits - self.digits), digits)
        q = abs(self.mantissa) // 10 ** (self.digits - digits)
        return FixedLog(q if self.mantissa >= 0 else -q, digits)

    def _align(self, other: "FixedLog") -> tuple[int, int, int]:
        d = max(self.digits, other.digits)
        return (self.mantissa * 10 ** (d - self.digits),
                other.mantissa * 10 ** (d - other.digits), d)

    def __add__(self, other):
        if isinstance(other, FixedLog):
            a, b, d = self._align(other)
            return FixedLog(a + b, d)
        if isinstance(other, int):
            return FixedLog(self.mantissa + other * 10**self.digits, self.digits)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, FixedLog):
            a, b, d = self._align(other)
            return FixedLog(a - b, d)
        if isinstance(other, int):
            return FixedLog(self.mantissa - other * 10**self.digits, self.digits)
        return NotImplemented

    def __neg__(self):
        return FixedLog(-self.mantissa, self.digits)

    def __mul__(self, other):
        if isinstance(other, FixedLog):
            return FixedLog(self.mantissa * other.mantissa, self.digits + other.digits)
        if isinstance(other, int):
            return FixedLog(self.mantissa * other, self.digits)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, FixedLog):
            a, b, _ = self._align(other)
            return a == b
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, FixedLog):
            a, b, _ = self._align(other)
            return a < b
        if isinstance(other, (int, Fraction, float)):
            return self.to_fraction() < other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __str__(self):
        sign = "-" if self.mantissa < 0 else ""
        whole, frac = divmod(abs(self.mantissa), 10**self.digits)
        return f"{sign}{whole}.{frac:0{self.digits}d}"

    def __repr__(self):
        return f"FixedLog({self})"


def _as_fraction(x) -> Fraction:
    if isinstance(x, FixedLog):
        return x.to_fraction()
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


def _power_of_ten(x: Fraction) -> int | None:
    num, den = x.numerator, x.denominator
    for a, b, sign in ((num, den, 1), (den, num, -1)):
        if b == 1:
            s = str(a)
            if s[0] == "1" and set(s[1:]) <= {"0"}:
                return sign * (len(s) - 1)
    return None


def log_floor(x, digits: int) -> FixedLog:
    """Truncated base-10 logarithm of a positive rational, exact to ``digits`` places.

    Truncation is toward zero, so ``log_floor(Fraction(1, 2), 3)`` is ``-0.301``.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    q = _as_fraction(x)
    if q <= 0:
        raise DomainError(f"logarithm undefined for {x}")
    return _log_floor_cached(q, digits)


@lru_cache(maxsize=8192)
def _log_floor_cached(q: Fraction, digits: int) -> FixedLog:
    k = _power_of_ten(q)
    if k is not None:
        return FixedLog(k * 10**digits, digits)
    # log10 of a rational that is not a power of ten is irrational: widening terminates.
    mag = max(len(str(q.numerator)), len(str(q.denominator)))
    dps = digits + len(str(mag)) + 20
    with _iv_lock:
        saved = iv.dps
        try:
            while True:
                iv.dps = dps
                val = iv.log(iv.mpf(q.numerator) / iv.mpf(q.denominator)) / iv.log(10)
                lo, hi = (val * iv.mpf(10) ** digits)._mpi_
                mode = "f" if q > 1 else "c"
                a, b = to_int(lo, mode), to_int(hi, mode)
                if a == b:
                    return FixedLog(a, digits)
                dps *= 2
        finally:
            iv.dps = saved


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n < 2**64."""
    if n >= _U64:
        raise DomainError(f"{n} exceeds the 64-bit primality range")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeBasis:
    """Strictly increasing primes with their truncated logs at a shared precision."""

    primes: tuple[int, ...]
    digits: int = DEFAULT_DIGITS
    logs: tuple[FixedLog, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        primes = tuple(int(p) for p in self.primes)
        if not primes:
            raise EmptyBasisError("a prime basis needs at least one prime")
        for p in primes:
            if not is_prime(p):
                raise DomainError(f"{p} is not prime")
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise DomainError("basis primes must be strictly increasing")
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "logs", tuple(log_floor(p, self.digits) for p in primes))

    def __len__(self):
        return len(self.primes)

    @property
    def log_mantissas(self) -> tuple[int, ...]:
        return tuple(l.mantissa for l in self.logs)

    def at_digits(self, digits: int) -> "PrimeBasis":
        if digits == self.digits:
            return self
        return PrimeBasis(self.primes, digits)

    def prefix(self, n: int) -> "PrimeBasis":
        return PrimeBasis(self.primes[:n], self.digits)


def gen_primes(m: int, progression: tuple[int, int] | None = None,
               digits: int = DEFAULT_DIGITS) -> PrimeBasis:
    """First ``m`` primes, or the first ``m`` primes of ``a, a+d, a+2d, ...``."""
    if m < 1:
        raise EmptyBasisError("m must be >= 1")
    if progression is None:
        a, d = 2, 1
    else:
        a, d = progression
        if a < 1 or d < 1 or math.gcd(a, d) != 1:
            raise InvalidProgressionError(f"progression ({a}, {d}) must have gcd 1")
    found = []
    x = a
    while len(found) < m:
        if is_prime(x):
            found.append(x)
        x += d
    return PrimeBasis(tuple(found), digits)


# -- enumeration helpers -------------------------------------------------------

def exponent_sums(weights: Sequence[int], k: int, dtype=np.int64) -> np.ndarray:
    """Sums ``sum(a_i * w_i)`` for every ``a`` in ``{0..k}^n``.

    Entry ``j`` corresponds to the mixed-radix digits of ``j`` in base ``k+1``
    with ``a_1`` least significant (see :func:`index_to_exponents`).
    """
    sums = np.zeros(1, dtype=dtype)
    steps = np.arange(k + 1, dtype=dtype) if dtype is not object else np.array(list(range(k + 1)), dtype=object)
    for w in weights:
        sums = (sums[None, :] + steps[:, None] * w).ravel()
    return sums


def index_to_exponents(index: int, n: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, r = divmod(index, k + 1)
        out.append(r)
    return tuple(out)


def exponents_to_index(a: Sequence[int], k: int) -> int:
    idx = 0
    for e in reversed(a):
        idx = idx * (k + 1) + e
    return idx


def _gap_digits(primes: Sequence[int], k: int) -> int:
    """Digits after which truncated sums provably keep the exact order.

    Distinct g-codes A < B <= G differ in log10 by at least log10(1 + 1/G),
    which is > 1 / ((G + 1) ln 10); summed truncation error is < n*k*10**-D.
    """
    n = len(primes)
    g_max = math.prod(p**k for p in primes)
    bound = n * k * (g_max + 1) * _LN10_UPPER
    v = math.ceil(bound)
    d = len(str(v - 1)) if v > 1 else 1
    while 10**d < v:
        d += 1
    return max(d, 1)


def _exact_order(primes: Sequence[int], k: int, budget_dx: int) -> np.ndarray:
    """Permutation sorting the (k+1)^n codes by exact g-code value."""
    mant = [log_floor(p, budget_dx).mantissa for p in primes]
    limb = 10**15
    hi = [m // limb for m in mant]
    lo = [m % limb for m in mant]
    n = len(primes)
    if n * k * max(hi, default=0) < 2**62 and n * k * limb < 2**62:
        h = exponent_sums(hi, k)
        l = exponent_sums(lo, k)
        h = h + l // limb
        l = l % limb
        return np.lexsort((l, h))
    sums = exponent_sums(mant, k, dtype=object)
    return np.array(sorted(range(len(sums)), key=sums.__getitem__), dtype=np.int64)


@lru_cache(maxsize=256)
def _required_digits(primes: tuple[int, ...], k: int, budget: int) -> int:
    n = len(primes)
    d_gap = _gap_digits(primes, k)
    if d_gap > MAX_GAP_DIGITS:
        raise PrecisionUndecidableError(f"gap bound needs {d_gap} digits")
    if (k + 1) ** n > budget:
        return d_gap
    dx = d_gap + 1
    perm = _exact_order(primes, k, dx)
    hi_mant = [log_floor(p, dx).mantissa for p in primes]
    for d in range(1, d_gap):
        logs = [m // 10 ** (dx - d) for m in hi_mant]
        dtype = np.int64 if n * k * max(logs) < 2**62 else object
        sums = exponent_sums(logs, k, dtype=dtype)[perm]
        if np.all(sums[1:] > sums[:-1]):
            return d
    return d_gap


def required_digits(basis: PrimeBasis, n: int, k: int, budget: int = DEFAULT_BUDGET) -> int:
    """Smallest D at which l-codes over ``{0..k}^n`` are distinct and ordered like g-codes.

    Enumerates all ``(k+1)**n`` codes when that fits in ``budget``; otherwise
    returns the (sufficient, not minimal) gap-bound digit count.
    """
    if n > len(basis):
        raise ValueError(f"code length {n} exceeds basis size {len(basis)}")
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    return _required_digits(tuple(basis.primes[:n]), k, budget)


def parse_fixed(text: str, digits: int | None = None) -> FixedLog:
    """Accept ``"0.778150"`` or ``"778150,6"``."""
    text = text.strip()
    if "," in text:
        mant, d = text.split(",")
        return FixedLog(int(mant), int(d))
    return FixedLog.from_decimal(text, digits)


def to_fixed(x, digits: int) -> FixedLog:
    """Convert an int/Fraction/FixedLog to FixedLog, truncating toward zero."""
    if isinstance(x, FixedLog):
        return x.rescale(digits)
    q = _as_fraction(x) * 10**digits
    m = abs(q.numerator) // q.denominator
    return FixedLog(m if q >= 0 else -m, digits)


def mantissas(values: Iterable[FixedLog], digits: int) -> list[int]:
    return [v.rescale(digits).mantissa for v in values]
