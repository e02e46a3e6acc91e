"""g-codes (prime-power products) and l-codes (truncated log sums).

A g-code maps an exponent vector ``a`` to ``prod(p_i ** a_i)``; unique
factorization makes it injective.  The matching l-code is
``sum(a_i * floor_log(p_i))`` in fixed point, which preserves the g-code order
once the precision reaches :func:`ordtope.numeric.required_digits`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import (
    BasisTooSmallError,
    ConstantsInfeasibleError,
    NotInFactorialDomainError,
    SpecError,
)
from .numeric import FixedLog, PrimeBasis, required_digits

MAX_LENGTH = 64
MAX_EXPONENT = 64


@dataclass(frozen=True)
class GCode:
    value: int
    basis: PrimeBasis
    length: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class LCode:
    sum: FixedLog
    exponents: tuple[int, ...]
    basis: PrimeBasis
    warning: str | None = field(default=None, compare=False)

    def to_pair(self) -> tuple[int, int]:
        return self.sum.mantissa, self.sum.digits


def _check_vector(a: Sequence[int], basis: PrimeBasis) -> tuple[int, ...]:
    a = tuple(int(x) for x in a)
    if len(a) > len(basis):
        raise BasisTooSmallError(f"vector of length {len(a)} needs more than {len(basis)} primes")
    if len(a) > MAX_LENGTH:
        raise ValueError(f"code length is limited to {MAX_LENGTH}")
    for x in a:
        if x < 0:
            raise ValueError("exponents must be non-negative")
        if x > MAX_EXPONENT:
            raise ValueError(f"exponents are limited to {MAX_EXPONENT}")
    return a


def g_encode(a: Sequence[int], basis: PrimeBasis) -> GCode:
    a = _check_vector(a, basis)
    value = math.prod(p**e for p, e in zip(basis.primes, a))
    return GCode(value, basis, len(a))


def g_decode(code: GCode | int, basis: PrimeBasis | None = None, length: int | None = None) -> tuple[int, ...]:
    """Trial-divide by the basis primes in order.

    Raises NotInFactorialDomainError if a factor outside the basis prefix remains.
    """
    if isinstance(code, GCode):
        value, basis, length = code.value, code.basis, code.length
    else:
        value = int(code)
        if basis is None:
            raise ValueError("decoding a bare integer needs a basis")
        if length is None:
            length = len(basis)
    if value < 1:
        raise NotInFactorialDomainError(value, value)
    rest = value
    out = []
    for p in basis.primes[:length]:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        out.append(e)
    if rest != 1:
        raise NotInFactorialDomainError(value, rest)
    return tuple(out)


def l_encode(a: Sequence[int], basis: PrimeBasis, digits: int | None = None,
             k: int | None = None) -> LCode:
    """Fixed-point log sum of an exponent vector.

    With ``k`` given, the result carries a warning when ``digits`` is below
    the precision needed to keep all codes of ``{0..k}^len(a)`` distinct.
    """
    a = _check_vector(a, basis)
    if digits is not None:
        basis = basis.at_digits(digits)
    total = FixedLog(sum(e * m for e, m in zip(a, basis.log_mantissas)), basis.digits)
    warning = None
    if k is not None and a:
        need = required_digits(basis, len(a), k)
        if basis.digits < need:
            warning = (f"precision-insufficient: {basis.digits} digits < {need} "
                       f"required for n={len(a)}, k={k}")
    return LCode(total, a, basis, warning)


def _numeric(v) -> Fraction:
    if isinstance(v, FixedLog):
        return v.to_fraction()
    if isinstance(v, LCode):
        return v.sum.to_fraction()
    if isinstance(v, GCode):
        return Fraction(v.value)
    return Fraction(v)


def check_factorial_domain(values: Sequence, tolerance=0, inputs: Sequence | None = None) -> bool:
    """True iff distinct inputs give values more than ``tolerance`` apart.

    Without ``inputs`` every value is treated as coming from a distinct input.
    With ``inputs``, equal inputs must also give values within ``tolerance``.
    """
    tol = _numeric(tolerance)
    nums = [_numeric(v) for v in values]
    if inputs is None:
        s = sorted(nums)
        return all(b - a > tol for a, b in zip(s, s[1:]))
    if len(inputs) != len(nums):
        raise ValueError("inputs and values differ in length")
    for i in range(len(nums)):
        for j in range(i + 1, len(nums)):
            same = inputs[i] == inputs[j]
            close = abs(nums[i] - nums[j]) <= tol
            if same != close:
                return False
    return True


# -- order-normalizing constants -----------------------------------------------

@dataclass(frozen=True)
class Constants:
    constants: tuple[FixedLog, ...]
    products: tuple[FixedLog, ...]
    epsilon: Fraction
    digits: int
    max_digit_count: int


def _ceil_fixed(q: Fraction, digits: int) -> FixedLog:
    scaled = q * 10**digits
    return FixedLog(-((-scaled.numerator) // scaled.denominator), digits)


def derive_constants(values: Sequence[FixedLog], digits: int | None = None) -> Constants:
    """Constants ``c_i ~ (1 + i*eps) / v_i`` whose products with ``v`` follow index order.

    ``c_i`` is rounded up so every product is >= 1.  eps is the smallest power
    of ten (down to 10**-digits) for which the products are strictly increasing
    and bounded by ``1 + m*eps``; the constants carry as many decimal places as
    that needs, at most ``digits`` plus the integer width of ``max(v)`` plus 1.
    """
    if not values:
        raise ValueError("no values")
    values = [v if isinstance(v, FixedLog) else FixedLog(int(v) * 10**(digits or 1), digits or 1)
              for v in values]
    if digits is None:
        digits = max(v.digits for v in values)
    vs = [v.to_fraction() for v in values]
    if any(v <= 0 for v in vs):
        raise ValueError("values must be positive")
    m = len(vs)
    # c_i * v_i overshoots (1 + i*eps) by < v_i * 10**-dc, so this width always suffices
    widest = digits + len(str(int(max(vs)))) + 1
    for e in range(digits, -1, -1):
        eps = Fraction(1, 10**e)
        upper = 1 + m * eps
        for dc in range(digits, widest + 1):
            cs = [_ceil_fixed((1 + i * eps) / v, dc) for i, v in enumerate(vs)]
            prods = [c * v for c, v in zip(cs, values)]
            if (all(b > a for a, b in zip(prods, prods[1:]))
                    and all(1 <= p.to_fraction() <= upper for p in prods)):
                return Constants(tuple(cs), tuple(prods), eps, dc,
                                 max(digit_count(c) for c in cs))
    raise ConstantsInfeasibleError(f"no epsilon gives monotone products at {digits} digits")


def digit_count(v: FixedLog) -> int:
    """Digits in the fixed-point form: integer part (at least one digit) plus D decimals."""
    whole = abs(v.mantissa) // 10**v.digits
    return len(str(whole)) + v.digits


# -- iterated encodings --------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    basis: PrimeBasis
    n: int


@dataclass(frozen=True)
class Compose:
    """g-code the fixed-width decimal blocks of the inner code with the outer spec."""

    outer: "EncodingSpec"
    inner: "EncodingSpec"
    block_digits: int = 1


@dataclass(frozen=True)
class UnionSpec:
    children: tuple["EncodingSpec", ...]


EncodingSpec = Union[Leaf, Compose, UnionSpec]


def input_length(spec: EncodingSpec) -> int | None:
    if isinstance(spec, Leaf):
        return spec.n
    if isinstance(spec, Compose):
        return input_length(spec.inner)
    return None


def iterations(spec: EncodingSpec) -> int:
    if isinstance(spec, Leaf):
        return 1
    if isinstance(spec, Compose):
        return iterations(spec.outer) + iterations(spec.inner)
    return max(iterations(c) for c in spec.children)


def _blocks(value: int, width: int) -> list[int]:
    base = 10**width
    out = []
    while value:
        value, r = divmod(value, base)
        out.append(r)
    return out


def iterate_encode(spec: EncodingSpec, payload):
    if isinstance(spec, Leaf):
        if len(payload) != spec.n:
            raise SpecError(f"leaf expects {spec.n} exponents, got {len(payload)}")
        if spec.n > len(spec.basis):
            raise SpecError("leaf length exceeds its basis")
        return g_encode(payload, spec.basis).value
    if isinstance(spec, Compose):
        inner = iterate_encode(spec.inner, payload)
        blocks = _blocks(inner, spec.block_digits)
        width = input_length(spec.outer)
        if width is None or len(blocks) > width:
            raise SpecError(f"inner code has {len(blocks)} blocks; outer accepts {width}")
        return iterate_encode(spec.outer, blocks + [0] * (width - len(blocks)))
    if isinstance(spec, UnionSpec):
        if len(payload) != len(spec.children):
            raise SpecError("union payload must have one entry per child")
        return [iterate_encode(c, p) for c, p in zip(spec.children, payload)]
    raise SpecError(f"unknown spec node {spec!r}")


def iterate_decode(spec: EncodingSpec, value):
    if isinstance(spec, Leaf):
        return g_decode(value, spec.basis, spec.n)
    if isinstance(spec, Compose):
        blocks = iterate_decode(spec.outer, value)
        base = 10**spec.block_digits
        if any(b >= base for b in blocks):
            raise SpecError("block exceeds its digit width")
        inner = sum(b * base**j for j, b in enumerate(blocks))
        return iterate_decode(spec.inner, inner)
    if isinstance(spec, UnionSpec):
        if len(value) != len(spec.children):
            raise SpecError("union value must have one entry per child")
        return [iterate_decode(c, v) for c, v in zip(spec.children, value)]
    raise SpecError(f"unknown spec node {spec!r}")
