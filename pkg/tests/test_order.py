import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ordtope.codes import g_encode, l_encode
from ordtope.errors import BudgetError, CorruptOracleError
from ordtope.numeric import FixedLog, gen_primes, index_to_exponents, required_digits
from ordtope.order import (
    RankOracle,
    count_coprime,
    curve_to_csv,
    finite_differences,
    is_compact_order,
    linear_scan,
    order_curve,
    order_search,
    rank,
    totient_formula,
    unrank,
)


def test_order_curve_n3_matches_subset_order():
    basis = gen_primes(3)
    vecs = list(product((0, 1), repeat=3))
    curve = order_curve([l_encode(a, basis) for a in vecs])
    by_product = sorted(vecs, key=lambda a: g_encode(a, basis).value)
    assert curve.preimages == by_product
    assert [e.rank for e in curve.entries] == list(range(8))


def test_order_curve_ties_broken_by_preimage():
    curve = order_curve([5, 3, 5, 1], preimages=[(2,), (0,), (1,), (9,)])
    assert curve.preimages == [(9,), (0,), (1,), (2,)]


def test_curve_csv():
    curve = order_curve([l_encode((0, 1), gen_primes(2)), l_encode((1, 0), gen_primes(2))])
    assert curve_to_csv(curve) == ("rank,value_mantissa,digits,preimage\n"
                                   "0,301029,6,1;0\n1,477121,6,0;1\n")


def test_finite_differences_and_compact_order():
    vals = [FixedLog(0, 3), FixedLog(301, 3), FixedLog(477, 3)]
    assert finite_differences(vals) == [FixedLog(301, 3), FixedLog(176, 3)]
    assert is_compact_order([3, 5, 7, 9])
    assert not is_compact_order([0, 1, 3])
    assert finite_differences([4, 4, 4]) == [0, 0]
    with pytest.raises(ValueError):
        finite_differences([1])


def test_subset_sum_curve_is_not_compact():
    basis = gen_primes(3)
    curve = order_curve([l_encode(a, basis) for a in product((0, 1), repeat=3)])
    assert not is_compact_order(curve)


@pytest.mark.parametrize("n,k", [(6, 1), (4, 2), (9, 1)])
def test_mitm_equals_enumeration_exhaustively(n, k):
    basis = gen_primes(n)
    a = RankOracle(basis, n, k, strategy="enumerate")
    b = RankOracle(basis, n, k, strategy="meet-in-the-middle", digits=a.digits)
    sums = np.sort(a.all_sums())
    for t in range(int(sums[-1]) + 2):
        assert a.count_below(t) == b.count_below(t) == int(np.searchsorted(sums, t))


@pytest.mark.parametrize("strategy", ["enumerate", "meet-in-the-middle"])
def test_unrank_inverts_rank_exhaustively(strategy):
    n = 10
    oracle = RankOracle(gen_primes(n), n, strategy=strategy)
    for r in range(oracle.size):
        value, pre = unrank(r, oracle)
        assert rank(value, oracle) == r
        assert l_encode(pre, oracle.basis).sum == value


def test_rank_extremes():
    oracle = RankOracle(gen_primes(8), 8)
    assert rank(0, oracle) == 0
    assert rank(float("inf"), oracle) == 256
    assert rank(-1, oracle) == 0


def test_order_search_examples():
    basis = gen_primes(3)
    oracle = RankOracle(basis, 3, digits=6)
    res = order_search(l_encode((0, 1, 1), basis), oracle)
    assert res.preimage == (0, 1, 1) and res.comparisons <= 5
    assert order_search(0, oracle).preimage == (0, 0, 0)
    assert not order_search(Fraction(1, 2), oracle).found


@given(st.integers(0, 2**12 - 1))
def test_order_search_finds_every_code(idx):
    n = 12
    oracle = _oracle12()
    a = index_to_exponents(idx, n, 1)
    res = order_search(l_encode(a, oracle.basis), oracle)
    assert res.preimage == a
    assert res.comparisons <= math.ceil(math.log2(oracle.size)) + 2


_CACHE = {}


def _oracle12():
    if "o" not in _CACHE:
        _CACHE["o"] = RankOracle(gen_primes(12), 12)
    return _CACHE["o"]


def test_linear_scan_baseline():
    oracle = RankOracle(gen_primes(4), 4)
    target = l_encode((1, 0, 1, 0), oracle.basis)
    idx, probes = linear_scan(target, oracle)
    assert index_to_exponents(idx, 4, 1) == (1, 0, 1, 0)
    assert probes == idx + 1
    assert linear_scan(Fraction(1, 2), oracle) == (None, 16)


class _BrokenOracle(RankOracle):
    def value_at(self, r):
        # reversed order: higher ranks give smaller values
        return super().value_at(self.size - 1 - r)


def test_corrupt_oracle_detected():
    oracle = _BrokenOracle(gen_primes(6), 6)
    with pytest.raises(CorruptOracleError):
        for idx in range(64):
            order_search(l_encode(index_to_exponents(idx, 6, 1), oracle.basis), oracle)


def test_budget_errors():
    with pytest.raises(BudgetError):
        RankOracle(gen_primes(12), 12, strategy="enumerate", budget=100)


def _brute_coprime(n, primes):
    return sum(1 for x in range(1, n + 1) if all(x % p for p in primes))


def test_count_coprime_examples():
    assert count_coprime(30, (2, 3, 5)) == 8 == totient_formula(30, (2, 3, 5))
    assert count_coprime(10, ()) == 10
    assert count_coprime(7, (2,)) == 4 and totient_formula(7, (2,)) == Fraction(7, 2)


@given(st.integers(1, 1000), st.lists(st.sampled_from([2, 3, 5, 7, 11, 13]), max_size=4, unique=True))
def test_count_coprime_properties(n, primes):
    exact = count_coprime(n, primes)
    assert exact == _brute_coprime(n, primes)
    formula = totient_formula(n, primes)
    if all(n % p == 0 for p in primes):
        assert exact == formula
    if primes:
        assert abs(exact - formula) < len(primes)
    else:
        assert exact == formula
