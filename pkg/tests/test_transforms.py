import numpy as np
import pytest
from hypothesis import given, strategies as st

from ordtope.errors import ParameterError
from ordtope.numeric import FixedLog, gen_primes
from ordtope.transforms import audit_jst_orders, build_jst, dirac_audit, jst_lcodes


def test_small_blocks():
    j = build_jst(1, 1, B=[[1, 0]])
    assert j.S.tolist() == [[1, 1, 1, 0], [0, 0, 1, 1]]
    j = build_jst(2, 1, B=[[1, 0], [0, 1]])
    assert j.S.tolist() == [[1, 1, 0, 0, 1, 0], [0, 0, 1, 1, 0, 1], [0, 0, 0, 0, 1, 1]]


def test_parameter_errors():
    with pytest.raises(ParameterError):
        build_jst(0, 1)
    with pytest.raises(ParameterError):
        build_jst(1, 1, B=[[2, 0]])


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 1000))
def test_block_structure(K, M, seed):
    j = build_jst(K, M, seed)
    S = j.S
    assert S.shape == (K + M, 2 * K + 2 * M)
    for i in range(K):
        row = np.zeros(2 * K, dtype=int)
        row[2 * i:2 * i + 2] = 1
        assert S[i, :2 * K].tolist() == row.tolist()
    assert not S[K:, :2 * K].any()
    for i in range(M):
        row = np.zeros(2 * M, dtype=int)
        row[2 * i:2 * i + 2] = 1
        assert S[K + i, 2 * K:].tolist() == row.tolist()
    assert np.array_equal(S[:K, 2 * K:], j.B)
    assert S.sum() == 2 * (K + M) + j.B.sum()
    assert np.array_equal(build_jst(K, M, seed).S, S)


def test_zero_block_ones():
    assert build_jst(3, 2, B=np.zeros((3, 4))).S.sum() == 10


def test_codes_example():
    codes = jst_lcodes(build_jst(1, 1, B=[[0, 0]]), gen_primes(4, digits=3))
    assert codes.code1 == (FixedLog(778, 3), FixedLog(1543, 3))
    assert codes.collisions == ()
    assert codes.code2[0] < codes.code2[1]


def test_collisions_reported():
    codes = jst_lcodes(np.array([[1, 0, 1], [1, 0, 1]]), gen_primes(3))
    assert codes.collisions == ((0, 1),)


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 1000))
def test_code2_preserves_code1_order(K, M, seed):
    codes = jst_lcodes(build_jst(K, M, seed))
    key1 = sorted(range(K + M), key=lambda i: (codes.code1[i], i))
    key2 = sorted(range(K + M), key=lambda i: (codes.code2[i], i))
    assert key1 == key2


def test_audit_k1_m1():
    reports = {r.claim: r for r in audit_jst_orders(1, 1, 1, seed=0)}
    assert reports["eq.prop2"].verdict == "verified"
    assert reports["eq.prop1"].verdict == "verified"
    assert reports["eq.prop4"].paper_value == 9
    assert reports["eq.prop4"].computed_value == 4
    assert reports["eq.prop3"].verdict == "ambiguous"
    for r in reports.values():
        r.to_json()


def test_audit_deterministic_and_budget():
    a = [r.to_json() for r in audit_jst_orders(2, 1, 2, seed=3)]
    b = [r.to_json() for r in audit_jst_orders(2, 1, 2, seed=3)]
    for x, y in zip(a, b):
        x.pop("runtime_ms"), y.pop("runtime_ms")
    assert a == b
    assert all(r.verdict == "budget-exceeded" for r in audit_jst_orders(6, 6, 1))


def test_prop4_brute_force_count():
    reports = {r.claim: r for r in audit_jst_orders(1, 1, 2, seed=0)}
    # every vector in {0,1,2}^2 over (2, 3) gives a distinct product
    assert reports["eq.prop4"].computed_value == 9
    assert reports["eq.prop4"].verdict == "verified"


def test_dirac_report_fields():
    r = dirac_audit()
    cells = r.computed_value["cells"]
    assert [c["size"] for c in cells] == list(range(2, 9))
    assert all(0 < c["sparsity"] <= 1 for c in cells)
