"""``ordtope`` command-line interface.

Exit codes: 0 success, 2 malformed input or unknown claim, 3 value outside
the factorial domain, 4 search target absent, 5 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import audit as audit_mod
from .codes import g_decode, g_encode, l_encode
from .errors import BudgetError, NotInFactorialDomainError, OrdtopeError
from .extras import bead_sort, concentration_stats, sibuya_batch
from .numeric import (
    DEFAULT_BUDGET,
    DEFAULT_DIGITS,
    FixedLog,
    PrimeBasis,
    gen_primes,
    index_to_exponents,
    parse_fixed,
    required_digits,
)
from .order import RankOracle, curve_to_csv, linear_scan, order_curve, order_search
from .report import jsonable
from .transforms import audit_jst_orders, build_jst, jst_lcodes

EXIT_MALFORMED = 2
EXIT_NOT_IN_DOMAIN = 3
EXIT_ABSENT = 4
EXIT_BUDGET = 5


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def parse_basis(text: str, count: int | None, digits: int) -> PrimeBasis:
    """``first:m`` or ``prog:a:d`` (length taken from ``count``) or ``prog:a:d:m``."""
    parts = text.split(":")
    try:
        if parts[0] == "first" and len(parts) == 2:
            return gen_primes(int(parts[1]), digits=digits)
        if parts[0] == "prog" and len(parts) in (3, 4):
            m = int(parts[3]) if len(parts) == 4 else count
            if m is None:
                raise ValueError("prog basis needs a length")
            return gen_primes(m, (int(parts[1]), int(parts[2])), digits=digits)
    except ValueError as exc:
        raise _Exit(EXIT_MALFORMED, f"bad basis {text!r}: {exc}") from exc
    raise _Exit(EXIT_MALFORMED, f"bad basis {text!r}; use first:m or prog:a:d")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise _Exit(EXIT_MALFORMED, f"expected integers, got {text!r}") from exc


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("ORDTOPE_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise _Exit(EXIT_MALFORMED, f"ORDTOPE_BUDGET must be an integer, got {env!r}") from exc
    return DEFAULT_BUDGET


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n")


def _reports_json(reports, args) -> list:
    out = []
    for r in reports:
        if args.no_timing:
            r.runtime_ms = None
        out.append(r.to_json())
    return out


def _oracle(args, n: int) -> RankOracle:
    budget = _budget(args)
    basis = parse_basis(args.basis or f"first:{n}", n, args.digits or DEFAULT_DIGITS)
    if n > len(basis):
        raise _Exit(EXIT_MALFORMED, f"--n {n} exceeds basis size {len(basis)}")
    return RankOracle(basis, n, args.k, strategy=args.strategy, digits=args.digits, budget=budget)


# -- subcommands ---------------------------------------------------------------

def cmd_encode(args) -> int:
    a = _ints(args.vector)
    basis = parse_basis(args.basis or f"first:{len(a)}", len(a), args.digits or DEFAULT_DIGITS)
    if args.l:
        code = l_encode(a, basis, args.digits, k=args.k)
        if code.warning:
            print(code.warning, file=sys.stderr)
        print(f"{code.sum.mantissa},{code.sum.digits}")
    else:
        print(g_encode(a, basis).value)
    return 0


def cmd_decode(args) -> int:
    if args.l:
        target = parse_fixed(args.value)
        args.digits = args.digits or target.digits
        res = order_search(target, _oracle(args, args.n))
        if not res.found:
            print("absent", file=sys.stderr)
            return EXIT_ABSENT
        print(",".join(map(str, res.preimage)))
        return 0
    try:
        value = int(args.value)
    except ValueError as exc:
        raise _Exit(EXIT_MALFORMED, f"not an integer: {args.value!r}") from exc
    basis = parse_basis(args.basis or "first:64", args.n, DEFAULT_DIGITS)
    exps = list(g_decode(value, basis, args.n or len(basis)))
    if not args.n:
        # without --n, stop at the largest prime that divides the value
        while len(exps) > 1 and exps[-1] == 0:
            exps.pop()
    print(",".join(map(str, exps)))
    return 0


def cmd_order_curve(args) -> int:
    oracle = _oracle(args, args.n)
    if oracle.size > oracle.budget:
        raise BudgetError(f"{oracle.size} codes exceed budget {oracle.budget}")
    sums = oracle.all_sums()
    pre = [index_to_exponents(i, args.n, args.k) for i in range(len(sums))]
    curve = order_curve([oracle.value_fixed(int(m)) for m in sums], pre)
    if args.format == "json":
        _emit_json([{"rank": e.rank, "value_mantissa": e.value.mantissa, "digits": e.value.digits,
                     "preimage": list(e.preimage)} for e in curve.entries])
    else:
        sys.stdout.write(curve_to_csv(curve))
    return 0


def cmd_search(args) -> int:
    if args.target is not None and args.digits is None:
        try:
            args.digits = parse_fixed(args.target).digits
        except (ValueError, ArithmeticError) as exc:
            raise _Exit(EXIT_MALFORMED, f"bad target {args.target!r}") from exc
    oracle = _oracle(args, args.n)
    if args.target is None:
        rng = np.random.default_rng(args.seed)
        bits = rng.integers(0, args.k + 1, size=args.n)
        target = oracle.value_fixed(int(sum(int(b) * l for b, l in zip(bits, oracle.logs))))
    else:
        try:
            target = parse_fixed(args.target)
        except (ValueError, ArithmeticError) as exc:
            raise _Exit(EXIT_MALFORMED, f"bad target {args.target!r}") from exc
    res = order_search(target, oracle)
    row = {"target": str(target), "found": res.found,
           "preimage": list(res.preimage) if res.found else None,
           "rank": res.rank, "comparisons": res.comparisons, "rank_calls": res.rank_calls}
    if args.format == "json":
        _emit_json(row)
    else:
        pre = ",".join(map(str, res.preimage)) if res.found else "absent"
        print(f"preimage={pre} comparisons={res.comparisons} rank={res.rank}")
    return 0 if res.found else EXIT_ABSENT


def cmd_audit(args) -> int:
    claims = "all" if args.claims == "all" else [c.strip() for c in args.claims.split(",") if c.strip()]
    primes = tuple(_ints(args.primes)) if args.primes else (2, 3, 5)
    try:
        reports = audit_mod.run_claims(claims, seed=args.seed, budget=_budget(args), K=args.k,
                                       M=args.m, k=args.exp_k, n=args.n, primes=primes)
    except KeyError as exc:
        raise _Exit(EXIT_MALFORMED, f"unknown claim id: {exc.args[0]}") from exc
    _emit_json(_reports_json(reports, args))
    return 0


def cmd_jst(args) -> int:
    try:
        jst = build_jst(args.k, args.m, args.seed)
    except OrdtopeError as exc:
        raise _Exit(EXIT_MALFORMED, str(exc)) from exc
    if args.curves:
        _write_curves(jst, Path(args.curves), args.exp_k, args.digits)
    if args.audit:
        _emit_json(_reports_json(audit_jst_orders(args.k, args.m, args.exp_k, args.seed,
                                                  _budget(args)), args))
    else:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(jst.S.tolist())
        sys.stdout.write(buf.getvalue())
    return 0


def _write_curves(jst, out: Path, k: int, digits: int | None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    cols = jst.S.shape[1]
    d = digits or required_digits(gen_primes(cols), cols, 1)
    codes = jst_lcodes(jst, gen_primes(cols, digits=d), k)
    rows = [tuple(r) for r in jst.S.tolist()]
    (out / "code1.csv").write_text(curve_to_csv(order_curve(list(codes.code1), rows)))
    (out / "code2.csv").write_text(curve_to_csv(order_curve(list(codes.code2), rows)))
    s = jst.S.shape[0]
    pre = [index_to_exponents(i, s, k) for i in range(len(codes.code3))]
    vals = [FixedLog(int(m), codes.digits) for m in codes.code3]
    (out / "code3.csv").write_text(curve_to_csv(order_curve(vals, pre)))


def cmd_sphere(args) -> int:
    try:
        if args.stats:
            st = concentration_stats(args.n, args.samples, args.seed)
            _emit_json({"n": args.n, "samples": args.samples, "seed": args.seed, "mean": st.mean,
                        "std": st.std, "histogram": {"counts": st.counts, "edges": st.edges}})
            return 0
        pts = sibuya_batch(args.n, args.samples, args.seed)
    except OrdtopeError as exc:
        raise _Exit(EXIT_MALFORMED, str(exc)) from exc
    sys.stdout.write("".join(",".join(repr(float(v)) for v in row) + "\n" for row in pts))
    return 0


def cmd_beadsort(args) -> int:
    values = _ints(sys.stdin.read())
    if any(v < 0 for v in values):
        raise _Exit(EXIT_MALFORMED, "values must be natural numbers")
    width = args.max if args.max is not None else max(values, default=0)
    print(" ".join(map(str, bead_sort(values, width))))
    return 0


def cmd_bench(args) -> int:
    rows = []
    for n in _ints(args.sizes):
        budget = _budget(args)
        basis = gen_primes(n)
        oracle = RankOracle(basis, n, 1, digits=args.digits, budget=budget)
        rng = np.random.default_rng(args.seed)
        idx = [int(i) for i in rng.integers(0, 2**n, size=args.targets)]
        targets = [oracle.value_fixed(sum(l for j, l in enumerate(oracle.logs) if (i >> j) & 1))
                   for i in idx]
        stats = {}

        t0 = time.perf_counter()
        found = [order_search(t, oracle) for t in targets]
        stats["order_search"] = (sum(r.comparisons for r in found), time.perf_counter() - t0)

        t0 = time.perf_counter()
        scans = [linear_scan(t, oracle) for t in targets]
        stats["linear_scan"] = (sum(p for _, p in scans), time.perf_counter() - t0)

        t0 = time.perf_counter()
        sort_cmp, search_cmp, hits = _sort_then_search(oracle.all_sums(), [t.mantissa for t in targets])
        stats["sort_then_search"] = (sort_cmp * len(targets) + search_cmp, time.perf_counter() - t0)

        # all three methods must agree on the located values
        for r, (pos, _), h, t in zip(found, scans, hits, targets):
            if not (r.found and pos is not None and h):
                raise OrdtopeError(f"bench methods disagree on target {t}")
        for method, (total, wall) in stats.items():
            rows.append([2**n, method, f"{total / len(targets):.3f}",
                         "" if args.no_timing else f"{wall * 1000 / len(targets):.3f}"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "method", "comparisons", "wall_ms"])
    w.writerows(rows)
    sys.stdout.write(buf.getvalue())
    return 0


def _sort_then_search(values: np.ndarray, targets: list[int]) -> tuple[int, int, list[bool]]:
    """Comparison sort with a counting comparator, then counted binary searches."""
    count = 0

    def cmp(a, b):
        nonlocal count
        count += 1
        return (a > b) - (a < b)

    ordered = sorted((int(v) for v in values), key=functools.cmp_to_key(cmp))
    sort_count = count
    search = 0
    hits = []
    for t in targets:
        lo, hi = 0, len(ordered) - 1
        hit = False
        while lo <= hi:
            mid = (lo + hi) // 2
            search += 1
            if ordered[mid] == t:
                hit = True
                break
            if ordered[mid] < t:
                lo = mid + 1
            else:
                hi = mid - 1
        hits.append(hit)
    return sort_count, search, hits


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--digits", type=int, default=None, help="fixed-point digits D")
    common.add_argument("--budget", type=int, default=None,
                        help=f"enumeration budget (default {DEFAULT_BUDGET}, or ORDTOPE_BUDGET)")
    common.add_argument("--format", choices=("json", "csv"), default="csv")
    common.add_argument("--no-timing", action="store_true",
                        help="blank wall-time fields so output is byte-identical across runs")

    p = argparse.ArgumentParser(prog="ordtope", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    def oracle_flags(sp):
        sp.add_argument("--basis", default=None, help="first:m or prog:a:d")
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=int, default=1, help="largest exponent")
        sp.add_argument("--strategy", choices=("meet-in-the-middle", "enumerate"),
                        default="meet-in-the-middle")

    sp = add("encode", cmd_encode, "encode an exponent vector")
    kind = sp.add_mutually_exclusive_group()
    kind.add_argument("--g", action="store_true", help="g-code (default)")
    kind.add_argument("--l", action="store_true", help="l-code as mantissa,digits")
    sp.add_argument("--basis", default=None)
    sp.add_argument("--k", type=int, default=None, help="warn if digits are too few for {0..k}^n")
    sp.add_argument("vector", help="comma-separated exponents")

    sp = add("decode", cmd_decode, "decode a g-code or locate an l-code")
    kind = sp.add_mutually_exclusive_group()
    kind.add_argument("--g", action="store_true")
    kind.add_argument("--l", action="store_true")
    sp.add_argument("--basis", default=None)
    sp.add_argument("--n", type=int, default=None, help="code length")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--strategy", default="meet-in-the-middle",
                    choices=("meet-in-the-middle", "enumerate"))
    sp.add_argument("value")

    oracle_flags(add("order-curve", cmd_order_curve, "sorted l-codes of {0..k}^n as CSV"))

    sp = add("search", cmd_search, "binary search by rank without sorting")
    oracle_flags(sp)
    sp.add_argument("--target", default=None,
                    help="decimal or mantissa,digits; default is a seeded random code")

    sp = add("audit", cmd_audit, "run claim audits, print JSON reports")
    sp.add_argument("--claims", default="all", help="all or comma-separated claim ids")
    sp.add_argument("--k", type=int, default=1, help="JST block parameter K")
    sp.add_argument("--m", type=int, default=1, help="JST block parameter M")
    sp.add_argument("--exp-k", type=int, default=1, help="exponent bound for the third JST code")
    sp.add_argument("--n", type=int, default=30, help="totient range")
    sp.add_argument("--primes", default=None, help="totient primes, comma-separated")

    sp = add("jst", cmd_jst, "build a JST matrix; optionally audit its codes")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--exp-k", type=int, default=1)
    sp.add_argument("--audit", action="store_true")
    sp.add_argument("--curves", default=None, help="directory for code1/2/3 order-curve CSVs")

    sp = add("sphere", cmd_sphere, "Sibuya samples as CSV")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--samples", type=int, default=1)
    sp.add_argument("--stats", action="store_true", help="print distance statistics instead")

    sp = add("beadsort", cmd_beadsort, "bead-sort naturals read from stdin")
    sp.add_argument("--max", type=int, default=None, help="bead width M")

    sp = add("bench", cmd_bench, "order_search vs linear scan vs sort-then-search")
    sp.add_argument("--sizes", default="4,8,12,16", help="code lengths n; N = 2^n")
    sp.add_argument("--targets", type=int, default=20)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if str(exc):
            print(f"ordtope: {exc}", file=sys.stderr)
        return exc.code
    except NotInFactorialDomainError as exc:
        print(f"ordtope: not-in-factorial-domain: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_DOMAIN
    except BudgetError as exc:
        print(f"ordtope: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OrdtopeError, ValueError) as exc:
        print(f"ordtope: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
