"""Registry of claim audits.  Each audit returns one :class:`AuditReport`.

Claimed formulas are treated as hypotheses; brute-force values are
authoritative.  Audits never raise on a failed claim, they report it.
"""
from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .mappings import ball_counts, measure_dilation, measure_distortion, random_projection
from .numeric import DEFAULT_BUDGET, gen_primes, required_digits
from .order import RankOracle, count_coprime, order_search, totient_formula
from .report import AuditReport, compare
from .spaces import FiniteSpace, characteristic_radius
from .transforms import audit_jst_orders

JST_CLAIMS = ("eq.prop1", "eq.prop2", "eq.prop3", "eq.prop4", "eq.dirac")
CLAIMS = ("delta-f-formula",) + JST_CLAIMS + (
    "eq.balls", "c2-growth", "example-lat", "char-radius-log-bound", "abstract-bound", "totient")

def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


def audit_delta_f(seed: int = 0, n: int = 8, budget: int = DEFAULT_BUDGET, **_) -> AuditReport:
    """Finite differences of the indicator order (grid units) against 2^i + 2^(i+1)(i-1)."""
    t0 = time.perf_counter()
    basis = gen_primes(n)
    d = required_digits(basis, n, 1, budget)
    oracle = RankOracle(basis, n, 1, strategy="enumerate", digits=d, budget=budget)
    vals = oracle._sorted
    terms = min(n, len(vals) - 1)
    diffs = [int(vals[i] - vals[i - 1]) for i in range(1, terms + 1)]
    paper = [2**i + 2 ** (i + 1) * (i - 1) for i in range(1, terms + 1)]
    return AuditReport("delta-f-formula", {"n": n, "terms": terms}, paper, diffs,
                       compare(paper, diffs), _ms(t0), seed, d,
                       "literal reading: subset sums of truncated logs over the first n primes, "
                       "N = 2^n, differences in units of 10^-D; the congruence form has no "
                       "operational reading and is not checked")


def _projection_case(seed: int):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((64, 8))
    return x, random_projection(x, 4, seed)


def audit_balls(seed: int = 0, **_) -> AuditReport:
    """Ball counts for identity and a seeded R^8 -> R^4 projection."""
    t0 = time.perf_counter()
    x, y = _projection_case(seed)
    cells = []
    for name, img in (("identity", x), ("projection", y)):
        rep = measure_distortion(img, x)
        eps = float(np.median(np.linalg.norm(x[:, None] - x[None], axis=2)))
        bc = ball_counts(x, img, eps, rep.k1, rep.k2)
        cells.append({"mapping": name, "k1": rep.k1, "k2": rep.k2, "eps": eps,
                      "image": bc.image, "domain_wide": bc.domain_wide,
                      "domain_narrow": bc.domain_narrow, "holds": bc.holds})
    holds = [c["holds"] for c in cells]
    return AuditReport("eq.balls", {"points": 64, "dims": [8, 4]}, [True, True], cells,
                       compare([1, 1], [int(h) for h in holds]), _ms(t0), seed, None,
                       "counts use closed balls with q ranging over X; eps is the median pair distance")


def audit_c2_growth(seed: int = 0, **_) -> AuditReport:
    t0 = time.perf_counter()
    x, y = _projection_case(seed)
    rep = measure_dilation(y, x, [0.5, 1.0, 2.0])
    return AuditReport("c2-growth", {"points": 64, "dims": [8, 4], "eps": [0.5, 1.0, 2.0]},
                       rep.c2_predicted, rep.c2, compare(rep.c2_predicted, rep.c2, 0.05),
                       _ms(t0), seed, None,
                       f"observed c1={rep.c1}; tolerance 0.05 on c2 against 1 + ln|X|/|X|")


def audit_example_lat(seed: int = 0, budget: int = DEFAULT_BUDGET, **_) -> AuditReport:
    """Hypothesis: the listed vector is the 1-based rank of each singleton code among 2^16."""
    t0 = time.perf_counter()
    n = 16
    basis = gen_primes(n)
    d = required_digits(basis, n, 1, budget)
    oracle = RankOracle(basis, n, 1, digits=d, budget=budget)
    ranks = [oracle.count_below(m) + 1 for m in oracle.logs]
    paper = [1 + 16 * i for i in range(16)]
    return AuditReport("example-lat", {"n": n}, paper, ranks, compare(paper, ranks), _ms(t0),
                       seed, d, "the vector's indexing is undefined; this is one hypothesis")


def audit_char_radius(seed: int = 0, **_) -> AuditReport:
    t0 = time.perf_counter()
    space = FiniteSpace((0, 10), "l1")
    r = characteristic_radius(space)
    bound = math.log10(space.norm_inf())
    verdict = "verified" if r <= bound else "falsified"
    return AuditReport("char-radius-log-bound", {"X": [0, 10], "log_base": 10}, bound, r, verdict,
                       _ms(t0), seed, None, "claim read as r <= log ||X||_inf; ln gives the same verdict")


def audit_abstract_bound(seed: int = 0, sizes=(8, 12, 16, 20), targets: int = 50,
                         budget: int = DEFAULT_BUDGET, **_) -> AuditReport:
    """Worst measured comparisons against 2 log2(value range) log2 log2 N per domain size."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    cells = []
    for n in sizes:
        basis = gen_primes(n)
        d = required_digits(basis, n, 1, budget)
        oracle = RankOracle(basis, n, 1, digits=d, budget=budget)
        worst = 0
        for idx in rng.integers(0, 2**n, size=targets):
            m = sum(l for j, l in enumerate(oracle.logs) if (int(idx) >> j) & 1)
            res = order_search(oracle.value_fixed(m), oracle)
            worst = max(worst, res.comparisons)
        bound = 2 * math.log2(oracle.max_value) * math.log2(n)
        cells.append({"n": n, "digits": d, "max_comparisons": worst,
                      "bound": round(bound, 6), "holds": worst <= bound})
    ok = all(c["holds"] for c in cells)
    return AuditReport("abstract-bound", {"sizes": list(sizes), "targets": targets},
                       None, cells, "verified" if ok else "falsified", _ms(t0), seed, None,
                       "value range is the largest code in units of 10^-D; N = 2^n")


def audit_totient(seed: int = 0, n: int = 30, primes=(2, 3, 5), **_) -> AuditReport:
    t0 = time.perf_counter()
    exact = count_coprime(n, primes)
    formula = totient_formula(n, primes)
    paper = int(formula) if formula.denominator == 1 else formula
    return AuditReport("totient", {"n": n, "primes": list(primes)}, paper, exact,
                       compare(formula, exact), _ms(t0), seed, None,
                       "inclusion-exclusion count is authoritative")


_SINGLE: dict[str, Callable[..., AuditReport]] = {
    "delta-f-formula": audit_delta_f,
    "eq.balls": audit_balls,
    "c2-growth": audit_c2_growth,
    "example-lat": audit_example_lat,
    "char-radius-log-bound": audit_char_radius,
    "abstract-bound": audit_abstract_bound,
    "totient": audit_totient,
}


def run_claims(claims, seed: int = 0, budget: int = DEFAULT_BUDGET, K: int = 1, M: int = 1,
               k: int = 1, n: int = 30, primes=(2, 3, 5)) -> list[AuditReport]:
    """Run claims in the given order; ``"all"`` expands to every registered claim."""
    if claims == "all" or claims == ["all"]:
        claims = list(CLAIMS)
    unknown = [c for c in claims if c not in CLAIMS]
    if unknown:
        raise KeyError(", ".join(unknown))
    jst = None
    out = []
    for c in claims:
        if c in JST_CLAIMS:
            if jst is None:
                jst = {r.claim: r for r in audit_jst_orders(K, M, k, seed, budget)}
            out.append(jst[c])
        elif c == "totient":
            out.append(audit_totient(seed, n=n, primes=primes))
        else:
            out.append(_SINGLE[c](seed=seed, budget=budget))
    return out
