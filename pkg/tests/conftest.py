import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def mp_log_floor(q, digits: int) -> int:
    """Independent oracle: truncated log10 mantissa at 80 significant digits."""
    q = Fraction(q)
    with mpmath.workdps(80):
        v = mpmath.log10(mpmath.mpf(q.numerator) / q.denominator) * mpmath.mpf(10) ** digits
        return int(mpmath.floor(v)) if v >= 0 else -int(mpmath.floor(-v))


def trial_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@pytest.fixture
def oracle_log():
    return mp_log_floor


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
