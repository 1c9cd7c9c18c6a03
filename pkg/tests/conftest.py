import cmath
import math

import pytest

from zerocenter.algebra import Deformation, poly_from_strings
from zerocenter.numerics import fiber

# criterion -> (passed, detail), filled by test_acceptance and printed at the end
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")


def P(*coeffs):
    return poly_from_strings([str(c) for c in coeffs])


def angular_labels(n, t=1.0):
    """t^(1/n) e^(2 pi i k / n), k = 0..n-1 (principal root first)."""
    r = complex(t) ** (1.0 / n)
    return [r * cmath.exp(2j * math.pi * k / n) for k in range(n)]


@pytest.fixture
def ex1():
    return Deformation(P(0, 0, 0, 0, 0, 0, 1), P(0, 0, 1, 1))


@pytest.fixture
def ex2():
    return Deformation(P(0, 0, 0, 0, 1), P("1/3", 0, 1, 0, "1/2"))


@pytest.fixture
def ex1_fiber(ex1):
    return fiber(ex1, 1, 0, labels=angular_labels(6))


@pytest.fixture
def ex2_fiber(ex2):
    return fiber(ex2, 1, 0, labels=angular_labels(4))


def reindex_on_group(d, weights, fib, g):
    """The cycle with ``weights`` on ``fib``, carried to the base fiber of group ``g``."""
    from zerocenter.center import transport
    from zerocenter.cycles import make_cycle
    from zerocenter.numerics import match_roots

    base = g.provenance["fiber"]
    roots = [complex(*z) for z in base["roots"]]
    t, e = complex(*base["t"]), complex(*base["eps"])
    moved = transport(d, make_cycle(weights, fib), t, e)
    out = [0] * len(weights)
    for i, j in enumerate(match_roots(moved.roots, roots)):
        out[j] = weights[i]
    return make_cycle(out, fiber(d, t, e))
