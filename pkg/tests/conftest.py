import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from fibratrix import Parameterization

SPHERE = ["s0^2+s1^2+s2^2", "2*s0*s2", "2*s0*s1", "s0^2-s1^2-s2^2"]
ROMAN = ["s0^2+s1^2+s2^2", "s1*s2", "s0*s2", "s0*s1"]
# l = (s0, s1, s2, s0+s1+s2); f = (l1*l2, l0*l3, l0*l1, l0*l1)
PLANE = ["s1*s2", "s0*(s0+s1+s2)", "s0*s1", "s0*s1"]
QUADRIC = ["s0*t0", "s0*t1", "s1*t0", "s1*t1"]
BPF_QUADRICS = ["s0^2", "s1^2", "s2^2", "(s0+s1+s2)^2"]


@pytest.fixture
def sphere():
    return Parameterization.from_strings(SPHERE)


@pytest.fixture
def roman():
    return Parameterization.from_strings(ROMAN)


@pytest.fixture
def plane():
    return Parameterization.from_strings(PLANE)


@pytest.fixture
def quadric():
    return Parameterization.from_strings(QUADRIC, ring="tensor")


@pytest.fixture
def bpf_quadrics():
    return Parameterization.from_strings(BPF_QUADRICS)


def random_forms(seed, d=3, bound=3):
    """Four random ternary forms of degree d (text), seeded."""
    import random
    from fibratrix import TRIANGULAR, MultiPoly, format_poly, monomial_basis
    rng = random.Random(seed)
    basis = monomial_basis(TRIANGULAR, d)
    out = []
    for _ in range(4):
        terms = {e: rng.randint(-bound, bound) for e in basis}
        out.append(format_poly(MultiPoly(TRIANGULAR, terms)))
    return out


@pytest.fixture(scope="session")
def cubic_texts():
    return random_forms(7, 3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, TITLES
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(TITLES):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {TITLES[n]}"
        else:
            line, detail = f"criterion {n:2d} NOT RUN: {TITLES[n]}", ""
        terminalreporter.write_line(line + (f" [{detail}]" if detail else ""))
