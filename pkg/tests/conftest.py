import random
from fractions import Fraction as F

import pytest

from chenciner.normal_form import NormalFormSystem, example_system
from chenciner.series import BivariateSeries
from chenciner.transform import build_transform


def _nz(rng, lo=-3, hi=3):
    while True:
        v = rng.randint(lo, hi)
        if v:
            return v


def random_degenerate_system(rng: random.Random, order: int = 4) -> NormalFormSystem:
    """Small-integer system with c1*d2 = c2*d1 and c1*l2 != c2*l1."""
    c1, c2 = _nz(rng), _nz(rng)
    lam = F(_nz(rng), rng.randint(1, 3))
    d1, d2 = lam * c1, lam * c2
    while True:
        l1, l2 = rng.randint(-3, 3), rng.randint(-3, 3)
        if c1 * l2 - c2 * l1:
            break
    L0 = _nz(rng)

    def series(linear, const=0):
        coeffs = {(0, 0): const, (1, 0): linear[0], (0, 1): linear[1]}
        for i in range(order + 1):
            for j in range(order + 1 - i):
                if i + j >= 2 and rng.random() < 0.5:
                    coeffs[(i, j)] = F(rng.randint(-3, 3), rng.randint(1, 2))
        return BivariateSeries(coeffs, order)

    return NormalFormSystem(series((c1, c2)), series((d1, d2)), series((l1, l2), L0), 0.05)


@pytest.fixture(scope="session")
def example():
    return example_system()


@pytest.fixture(scope="session")
def example_t(example):
    return build_transform(example, 2)


@pytest.fixture(scope="session")
def degenerate_systems():
    rng = random.Random(20240611)
    return [random_degenerate_system(rng) for _ in range(50)]


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
