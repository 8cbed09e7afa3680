import random
from fractions import Fraction
from pathlib import Path

import pytest

from quadiso.presentation import (
    ParamMatrix,
    make_homogenized_weyl,
    make_quantum_affine,
    make_quantum_matrix,
)

DATA = Path(__file__).parent / "data"

# small nonzero rationals away from +-1, used for random parameter draws
POOL = sorted({Fraction(a, b) for a in (-3, -2, 2, 3, 5, 7) for b in (1, 2, 3)} - {1, -1})


def rand_param(rng: random.Random) -> Fraction:
    return rng.choice(POOL)


def rand_matrix(rng: random.Random, n: int) -> ParamMatrix:
    return ParamMatrix.from_upper(n, {(i, j): rand_param(rng)
                                      for i in range(1, n + 1) for j in range(i + 1, n + 1)})


def plane(q) -> "Presentation":
    return make_quantum_affine(ParamMatrix.from_upper(2, {(1, 2): q}))


def qas(n, upper):
    return make_quantum_affine(ParamMatrix.from_upper(n, upper))


def hweyl(n, upper, gamma):
    return make_homogenized_weyl(ParamMatrix.from_upper(n, upper), [Fraction(g) for g in gamma])


def qma(n, lam, upper):
    return make_quantum_matrix(Fraction(lam), ParamMatrix.from_upper(n, upper))


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for row in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_result(row))
