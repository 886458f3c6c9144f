import random
from fractions import Fraction

import pytest

from pdl.parser import parse_expression, parse_polynomial
from pdl.ring import CoordFrame, Polynomial


@pytest.fixture
def xyz():
    return CoordFrame(["x", "y", "z"])


@pytest.fixture
def uvw():
    return CoordFrame(["u", "v", "w"])


def poly(text: str, frame: CoordFrame) -> Polynomial:
    return parse_polynomial(text, frame)


def mv(text: str, frame: CoordFrame):
    return parse_expression(text, frame)


def random_polynomial(rng: random.Random, frame: CoordFrame, max_degree: int = 2,
                      terms: int = 3, allow_zero: bool = True) -> Polynomial:
    n = frame.dimension
    data = {}
    for _ in range(rng.randint(0 if allow_zero else 1, terms)):
        mono = [0] * n
        for _ in range(rng.randint(0, max_degree)):
            mono[rng.randrange(n)] += 1
        data[tuple(mono)] = data.get(tuple(mono), 0) + Fraction(
            rng.randint(-4, 4), rng.randint(1, 3))
    return Polynomial(frame, {m: c for m, c in data.items() if c})
