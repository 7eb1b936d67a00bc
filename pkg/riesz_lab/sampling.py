"""
Seeded generators of random rationals, functions and regions.

All randomness in riesz-lab flows through a random.Random passed in by the
caller, so a fixed seed gives identical samples.
"""

from fractions import Fraction
from math import ceil, floor
from typing import List, Sequence
import random

from .functions import PLFun
from .regions import Piece, Region, Space


DENOMINATORS = (1, 2, 3, 4, 5, 6, 8, 12)


def random_rational(rng: random.Random, lo, hi,
                    denominators: Sequence[int] = DENOMINATORS) -> Fraction:
    lo, hi = Fraction(lo), Fraction(hi)
    q = rng.choice(denominators)
    low, high = ceil(lo * q), floor(hi * q)
    if low > high:
        return (lo + hi) / 2
    return Fraction(rng.randint(low, high), q)


def random_points(rng: random.Random, space: Space, count: int) -> List[Fraction]:
    points = []
    for _ in range(count):
        a, b = rng.choice(space.components)
        points.append(random_rational(rng, a, b))
    return points


def random_plfun(rng: random.Random, space: Space, knots: int = 4,
                 lo=-2, hi=2, zero_bias: float = 0.25) -> PLFun:
    """
    Random PL function with up to `knots` interior breakpoints per component.

    zero_bias is the chance of each knot value being 0, so supports with
    holes and flat zero stretches show up often.
    """
    rows = []
    for a, b in space.components:
        if a == b:
            xs = [a]
        else:
            inner = {random_rational(rng, a, b) for _ in range(rng.randint(0, knots))}
            xs = sorted(inner | {a, b})
        rows.append([
            (x, Fraction(0) if rng.random() < zero_bias else random_rational(rng, lo, hi))
            for x in xs
        ])
    return PLFun.from_knots(space, rows)


def random_nonnegative(rng: random.Random, space: Space, **kwargs) -> PLFun:
    return random_plfun(rng, space, **kwargs).pos()


def random_region(rng: random.Random, space: Space, pieces: int = 3) -> Region:
    drawn = []
    for _ in range(rng.randint(0, pieces)):
        a, b = rng.choice(space.components)
        x, y = sorted((random_rational(rng, a, b), random_rational(rng, a, b)))
        drawn.append(Piece(x, y, rng.random() < 0.5, rng.random() < 0.5))
    return Region.build(space, drawn)


def random_open_region(rng: random.Random, space: Space, pieces: int = 3) -> Region:
    return random_region(rng, space, pieces).interior()


def random_closed_region(rng: random.Random, space: Space, pieces: int = 3) -> Region:
    return random_region(rng, space, pieces).closure()


def random_regular_open(rng: random.Random, space: Space, pieces: int = 3) -> Region:
    return random_region(rng, space, pieces).closure().interior()
