"""Seeded random exact frames, operators and signals for tests and experiments."""

from __future__ import annotations

import random
from fractions import Fraction

from . import kernel as K
from .combinatorics import is_full_spark
from .frames import FrameSpec, validate_frame
from .kernel import Matrix


def random_rational(rng: random.Random, bound: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound * max_den, bound * max_den), rng.randint(1, max_den))


def random_vector(rng: random.Random, n: int, bound: int = 5, max_den: int = 4) -> tuple:
    return tuple(random_rational(rng, bound, max_den) for _ in range(n))


def random_nonzero_rational(rng: random.Random, bound: int = 5, max_den: int = 4) -> Fraction:
    while True:
        q = random_rational(rng, bound, max_den)
        if q:
            return q


def random_positive_rational(rng: random.Random, bound: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(1, bound * max_den), rng.randint(1, max_den))


def random_full_spark_frame(rng: random.Random, n: int, m: int, bound: int = 4) -> FrameSpec:
    """Integer-entry frame whose every ``n``-subset is a basis (rejection sampling)."""
    while True:
        vecs = [tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n)) for _ in range(m)]
        phi = validate_frame(vecs, dim=n)
        if phi.is_frame and is_full_spark(phi).yes:
            return phi


def random_invertible(rng: random.Random, n: int, bound: int = 3, max_den: int = 2) -> Matrix:
    while True:
        M = Matrix([[random_rational(rng, bound, max_den) for _ in range(n)] for _ in range(n)], ncols=n)
        if K.det_exact(M) != 0:
            return M


def random_spanning_frame(rng: random.Random, n: int, m: int, bound: int = 3) -> FrameSpec:
    while True:
        vecs = [tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n)) for _ in range(m)]
        phi = validate_frame(vecs, dim=n)
        if phi.is_frame:
            return phi
