from fractions import Fraction

import pytest
from hypothesis import settings

from framecert.frames import validate_frame

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def fr(rows):
    """Rows of ints / 'p/q' strings as Fraction tuples."""
    return [tuple(Fraction(x) for x in r) for r in rows]


def frame(rows, field="real"):
    return validate_frame(fr(rows) if field == "real" else rows, field=field)


@pytest.fixture
def ex25():
    return frame([[1, 0], [0, 1], [1, 1]])


@pytest.fixture
def ex27():
    return frame([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, -1, 1]])


@pytest.fixture
def onb2():
    return frame([[1, 0], [0, 1]])


@pytest.fixture
def hadamard2():
    return frame([[1, 1], [1, -1]])
