from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from framecert import kernel as K
from framecert.kernel import GaussianRational as GR
from framecert.kernel import Matrix, MixedVariantError, SingularMatrixError

F = Fraction


def M(rows):
    return Matrix([[F(x) for x in r] for r in rows])


def test_det_examples():
    assert K.det_exact(M([[2, 1], [1, 2]])) == 3
    assert K.det_exact(Matrix.identity(3)) == 1
    assert K.det_exact(M([[1, 1], [1, 1]])) == 0


def test_nullspace_examples():
    assert K.nullspace_exact(Matrix.identity(2)) == []
    (v,) = K.nullspace_exact(M([[1, 1]]))
    assert v[0] == -v[1] != 0
    (c,) = K.nullspace_exact(M([[1, 0, 1], [0, 1, 1]]))
    assert c[0] == c[1] == -c[2] != 0


def test_rank_examples():
    assert K.rank(Matrix.identity(3)) == 3
    assert K.rank(Matrix.zeros(3, 3)) == 0
    assert K.rank(Matrix.from_columns([[F(1), F(1), F(1)], [F(1), F(-1), F(1)], [F(0), F(1), F(0)]])) == 2


def test_solve_examples():
    b = (F(3), F(-1, 2))
    assert K.solve_exact(Matrix.identity(2), b) == b
    assert K.solve_exact(M([[2, 1], [1, 2]]), (1, 0)) == (F(2, 3), F(-1, 3))
    assert K.solve_exact(M([[3, 0, 2], [0, 3, 0], [2, 0, 3]]), (1, 1, 1)) == (F(1, 5), F(1, 3), F(1, 5))


def test_singular_solve_carries_witness():
    with pytest.raises(SingularMatrixError) as err:
        K.solve_exact(M([[1, 1], [1, 1]]), (1, 0))
    w = err.value.witness
    assert w is not None and w[0] == -w[1]


def test_mixed_variants_rejected():
    with pytest.raises(MixedVariantError):
        GR(1, 1) + 0.5
    with pytest.raises(MixedVariantError):
        Matrix([[F(1), 0.5]])


def test_gaussian_arithmetic():
    i = K.I
    assert i * i == GR(-1, 0)
    assert K.conj(GR(1, 2)) == GR(1, -2)
    assert K.abs2(GR(3, 4)) == 25
    assert K.dot((GR(1, 1),), (GR(0, 1),)) == GR(1, 1) * GR(0, -1)


def test_parse_and_format_round_trip():
    assert K.parse_scalar("-6/4") == F(-3, 2)
    assert K.parse_scalar(7) == 7
    z = K.parse_scalar({"re": "1/2", "im": "-3"})
    assert z == GR(F(1, 2), -3)
    assert K.format_scalar(z) == {"re": "1/2", "im": "-3"}
    assert K.format_scalar(F(6, 4)) == "3/2"
    with pytest.raises(ValueError):
        K.parse_scalar(True)


ints = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n)


@given(st.integers(1, 4).flatmap(square))
def test_det_zero_iff_nullspace(rows):
    A = M(rows)
    assert (K.det_exact(A) == 0) == bool(K.nullspace_exact(A))


@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_rank_nullity(r, c, data):
    rows = data.draw(st.lists(st.lists(ints, min_size=c, max_size=c), min_size=r, max_size=r))
    A = M(rows)
    null = K.nullspace_exact(A)
    assert K.rank(A) + len(null) == c
    for v in null:
        assert all(x == 0 for x in A @ list(v))


@given(st.integers(1, 4).flatmap(square), st.lists(ints, min_size=4, max_size=4))
def test_solve_back_substitutes(rows, b):
    A = M(rows)
    b = [F(x) for x in b[:A.nrows]]
    if K.det_exact(A) == 0:
        return
    x = K.solve_exact(A, b)
    assert list(A @ list(x)) == b


@given(st.integers(1, 4).flatmap(square))
def test_det_matches_numpy(rows):
    assert abs(float(K.det_exact(M(rows))) - np.linalg.det(np.array(rows, dtype=float))) < 1e-6


@given(st.integers(1, 4).flatmap(square))
def test_float_rank_agrees_when_well_separated(rows):
    A = np.array(rows, dtype=float)
    s = np.linalg.svd(A, compute_uv=False)
    tau = K.DEFAULT_POLICY.tau
    nonzero = s[s > tau * max(1.0, s.max(initial=0.0))]
    if nonzero.size and nonzero.min() < 1e3 * tau * max(1.0, s.max()):
        return
    fl = Matrix([[float(x) for x in r] for r in rows])
    assert K.rank(fl) == K.rank(M(rows))


def test_inverse_exact_round_trip():
    A = M([[2, 1, 0], [0, 1, 3], [1, 0, 1]])
    assert (A @ K.inverse_exact(A)).is_identity()
