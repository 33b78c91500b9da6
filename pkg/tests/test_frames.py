import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fr, frame
from framecert import kernel as K
from framecert.duals import DualFamily
from framecert.frames import (FrameError, NotAFrameError, apply_operator, canonical_dual, excess, frame_bounds_float,
                              frame_from_json, frame_operator, frame_to_json, gram, is_positive_definite,
                              make_dual, make_operator, standard_form, transport_dual, validate_frame, verify_dual)
from framecert.generators import random_invertible, random_spanning_frame
from framecert.kernel import Matrix

F = Fraction


def mat(rows):
    return [[F(x) for x in r] for r in rows]


def test_validate_examples(ex25):
    assert frame([[1, 0], [0, 1]]).is_frame
    assert not frame([[1, 0], [2, 0]]).is_frame
    assert ex25.is_frame and ex25.m == 3


def test_validate_rejects_bad_input():
    with pytest.raises(FrameError):
        validate_frame([[F(1), F(0)], [F(1)]])
    with pytest.raises(FrameError):
        validate_frame([[0.5, 1.0]], mode="exact")
    with pytest.raises(FrameError):
        validate_frame([[K.GaussianRational(1, 1), F(0)]], field="real")
    with pytest.raises(FrameError):
        validate_frame([])


def test_zero_vectors_are_tagged():
    phi = frame([[1, 0], [0, 0], [0, 1]])
    assert phi.zero_indices == (1,) and phi.is_frame


def test_json_round_trip(ex27):
    data = frame_to_json(ex27)
    assert frame_from_json(json.dumps(data)).vectors == ex27.vectors
    cplx = frame_from_json({"dim": 2, "field": "complex", "vectors": [["1", {"re": "0", "im": "1"}], ["0", "1"]]})
    assert cplx.vectors[0][1] == K.I
    with pytest.raises(FrameError):
        frame_from_json({"dim": 2, "vectors": [[0.5, 1]]})
    with pytest.raises(FrameError):
        frame_from_json({"vectors": [["1"]]})


def test_gram_examples(ex25, onb2, hadamard2):
    assert gram(onb2).is_identity()
    assert gram(ex25).tolist() == ["1 0 1".split(), "0 1 1".split(), "1 1 2".split()]
    assert gram(hadamard2).tolist() == [["2", "0"], ["0", "2"]]


def test_frame_operator_examples(ex25, ex27, onb2):
    assert frame_operator(onb2).is_identity()
    assert frame_operator(ex25) == Matrix(mat([[2, 1], [1, 2]]))
    assert frame_operator(ex27) == Matrix(mat([[3, 0, 2], [0, 3, 0], [2, 0, 3]]))


def test_canonical_dual_examples(ex25, ex27, onb2):
    assert canonical_dual(onb2).vectors == onb2.vectors
    assert list(canonical_dual(ex25).vectors) == fr([["2/3", "-1/3"], ["-1/3", "2/3"], ["1/3", "1/3"]])
    assert canonical_dual(ex27).vectors[3] == (F(1, 5), F(1, 3), F(1, 5))


def test_verify_dual_examples(ex25, onb2):
    assert verify_dual(ex25, canonical_dual(ex25))[0]
    assert verify_dual(ex25, fr([["2/3", -1], ["-1/3", 0], ["1/3", 1]]))[0]
    ok, residual = verify_dual(onb2, fr([[1, 0], [0, 2]]))
    assert not ok and residual.tolist() == [["0", "0"], ["0", "1"]]
    with pytest.raises(ValueError):
        make_dual(onb2, fr([[1, 0], [0, 2]]))


def test_excess_examples(ex25, onb2):
    assert excess(ex25) == 1 and excess(onb2) == 0
    assert excess(frame([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]])) == 2
    with pytest.raises(NotAFrameError):
        excess(frame([[1, 0], [1, 0]]))


def test_apply_operator_examples(onb2):
    assert apply_operator(Matrix.identity(2), onb2).vectors == onb2.vectors
    assert apply_operator(Matrix(mat([[2, 0], [0, 1]])), onb2).vectors == tuple(fr([[2, 0], [0, 1]]))


def test_standard_form_examples(ex25):
    T, std = standard_form(frame([[2, 0], [0, 1], [1, 1]]))
    assert T.matrix == Matrix(mat([["1/2", 0], [0, 1]]))
    assert list(std.vectors) == fr([[1, 0], [0, 1], ["1/2", 1]])
    T, _ = standard_form(ex25)
    assert T.matrix.is_identity()
    _, std = standard_form(frame([[1, 1], [1, -1]]))
    assert list(std.vectors) == fr([[1, 0], [0, 1]])


def test_frame_bounds(ex25, onb2, hadamard2):
    b = frame_bounds_float(onb2)
    assert b.tight and abs(b.lower - 1) < 1e-12
    b = frame_bounds_float(hadamard2)
    assert b.tight and abs(b.upper - 2) < 1e-12
    b = frame_bounds_float(ex25)
    assert not b.tight and abs(b.lower - 1) < 1e-12 and abs(b.upper - 3) < 1e-12


seeds = st.integers(0, 10 ** 6)


@given(seeds, st.integers(1, 4), st.integers(0, 3))
def test_frame_operator_self_adjoint_positive(seed, n, extra):
    phi = random_spanning_frame(random.Random(seed), n, n + extra)
    S = frame_operator(phi)
    assert S == S.H and is_positive_definite(S)


@given(seeds, st.integers(1, 3), st.integers(1, 2))
def test_frame_operator_transforms(seed, n, extra):
    rng = random.Random(seed)
    phi = random_spanning_frame(rng, n, n + extra)
    T = random_invertible(rng, n)
    assert frame_operator(apply_operator(T, phi)) == T @ frame_operator(phi) @ T.H


@given(seeds, st.integers(1, 3), st.integers(1, 2))
def test_dual_transport_both_directions(seed, n, extra):
    rng = random.Random(seed)
    phi = random_spanning_frame(rng, n, n + extra)
    T = random_invertible(rng, n)
    tphi = apply_operator(T, phi)
    fam, tfam = DualFamily(phi), DualFamily(tphi)
    U = [F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(fam.p)]
    G = fam.vectors(U)
    assert verify_dual(tphi, transport_dual(T, G))[0]
    H = tfam.vectors(U)
    back = [T.H @ h for h in H]
    assert verify_dual(phi, back)[0]


@given(seeds, st.integers(1, 4), st.integers(0, 3))
def test_standard_form_inverse_recovers_frame(seed, n, extra):
    phi = random_spanning_frame(random.Random(seed), n, n + extra)
    T, std = standard_form(phi)
    eye = Matrix.identity(n).columns()
    assert list(std.vectors[:n]) == eye
    Tinv = K.inverse_exact(T.matrix)
    restored = [Tinv @ v for v in std.vectors]
    assert [restored[T.permutation.index(i)] for i in range(phi.m)] == list(phi.vectors)


def test_make_operator_flags():
    op = make_operator(Matrix(mat([[2, 0], [0, 3]])))
    assert op.invertible and op.diagonal and op.positive_diagonal and not op.unitary
    assert make_operator(Matrix(mat([[0, 1], [1, 0]]))).unitary
    assert not make_operator(Matrix(mat([[1, 1], [1, 1]]))).invertible
