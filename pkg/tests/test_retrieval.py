import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fr, frame
from framecert import kernel as K
from framecert.corpus import load_corpus
from framecert.frames import apply_operator, canonical_dual, validate_frame
from framecert.generators import random_invertible, random_positive_rational, random_spanning_frame
from framecert.kernel import GaussianRational as GR
from framecert.kernel import Matrix
from framecert.retrieval import (NORM, PHASE, WEAK, _make_pair, certify_norm_retrieval_real, certify_phase_retrieval,
                                 decide_weak_phase_real, equal_magnitudes, lift_counterexample_operator,
                                 lift_projected_pair, pair_from_sigma, project_frame, verify_pair, weakly_same_phase)

F = Fraction


def v(*xs):
    return tuple(F(x) for x in xs)


def test_weakly_same_phase_examples():
    r = weakly_same_phase(v(1, 2), v(3, 4))
    assert r.same and r.alpha == 1
    assert not weakly_same_phase(v(1, 2), v(1, -2)).same
    r = weakly_same_phase(v(1, 0), v(0, 1))
    assert r.same and r.common_support == ()
    assert weakly_same_phase((GR(1), K.I), (K.I, GR(-1))).same
    assert not weakly_same_phase((GR(1), K.I), (GR(1), GR(-1))).same


def test_pair_from_sigma_examples(onb2, hadamard2):
    p = pair_from_sigma(onb2, [1], v(0, 1), v(1, 0))
    assert p.x == v("1/2", "1/2") and p.y == v("1/2", "-1/2")
    assert equal_magnitudes(onb2, p.x, p.y) and not p.trivial
    p = pair_from_sigma(hadamard2, [1], v(1, -1), v(1, 1))
    assert p.x == v(1, 0) and p.y == v(0, 1)
    p = pair_from_sigma(onb2, [1], v(0, 0), v(1, 0))
    assert p.trivial and p.x == p.y
    with pytest.raises(ValueError):
        pair_from_sigma(onb2, [1], v(1, 0), v(1, 0))


def test_certify_phase_examples(ex25, onb2, hadamard2):
    assert certify_phase_retrieval(ex25).yes
    r = certify_phase_retrieval(onb2)
    assert r.no and (r.pair.x, r.pair.y) == (v("1/2", "1/2"), v("1/2", "-1/2"))
    r = certify_phase_retrieval(hadamard2)
    assert r.no and (r.pair.x, r.pair.y) == (v(1, 0), v(0, 1))
    assert verify_pair(hadamard2, r.pair, PHASE)


def test_certify_norm_examples(onb2):
    assert certify_norm_retrieval_real(onb2).yes
    assert certify_norm_retrieval_real(frame([[1, 0], [0, 1], [1, 0], [0, 1]])).yes
    r = certify_norm_retrieval_real(frame([[1, 0], [1, 1]]))
    assert r.no and r.witness == [1]
    assert r.pair.u == v(0, 1) and r.pair.v == v(1, -1)
    assert r.pair.x == v("1/2", 0) and r.pair.y == v("1/2", -1)
    assert K.dot(r.pair.u, r.pair.v) == -1
    assert verify_pair(frame([[1, 0], [1, 1]]), r.pair, NORM)


def test_weak_phase_examples(ex25, onb2, hadamard2):
    assert decide_weak_phase_real(hadamard2).yes
    r = decide_weak_phase_real(onb2)
    assert r.no and verify_pair(onb2, r.pair, WEAK)
    assert (r.pair.x, r.pair.y) == (v("1/2", "1/2"), v("1/2", "-1/2"))
    assert decide_weak_phase_real(ex25).yes


def test_weak_phase_example_2_7(ex27):
    r = decide_weak_phase_real(ex27)
    assert r.no and verify_pair(ex27, r.pair, WEAK)


def test_complex_weak_phase_never_yes():
    phi = validate_frame([[GR(1), GR(0)], [GR(0), GR(1)], [GR(1), GR(1)], [GR(1), K.I]], field="complex")
    assert not decide_weak_phase_real(phi).yes


def test_lift_disjoint_case(hadamard2):
    pr = certify_phase_retrieval(hadamard2)
    res = lift_counterexample_operator(hadamard2, pr.pair)
    assert res.case == "disjoint"
    assert res.U.matrix == Matrix([[F(1), F(1)], [F(-1), F(1)]])
    assert (res.pair.x, res.pair.y) == (v(1, -1), v(1, 1))
    assert not weakly_same_phase(res.pair.x, res.pair.y).same
    assert equal_magnitudes(res.frame, res.pair.x, res.pair.y)
    Uinv = K.inverse_exact(res.U.matrix)
    assert equal_magnitudes(hadamard2, Uinv @ list(res.pair.x), Uinv @ list(res.pair.y))


def test_lift_shared_support_case():
    phi = frame([[1, 0, 0], [0, 1, 1], [0, 1, -1]])
    pair = _make_pair(phi, v(1, 1, 0), v(1, 0, 1))
    assert equal_magnitudes(phi, pair.x, pair.y) and weakly_same_phase(pair.x, pair.y).same
    res = lift_counterexample_operator(phi, pair)
    assert res.case == "shared-support"
    assert res.epsilon == F(1, 2)
    assert res.pair.x == K.vec_sub(pair.x, K.vec_scale(F(1, 2), pair.y))
    assert verify_pair(res.frame, res.pair, WEAK)


def test_lift_edge_cases():
    onb = frame([[1, 0], [0, 1]])
    res = lift_counterexample_operator(onb, _make_pair(onb, v(2, 1), v(2, -1)))
    assert res.case == "already-violating" and res.U.matrix.is_identity()
    with pytest.raises(ValueError):
        lift_counterexample_operator(onb, _make_pair(onb, v(2, 0), v(2, 0)))


def test_project_frame_examples(ex27, ex25):
    P = project_frame(ex27, [v(1, 0, 0), v(0, 1, 0)])
    assert list(P.frame.vectors) == fr([[1, 0], [0, 1], [0, 0], [1, 1], [1, -1]])
    assert P.frame.zero_indices == (2,)
    P = project_frame(ex25, [v(1, 0), v(0, 1)])
    assert P.frame.vectors == ex25.vectors
    with pytest.raises(ValueError):
        project_frame(ex25, [v(1, 0), v(2, 0)])


seeds = st.integers(0, 10 ** 6)


@given(seeds, st.integers(1, 3), st.integers(0, 3))
def test_pr_invariant_under_invertible_maps(seed, n, extra):
    rng = random.Random(seed)
    phi = random_spanning_frame(rng, n, n + extra, bound=2)
    base = certify_phase_retrieval(phi).outcome
    for _ in range(5):
        assert certify_phase_retrieval(apply_operator(random_invertible(rng, n), phi)).outcome is base


@given(seeds, st.integers(1, 3), st.integers(0, 3))
def test_positive_scaling_invariance(seed, n, extra):
    rng = random.Random(seed)
    phi = random_spanning_frame(rng, n, n + extra, bound=2)
    scaled = validate_frame([K.vec_scale(random_positive_rational(rng), p) for p in phi.vectors], dim=n)
    assert certify_phase_retrieval(scaled).outcome is certify_phase_retrieval(phi).outcome
    assert certify_norm_retrieval_real(scaled).outcome is certify_norm_retrieval_real(phi).outcome
    assert decide_weak_phase_real(scaled).outcome is decide_weak_phase_real(phi).outcome


@given(seeds, st.integers(1, 3), st.integers(0, 3))
def test_implication_chain_and_pairs(seed, n, extra):
    phi = random_spanning_frame(random.Random(seed), n, n + extra, bound=2)
    pr = certify_phase_retrieval(phi)
    nr = certify_norm_retrieval_real(phi)
    wr = decide_weak_phase_real(phi)
    if pr.yes:
        assert nr.yes and wr.yes
    for verdict, kind in ((pr, PHASE), (nr, NORM), (wr, WEAK)):
        if verdict.no:
            assert verify_pair(phi, verdict.pair, kind)


@given(seeds, st.integers(2, 3), st.integers(0, 3))
def test_weak_projection_falsifier_lifts(seed, n, extra):
    phi = random_spanning_frame(random.Random(seed), n, n + extra, bound=2)
    full = decide_weak_phase_real(phi)
    for i, j in itertools.combinations(range(n), 2):
        basis = [tuple(F(int(k == i)) for k in range(n)), tuple(F(int(k == j)) for k in range(n))]
        P = project_frame(phi, basis)
        sub = decide_weak_phase_real(P.measurement_frame)
        if sub.no:
            lifted = lift_projected_pair(phi, P, sub.pair)
            assert verify_pair(phi, lifted, WEAK)
            assert full.no


@given(seeds)
def test_lift_produces_weak_violation(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    phi = random_spanning_frame(rng, n, rng.randint(n, 2 * n - 2), bound=2)
    pr = certify_phase_retrieval(phi)
    if not pr.no or pr.pair.trivial:
        return
    try:
        res = lift_counterexample_operator(phi, pr.pair)
    except ValueError as exc:
        assert "epsilon" in str(exc)
        return
    assert res.U.invertible
    assert verify_pair(res.frame, res.pair, WEAK)


def test_corpus_pr_needs_2n_minus_1():
    for name, (phi, _) in load_corpus().items():
        if phi.field == "real" and certify_phase_retrieval(phi).yes:
            assert phi.m >= 2 * phi.dim - 1, name


def test_diagonal_operator_weak_transfer():
    for name, (phi, meta) in load_corpus().items():
        if meta["diagonal_frame_operator"]:
            dual = canonical_dual(phi).as_frame()
            assert decide_weak_phase_real(phi).outcome is decide_weak_phase_real(dual).outcome, name
