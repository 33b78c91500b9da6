import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from framecert.generators import random_full_spark_frame, random_spanning_frame, random_vector
from framecert.kernel import GaussianRational as GR
from framecert.frames import validate_frame
from framecert.recovery import AMBIGUOUS, INFEASIBLE, UNIQUE, RadicalBasis, Surd, measure, recover_real
from framecert.retrieval import certify_phase_retrieval

F = Fraction


def v(*xs):
    return tuple(F(x) for x in xs)


def test_measure_examples(ex25):
    assert measure(ex25, v(1, 1)) == (1, 1, 4)
    assert measure(ex25, v(0, 0)) == (0, 0, 0)
    assert measure(ex25, v(3, -2)) == measure(ex25, v(-3, 2))


def test_recover_examples(ex25, onb2):
    r = recover_real(ex25, [1, 1, 4])
    assert r.status == UNIQUE and r.solutions == [v(1, 1)]
    r = recover_real(ex25, [1, 1, 0])
    assert r.status == UNIQUE and r.solutions == [v(1, -1)]
    r = recover_real(onb2, ["1", "1"])
    assert r.status == AMBIGUOUS and set(r.solutions) == {v(1, 1), v(1, -1)}
    r = recover_real(ex25, [1, 1, 1])
    assert r.status == INFEASIBLE and r.solutions == [] and r.diagnostic > 0


def test_recover_with_irrational_roots(onb2):
    r = recover_real(onb2, [2, 1])
    assert r.status == AMBIGUOUS
    assert all(isinstance(t, Surd) for t in r.solutions[0][:1])
    assert r.solutions[0][0].format() == "1*sqrt(2)"


def test_recover_rejects_bad_input(ex25):
    with pytest.raises(ValueError):
        recover_real(ex25, [1, 1])
    with pytest.raises(ValueError):
        recover_real(ex25, [1, -1, 0])
    cplx = validate_frame([[GR(1), GR(0)], [GR(0), GR(1)]], field="complex")
    with pytest.raises(ValueError):
        recover_real(cplx, [1, 1])


def test_surd_sign_and_products():
    rb = RadicalBasis()
    r2, r8 = Surd.sqrt(rb, F(2)), Surd.sqrt(rb, F(8))
    assert (r8 + r2.scale(-2)).rational() == 0
    assert (r2 * r2).rational() == 2
    r3 = Surd.sqrt(rb, F(3))
    assert (r2 + (-r3)).sign() == -1
    assert (r3.scale(F(99, 100)) + (-r2).scale(F(121, 100))).sign() == 1
    assert Surd(rb).sign() == 0


seeds = st.integers(0, 10 ** 6)


@given(seeds, st.integers(1, 3))
def test_round_trip_on_pr_frames(seed, n):
    rng = random.Random(seed)
    phi = random_full_spark_frame(rng, n, 2 * n - 1, bound=3)
    assert certify_phase_retrieval(phi).yes
    f = random_vector(rng, n)
    r = recover_real(phi, measure(phi, f))
    lead = next((t for t in f if t), None)
    canon = f if lead is None or lead > 0 else tuple(-t for t in f)
    assert r.status == UNIQUE and r.solutions == [canon]


@given(seeds, st.integers(2, 3), st.integers(0, 2))
def test_non_pr_counterexamples_are_ambiguous(seed, n, extra):
    phi = random_spanning_frame(random.Random(seed), n, n + extra, bound=2)
    pr = certify_phase_retrieval(phi)
    if not pr.no or pr.pair.trivial:
        return
    x, y = pr.pair.x, pr.pair.y
    r = recover_real(phi, measure(phi, x))
    assert r.status == AMBIGUOUS

    def canon(t):
        lead = next(c for c in t if c)
        return t if lead > 0 else tuple(-c for c in t)

    sols = set(r.solutions)
    assert canon(x) in sols and canon(y) in sols


@given(seeds, st.integers(1, 3))
def test_infeasible_never_fabricates(seed, n):
    rng = random.Random(seed)
    phi = random_full_spark_frame(rng, n, 2 * n - 1, bound=3)
    M = [F(rng.randint(0, 20), rng.randint(1, 3)) for _ in range(phi.m)]
    r = recover_real(phi, M)
    for s in r.solutions:
        if all(not isinstance(t, Surd) for t in s):
            assert measure(phi, s) == tuple(M)
    if r.status == INFEASIBLE:
        assert r.solutions == []
