import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import frame
from framecert import kernel as K
from framecert.combinatorics import (MAX_SWEEP_M, Outcome, Verdict, colex_subsets, complement_property, is_full_spark,
                                     iter_splits, mrc_check, spark)
from framecert.frames import apply_operator
from framecert.generators import random_invertible, random_spanning_frame
from framecert.retrieval import certify_phase_retrieval


def test_colex_order():
    assert list(colex_subsets(4, 2)) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert list(colex_subsets(3, 0)) == [()]
    assert [s for s, _ in iter_splits(3)] == [(), (0,), (1,), (2,)]


def test_spark_examples(ex25, ex27):
    s = spark(frame([[1, 0], [1, 0]]))
    assert s.value == 2 and s.witness == (1, 2)
    assert spark(ex25).value == 3
    s = spark(ex27)
    assert s.value == 3 and s.witness == (2, 4, 5)


def test_full_spark_examples(ex25, ex27):
    assert is_full_spark(ex25).yes
    v = is_full_spark(frame([[1, 0], [0, 1], [1, 0]]))
    assert v.no and set(v.witness) == {1, 3}
    v = is_full_spark(ex27)
    assert v.no and v.witness == [2, 4, 5]


def test_complement_property_examples(ex25, ex27, onb2):
    v = complement_property(onb2)
    assert v.no and v.witness == [1]
    assert complement_property(ex25).yes
    v = complement_property(ex27)
    assert v.no and v.witness == [1, 3] and v.details["ranks"] == [2, 2]


def test_mrc_examples(ex25, onb2):
    assert mrc_check(ex25, 1).yes
    v = mrc_check(onb2, 1)
    assert v.no and v.witness == [1]
    with pytest.raises(ValueError):
        mrc_check(onb2, 2)


def test_verdict_contract():
    with pytest.raises(ValueError):
        Verdict(Outcome.NO, "x")
    with pytest.raises(ValueError):
        Verdict(Outcome.UNKNOWN, "x")
    j = Verdict(Outcome.NO, "complement", witness=[1, 2]).to_json()
    assert j == {"outcome": "no", "witness": [1, 2], "budget": None, "property": "complement"}


def test_sweep_cap():
    big = frame([[1]] * (MAX_SWEEP_M + 1))
    with pytest.raises(ValueError):
        complement_property(big)


seeds = st.integers(0, 10 ** 6)


def _witness_reverifies(phi, v):
    idx = [i - 1 for i in v.witness]
    if v.prop == "full-spark":
        return K.det_exact(phi.subset_matrix(idx)) == 0
    if v.prop == "complement":
        rest = [i for i in range(phi.m) if i not in idx]
        return phi.subset_rank(idx) < phi.dim and phi.subset_rank(rest) < phi.dim
    raise AssertionError(v.prop)


@given(seeds, st.integers(1, 4), st.integers(0, 4))
def test_spark_agrees_with_full_spark(seed, n, extra):
    phi = random_spanning_frame(random.Random(seed), n, n + extra, bound=2)
    assert (spark(phi).value == n + 1 or (spark(phi).independent and phi.m == n)) == is_full_spark(phi).yes


@given(seeds, st.integers(1, 4))
def test_cp_iff_full_spark_at_2n_minus_1(seed, n):
    phi = random_spanning_frame(random.Random(seed), n, 2 * n - 1, bound=2)
    assert complement_property(phi).outcome is is_full_spark(phi).outcome


@given(seeds, st.integers(1, 3), st.integers(0, 3))
def test_cp_invariant_under_invertible_maps(seed, n, extra):
    rng = random.Random(seed)
    phi = random_spanning_frame(rng, n, n + extra, bound=2)
    T = random_invertible(rng, n)
    assert complement_property(apply_operator(T, phi)).outcome is complement_property(phi).outcome


@given(seeds, st.integers(1, 4), st.integers(0, 3))
def test_negative_witnesses_reverify(seed, n, extra):
    phi = random_spanning_frame(random.Random(seed), n, n + extra, bound=1)
    for v in (is_full_spark(phi), complement_property(phi)):
        if v.no:
            assert _witness_reverifies(phi, v)


@given(seeds, st.integers(1, 4), st.integers(0, 3))
def test_pr_implies_mrc(seed, n, extra):
    phi = random_spanning_frame(random.Random(seed), n, n + extra, bound=2)
    if certify_phase_retrieval(phi).yes:
        assert mrc_check(phi, n - 1).yes
        assert phi.m >= 2 * n - 1
