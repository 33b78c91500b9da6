"""Subset-based certificates: spark, full spark, complement property, MRC.

Subsets are enumerated smallest size first and in colex order within a size;
the first failing subset is the reported witness.  Indices inside witnesses
are 1-based, matching how frames are written down by hand.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

from . import kernel as K
from .frames import FrameSpec

MAX_SWEEP_M = 24


class Outcome(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass
class Verdict:
    """Three-valued certification result.

    ``NO`` always carries a checkable ``witness``; ``UNKNOWN`` always carries a
    ``budget`` record.
    """

    outcome: Outcome
    prop: str = ""
    witness: object = None
    budget: dict | None = None
    reason: str = ""
    pair: object = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.outcome = Outcome(self.outcome)
        if self.outcome is Outcome.NO and self.witness is None and self.pair is None:
            raise ValueError("a negative verdict needs a witness")
        if self.outcome is Outcome.UNKNOWN and self.budget is None:
            raise ValueError("an unknown verdict needs a budget record")

    @property
    def yes(self) -> bool:
        return self.outcome is Outcome.YES

    @property
    def no(self) -> bool:
        return self.outcome is Outcome.NO

    def to_json(self) -> dict:
        out = {"outcome": self.outcome.value, "witness": _jsonable(self.witness), "budget": self.budget}
        if self.prop:
            out["property"] = self.prop
        if self.reason:
            out["reason"] = self.reason
        if self.pair is not None:
            out["pair"] = self.pair.to_json() if hasattr(self.pair, "to_json") else _jsonable(self.pair)
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, K.Matrix):
        return obj.tolist()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    try:
        return K.format_scalar(obj)
    except TypeError:
        return str(obj)


def colex_subsets(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """All ``k``-subsets of ``range(m)`` in colexicographic order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, m):
        for rest in colex_subsets(top, k - 1):
            yield rest + (top,)


def one_based(idx) -> list[int]:
    return [i + 1 for i in idx]


def complement(m: int, idx) -> tuple[int, ...]:
    s = set(idx)
    return tuple(i for i in range(m) if i not in s)


@dataclass(frozen=True)
class SparkResult:
    value: int
    witness: tuple | None
    independent: bool

    def to_json(self):
        return {"spark": self.value, "witness": list(self.witness) if self.witness else None,
                "independent": self.independent}


def spark(phi: FrameSpec) -> SparkResult:
    """Size of the smallest dependent subfamily, or ``m + 1`` if none exists."""
    m = phi.m
    for k in range(1, min(m, phi.dim + 1) + 1):
        for s in colex_subsets(m, k):
            if phi.subset_rank(s) < k:
                return SparkResult(k, tuple(one_based(s)), False)
    return SparkResult(m + 1, None, True)


def is_full_spark(phi: FrameSpec) -> Verdict:
    """Every ``n``-subset is a basis (nonzero exact determinant)."""
    n, m = phi.dim, phi.m
    if m < n:
        raise ValueError(f"full spark needs m >= n (m={m}, n={n})")
    checked = 0
    for s in colex_subsets(m, n):
        checked += 1
        M = phi.subset_matrix(s)
        singular = K.det_exact(M) == 0 if phi.exact else K.rank(M, phi.policy) < n
        if singular:
            return Verdict(Outcome.NO, "full-spark", witness=one_based(s),
                           reason="singular n-subset", details={"subsets_checked": checked})
    return Verdict(Outcome.YES, "full-spark", details={"subsets_checked": checked})


def _check_cap(m: int):
    if m > MAX_SWEEP_M:
        raise ValueError(f"subset sweep capped at m <= {MAX_SWEEP_M} (got m={m})")


def complement_property(phi: FrameSpec) -> Verdict:
    """For every split ``sigma | sigma^c`` at least one side spans."""
    n, m = phi.dim, phi.m
    _check_cap(m)
    checked = 0
    for k in range(0, m // 2 + 1):
        for s in colex_subsets(m, k):
            checked += 1
            c = complement(m, s)
            if phi.subset_rank(s) < n and phi.subset_rank(c) < n:
                return Verdict(Outcome.NO, "complement", witness=one_based(s),
                               reason="neither side of the split spans",
                               details={"sigma": one_based(s), "complement": one_based(c),
                                        "ranks": [phi.subset_rank(s), phi.subset_rank(c)],
                                        "splits_checked": checked})
    return Verdict(Outcome.YES, "complement", details={"splits_checked": checked})


def mrc_check(phi: FrameSpec, r: int) -> Verdict:
    """Every ``r``-subset can be erased and the rest still spans."""
    m = phi.m
    if r >= m or r < 0:
        raise ValueError(f"MRC needs 0 <= r < m (r={r}, m={m})")
    _check_cap(m)
    for s in colex_subsets(m, r):
        if phi.subset_rank(complement(m, s)) < phi.dim:
            return Verdict(Outcome.NO, "mrc", witness=one_based(s), reason="erasure leaves a non-spanning family",
                           details={"r": r})
    return Verdict(Outcome.YES, "mrc", details={"r": r})


def iter_splits(m: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Splits ``(sigma, sigma^c)`` with ``|sigma| <= m // 2``, in sweep order (0-based)."""
    _check_cap(m)
    for k in range(0, m // 2 + 1):
        for s in colex_subsets(m, k):
            yield s, complement(m, s)
