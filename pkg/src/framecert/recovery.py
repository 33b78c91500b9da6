"""Magnitude-only reconstruction of real signals by sign enumeration.

A spanning subset ``B`` of ``n`` measurement vectors fixes ``f`` once the signs
of ``<f, phi_b>`` are chosen, so only ``2^(|B|-1)`` sign patterns need checking
(the global sign is pinned).  Square roots of non-square magnitudes are
carried symbolically as :class:`Surd` values; two radicals ``sqrt(p)`` and
``sqrt(q)`` are rationally dependent exactly when ``p q`` is a rational square,
which lets every consistency test be decided without factoring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np

from . import kernel as K
from .combinatorics import MAX_SWEEP_M
from .frames import REAL, FrameSpec, first_basis_indices
from .kernel import Matrix

UNIQUE = "unique-up-to-sign"
AMBIGUOUS = "ambiguous"
INFEASIBLE = "infeasible"


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(a, b) if a * a == q.numerator and b * b == q.denominator else None


class RadicalBasis:
    """Registry of pairwise independent radicands; ``1`` is always the first."""

    def __init__(self):
        self.reps: list[Fraction] = [Fraction(1)]

    def split(self, t: Fraction) -> tuple[int, Fraction]:
        """Write ``sqrt(t) = c * sqrt(rep_k)``; returns ``(k, c)``."""
        for k, d in enumerate(self.reps):
            r = rational_sqrt(t * d)
            if r is not None:
                return k, r / d
        self.reps.append(t)
        return len(self.reps) - 1, Fraction(1)


class Surd:
    """``sum_k c_k sqrt(rep_k)`` over a shared :class:`RadicalBasis`."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: RadicalBasis, terms: dict | None = None):
        self.basis = basis
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def sqrt(cls, basis, t: Fraction) -> "Surd":
        if t == 0:
            return cls(basis)
        k, c = basis.split(Fraction(t))
        return cls(basis, {k: c})

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return Surd(self.basis, t)

    def __neg__(self):
        return Surd(self.basis, {k: -v for k, v in self.terms.items()})

    def scale(self, c) -> "Surd":
        return Surd(self.basis, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "Surd") -> "Surd":
        out = Surd(self.basis)
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                prod = self.basis.reps[k1] * self.basis.reps[k2]
                out = out + Surd.sqrt(self.basis, prod).scale(v1 * v2)
        return out

    def rational(self) -> Fraction | None:
        if not self.terms:
            return Fraction(0)
        if set(self.terms) == {0}:
            return self.terms[0]
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        lo = hi = Fraction(0)
        scale = 1 << bits
        for k, c in self.terms.items():
            d = self.basis.reps[k]
            r = isqrt(d.numerator * scale * scale // d.denominator)
            a, b = Fraction(r, scale), Fraction(r + 1, scale)
            if a * a == d:
                b = a
            lo += min(c * a, c * b)
            hi += max(c * a, c * b)
        return lo, hi

    def sign(self) -> int:
        """Exact sign; a nonzero combination of independent radicals is nonzero."""
        if self.is_zero():
            return 0
        bits = 32
        while True:
            lo, hi = self.bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __float__(self):
        return float(sum(float(c) * float(self.basis.reps[k]) ** 0.5 for k, c in self.terms.items()))

    def key(self):
        return tuple(sorted((float(self.basis.reps[k]), str(v)) for k, v in self.terms.items()))

    def format(self) -> str:
        parts = []
        for k in sorted(self.terms):
            c, d = self.terms[k], self.basis.reps[k]
            parts.append(K.format_scalar(c) if k == 0 else f"{K.format_scalar(c)}*sqrt({K.format_scalar(d)})")
        return " + ".join(parts) if parts else "0"


def measure(phi: FrameSpec, f: Sequence) -> tuple:
    """Squared magnitudes ``|<f, phi_i>|^2``."""
    return tuple(K.abs2(c) for c in phi.coefficients(f))


@dataclass
class RecoveryResult:
    solutions: list
    status: str
    residual: object
    patterns_checked: int
    basis: tuple
    diagnostic: float | None = None

    def to_json(self):
        def fmt(v):
            return [x.format() if isinstance(x, Surd) else K.format_scalar(x) for x in v]
        out = {"status": self.status, "solutions": [fmt(s) for s in self.solutions],
               "residual": K.format_scalar(self.residual) if self.residual is not None else None,
               "patterns_checked": self.patterns_checked, "basis": [b + 1 for b in self.basis]}
        if self.diagnostic is not None:
            out["least_squares_residual"] = self.diagnostic
        return out


def _canonical_sign(vec: list) -> list:
    for t in vec:
        s = t.sign() if isinstance(t, Surd) else (1 if t > 0 else -1 if t < 0 else 0)
        if s:
            return vec if s > 0 else [(-t) for t in vec]
    return vec


def _parse_magnitudes(M) -> list[Fraction]:
    vals = [K.parse_scalar(t) if isinstance(t, str) else Fraction(t) for t in M]
    if any(isinstance(v, K.GaussianRational) for v in vals) or any(v < 0 for v in vals):
        raise ValueError("squared magnitudes must be nonnegative rationals")
    return [Fraction(v) for v in vals]


def recover_real(phi: FrameSpec, M: Sequence) -> RecoveryResult:
    """Every real ``f`` (up to sign) whose squared magnitudes equal ``M``."""
    if phi.field != REAL or not phi.exact:
        raise ValueError("recovery is only supported for real exact frames (complex phases cannot be enumerated)")
    if phi.m > MAX_SWEEP_M:
        raise ValueError(f"recovery enumeration capped at m <= {MAX_SWEEP_M}")
    q = _parse_magnitudes(M)
    if len(q) != phi.m:
        raise ValueError(f"expected {phi.m} magnitudes, got {len(q)}")
    basis = first_basis_indices(phi)
    if len(basis) < phi.dim:
        raise ValueError("recovery needs a spanning family")
    A = Matrix([phi.vectors[b] for b in basis], ncols=phi.dim)
    Ainv = K.inverse_exact(A)
    coeff = [tuple(K.dot(phi.vectors[i], Ainv.col(j)) for j in range(phi.dim)) for i in range(phi.m)]
    rb = RadicalBasis()
    roots = [Surd.sqrt(rb, q[b]) for b in basis]
    free = [k for k, b in enumerate(basis) if q[b] != 0]
    solutions: list = []
    seen = set()
    checked = 0
    patterns = [()] if not free else [(1,) + s for s in itertools.product((1, -1), repeat=len(free) - 1)]
    for pat in patterns:
        checked += 1
        signs = [1] * len(basis)
        for k, s in zip(free, pat):
            signs[k] = s
        r = [roots[k].scale(signs[k]) for k in range(len(basis))]
        ok = True
        for i in range(phi.m):
            c = Surd(rb)
            for j, cij in enumerate(coeff[i]):
                if cij != 0:
                    c = c + r[j].scale(cij)
            sq = (c * c).rational()
            if sq is None or sq != q[i]:
                ok = False
                break
        if not ok:
            continue
        f = []
        for row in range(phi.dim):
            acc = Surd(rb)
            for j in range(len(basis)):
                a = Ainv[row, j]
                if a != 0:
                    acc = acc + r[j].scale(a)
            f.append(acc)
        rationals = [t.rational() for t in f]
        vec = rationals if all(t is not None for t in rationals) else f
        vec = _canonical_sign(vec)
        key = tuple(t.key() if isinstance(t, Surd) else t for t in vec)
        if key not in seen:
            seen.add(key)
            solutions.append(tuple(vec))
    if not solutions:
        return RecoveryResult([], INFEASIBLE, None, checked, tuple(basis), _least_squares_residual(phi, q))
    for s in solutions:
        if all(not isinstance(t, Surd) for t in s) and measure(phi, s) != tuple(q):
            raise AssertionError("recovered vector does not reproduce the magnitudes")
    status = UNIQUE if len(solutions) == 1 else AMBIGUOUS
    return RecoveryResult(solutions, status, Fraction(0), checked, tuple(basis))


def _least_squares_residual(phi: FrameSpec, q: list[Fraction]) -> float:
    """Smallest float residual ``||M(f) - q||`` over sign patterns, via least squares per pattern."""
    P = phi.synthesis.to_numpy().astype(float).T
    mags = np.sqrt(np.array([float(t) for t in q]))
    best = np.inf
    m = phi.m
    for s in itertools.product((1.0, -1.0), repeat=m - 1):
        rhs = mags * np.array((1.0,) + s)
        f, *_ = np.linalg.lstsq(P, rhs, rcond=None)
        best = min(best, float(np.linalg.norm((P @ f) ** 2 - mags ** 2)))
    return best
