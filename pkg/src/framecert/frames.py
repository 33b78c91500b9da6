"""Finite frames: validation, frame and Gram operators, duals, standard form.

Inner products are linear in the first slot and conjugate-linear in the
second, so the analysis coefficients of ``f`` are ``<f, phi_i> = phi_i^* f``
and the synthesis matrix has the frame vectors as columns.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import kernel as K
from .kernel import FLOAT, GAUSSIAN, RATIONAL, Matrix, TolerancePolicy

logger = logging.getLogger(__name__)

REAL = "real"
COMPLEX = "complex"
EXACT = "exact"


class FrameError(ValueError):
    """Malformed frame input."""


class NotAFrameError(ValueError):
    """The family does not span the ambient space but the operation needs it to."""


@dataclass(frozen=True)
class FrameSpec:
    """An ordered family of ``m`` vectors in an ``n``-dimensional space.

    Non-spanning families are accepted; ``is_frame`` records whether the
    vectors span.  ``zero_indices`` lists (0-based) positions of zero vectors.
    """

    dim: int
    field: str
    vectors: tuple
    mode: str = EXACT
    policy: TolerancePolicy = K.DEFAULT_POLICY
    is_frame: bool = False
    zero_indices: tuple = ()

    @property
    def m(self) -> int:
        return len(self.vectors)

    @property
    def n(self) -> int:
        return self.dim

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    @property
    def variant(self) -> str:
        if self.mode == FLOAT:
            return FLOAT
        return GAUSSIAN if self.field == COMPLEX else RATIONAL

    @cached_property
    def synthesis(self) -> Matrix:
        """``n x m`` matrix with the frame vectors as columns."""
        return Matrix.from_columns(self.vectors, nrows=self.dim, variant=self.variant)

    @cached_property
    def analysis(self) -> Matrix:
        return self.synthesis.H

    def subset_matrix(self, indices: Sequence[int]) -> Matrix:
        """``n x k`` matrix of the selected vectors (0-based indices)."""
        return Matrix.from_columns([self.vectors[i] for i in indices], nrows=self.dim, variant=self.variant)

    def subset_rank(self, indices: Sequence[int]) -> int:
        if not indices:
            return 0
        return K.rank(self.subset_matrix(indices), self.policy)

    def orthogonal_complement(self, indices: Sequence[int]) -> list[tuple]:
        """Exact basis of ``span{phi_i : i in indices}^perp``."""
        if not indices:
            return K.nullspace_exact(Matrix.zeros(0, self.dim, self.variant))
        rows = [[K.conj(x) for x in self.vectors[i]] for i in indices]
        return K.nullspace_exact(Matrix(rows, ncols=self.dim, variant=self.variant))

    def coefficients(self, f: Sequence) -> tuple:
        """Analysis coefficients ``(<f, phi_i>)_i``."""
        return tuple(K.dot(f, phi) for phi in self.vectors)

    def to_json(self) -> dict:
        return frame_to_json(self)

    def __repr__(self):
        vecs = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vectors)
        return f"FrameSpec(n={self.dim}, {self.field}, {self.mode}, [{vecs}])"


def _normalize_vectors(vectors, dim: int, field: str, mode: str):
    if mode == EXACT:
        variant = GAUSSIAN if field == COMPLEX else RATIONAL
    else:
        variant = FLOAT
    out = []
    for k, v in enumerate(vectors):
        v = list(v)
        if len(v) != dim:
            raise FrameError(f"vector {k + 1} has length {len(v)}, expected {dim}")
        row = []
        for x in v:
            try:
                vx = K.variant_of(x)
            except TypeError as exc:
                raise FrameError(str(exc)) from None
            if mode == EXACT and vx == FLOAT:
                raise FrameError("float entry in an exact-mode frame")
            if mode == FLOAT and vx != FLOAT:
                x = complex(x) if isinstance(x, K.GaussianRational) else float(x)
                if isinstance(x, complex) and field == REAL:
                    raise FrameError("complex entry in a real frame")
            if variant == RATIONAL and vx == GAUSSIAN:
                if not x.is_real():
                    raise FrameError("complex entry in a real frame")
                x = x.re
            if variant == FLOAT:
                if isinstance(x, complex) and field == REAL:
                    raise FrameError("complex entry in a real frame")
                if field == COMPLEX:
                    x = complex(x)
                else:
                    x = float(x)
            else:
                x = K.to_variant(x, variant)
            row.append(x)
        out.append(tuple(row))
    return tuple(out)


def validate_frame(vectors, dim: int | None = None, field: str = REAL, mode: str = EXACT,
                   policy: TolerancePolicy | None = None) -> FrameSpec:
    """Build a :class:`FrameSpec` and record whether the vectors span.

    ``vectors`` may hold ints, ``Fraction``, ``GaussianRational`` (exact mode)
    or floats (float mode).  Zero vectors are accepted with a warning.
    """
    if field not in (REAL, COMPLEX):
        raise FrameError(f"unknown field {field!r}")
    if mode not in (EXACT, FLOAT):
        raise FrameError(f"unknown mode {mode!r}")
    vectors = [list(v) for v in vectors]
    if dim is None:
        if not vectors:
            raise FrameError("cannot infer dimension of an empty family")
        dim = len(vectors[0])
    if dim <= 0:
        raise FrameError("dimension must be positive")
    if not vectors:
        raise FrameError("a frame needs at least one vector")
    vecs = _normalize_vectors(vectors, dim, field, mode)
    policy = policy or K.DEFAULT_POLICY
    zeros = tuple(i for i, v in enumerate(vecs) if all(K.is_zero(x) for x in v))
    if zeros:
        logger.warning("family contains zero vectors at positions %s", [i + 1 for i in zeros])
    spec = FrameSpec(dim=dim, field=field, vectors=vecs, mode=mode, policy=policy, zero_indices=zeros)
    spans = K.rank(spec.synthesis, policy) == dim
    object.__setattr__(spec, "is_frame", spans)
    return spec


def _with_vectors(phi: FrameSpec, vectors) -> FrameSpec:
    return validate_frame(vectors, dim=phi.dim, field=phi.field, mode=phi.mode, policy=phi.policy)


def frame_from_json(data: dict | str) -> FrameSpec:
    """Parse the frame JSON schema (``dim``, ``field``, ``mode``, ``vectors``)."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        dim = int(data["dim"])
        field_ = data.get("field", REAL)
        mode = data.get("mode", EXACT)
        raw = data["vectors"]
    except (KeyError, TypeError) as exc:
        raise FrameError(f"missing frame field: {exc}") from None
    if not isinstance(raw, list):
        raise FrameError("'vectors' must be a list")
    vectors = []
    for v in raw:
        if not isinstance(v, list):
            raise FrameError("each vector must be a list")
        row = []
        for x in v:
            if mode == EXACT:
                if isinstance(x, float):
                    raise FrameError("exact-mode entries must be strings like 'p/q'")
                try:
                    row.append(K.parse_scalar(x))
                except (ValueError, ZeroDivisionError) as exc:
                    raise FrameError(f"bad exact entry {x!r}: {exc}") from None
            else:
                if isinstance(x, dict):
                    row.append(complex(float(x.get("re", 0)), float(x.get("im", 0))))
                elif isinstance(x, (int, float)) and not isinstance(x, bool):
                    row.append(float(x))
                else:
                    raise FrameError(f"bad float entry {x!r}")
        vectors.append(row)
    return validate_frame(vectors, dim=dim, field=field_, mode=mode)


def frame_to_json(phi: FrameSpec) -> dict:
    return {
        "dim": phi.dim,
        "field": phi.field,
        "mode": phi.mode,
        "vectors": [[K.format_scalar(x) for x in v] for v in phi.vectors],
    }


def require_frame(phi: FrameSpec, what: str = "this operation"):
    if not phi.is_frame:
        raise NotAFrameError(f"{what} needs a spanning family (rank < {phi.dim})")


def gram(phi: FrameSpec) -> Matrix:
    """``G[i][j] = <phi_i, phi_j>``."""
    vs = phi.vectors
    return Matrix([[K.dot(a, b) for b in vs] for a in vs], ncols=phi.m, variant=phi.variant)


def frame_operator(phi: FrameSpec) -> Matrix:
    """``S = T T^*`` with ``T`` the synthesis matrix."""
    return phi.synthesis @ phi.analysis


@dataclass(frozen=True)
class DualFrame:
    """Dual vectors of ``base``; the duality identity is checked on creation."""

    base: FrameSpec
    vectors: tuple
    provenance: str = "explicit"
    params: object = None

    def as_frame(self) -> FrameSpec:
        return _with_vectors(self.base, self.vectors)

    @property
    def synthesis(self) -> Matrix:
        return Matrix.from_columns(self.vectors, nrows=self.base.dim, variant=self.base.variant)


def make_dual(phi: FrameSpec, vectors, provenance: str = "explicit", params=None) -> DualFrame:
    vectors = tuple(tuple(K.to_variant(x, phi.variant) if phi.exact else x for x in v) for v in vectors)
    ok, residual = verify_dual(phi, vectors)
    if not ok:
        raise ValueError(f"vectors are not a dual frame; residual {residual}")
    return DualFrame(base=phi, vectors=vectors, provenance=provenance, params=params)


def canonical_dual(phi: FrameSpec) -> DualFrame:
    """Canonical dual ``S^{-1} phi_i``."""
    require_frame(phi, "canonical_dual")
    S = frame_operator(phi)
    if phi.exact:
        vecs = [K.solve_exact(S, v) for v in phi.vectors]
    else:
        Sinv = np.linalg.inv(S.to_numpy())
        vecs = [tuple(Sinv @ np.array(v)) for v in phi.vectors]
        vecs = [tuple(complex(x) if phi.field == COMPLEX else float(np.real(x)) for x in v) for v in vecs]
    return make_dual(phi, vecs, provenance="canonical")


def verify_dual(phi: FrameSpec, psi) -> tuple[bool, Matrix]:
    """Check ``T_phi T_psi^* = I``; returns ``(ok, residual)``."""
    vectors = psi.vectors if isinstance(psi, (DualFrame, FrameSpec)) else tuple(tuple(v) for v in psi)
    if len(vectors) != phi.m or any(len(v) != phi.dim for v in vectors):
        raise ValueError("dual candidate has the wrong shape")
    Psi = Matrix.from_columns(vectors, nrows=phi.dim, variant=phi.variant)
    residual = phi.synthesis @ Psi.H - Matrix.identity(phi.dim, phi.variant)
    if phi.exact:
        return residual.is_zero(), residual
    R = residual.to_numpy()
    return bool(np.max(np.abs(R), initial=0.0) <= phi.policy.tau * max(1.0, phi.dim)), residual


def excess(phi: FrameSpec) -> int:
    require_frame(phi, "excess")
    return phi.m - phi.dim


@dataclass(frozen=True)
class OperatorT:
    """An ``n x n`` operator with cached exact determinant and structural flags.

    ``permutation`` is set by :func:`standard_form`: position ``k`` of the
    reduced frame holds original vector ``permutation[k]`` (0-based).
    """

    matrix: Matrix
    det: object
    invertible: bool
    unitary: bool
    diagonal: bool
    positive_diagonal: bool
    permutation: tuple | None = None

    @property
    def n(self) -> int:
        return self.matrix.nrows

    def inverse(self) -> Matrix:
        return K.inverse_exact(self.matrix)


def _is_positive_real(x) -> bool:
    if isinstance(x, K.GaussianRational):
        return x.is_real() and x.re > 0
    if isinstance(x, complex):
        return x.imag == 0 and x.real > 0
    return x > 0


def make_operator(M, permutation=None) -> OperatorT:
    M = K.as_matrix(M)
    if M.nrows != M.ncols:
        raise ValueError("operator must be square")
    n = M.nrows
    if M.is_exact:
        d = K.det_exact(M)
        invertible = d != 0
        unitary = (M.H @ M).is_identity()
    else:
        A = M.to_numpy()
        d = complex(np.linalg.det(A)) if np.iscomplexobj(A) else float(np.linalg.det(A))
        invertible = abs(d) > 1e-12
        unitary = bool(np.allclose(A.conj().T @ A, np.eye(n)))
    diagonal = all(M[i, j] == 0 for i in range(n) for j in range(n) if i != j)
    positive = diagonal and all(_is_positive_real(M[i, i]) for i in range(n))
    return OperatorT(matrix=M, det=d, invertible=invertible, unitary=unitary, diagonal=diagonal,
                     positive_diagonal=positive, permutation=permutation)


def apply_operator(T, phi: FrameSpec) -> FrameSpec:
    """The family ``{T phi_i}``."""
    M = T.matrix if isinstance(T, OperatorT) else K.as_matrix(T)
    if M.ncols != phi.dim or M.nrows != phi.dim:
        raise ValueError("operator dimension does not match the frame")
    if phi.exact:
        M = Matrix(M.rows, ncols=M.ncols, variant=K.join_variants(M.variant, phi.variant))
    return _with_vectors(phi, [M @ v for v in phi.vectors])


def transport_dual(T, dual_vectors) -> list[tuple]:
    """Map dual vectors of ``phi`` to dual vectors of ``T phi`` via ``(T^*)^{-1}``."""
    M = T.matrix if isinstance(T, OperatorT) else K.as_matrix(T)
    Minv_star = K.inverse_exact(M.H)
    return [Minv_star @ g for g in dual_vectors]


def first_basis_indices(phi: FrameSpec) -> list[int]:
    """Lexicographically first linearly independent spanning subset (greedy)."""
    chosen: list[int] = []
    r = 0
    for i in range(phi.m):
        if phi.subset_rank(chosen + [i]) > r:
            chosen.append(i)
            r += 1
            if r == phi.dim:
                break
    return chosen


def standard_form(phi: FrameSpec) -> tuple[OperatorT, FrameSpec]:
    """Reduce ``phi`` to an equivalent frame whose first ``n`` vectors are the standard basis.

    Returns ``(T, phi_tilde)`` with ``phi_tilde = T phi'`` where ``phi'`` is
    ``phi`` stably reordered so that its first independent vectors come first;
    the reordering is stored in ``T.permutation``.
    """
    require_frame(phi, "standard_form")
    if not phi.exact:
        raise ValueError("standard_form requires exact mode")
    basis = first_basis_indices(phi)
    rest = [i for i in range(phi.m) if i not in basis]
    perm = tuple(basis + rest)
    B = phi.subset_matrix(basis)
    T = K.inverse_exact(B)
    op = make_operator(T, permutation=perm)
    reordered = _with_vectors(phi, [phi.vectors[i] for i in perm])
    return op, apply_operator(op, reordered)


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    tight: bool


def frame_bounds_float(phi: FrameSpec) -> FrameBounds:
    """Optimal frame bounds as the extreme eigenvalues of ``S`` (float approximation)."""
    S = frame_operator(phi).to_numpy()
    eig = np.linalg.eigvalsh((S + S.conj().T) / 2)
    A, B = float(eig[0]), float(eig[-1])
    return FrameBounds(A, B, abs(A - B) <= phi.policy.tau * max(abs(B), 1.0))


def is_positive_definite(M: Matrix) -> bool:
    """All leading principal minors strictly positive (exact)."""
    n = M.nrows
    for k in range(1, n + 1):
        d = K.det_exact(Matrix([r[:k] for r in M.rows[:k]], ncols=k, variant=M.variant))
        if isinstance(d, K.GaussianRational):
            if not d.is_real():
                return False
            d = d.re
        if d <= 0:
            return False
    return True


def standard_basis(n: int, variant: str = RATIONAL) -> list[tuple]:
    return Matrix.identity(n, variant).columns()


def frac_vectors(rows) -> list[tuple]:
    """Convenience: nested ints/strings into Fraction tuples."""
    return [tuple(Fraction(x) if not isinstance(x, K.GaussianRational) else x for x in r) for r in rows]
