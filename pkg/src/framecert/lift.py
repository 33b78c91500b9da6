"""Hermitian lift of a frame and rank-two analysis of its null space.

Measurements are linear in the lifted matrix: ``|<f, phi>|^2 = phi^* (f f^*) phi``.
The lift ``Lambda`` sends a Hermitian ``A`` to ``(phi_i^* A phi_i)_i``.  A frame
does phase retrieval iff the null space of ``Lambda`` contains no matrix of
rank one or two; for a spanning frame a rank-one null matrix is impossible,
so only rank two has to be excluded.

Coordinates use the unnormalised basis ``E_ii`` then ``E_ij + E_ji`` (i < j),
and for complex frames additionally ``i(E_ij - E_ji)`` (i < j).  With this basis
``A_ij = s_ij + i t_ij`` and every coordinate is rational.

Real frames use the symmetric-matrix lift.  A nonzero rank-two symmetric
null matrix is indefinite, so it factors as ``(a b^T + b a^T)/2`` and the null
condition reads ``(phi_i . a)(phi_i . b) = 0``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import kernel as K
from .combinatorics import Outcome, Verdict, complement_property
from .frames import COMPLEX, REAL, FrameSpec, require_frame
from .kernel import GaussianRational, Matrix
from .retrieval import _make_pair, equal_magnitudes, phase_equivalent

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = 10_000
DEFAULT_RESTARTS = 10
COVER_BUDGET = 400_000
ROUNDING_MARGIN = 1e-9


def hermitian_basis(n: int, field: str) -> list[tuple[str, int, int]]:
    basis = [("d", i, i) for i in range(n)]
    basis += [("s", i, j) for i in range(n) for j in range(i + 1, n)]
    if field == COMPLEX:
        basis += [("a", i, j) for i in range(n) for j in range(i + 1, n)]
    return basis


@dataclass(frozen=True)
class LambdaMatrix:
    rows: Matrix
    n: int
    field: str
    basis: tuple

    @property
    def m(self) -> int:
        return self.rows.nrows

    @property
    def D(self) -> int:
        return self.rows.ncols


def lambda_matrix(phi: FrameSpec) -> LambdaMatrix:
    """Row ``i`` holds the coefficients of ``phi_i^* A phi_i`` in the Hermitian coordinates."""
    if not phi.exact:
        raise ValueError("the Hermitian lift needs exact mode")
    basis = hermitian_basis(phi.dim, phi.field)
    rows = []
    for p in phi.vectors:
        row = []
        for kind, i, j in basis:
            if kind == "d":
                row.append(K.abs2(p[i]))
            else:
                w = K.conj(p[i]) * p[j]
                re, im = (w.re, w.im) if isinstance(w, GaussianRational) else (w, Fraction(0))
                row.append(2 * re if kind == "s" else -2 * im)
        rows.append(row)
    return LambdaMatrix(Matrix(rows, ncols=len(basis), variant=K.RATIONAL), phi.dim, phi.field, tuple(basis))


def outer_coords(f: Sequence, field: str) -> tuple:
    """Coordinates of ``f f^*``."""
    n = len(f)
    out = []
    for kind, i, j in hermitian_basis(n, field):
        if kind == "d":
            out.append(K.abs2(f[i]))
            continue
        w = f[i] * K.conj(f[j])
        re, im = (w.re, w.im) if isinstance(w, GaussianRational) else (w, Fraction(0))
        out.append(re if kind == "s" else im)
    return tuple(Fraction(t) for t in out)


def coords_to_matrix(coords: Sequence, n: int, field: str) -> Matrix:
    variant = K.GAUSSIAN if field == COMPLEX else K.RATIONAL
    zero = K.to_variant(0, variant)
    A = [[zero] * n for _ in range(n)]
    for c, (kind, i, j) in zip(coords, hermitian_basis(n, field)):
        if kind == "d":
            A[i][i] = A[i][i] + c
        elif kind == "s":
            A[i][j] = A[i][j] + c
            A[j][i] = A[j][i] + c
        else:
            A[i][j] = A[i][j] + GaussianRational(0, c)
            A[j][i] = A[j][i] + GaussianRational(0, -c)
    return Matrix(A, ncols=n, variant=variant)


def matrix_to_coords(A: Matrix, field: str) -> tuple:
    out = []
    for kind, i, j in hermitian_basis(A.nrows, field):
        a = A[i, j]
        re, im = (a.re, a.im) if isinstance(a, GaussianRational) else (a, Fraction(0))
        out.append(re if kind in ("d", "s") else im)
    return tuple(out)


def lambda_apply(L: LambdaMatrix, coords: Sequence) -> tuple:
    if len(coords) != L.D:
        raise ValueError(f"expected {L.D} coordinates, got {len(coords)}")
    return L.rows @ tuple(Fraction(c) for c in coords)


def lambda_nullspace(L: LambdaMatrix) -> list[tuple]:
    return K.nullspace_exact(L.rows)


@dataclass(frozen=True)
class WeightedPair:
    """Equal-magnitude pair ``x = sqrt(w1) c1``, ``y = sqrt(w2) c2`` kept square-root free."""

    c1: tuple
    c2: tuple
    w1: Fraction
    w2: Fraction

    def verify(self, phi: FrameSpec) -> bool:
        for p in phi.vectors:
            if self.w1 * K.abs2(K.dot(self.c1, p)) != self.w2 * K.abs2(K.dot(self.c2, p)):
                return False
        M = Matrix.from_columns([self.c1, self.c2], nrows=len(self.c1))
        return K.rank(M) == 2

    def to_json(self):
        fmt = lambda v: [K.format_scalar(t) for t in v]  # noqa: E731
        return {"c1": fmt(self.c1), "c2": fmt(self.c2), "w1": K.format_scalar(self.w1),
                "w2": K.format_scalar(self.w2)}


def _is_rational_square(q: Fraction):
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(a, b) if a * a == q.numerator and b * b == q.denominator else None


def _real_pair_from_matrix(phi: FrameSpec, A: Matrix):
    """Exact ``(u, v)`` with ``A = (u v^T + v u^T)/2`` read off the two lines spanned by ``A phi_i``."""
    images = [A @ p for p in phi.vectors]
    lines: list[tuple] = []
    for w in images:
        if all(t == 0 for t in w):
            continue
        if not any(K.rank(Matrix.from_columns([w, l], nrows=phi.dim)) == 1 for l in lines):
            lines.append(w)
    if len(lines) != 2:
        return None
    a, b = lines
    S = [[(a[i] * b[j] + b[i] * a[j]) / 2 for j in range(phi.dim)] for i in range(phi.dim)]
    piv = next(((i, j) for i in range(phi.dim) for j in range(phi.dim) if S[i][j] != 0), None)
    if piv is None:
        return None
    c = A[piv] / S[piv[0]][piv[1]]
    v = K.vec_scale(c, b)
    if any(A[i, j] != (a[i] * v[j] + v[i] * a[j]) / 2 for i in range(phi.dim) for j in range(phi.dim)):
        return None
    half = Fraction(1, 2)
    x = K.vec_scale(half, K.vec_add(a, v))
    y = K.vec_scale(half, K.vec_sub(v, a))
    pair = _make_pair(phi, x, y)
    if not equal_magnitudes(phi, x, y) or phase_equivalent(x, y):
        return None
    return pair


def _ldl_pair(phi: FrameSpec, A: Matrix):
    """``A = d1 c1 c1^* + d2 c2 c2^*`` with rational pivots, returned as a weighted pair."""
    n = A.nrows
    variant = A.variant
    one = K.to_variant(1, variant)
    probes = [tuple(one if k == i else 0 * one for k in range(n)) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            e = [0 * one] * n
            e[i], e[j] = one, one
            probes.append(tuple(e))
            if variant == K.GAUSSIAN:
                e = list(e)
                e[j] = K.I
                probes.append(tuple(e))
    for z in probes:
        Az = A @ z
        q = K.dot(Az, z)
        q = q.re if isinstance(q, GaussianRational) else q
        if q == 0:
            continue
        R = [[A[r, s] - Az[r] * K.conj(Az[s]) / q for s in range(n)] for r in range(n)]
        k = next((r for r in range(n) if R[r][r] != 0), None)
        if k is None:
            continue
        dk = R[k][k].re if isinstance(R[k][k], GaussianRational) else R[k][k]
        c1, d1 = tuple(Az), 1 / q
        c2, d2 = tuple(R[r][k] for r in range(n)), 1 / dk
        if (d1 > 0) == (d2 > 0):
            return None
        if d1 < 0:
            c1, d1, c2, d2 = c2, d2, c1, d1
        return WeightedPair(c1, c2, Fraction(d1), Fraction(-d2))
    return None


def extract_pair(phi: FrameSpec, A: Matrix):
    """Counterexample pair from an exact rank-two null matrix."""
    if phi.field == REAL:
        pair = _real_pair_from_matrix(phi, A)
        if pair is not None:
            return pair
    wp = _ldl_pair(phi, A)
    if wp is None or not wp.verify(phi):
        return None
    r = _is_rational_square(wp.w1 / wp.w2)
    if r is not None:
        return _make_pair(phi, K.vec_scale(r, wp.c1), wp.c2)
    return wp


def _basis_tensor(nullbasis, n, field) -> np.ndarray:
    mats = [coords_to_matrix(c, n, field).to_numpy() for c in nullbasis]
    return np.stack(mats).astype(complex if field == COMPLEX else float)


def _sigma3(T: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Third largest singular value of ``sum_k C[:, k] T[k]`` for each row of ``C``."""
    A = np.tensordot(C, T, axes=(1, 0))
    ev = np.abs(np.linalg.eigvalsh(A))
    ev.sort(axis=-1)
    return ev[..., -3]


def _exact_candidate(nullbasis, coeffs) -> tuple:
    D = len(nullbasis[0])
    return tuple(sum((c * b[k] for c, b in zip(coeffs, nullbasis)), Fraction(0)) for k in range(D))


def _witness(phi, L, coords, source):
    A = coords_to_matrix(coords, phi.dim, phi.field)
    if A.is_zero() or K.rank(A) > 2 or any(lambda_apply(L, coords)):
        return None
    pair = extract_pair(phi, A)
    if pair is None:
        return None
    return {"coords": coords, "matrix": A, "pair": pair, "source": source}


def _snap_real(phi, L, A_num: np.ndarray):
    """Round a near rank-two symmetric matrix to an exact witness through its isotropic split."""
    vals, vecs = np.linalg.eigh(A_num)
    order = np.argsort(-np.abs(vals))
    l1, l2 = vals[order[0]], vals[order[1]]
    if l1 * l2 >= 0:
        return None
    if l1 < 0:
        l1, l2 = l2, l1
        order = order[[1, 0]]
    e1, e2 = vecs[:, order[0]], vecs[:, order[1]]
    a = np.sqrt(l1) * e1 - np.sqrt(-l2) * e2
    b = np.sqrt(l1) * e1 + np.sqrt(-l2) * e2
    P = phi.synthesis.to_numpy().astype(float)
    sigma = [i for i in range(phi.m) if abs(P[:, i] @ a) <= abs(P[:, i] @ b)]
    rest = [i for i in range(phi.m) if i not in sigma]
    n1, n2 = phi.orthogonal_complement(sigma), phi.orthogonal_complement(rest)
    for u in n1:
        for v in n2:
            M = [[(u[i] * v[j] + v[i] * u[j]) / 2 for j in range(phi.dim)] for i in range(phi.dim)]
            coords = matrix_to_coords(Matrix(M, ncols=phi.dim), REAL)
            w = _witness(phi, L, coords, "numeric-snap")
            if w is not None:
                return w
    return None


def _snap_rational(phi, L, nullbasis, c: np.ndarray):
    scale = np.max(np.abs(c))
    if scale == 0:
        return None
    c = c / scale
    for den in (1, 2, 4, 6, 12, 60, 1000):
        coeffs = [Fraction(float(t)).limit_denominator(den) for t in c]
        w = _witness(phi, L, _exact_candidate(nullbasis, coeffs), "numeric-rational")
        if w is not None:
            return w
    return None


def _cube_cover(T: np.ndarray, budget: int):
    """Certify ``sigma_3 > 0`` on the unit-cube surface in coefficient space.

    Weyl's inequality gives ``|sigma_3(A(c)) - sigma_3(A(c'))| <= Lip * ||c - c'||``
    with ``Lip`` the spectral norm of ``c -> vec(A(c))``.  A cell is cleared when
    its centre value exceeds ``Lip * radius`` plus a rounding margin.  Rank is
    scale invariant, so clearing the cube surface clears every nonzero ``c``.
    Returns (certified, evaluations, smallest centre value, its centre).
    """
    d = T.shape[0]
    flat = T.reshape(d, -1)
    lip = float(np.linalg.norm(flat.T, 2))
    margin = ROUNDING_MARGIN * max(1.0, lip)
    g = 4
    half = 1.0 / g
    ticks = -1 + half + 2 * half * np.arange(g)
    grid = np.array(list(itertools.product(ticks, repeat=d - 1))) if d > 1 else np.zeros((1, 0))
    cells = []
    for face in range(d):
        for sign in (-1.0, 1.0):
            C = np.insert(grid, face, sign, axis=1)
            cells.append((C, face))
    evals = 0
    best = (np.inf, None)
    pending = [(C, face, half) for C, face in cells]
    while pending:
        C, face, h = pending.pop()
        s3 = _sigma3(T, C)
        evals += len(C)
        i = int(np.argmin(s3))
        if s3[i] < best[0]:
            best = (float(s3[i]), C[i].copy())
        radius = h * np.sqrt(max(d - 1, 1))
        bad = C[s3 <= lip * radius + margin]
        if len(bad) == 0:
            continue
        if evals + len(bad) * 2 ** (d - 1) > budget:
            return False, evals, best[0], best[1]
        offsets = np.array(list(itertools.product((-h / 2, h / 2), repeat=d - 1)))
        others = [k for k in range(d) if k != face]
        children = np.repeat(bad, len(offsets), axis=0)
        children[:, others] += np.tile(offsets, (len(bad), 1))
        pending.append((children, face, h / 2))
    return True, evals, best[0], best[1]


def rank2_search(phi: FrameSpec, L: LambdaMatrix | None = None, nullbasis=None,
                 budget: int | None = None, seed: int = 0, restarts: int = DEFAULT_RESTARTS,
                 cover_budget: int = COVER_BUDGET) -> Verdict:
    """Look for a rank-two matrix in the lift's null space.

    ``dim 0`` and ``dim 1`` are decided exactly.  Larger null spaces try the
    basis, a coarse ``{-1,0,1}`` grid and seeded numeric minimisation of the
    third singular value (rounded to exact witnesses), then attempt a
    Lipschitz cell cover proving no rank-two matrix exists.
    """
    L = L or lambda_matrix(phi)
    nullbasis = lambda_nullspace(L) if nullbasis is None else nullbasis
    d = len(nullbasis)
    samples = DEFAULT_SAMPLES if budget is None else budget
    if d == 0:
        return Verdict(Outcome.YES, "phase", reason="lift is injective", details={"null_dim": 0})
    if phi.dim <= 2:
        w = _witness(phi, L, nullbasis[0], "basis")
        if w is None:
            raise AssertionError("a nonzero 2x2 null matrix failed to yield a pair")
        return _no(w, d)
    for k, b in enumerate(nullbasis):
        w = _witness(phi, L, b, f"basis[{k}]")
        if w is not None:
            return _no(w, d)
    if d == 1:
        r = K.rank(coords_to_matrix(nullbasis[0], phi.dim, phi.field))
        return Verdict(Outcome.YES, "phase", reason=f"single null matrix has rank {r}",
                       details={"null_dim": 1, "null_rank": r})
    if d <= 6:
        for coeffs in itertools.product((-1, 0, 1), repeat=d):
            if not any(coeffs) or next(c for c in coeffs if c) < 0:
                continue
            w = _witness(phi, L, _exact_candidate(nullbasis, [Fraction(c) for c in coeffs]), "grid")
            if w is not None:
                return _no(w, d)

    T = _basis_tensor(nullbasis, phi.dim, phi.field)
    rng = np.random.default_rng(seed)
    log.info("rank-two search: null_dim=%d samples=%d restarts=%d seed=%d", d, samples, restarts, seed)
    C = rng.standard_normal((max(samples, restarts), d))
    C /= np.linalg.norm(C, axis=1, keepdims=True)
    s3 = _sigma3(T, C)
    starts = C[np.argsort(s3)[:restarts]]

    def objective(c):
        c = c / np.linalg.norm(c)
        return float(_sigma3(T, c[None, :])[0])

    def snap(c):
        A_num = np.tensordot(c, T, axes=(0, 0))
        w = None
        if phi.field == REAL:
            w = _snap_real(phi, L, A_num.real)
        return w or _snap_rational(phi, L, nullbasis, c.real)

    for r, c0 in enumerate(starts):
        res = minimize(objective, c0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        c = res.x / np.linalg.norm(res.x)
        w = snap(c)
        if w is not None:
            w["source"] += f"/restart{r}"
            return _no(w, d, {"seed": seed, "samples": samples, "restarts": restarts})

    ok, evals, best, centre = _cube_cover(T, cover_budget)
    budget_rec = {"seed": seed, "samples": samples, "restarts": restarts, "cover_evaluations": evals}
    if ok:
        return Verdict(Outcome.YES, "phase", reason="Lipschitz cover excludes rank two on the coefficient sphere",
                       details={"null_dim": d, "min_sigma3": best, **budget_rec})
    if centre is not None:
        w = snap(centre / np.linalg.norm(centre))
        if w is not None:
            return _no(w, d, budget_rec)
    return Verdict(Outcome.UNKNOWN, "phase", budget=budget_rec,
                   reason="no rank-two witness found and the cover did not close",
                   details={"null_dim": d, "min_sigma3": best})


def _no(w, d, budget=None) -> Verdict:
    coords = w["coords"]
    return Verdict(Outcome.NO, "phase", witness={"coords": [K.format_scalar(c) for c in coords],
                                                  "matrix": w["matrix"].tolist()},
                   pair=w["pair"], reason=f"rank-two matrix in the lift null space ({w['source']})",
                   budget=budget, details={"null_dim": d})


class CrossCheckError(AssertionError):
    pass


def certify_pr_via_lambda(phi: FrameSpec, budget: int | None = None, seed: int = 0,
                          cross_check: bool = True) -> Verdict:
    """Phase retrieval through the lift; real frames are cross-checked against the complement property."""
    require_frame(phi, "certify_pr_via_lambda")
    L = lambda_matrix(phi)
    v = rank2_search(phi, L=L, budget=budget, seed=seed)
    if cross_check and phi.field == REAL:
        cp = complement_property(phi)
        v.details["complement_property"] = cp.outcome.value
        if v.outcome is not Outcome.UNKNOWN and v.outcome is not cp.outcome:
            raise CrossCheckError(f"lift verdict {v.outcome.value} disagrees with complement property {cp.outcome.value}")
    return v
