"""Exact and floating scalar arithmetic plus dense linear algebra.

Three scalar variants are supported and never mixed:

* ``rational``: :class:`fractions.Fraction` (ints are promoted on entry),
* ``gaussian``: :class:`GaussianRational`, a complex number with rational parts,
* ``float``: Python ``float`` / ``complex``.

Rational and Gaussian values may be combined (the rationals embed into the
Gaussian rationals); combining either with a float raises
:class:`MixedVariantError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

RATIONAL = "rational"
GAUSSIAN = "gaussian"
FLOAT = "float"


class MixedVariantError(TypeError):
    """Raised when exact and floating scalars meet in one computation."""


class SingularMatrixError(ValueError):
    """Raised by :func:`solve_exact` on a singular system.

    The ``witness`` attribute holds a nonzero null-space vector.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GaussianRational:
    """Complex number ``re + i*im`` with both parts exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, (float, complex)) or isinstance(im, (float, complex)):
            raise MixedVariantError("GaussianRational parts must be exact")
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, Rational):
            return GaussianRational(other, 0)
        if isinstance(other, (float, complex)):
            raise MixedVariantError(f"cannot combine GaussianRational with {type(other).__name__}")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = o.norm()
        if d == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus ``re**2 + im**2`` (exact)."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussianRational(0, 1)


def variant_of(x) -> str:
    if isinstance(x, GaussianRational):
        return GAUSSIAN
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Rational):
        return RATIONAL
    if isinstance(x, (float, complex, np.floating, np.complexfloating)):
        return FLOAT
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def join_variants(a: str, b: str) -> str:
    if a == b:
        return a
    if FLOAT in (a, b):
        raise MixedVariantError(f"cannot mix {a} and {b} scalars")
    return GAUSSIAN


def to_variant(x, variant: str):
    """Convert ``x`` into ``variant``; exact<->float conversion is refused."""
    v = variant_of(x)
    if v == variant:
        if v == RATIONAL:
            return Fraction(x)
        if v == FLOAT and isinstance(x, (np.floating, np.complexfloating)):
            return complex(x) if isinstance(x, np.complexfloating) else float(x)
        return x
    if v == RATIONAL and variant == GAUSSIAN:
        return GaussianRational(x, 0)
    if v == GAUSSIAN and variant == RATIONAL:
        if not x.is_real():
            raise ValueError(f"{x} is not real")
        return x.re
    raise MixedVariantError(f"cannot convert {v} scalar to {variant}")


def parse_scalar(text) -> Fraction | GaussianRational:
    """Parse ``"p/q"`` strings, ints, or ``{"re": ..., "im": ...}`` mappings."""
    if isinstance(text, dict):
        return GaussianRational(parse_scalar(text.get("re", 0)), parse_scalar(text.get("im", 0)))
    if isinstance(text, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"cannot parse exact scalar from {text!r}")


def format_scalar(x):
    """JSON-friendly rendering: strings for exact values, numbers for floats."""
    v = variant_of(x)
    if v == RATIONAL:
        return str(Fraction(x))
    if v == GAUSSIAN:
        return {"re": str(x.re), "im": str(x.im)}
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return float(x)


def conj(x):
    return x.conjugate()


def abs2(x):
    """Squared modulus, exact for exact variants."""
    if isinstance(x, GaussianRational):
        return x.norm()
    if isinstance(x, complex):
        return x.real * x.real + x.imag * x.imag
    return x * x


def is_zero(x, tol: float = 0.0) -> bool:
    if variant_of(x) == FLOAT:
        return abs(x) <= tol
    return x == 0


def dot(u: Sequence, v: Sequence):
    """Inner product ``<u, v>``: linear in ``u``, conjugate-linear in ``v``."""
    if len(u) != len(v):
        raise ValueError("length mismatch in inner product")
    total = 0
    for a, b in zip(u, v):
        total = total + a * conj(b)
    return total


def norm2(u: Sequence):
    """Squared Euclidean norm ``<u, u>`` (exact for exact variants)."""
    total = 0
    for a in u:
        total = total + abs2(a)
    return total


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    return tuple(c * a for a in u)


class Matrix:
    """Immutable dense matrix with entries of one scalar variant."""

    __slots__ = ("rows", "nrows", "ncols", "variant")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None, variant: str | None = None):
        data = [list(r) for r in rows]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix rows")
        if variant is None:
            variant = RATIONAL
            seen = None
            for r in data:
                for x in r:
                    v = variant_of(x)
                    seen = v if seen is None else join_variants(seen, v)
            if seen is not None:
                variant = seen
        rows_t = tuple(tuple(to_variant(x, variant) for x in r) for r in data)
        object.__setattr__(self, "rows", rows_t)
        object.__setattr__(self, "nrows", len(rows_t))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "variant", variant)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None, variant: str | None = None):
        columns = list(columns)
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        if any(len(c) != nrows for c in columns):
            raise ValueError("ragged columns")
        rows = [[c[i] for c in columns] for i in range(nrows)]
        return cls(rows, ncols=len(columns), variant=variant)

    @classmethod
    def identity(cls, n: int, variant: str = RATIONAL):
        one = to_variant(Fraction(1), variant) if variant != FLOAT else 1.0
        zero = to_variant(Fraction(0), variant) if variant != FLOAT else 0.0
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], ncols=n, variant=variant)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, variant: str = RATIONAL):
        zero = to_variant(Fraction(0), variant) if variant != FLOAT else 0.0
        return cls([[zero] * ncols for _ in range(nrows)], ncols=ncols, variant=variant)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_exact(self) -> bool:
        return self.variant != FLOAT

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix([list(c) for c in self.columns()], ncols=self.nrows, variant=self.variant)

    @property
    def H(self) -> "Matrix":
        """Conjugate transpose."""
        return Matrix([[conj(x) for x in c] for c in self.columns()], ncols=self.nrows, variant=self.variant)

    def _check(self, other: "Matrix") -> str:
        return join_variants(self.variant, other.variant)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            variant = self._check(other)
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    s = 0
                    for a, b in zip(r, c):
                        s = s + a * b
                    row.append(s)
                out.append(row)
            return Matrix(out, ncols=other.ncols, variant=variant)
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch in matrix-vector product")
        out = []
        for r in self.rows:
            s = 0
            for a, b in zip(r, vec):
                s = s + a * b
            out.append(s)
        return tuple(out)

    def __add__(self, other: "Matrix"):
        variant = self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      ncols=self.ncols, variant=variant)

    def __sub__(self, other: "Matrix"):
        variant = self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in subtraction")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      ncols=self.ncols, variant=variant)

    def scale(self, c) -> "Matrix":
        variant = join_variants(self.variant, variant_of(c))
        return Matrix([[c * a for a in r] for r in self.rows], ncols=self.ncols, variant=variant)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(
            self.rows[i][j] == (1 if i == j else 0) for i in range(self.nrows) for j in range(self.ncols)
        )

    def to_numpy(self) -> np.ndarray:
        complex_valued = self.variant == GAUSSIAN or any(isinstance(x, complex) for r in self.rows for x in r)
        dtype = complex if complex_valued else float
        return np.array([[complex(x) if complex_valued else float(x) for x in r] for r in self.rows],
                        dtype=dtype).reshape(self.nrows, self.ncols)

    def tolist(self):
        return [[format_scalar(x) for x in r] for r in self.rows]

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"


def as_matrix(M) -> Matrix:
    return M if isinstance(M, Matrix) else Matrix(M)


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative tolerance for float-mode decisions.

    A pivot ``p`` counts as zero when ``|p| <= tau * max|M_ij|``.
    """

    tau: float = 1e-9

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tolerance must be positive")

    def threshold(self, M: np.ndarray) -> float:
        scale = float(np.max(np.abs(M))) if M.size else 0.0
        return self.tau * scale


DEFAULT_POLICY = TolerancePolicy()


def _require_exact(M: Matrix):
    if not M.is_exact:
        raise MixedVariantError("exact routine called on a float matrix")


def _integer_rows(M: Matrix):
    """Scale each row to integers (rational variant) without changing rank or det up to the scales."""
    rows, scales = [], []
    for r in M.rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        rows.append([int(x * lcm) for x in r])
        scales.append(lcm)
    return rows, scales


def _bareiss_echelon(rows, exact_div, stop_on_singular=False):
    """Fraction-free elimination in place; returns (pivot count, sign, last pivot).

    ``rows`` holds integer (or Gaussian rational) entries.  After the sweep the
    leading ``k x k`` block is upper triangular with the last pivot equal to the
    determinant of the leading minor (up to ``sign``).
    """
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    prev = 1
    r = 0
    sign = 1
    for c in range(nc):
        if r >= nr:
            break
        piv = None
        for i in range(r, nr):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            if stop_on_singular:
                return r, sign, 0
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, nr):
            a = rows[i][c]
            ri = rows[i]
            rr = rows[r]
            for j in range(c + 1, nc):
                ri[j] = exact_div(p * ri[j] - a * rr[j], prev)
            ri[c] = 0
        prev = p
        r += 1
    return r, sign, prev


def det_exact(M) -> Fraction | GaussianRational:
    """Exact determinant of a square exact matrix via Bareiss elimination."""
    M = as_matrix(M)
    _require_exact(M)
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return Fraction(1) if M.variant == RATIONAL else GaussianRational(1)
    if M.variant == RATIONAL:
        rows, scales = _integer_rows(M)
        k, sign, last = _bareiss_echelon(rows, lambda a, b: a // b, stop_on_singular=True)
        if k < n:
            return Fraction(0)
        return Fraction(sign * last, math.prod(scales))
    rows = [list(r) for r in M.rows]
    k, sign, last = _bareiss_echelon(rows, lambda a, b: a / b, stop_on_singular=True)
    if k < n:
        return GaussianRational(0)
    return last * sign


def _float_rank(A: np.ndarray, policy: TolerancePolicy) -> int:
    A = np.array(A, dtype=complex if np.iscomplexobj(A) else float)
    if A.size == 0:
        return 0
    thr = policy.threshold(A)
    nr, nc = A.shape
    rank = 0
    for _ in range(min(nr, nc)):
        sub = np.abs(A[rank:, rank:])
        if sub.size == 0:
            break
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= thr:
            break
        i += rank
        j += rank
        A[[rank, i]] = A[[i, rank]]
        A[:, [rank, j]] = A[:, [j, rank]]
        piv = A[rank, rank]
        A[rank + 1:] -= np.outer(A[rank + 1:, rank] / piv, A[rank])
        rank += 1
    return rank


def rank(M, policy: TolerancePolicy | None = None) -> int:
    """Exact rank (fraction-free elimination) or thresholded float rank."""
    M = as_matrix(M)
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if not M.is_exact:
        return _float_rank(M.to_numpy(), policy or DEFAULT_POLICY)
    if M.variant == RATIONAL:
        rows, _ = _integer_rows(M)
        k, _, _ = _bareiss_echelon(rows, lambda a, b: a // b)
        return k
    rows = [list(r) for r in M.rows]
    k, _, _ = _bareiss_echelon(rows, lambda a, b: a / b)
    return k


def rref(M) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over the exact field; returns (rows, pivot columns)."""
    M = as_matrix(M)
    _require_exact(M)
    A = [list(r) for r in M.rows]
    nr, nc = M.nrows, M.ncols
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        piv = next((i for i in range(r, nr) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(nr):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace_exact(M) -> list[tuple]:
    """Basis of the right null space, each vector scaled so its first nonzero entry is 1."""
    M = as_matrix(M)
    _require_exact(M)
    nc = M.ncols
    one = Fraction(1) if M.variant == RATIONAL else GaussianRational(1)
    zero = one * 0
    if M.nrows == 0:
        return [tuple(one if i == j else zero for i in range(nc)) for j in range(nc)]
    A, pivots = rref(M)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * nc
        v[f] = one
        for row, pc in enumerate(pivots):
            v[pc] = -A[row][f]
        lead = next(x for x in v if x != 0)
        basis.append(tuple(x / lead for x in v))
    return basis


def solve_exact(M, b: Sequence) -> tuple:
    """Solve ``M x = b`` exactly for square invertible ``M``."""
    M = as_matrix(M)
    _require_exact(M)
    if M.nrows != M.ncols:
        raise ValueError("solve_exact needs a square matrix")
    if len(b) != M.nrows:
        raise ValueError("right-hand side length mismatch")
    variant = M.variant
    for x in b:
        variant = join_variants(variant, variant_of(x))
    aug = Matrix([list(r) + [bi] for r, bi in zip(M.rows, b)], ncols=M.ncols + 1, variant=variant)
    A, pivots = rref(aug)
    n = M.nrows
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        null = nullspace_exact(M)
        raise SingularMatrixError("matrix is singular", witness=null[0] if null else None)
    return tuple(A[i][n] for i in range(n))


def inverse_exact(M) -> Matrix:
    M = as_matrix(M)
    n = M.nrows
    eye = Matrix.identity(n, M.variant)
    cols = [solve_exact(M, eye.col(j)) for j in range(n)]
    return Matrix.from_columns(cols, nrows=n, variant=M.variant)
