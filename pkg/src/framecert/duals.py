"""Dual frame parameterization, failure varieties and density experiments.

Every dual of a frame is ``S^{-1} phi_i + u_i`` with ``sum_i phi_i u_i^* = 0``.
After reducing to a frame whose first ``n`` vectors are the standard basis,
the redundant perturbations ``u_{n+1}, ..., u_m`` are free and the rest follow
from ``u_k = -sum_j conj((phi_j)_k) u_j``.  The free vectors, concatenated,
form the parameter vector ``U``.  The dual depends affinely on ``U``, which
:class:`DualFamily` stores as a base point plus one direction per coordinate.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from . import kernel as K
from .combinatorics import colex_subsets, is_full_spark, one_based
from .frames import (DualFrame, FrameSpec, OperatorT, canonical_dual, make_dual,
                     require_frame, standard_form, validate_frame)
from .kernel import Matrix

DYADIC_BITS = 20


class ShapeError(ValueError):
    """The frame does not satisfy the hypothesis an operation needs."""


@dataclass(frozen=True)
class DualParam:
    """Free parameters of a dual.

    ``U`` is the concatenation of the free perturbations ``u_{n+1}, ..., u_m`` of
    the standard-form frame.  ``V`` is the general ``n x (m-n)`` block acting on
    a null-space basis of the synthesis matrix.
    """

    U: tuple | None = None
    V: Matrix | None = None

    def to_json(self):
        out = {}
        if self.U is not None:
            out["U"] = [K.format_scalar(t) for t in self.U]
        if self.V is not None:
            out["V"] = self.V.tolist()
        return out


def param_names(n: int, e: int) -> list[str]:
    letters = "xyzw" if n <= 4 else None
    names = []
    for j in range(1, e + 1):
        for k in range(n):
            base = letters[k] if letters else f"t{k + 1}_"
            names.append(base if e == 1 and letters else f"{base}{j}")
    return names


class Poly:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: dict, nvars: int):
        self.terms = {k: Fraction(v) for k, v in terms.items() if v != 0}
        self.nvars = nvars

    @classmethod
    def affine(cls, const, coeffs):
        nv = len(coeffs)
        terms = {(0,) * nv: const}
        for k, c in enumerate(coeffs):
            e = [0] * nv
            e[k] = 1
            terms[tuple(e)] = c
        return cls(terms, nv)

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return Poly(t, self.nvars)

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly({k: v * other for k, v in self.terms.items()}, self.nvars)
        t: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                t[k] = t.get(k, 0) + v1 * v2
        return Poly(t, self.nvars)

    __rmul__ = __mul__

    def __call__(self, point):
        total = Fraction(0)
        for k, v in self.terms.items():
            term = v
            for x, e in zip(point, k):
                if e:
                    term *= x ** e
            total += term
        return total

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def normalized(self) -> "Poly":
        """Scaled so the leading coefficient (in sorted monomial order) is 1."""
        if not self.terms:
            return self
        lead = self.terms[max(self.terms, key=lambda k: (sum(k), k))]
        return self * (1 / lead)

    def proportional_to(self, other: "Poly") -> bool:
        return self.normalized() == other.normalized()

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda k: (-sum(k), [-e for e in k])):
            v = self.terms[k]
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e)
            coef = K.format_scalar(v)
            if mono:
                coef = "" if v == 1 else "-" if v == -1 else f"{coef}*"
                parts.append(f"{coef}{mono}")
            else:
                parts.append(coef)
        return " + ".join(parts).replace("+ -", "- ")


def _det_poly(cols: list[list[Poly]]) -> Poly:
    n = len(cols)
    nv = cols[0][0].nvars
    total = Poly({}, nv)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Poly({(0,) * nv: -1 if inv % 2 else 1}, nv)
        for c in range(n):
            term = term * cols[c][perm[c]]
        total = total + term
    return total


def det_small(cols: Sequence[Sequence]):
    n = len(cols)
    if n == 1:
        return cols[0][0]
    if n == 2:
        return cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1]
    if n == 3:
        a, b, c = cols
        return (a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1])
                + c[0] * (a[1] * b[2] - a[2] * b[1]))
    return K.det_exact(Matrix.from_columns(cols, nrows=n))


class DualFamily:
    """All duals of a frame, as an affine map ``U -> dual``.

    Non-standard-form frames are reduced with :func:`standard_form`; duals of
    the original frame are ``T^*`` applied to duals of the reduced frame and
    then put back in the original order.
    """

    def __init__(self, phi: FrameSpec):
        require_frame(phi, "dual parameterization")
        if not phi.exact:
            raise ShapeError("dual parameterization needs exact mode")
        self.phi = phi
        n, m = phi.dim, phi.m
        self.n, self.m, self.e = n, m, m - n
        self.p = n * self.e
        eye = Matrix.identity(n, phi.variant).columns()
        if list(phi.vectors[:n]) == eye:
            self.T: OperatorT | None = None
            self.perm = tuple(range(m))
            self.std = phi
        else:
            self.T, self.std = standard_form(phi)
            self.perm = self.T.permutation
        self.canonical_std = canonical_dual(self.std).vectors
        self.coeffs = [[K.conj(self.std.vectors[n + j][k]) for j in range(self.e)] for k in range(n)]
        self.zero_coefficients = [(k + 1, n + j + 1) for k in range(n) for j in range(self.e)
                                  if self.std.vectors[n + j][k] == 0]
        zero = K.to_variant(0, phi.variant)
        self.base = self._evaluate([zero] * self.p, affine=False)
        self.directions = []
        for k in range(self.p):
            U = [zero] * self.p
            U[k] = K.to_variant(1, phi.variant)
            g = self._evaluate(U, affine=False)
            self.directions.append([K.vec_sub(gi, bi) for gi, bi in zip(g, self.base)])
        make_dual(phi, self.base, provenance="canonical")
        for d in self.directions:
            if not (phi.synthesis @ Matrix.from_columns(d, nrows=n, variant=phi.variant).H).is_zero():
                raise AssertionError("perturbation direction is not annihilated by the synthesis matrix")
        self.names = param_names(n, self.e)

    def _evaluate(self, U, affine=True):
        if affine:
            out = [list(b) for b in self.base]
            for c, d in zip(U, self.directions):
                if c != 0:
                    for i in range(self.m):
                        out[i] = [a + c * b for a, b in zip(out[i], d[i])]
            return [tuple(v) for v in out]
        n, e = self.n, self.e
        free = [tuple(U[j * n:(j + 1) * n]) for j in range(e)]
        u = []
        for k in range(n):
            acc = tuple(K.to_variant(0, self.phi.variant) for _ in range(n))
            for j in range(e):
                acc = K.vec_sub(acc, K.vec_scale(self.coeffs[k][j], free[j]))
            u.append(acc)
        u.extend(free)
        g_std = [K.vec_add(c, w) for c, w in zip(self.canonical_std, u)]
        if self.T is not None:
            TH = self.T.matrix.H
            g_std = [TH @ g for g in g_std]
        out = [None] * self.m
        for pos, orig in enumerate(self.perm):
            out[orig] = g_std[pos]
        return out

    def check_params(self, U) -> tuple:
        if len(U) != self.p:
            raise ShapeError(f"expected {self.p} parameters, got {len(U)}")
        return tuple(K.to_variant(K.parse_scalar(t) if isinstance(t, str) else t, self.phi.variant) for t in U)

    def vectors(self, U) -> list[tuple]:
        return self._evaluate(self.check_params(U))

    def dual(self, U) -> DualFrame:
        U = self.check_params(U)
        return make_dual(self.phi, self._evaluate(U), provenance="parameterized", params=DualParam(U=U))

    def params_of(self, G) -> tuple:
        """``xi(G)``: read the free perturbations off a dual."""
        vecs = G.vectors if isinstance(G, DualFrame) else G
        g_std = [vecs[orig] for orig in self.perm]
        if self.T is not None:
            inv = K.inverse_exact(self.T.matrix.H)
            g_std = [inv @ g for g in g_std]
        U = []
        for j in range(self.e):
            U.extend(K.vec_sub(g_std[self.n + j], self.canonical_std[self.n + j]))
        return tuple(U)

    def entry_polys(self) -> list[list[Poly]]:
        polys = []
        for i in range(self.m):
            polys.append([Poly.affine(self.base[i][k], [d[i][k] for d in self.directions]) for k in range(self.n)])
        return polys

    def subset_dets(self, U) -> list[tuple[tuple, object]]:
        g = self._evaluate(self.check_params(U))
        return [(s, det_small([g[i] for i in s])) for s in colex_subsets(self.m, self.n)]


def dual_family(phi: FrameSpec) -> DualFamily:
    return DualFamily(phi)


def null_basis(phi: FrameSpec) -> list[tuple]:
    return K.nullspace_exact(phi.synthesis)


def dual_from_params(phi: FrameSpec, P: DualParam) -> DualFrame:
    """Dual from either the free-vector form ``U`` or the general block ``V``."""
    if P.U is not None:
        return DualFamily(phi).dual(P.U)
    if P.V is None:
        return canonical_dual(phi)
    V = K.as_matrix(P.V)
    N = null_basis(phi)
    if V.nrows != phi.dim or V.ncols != len(N):
        raise ShapeError(f"V must be {phi.dim} x {len(N)}")
    Nm = Matrix.from_columns(N, nrows=phi.m, variant=phi.variant) if N else Matrix.zeros(phi.m, 0, phi.variant)
    W = V @ Nm.H if N else Matrix.zeros(phi.dim, phi.m, phi.variant)
    base = canonical_dual(phi).vectors
    vecs = [K.vec_add(b, W.col(i)) for i, b in enumerate(base)]
    return make_dual(phi, vecs, provenance="parameterized", params=P)


def _require_2n1(phi: FrameSpec):
    if phi.m != 2 * phi.dim - 1:
        raise ShapeError(f"m = 2n-1 required for the xi parameterization (m={phi.m}, n={phi.dim})")


def params_to_dual_2n1(phi: FrameSpec, U) -> DualFrame:
    _require_2n1(phi)
    return DualFamily(phi).dual(U)


def dual_to_params_2n1(phi: FrameSpec, G) -> tuple:
    _require_2n1(phi)
    return DualFamily(phi).params_of(G)


def evaluate_P(phi_or_family, U):
    """Product of all ``n x n`` minors of the dual at ``U``."""
    fam = phi_or_family if isinstance(phi_or_family, DualFamily) else DualFamily(phi_or_family)
    if fam.m != 2 * fam.n - 1:
        raise ShapeError(f"m = 2n-1 required for P (m={fam.m}, n={fam.n})")
    total = Fraction(1) if fam.phi.variant == K.RATIONAL else K.to_variant(1, fam.phi.variant)
    for _, d in fam.subset_dets(U):
        total = total * d
        if total == 0:
            return total
    return total


@dataclass
class VarietyFactor:
    subset: tuple
    kind: str
    coeffs: tuple = ()
    constant: object = None
    poly: Poly | None = None

    def to_json(self, names=None):
        out = {"subset": list(self.subset), "kind": self.kind}
        if self.kind == "affine":
            out["coeffs"] = [K.format_scalar(c) for c in self.coeffs]
            out["constant"] = K.format_scalar(self.constant)
        if self.poly is not None and names is not None:
            out["polynomial"] = self.poly.format(names)
        return out

    def contains(self, U) -> bool:
        if self.kind == "affine":
            return sum((c * u for c, u in zip(self.coeffs, U)), Fraction(0)) + self.constant == 0
        return self.poly(U) == 0 if self.poly is not None else False


@dataclass
class FailureVariety:
    """Zero set of the minors of the parameterized dual, one factor per ``n``-subset (1-based)."""

    names: list
    factors: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def hyperplanes(self) -> list[VarietyFactor]:
        return [f for f in self.factors if f.kind == "affine"]

    def distinct_hyperplanes(self) -> list[VarietyFactor]:
        seen, out = [], []
        for f in self.hyperplanes:
            key = _normalize_affine(f.coeffs, f.constant)
            if key not in seen:
                seen.append(key)
                out.append(f)
        return out

    def contains(self, U) -> bool:
        return any(f.contains(U) for f in self.factors)

    def to_json(self):
        return {"parameters": self.names, "factors": [f.to_json(self.names) for f in self.factors],
                "notes": self.notes}

    def to_csv(self) -> str:
        head = ["subset_indices"] + [f"coeff_{n}" for n in self.names] + ["constant"]
        lines = [",".join(head)]
        for f in self.hyperplanes:
            lines.append(",".join([" ".join(map(str, f.subset))] + [K.format_scalar(c) for c in f.coeffs]
                                  + [K.format_scalar(f.constant)]))
        return "\n".join(lines) + "\n"


def _normalize_affine(coeffs, constant):
    """Scale an affine form so its first nonzero entry is 1 (the zero set is unchanged)."""
    vec = list(coeffs) + [constant]
    lead = next((c for c in vec if c != 0), None)
    if lead is None:
        return tuple(vec)
    return tuple(c / lead for c in vec)


def same_hyperplane(a_coeffs, a_const, b_coeffs, b_const) -> bool:
    return _normalize_affine(a_coeffs, a_const) == _normalize_affine(b_coeffs, b_const)


def failure_variety(phi: FrameSpec, seed: int = 0, max_symbolic_terms: int = 5000) -> FailureVariety:
    """Factor-by-factor description of where the dual loses full spark.

    Affine factors are recovered from ``p + 1`` exact evaluations and confirmed
    at two further random rational points.  Other factors are expanded
    symbolically from the affine entries when small enough, otherwise kept as
    evaluator-only.
    """
    fam = DualFamily(phi)
    rng = random.Random(seed)
    var = FailureVariety(fam.names)
    if fam.zero_coefficients:
        var.notes.append("some redundant-vector coefficients vanish; outside the nonzero-coefficient hypothesis")
    zero = [Fraction(0)] * fam.p
    polys = None
    for s in colex_subsets(fam.m, fam.n):
        f = lambda U: det_small([fam._evaluate(U)[i] for i in s])  # noqa: E731
        c0 = f(zero)
        coeffs = []
        for k in range(fam.p):
            U = list(zero)
            U[k] = Fraction(1)
            coeffs.append(f(U) - c0)
        affine = True
        for _ in range(2):
            U = [Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for _ in range(fam.p)]
            if f(U) != c0 + sum((c * u for c, u in zip(coeffs, U)), Fraction(0)):
                affine = False
                break
        sub = tuple(one_based(s))
        if affine:
            if all(c == 0 for c in coeffs):
                kind = "nonzero-constant" if c0 != 0 else "identically-zero"
                var.factors.append(VarietyFactor(sub, kind, tuple(coeffs), c0))
            else:
                var.factors.append(VarietyFactor(sub, "affine", tuple(coeffs), c0,
                                                 Poly.affine(c0, coeffs)))
            continue
        if polys is None:
            polys = fam.entry_polys()
        if fam.p ** fam.n > max_symbolic_terms * 10:
            var.factors.append(VarietyFactor(sub, "evaluator"))
            continue
        var.factors.append(VarietyFactor(sub, "polynomial", poly=_det_poly([polys[i] for i in s])))
    return var


def factor_polynomial(phi: FrameSpec, subset_1based: Sequence[int]) -> Poly:
    """Symbolic expansion of one minor of the parameterized dual."""
    fam = DualFamily(phi)
    polys = fam.entry_polys()
    return _det_poly([polys[i - 1] for i in subset_1based])


def excess1_frame(alphas: Sequence) -> FrameSpec:
    alphas = [Fraction(a) for a in alphas]
    if any(a == 0 for a in alphas):
        raise ValueError("all alpha_i must be nonzero")
    n = len(alphas)
    vecs = Matrix.identity(n).columns() + [tuple(alphas)]
    return validate_frame(vecs, dim=n)


def excess1_duals(alphas: Sequence, x: Sequence) -> DualFrame:
    """The dual of ``{delta_i} + {sum alpha_i delta_i}`` with ``u_{n+1} = x`` and ``u_i = -alpha_i x``."""
    phi = excess1_frame(alphas)
    return DualFamily(phi).dual([Fraction(t) for t in x])


def excess1_closed_form(alphas: Sequence, x: Sequence) -> list[tuple]:
    """The closed-form coordinates ``g_i^k`` of the excess-one dual family."""
    a = [Fraction(t) for t in alphas]
    x = [Fraction(t) for t in x]
    n = len(a)
    alpha = 1 / (1 + sum(t * t for t in a))
    out = []
    for i in range(n):
        g = []
        for k in range(n):
            if k == i:
                g.append(alpha * (1 + sum(a[j] ** 2 for j in range(n) if j != i)) - a[i] * x[k])
            else:
                g.append(-alpha * a[i] * a[k] - a[i] * x[k])
        out.append(tuple(g))
    out.append(tuple(alpha * a[k] + x[k] for k in range(n)))
    return out


# -- distances -------------------------------------------------------------

def _sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """``lo <= sqrt(q) <= hi`` with ``hi - lo <= 2^-bits`` (equal when exact)."""
    scale = 1 << bits
    num = q.numerator * scale * scale
    r = isqrt(num // q.denominator)
    lo = Fraction(r, scale)
    if lo * lo == q:
        return lo, lo
    return lo, Fraction(r + 1, scale)


def sqrt_sum_enclosure(qs: Sequence[Fraction], bits: int) -> tuple[Fraction, Fraction]:
    lo = hi = Fraction(0)
    for q in qs:
        a, b = _sqrt_bounds(Fraction(q), bits)
        lo += a
        hi += b
    return lo, hi


def squared_gaps(G, H) -> list[Fraction]:
    gv = G.vectors if hasattr(G, "vectors") else G
    hv = H.vectors if hasattr(H, "vectors") else H
    out = []
    for g, h in zip(gv, hv):
        q = K.norm2(K.vec_sub(g, h))
        out.append(q.re if isinstance(q, K.GaussianRational) else Fraction(q))
    return out


@dataclass(frozen=True)
class DistanceCheck:
    less: bool
    lower: Fraction
    upper: Fraction
    method: str

    def to_json(self):
        return {"less": self.less, "lower": K.format_scalar(self.lower), "upper": K.format_scalar(self.upper),
                "method": self.method}


def distance_less_than(G, H, eps, max_bits: int = 512) -> DistanceCheck:
    """Decide ``sum_i ||g_i - h_i|| < eps`` exactly with square-root enclosures."""
    eps = Fraction(eps)
    qs = squared_gaps(G, H)
    m = len(qs)
    total = sum(qs, Fraction(0))
    if m * total < eps * eps:
        return DistanceCheck(True, Fraction(0), eps, "cauchy-schwarz")
    bits = 16
    while bits <= max_bits:
        lo, hi = sqrt_sum_enclosure(qs, bits)
        if hi < eps:
            return DistanceCheck(True, lo, hi, f"enclosure-{bits}")
        if lo >= eps:
            return DistanceCheck(False, lo, hi, f"enclosure-{bits}")
        if lo == hi:
            return DistanceCheck(lo < eps, lo, hi, "exact")
        bits *= 2
    raise ArithmeticError("distance comparison undecided at the precision cap")


def lipschitz_holds(fam: DualFamily, G, H, max_bits: int = 512) -> bool:
    """``||xi(G) - xi(H)|| <= d(G, H)``, decided with enclosures."""
    a, b = fam.params_of(G), fam.params_of(H)
    left = sum((K.abs2(x - y) for x, y in zip(a, b)), Fraction(0))
    left = left.re if isinstance(left, K.GaussianRational) else left
    qs = squared_gaps(G, H)
    bits = 16
    while bits <= max_bits:
        l_lo, l_hi = _sqrt_bounds(left, bits)
        r_lo, r_hi = sqrt_sum_enclosure(qs, bits)
        if l_hi <= r_lo:
            return True
        if l_lo > r_hi:
            return False
        bits *= 2
    raise ArithmeticError("Lipschitz comparison undecided at the precision cap")


# -- sampling experiments ----------------------------------------------------

def dyadic_in(rng: random.Random, lo: Fraction, hi: Fraction, bits: int = DYADIC_BITS) -> Fraction:
    k = rng.randint(0, 1 << bits)
    return lo + (hi - lo) * Fraction(k, 1 << bits)


def _parse_box(box, p):
    if box is None:
        box = (-1, 1)
    if isinstance(box[0], (int, float, str, Fraction)):
        box = [box] * p
    if len(box) != p:
        raise ShapeError(f"box needs {p} ranges")
    return [(Fraction(lo), Fraction(hi)) for lo, hi in box]


def sample_pr_duals(phi: FrameSpec, box=None, count: int = 1000, seed: int = 0,
                    bits: int = DYADIC_BITS, cross_check: bool = False) -> dict:
    """Monte Carlo estimate of the phase-retrieval fraction of duals over a parameter box."""
    _require_2n1(phi)
    fam = DualFamily(phi)
    ranges = _parse_box(box, fam.p)
    rng = random.Random(seed)
    failures = []
    min_abs = None
    pr = 0
    for _ in range(count):
        U = tuple(dyadic_in(rng, lo, hi, bits) for lo, hi in ranges)
        P = evaluate_P(fam, U)
        if cross_check:
            fs = is_full_spark(fam.dual(U).as_frame())
            if fs.yes != (P != 0):
                raise AssertionError("P and the full-spark test disagree")
        if P == 0:
            failures.append([K.format_scalar(t) for t in U])
        else:
            pr += 1
            a = abs(float(P))
            min_abs = a if min_abs is None else min(min_abs, a)
    return {"frame": phi.to_json(), "samples": count, "pr_count": pr,
            "pr_fraction": (pr / count) if count else None, "failures": sorted(failures),
            "min_abs_P": min_abs, "seed": seed, "box": [[K.format_scalar(lo), K.format_scalar(hi)] for lo, hi in ranges],
            "dyadic_bits": bits, "transform": _transform_record(fam)}


def _transform_record(fam: DualFamily):
    if fam.T is None:
        return None
    return {"T": fam.T.matrix.tolist(), "permutation": [i + 1 for i in fam.perm]}


@dataclass(frozen=True)
class NearestResult:
    dual: DualFrame
    params: tuple
    start: tuple
    step: Fraction
    direction: tuple
    distance: DistanceCheck | None

    def to_json(self):
        return {"params": [K.format_scalar(t) for t in self.params],
                "start": [K.format_scalar(t) for t in self.start],
                "step": K.format_scalar(self.step), "direction": [K.format_scalar(t) for t in self.direction],
                "distance": self.distance.to_json() if self.distance else {"less": True, "exact": "0"}}


def nearest_pr_dual(phi: FrameSpec, G, eps, seed: int = 0, max_bits: int = 64,
                    random_directions: int = 64) -> NearestResult:
    """A phase-retrieval dual within ``d < eps`` of a failing dual ``G``.

    Steps ``2^-k`` are tried for increasing ``k`` along ``+e_1, -e_1, +e_2, ...``.
    If no axis works up to ``max_bits``, seeded random dyadic directions follow.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    _require_2n1(phi)
    fam = DualFamily(phi)
    if not isinstance(G, DualFrame):
        G = fam.dual(G)
    U0 = fam.params_of(G)
    zero = (Fraction(0),) * fam.p
    if evaluate_P(fam, U0) != 0:
        return NearestResult(G, U0, U0, Fraction(0), zero, None)
    axes = []
    for k in range(fam.p):
        for sgn in (1, -1):
            d = [Fraction(0)] * fam.p
            d[k] = Fraction(sgn)
            axes.append(tuple(d))

    def attempt(direction, step):
        U = tuple(u + step * d for u, d in zip(U0, direction))
        if evaluate_P(fam, U) == 0:
            return None
        H = fam.dual(U)
        chk = distance_less_than(G, H, eps)
        return NearestResult(H, U, U0, step, direction, chk) if chk.less else None

    for b in range(1, max_bits + 1):
        for d in axes:
            r = attempt(d, Fraction(1, 1 << b))
            if r is not None:
                return r
    rng = random.Random(seed)
    for _ in range(random_directions):
        d = tuple(dyadic_in(rng, Fraction(-1), Fraction(1)) for _ in range(fam.p))
        for b in range(1, max_bits + 1):
            r = attempt(d, Fraction(1, 1 << b))
            if r is not None:
                return r
    raise RuntimeError("no phase-retrieval dual found within the search limits")


def openness_witness(phi: FrameSpec, G, delta, count: int = 500, seed: int = 0,
                     bits: int = DYADIC_BITS) -> dict:
    """Empirical openness check around a phase-retrieval dual (not a proof).

    Points are drawn from the Euclidean ``delta``-ball in parameter space.
    Because ``||xi(G) - xi(H)|| <= d(G, H)``, that ball contains every dual within
    ``d < delta`` of ``G``.  When the failure variety is affine, the exact
    foot of the perpendicular onto each hyperplane inside the ball is also
    tested, so a ball crossing the variety reports a failure.
    """
    _require_2n1(phi)
    fam = DualFamily(phi)
    if not isinstance(G, DualFrame):
        G = fam.dual(G)
    U0 = fam.params_of(G)
    if evaluate_P(fam, U0) == 0:
        raise ValueError("the centre dual does not do phase retrieval")
    delta = Fraction(delta)
    d2 = delta * delta
    rng = random.Random(seed)
    failures = []
    drawn = 0
    attempts = 0
    while drawn < count:
        attempts += 1
        off = [dyadic_in(rng, -delta, delta, bits) for _ in range(fam.p)]
        if sum((t * t for t in off), Fraction(0)) >= d2:
            continue
        drawn += 1
        U = tuple(u + t for u, t in zip(U0, off))
        if evaluate_P(fam, U) == 0:
            failures.append({"params": [K.format_scalar(t) for t in U], "source": "sample"})
    variety_points = []
    if count:
        var = failure_variety(phi)
        for f in var.distinct_hyperplanes():
            c, c0 = f.coeffs, f.constant
            val = sum((a * u for a, u in zip(c, U0)), Fraction(0)) + c0
            nn = sum((a * a for a in c), Fraction(0))
            if val * val / nn < d2:
                foot = tuple(u - val / nn * a for u, a in zip(U0, c))
                if evaluate_P(fam, foot) == 0:
                    rec = {"params": [K.format_scalar(t) for t in foot], "source": "variety",
                           "subset": list(f.subset)}
                    failures.append(rec)
                    variety_points.append(rec)
    return {"centre": [K.format_scalar(t) for t in U0], "delta": K.format_scalar(delta), "samples": drawn,
            "attempts": attempts, "failures": failures, "all_pr": not failures, "seed": seed,
            "label": "empirical witness, not a proof"}
