"""Phase, norm and weak phase retrieval certificates.

Real equal-magnitude pairs factor through a split of the measurement
indices: ``|<x, phi_i>| = |<y, phi_i>|`` iff ``<x - y, phi_i> = 0`` or
``<x + y, phi_i> = 0``.  Writing ``u = x - y`` and ``v = x + y`` the pair is
``x = (u + v)/2``, ``y = (v - u)/2`` with ``u`` orthogonal to the vectors on
one side of the split and ``v`` orthogonal to the other side.  Every
certificate and counterexample in this module is built on that
correspondence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernel as K
from .combinatorics import Outcome, Verdict, complement_property, iter_splits, one_based
from .frames import COMPLEX, REAL, FrameSpec, make_operator, require_frame, validate_frame
from .kernel import GaussianRational, Matrix

PHASE = "phase"
NORM = "norm"
WEAK = "weak-phase"

DEFAULT_WEAK_BUDGET = 256
DYADIC_BITS = 20


@dataclass(frozen=True)
class PhasePredicateResult:
    """Outcome of the weakly-same-phase test.

    ``alpha`` is ``+1``/``-1`` for real vectors.  For complex vectors it is the
    unnormalised Gaussian rational ``x_j * conj(y_j)`` at the first common
    index, whose phase is the common phase factor.
    """

    same: bool
    alpha: object
    common_support: tuple


def weakly_same_phase(x: Sequence, y: Sequence) -> PhasePredicateResult:
    """Do ``x`` and ``y`` have the same phase, up to one global factor, on their common support?"""
    if len(x) != len(y):
        raise ValueError("length mismatch")
    common = tuple(j for j in range(len(x)) if x[j] != 0 and y[j] != 0)
    if not common:
        return PhasePredicateResult(True, Fraction(1), common)
    complex_case = any(isinstance(t, (GaussianRational, complex)) for t in list(x) + list(y))
    if not complex_case:
        signs = [1 if x[j] * y[j] > 0 else -1 for j in common]
        same = all(s == signs[0] for s in signs)
        return PhasePredicateResult(same, Fraction(signs[0]) if same else None, common)
    z = [x[j] * K.conj(y[j]) for j in common]
    ref = z[0]
    for zk in z[1:]:
        w = ref * K.conj(zk)
        im = w.im if isinstance(w, GaussianRational) else getattr(w, "imag", 0)
        re = w.re if isinstance(w, GaussianRational) else getattr(w, "real", w)
        if im != 0 or re <= 0:
            return PhasePredicateResult(False, None, common)
    return PhasePredicateResult(True, ref, common)


def equal_magnitudes(phi: FrameSpec, x: Sequence, y: Sequence) -> bool:
    """Exact check of ``|<x, phi_i>|^2 = |<y, phi_i>|^2`` for every ``i``."""
    return all(K.abs2(a) == K.abs2(b) for a, b in zip(phi.coefficients(x), phi.coefficients(y)))


def phase_equivalent(x: Sequence, y: Sequence) -> bool:
    """Is ``y = theta * x`` for some unimodular ``theta``?"""
    nx, ny = K.norm2(x), K.norm2(y)
    if nx != ny:
        return False
    if nx == 0:
        return True
    return K.abs2(K.dot(x, y)) == nx * ny


def pair_kinds(x: Sequence, y: Sequence) -> tuple[str, ...]:
    kinds = []
    if not phase_equivalent(x, y):
        kinds.append(PHASE)
    if K.norm2(x) != K.norm2(y):
        kinds.append(NORM)
    if not weakly_same_phase(x, y).same:
        kinds.append(WEAK)
    return tuple(kinds)


@dataclass(frozen=True)
class CounterexamplePair:
    """Vectors ``x, y`` with equal measurement magnitudes.

    ``u = x - y`` and ``v = x + y``; ``sigma`` (1-based) lists the indices
    where ``<u, phi_i> = 0``.  ``kinds`` says which retrieval properties the
    pair violates.
    """

    x: tuple
    y: tuple
    sigma: tuple
    u: tuple
    v: tuple
    kinds: tuple
    trivial: bool = False

    @property
    def kind(self) -> str:
        return self.kinds[0] if self.kinds else ""

    def to_json(self) -> dict:
        fmt = lambda v: [K.format_scalar(t) for t in v]  # noqa: E731
        return {"x": fmt(self.x), "y": fmt(self.y), "sigma": list(self.sigma), "u": fmt(self.u),
                "v": fmt(self.v), "kinds": list(self.kinds), "trivial": self.trivial}


def _make_pair(phi: FrameSpec, x, y) -> CounterexamplePair:
    x, y = tuple(x), tuple(y)
    u, v = K.vec_sub(x, y), K.vec_add(x, y)
    sigma = tuple(i + 1 for i, c in enumerate(phi.coefficients(u)) if c == 0)
    trivial = all(t == 0 for t in u) or all(t == 0 for t in v)
    return CounterexamplePair(x, y, sigma, u, v, pair_kinds(x, y), trivial)


def pair_from_sigma(phi: FrameSpec, sigma: Sequence[int], u: Sequence, v: Sequence) -> CounterexamplePair:
    """Equal-magnitude pair from a split ``sigma`` (1-based) and complement vectors ``u``, ``v``.

    ``u`` must be orthogonal to ``phi_i`` for ``i in sigma`` and ``v`` to the rest.
    """
    if phi.field != REAL:
        raise ValueError("pair_from_sigma is defined for real frames")
    s = {i - 1 for i in sigma}
    if any(i < 0 or i >= phi.m for i in s):
        raise ValueError("sigma index out of range")
    u = tuple(K.to_variant(t, phi.variant) for t in u)
    v = tuple(K.to_variant(t, phi.variant) for t in v)
    for i, phi_i in enumerate(phi.vectors):
        if i in s and K.dot(u, phi_i) != 0:
            raise ValueError(f"u is not orthogonal to phi_{i + 1}")
        if i not in s and K.dot(v, phi_i) != 0:
            raise ValueError(f"v is not orthogonal to phi_{i + 1}")
    half = Fraction(1, 2)
    x = K.vec_scale(half, K.vec_add(u, v))
    y = K.vec_scale(half, K.vec_sub(v, u))
    kinds = pair_kinds(x, y)
    trivial = all(t == 0 for t in u) or all(t == 0 for t in v)
    return CounterexamplePair(x, y, tuple(sorted(sigma)), u, v, kinds, trivial)


def verify_pair(phi: FrameSpec, pair: CounterexamplePair, kind: str | None = None) -> bool:
    """Re-check a pair from scratch: equal magnitudes and the claimed violation."""
    if not equal_magnitudes(phi, pair.x, pair.y):
        return False
    if K.vec_sub(pair.x, pair.y) != tuple(pair.u) or K.vec_add(pair.x, pair.y) != tuple(pair.v):
        return False
    kinds = pair_kinds(pair.x, pair.y)
    wanted = [kind] if kind else list(pair.kinds)
    return all(k in kinds for k in wanted)


def _require_real_exact(phi: FrameSpec, what: str):
    if phi.field != REAL or not phi.exact:
        raise ValueError(f"{what} needs a real exact frame")


def certify_phase_retrieval(phi: FrameSpec, budget: int | None = None, seed: int = 0) -> Verdict:
    """Phase retrieval certificate.

    Real frames go through the complement property; a failing split yields an
    explicit pair.  Complex frames go through the Hermitian lift.
    """
    require_frame(phi, "certify_phase_retrieval")
    if phi.field == COMPLEX:
        from .lift import certify_pr_via_lambda  # lift imports this module
        return certify_pr_via_lambda(phi, budget=budget, seed=seed)
    cp = complement_property(phi)
    if cp.yes:
        return Verdict(Outcome.YES, PHASE, reason="complement property holds", details=cp.details)
    sigma = [i - 1 for i in cp.witness]
    rest = [i for i in range(phi.m) if i not in sigma]
    if not phi.exact:
        return Verdict(Outcome.NO, PHASE, witness=cp.witness, reason="complement property fails (float ranks)",
                       details=cp.details)
    u = phi.orthogonal_complement(sigma)[0]
    v = phi.orthogonal_complement(rest)[0]
    pair = pair_from_sigma(phi, cp.witness, u, v)
    return Verdict(Outcome.NO, PHASE, witness=cp.witness, pair=pair, reason="complement property fails",
                   details=cp.details)


def certify_norm_retrieval_real(phi: FrameSpec) -> Verdict:
    """Norm retrieval certificate for real frames.

    ``||x||^2 - ||y||^2 = <u, v>``, so norm retrieval holds iff for every split
    the two orthogonal complements are mutually orthogonal.
    """
    if phi.field == COMPLEX:
        return Verdict(Outcome.UNKNOWN, NORM, budget={"splits_checked": 0},
                       reason="norm retrieval is only decided for real frames")
    _require_real_exact(phi, "certify_norm_retrieval_real")
    checked = 0
    for s, c in iter_splits(phi.m):
        checked += 1
        n1 = phi.orthogonal_complement(s)
        if not n1:
            continue
        n2 = phi.orthogonal_complement(c)
        for a in n1:
            for b in n2:
                if K.dot(a, b) != 0:
                    pair = pair_from_sigma(phi, one_based(s), a, b)
                    return Verdict(Outcome.NO, NORM, witness=one_based(s), pair=pair,
                                   reason="orthogonal complements are not orthogonal",
                                   details={"inner_product": K.format_scalar(K.dot(a, b)), "splits_checked": checked})
    return Verdict(Outcome.YES, NORM, details={"splits_checked": checked})


def _ratio_scale(u: Sequence, v: Sequence):
    """Positive rational ``r`` such that ``(u, r v)`` breaks weak phase, or ``None``.

    With ``x = (u + r v)/2`` and ``y = (r v - u)/2`` the sign of ``x_j y_j`` is
    the sign of ``r|v_j| - |u_j|``; a violation needs both signs to occur.
    """
    lower = None
    upper = None
    unbounded = False
    for a, b in zip(u, v):
        if b != 0:
            lo = abs(a) / abs(b)
            lower = lo if lower is None else min(lower, lo)
        if a != 0:
            if b == 0:
                unbounded = True
            else:
                hi = abs(a) / abs(b)
                upper = hi if upper is None else max(upper, hi)
    if lower is None or (upper is None and not unbounded):
        return None
    if unbounded:
        return lower + 1
    if lower < upper:
        return (lower + upper) / 2
    return None


def _weak_pair_from(phi: FrameSpec, sigma0, u, v) -> CounterexamplePair | None:
    r = _ratio_scale(u, v)
    if r is None:
        return None
    pair = pair_from_sigma(phi, one_based(sigma0), u, K.vec_scale(r, v))
    return pair if WEAK in pair.kinds else None


def _structured_candidates(phi: FrameSpec, n1: list, n2: list):
    """Candidate ``(u, v)`` pairs that must contain a violation when some complement has dimension >= 2."""
    def combos(big, other_vec):
        supp = [j for j, t in enumerate(other_vec) if t != 0]
        if supp:
            restricted = Matrix.from_columns([[a[j] for j in supp] for a in big], nrows=len(supp))
            kern = K.nullspace_exact(restricted)
            if kern:
                c = kern[0]
                yield tuple(sum((ck * a[j] for ck, a in zip(c, big)), Fraction(0)) for j in range(phi.dim))
        yield big[0]
        yield big[1]
        yield K.vec_add(big[0], big[1])

    if len(n1) >= 2:
        for u in combos(n1, n2[0]):
            yield u, n2[0]
    if len(n2) >= 2:
        for v in combos(n2, n1[0]):
            yield n1[0], v


def _dyadic(rng: random.Random, bits: int = DYADIC_BITS) -> Fraction:
    return Fraction(rng.randint(-(1 << bits), 1 << bits), 1 << bits)


def _sample_combination(rng: random.Random, basis: list, signs=None, complex_coeffs=False):
    dim = len(basis[0])
    coeffs = []
    for k in range(len(basis)):
        c = abs(_dyadic(rng)) if signs is not None else _dyadic(rng)
        if signs is not None:
            c = c * signs[k] or Fraction(signs[k], 2)
        if complex_coeffs:
            c = GaussianRational(c, _dyadic(rng))
        coeffs.append(c)
    out = []
    for j in range(dim):
        t = 0
        for c, b in zip(coeffs, basis):
            t = t + c * b[j]
        out.append(t)
    return tuple(out)


def _sampled_weak_search(phi, sigma0, n1, n2, rng, budget):
    """Seeded sign-cell then uniform sampling of ``(u, v)``; returns (pair or None, samples used)."""
    complex_case = phi.field == COMPLEX
    used = 0
    cells = []
    d1, d2 = len(n1), len(n2)
    if d1 + d2 <= 8:
        for mask in range(1 << (d1 + d2)):
            cells.append([1 if (mask >> b) & 1 else -1 for b in range(d1 + d2)])
    while used < budget:
        if cells:
            s = cells.pop(0)
            u = _sample_combination(rng, n1, s[:d1], complex_case)
            v = _sample_combination(rng, n2, s[d1:], complex_case)
        else:
            u = _sample_combination(rng, n1, None, complex_case)
            v = _sample_combination(rng, n2, None, complex_case)
        used += 1
        if complex_case:
            for r in (Fraction(1), Fraction(1, 3), Fraction(3)):
                vv = K.vec_scale(r, v)
                half = Fraction(1, 2)
                x = K.vec_scale(half, K.vec_add(u, vv))
                y = K.vec_scale(half, K.vec_sub(vv, u))
                if not weakly_same_phase(x, y).same:
                    return _make_pair(phi, x, y), used
        else:
            pair = _weak_pair_from(phi, sigma0, u, v)
            if pair is not None:
                return pair, used
    return None, used


def decide_weak_phase_real(phi: FrameSpec, budget: int = DEFAULT_WEAK_BUDGET, seed: int = 0) -> Verdict:
    """Weak phase retrieval decision.

    Real exact frames are decided split by split.  Corank-one splits are
    settled by the ratio test; larger complements are settled by explicit
    constructed witnesses, with seeded sampling as a fallback.  Complex frames
    only get the sampled falsifier and never a positive verdict.
    """
    if not phi.exact:
        raise ValueError("weak phase retrieval needs exact mode")
    rng = random.Random(seed)
    complex_case = phi.field == COMPLEX
    unresolved = []
    samples = 0
    checked = 0
    for s, c in iter_splits(phi.m):
        checked += 1
        n1 = phi.orthogonal_complement(s)
        n2 = phi.orthogonal_complement(c)
        if not n1 or not n2:
            continue
        pair = None
        if not complex_case:
            if len(n1) == 1 and len(n2) == 1:
                pair = _weak_pair_from(phi, s, n1[0], n2[0])
                if pair is None:
                    continue
            else:
                for u, v in _structured_candidates(phi, n1, n2):
                    pair = _weak_pair_from(phi, s, u, v)
                    if pair is not None:
                        break
        if pair is None:
            pair, used = _sampled_weak_search(phi, s, n1, n2, rng, budget)
            samples += used
        if pair is not None:
            if not verify_pair(phi, pair, WEAK):
                raise AssertionError("constructed weak-phase witness failed re-verification")
            return Verdict(Outcome.NO, WEAK, witness=one_based(s), pair=pair,
                           reason="equal magnitudes without a common phase",
                           details={"splits_checked": checked}, budget={"seed": seed, "samples": samples})
        unresolved.append(one_based(s))
    budget_rec = {"seed": seed, "samples": samples, "per_split": budget}
    if complex_case:
        return Verdict(Outcome.UNKNOWN, WEAK, budget=budget_rec,
                       reason="no violation found; complex weak phase retrieval is never certified",
                       details={"unresolved": unresolved, "splits_checked": checked})
    if unresolved:
        return Verdict(Outcome.UNKNOWN, WEAK, budget=budget_rec, reason="splits left unresolved",
                       details={"unresolved": unresolved})
    return Verdict(Outcome.YES, WEAK, details={"splits_checked": checked})


@dataclass(frozen=True)
class LiftResult:
    """Operator ``U`` sending a phase-retrieval counterexample to a weak-phase violation.

    ``frame = W phi`` with ``W = (U^{-1})^*`` and ``pair = (U x, U y)``.
    """

    U: object
    W: object
    frame: FrameSpec
    pair: CounterexamplePair
    case: str
    epsilon: object = None


def _complete_basis(vectors: list[tuple], n: int, variant: str) -> list[tuple]:
    basis = list(vectors)
    eye = Matrix.identity(n, variant).columns()
    for e in eye:
        if len(basis) == n:
            break
        if K.rank(Matrix.from_columns(basis + [e], nrows=n, variant=variant)) == len(basis) + 1:
            basis.append(e)
    return basis


def lift_counterexample_operator(phi: FrameSpec, pair: CounterexamplePair) -> LiftResult:
    """Build an invertible ``U`` with ``(U x, U y)`` violating weak phase for ``(U^{-1})^* phi``.

    Disjointly supported pairs use ``U x = x - y``, ``U y = x + y``.  Pairs with
    a shared support use ``U x = theta x - eps y``, ``U y = theta x + eps y`` with a
    rational ``eps`` strictly between two coordinate ratios ``|x_l|/|y_l|``.
    """
    if not phi.exact:
        raise ValueError("lift needs exact mode")
    x, y = tuple(pair.x), tuple(pair.y)
    if not equal_magnitudes(phi, x, y) or phase_equivalent(x, y):
        raise ValueError("pair is not a phase retrieval counterexample")
    n, variant = phi.dim, phi.variant
    wsp = weakly_same_phase(x, y)
    if not wsp.same:
        Id = make_operator(Matrix.identity(n, variant))
        return LiftResult(Id, Id, phi, _make_pair(phi, x, y), "already-violating")
    epsilon = None
    if not wsp.common_support:
        ux, uy = K.vec_sub(x, y), K.vec_add(x, y)
        case = "disjoint"
    else:
        if phi.field == COMPLEX:
            raise ValueError("shared-support lift needs an irrational phase in the complex case")
        found = None
        for a, b, swapped in ((x, y, False), (y, x, True)):
            ratios = {j: abs(a[j]) / abs(b[j]) for j in range(n) if b[j] != 0}
            common = [j for j in wsp.common_support]
            hi = max(ratios[j] for j in common)
            lo = min(ratios.values())
            if lo < hi:
                found = (a, b, swapped, (lo + hi) / 2)
                break
        if found is None:
            raise ValueError("no admissible epsilon: coordinate ratios are all equal")
        a, b, swapped, epsilon = found
        theta = wsp.alpha
        x, y = a, b
        ux = K.vec_sub(K.vec_scale(theta, a), K.vec_scale(epsilon, b))
        uy = K.vec_add(K.vec_scale(theta, a), K.vec_scale(epsilon, b))
        case = "shared-support-swapped" if swapped else "shared-support"
    B = Matrix.from_columns(_complete_basis([x, y], n, variant), nrows=n, variant=variant)
    extra = B.columns()[2:]
    C = Matrix.from_columns([ux, uy] + extra, nrows=n, variant=variant)
    U = C @ K.inverse_exact(B)
    Uop = make_operator(U)
    if not Uop.invertible:
        raise ValueError("constructed operator is singular")
    W = K.inverse_exact(U).H
    Wop = make_operator(W)
    new_frame = validate_frame([W @ p for p in phi.vectors], dim=n, field=phi.field, mode=phi.mode)
    new_pair = _make_pair(new_frame, ux, uy)
    if not equal_magnitudes(new_frame, ux, uy) or WEAK not in new_pair.kinds:
        raise AssertionError("lifted pair failed verification")
    return LiftResult(Uop, Wop, new_frame, new_pair, case, epsilon)


@dataclass(frozen=True)
class ProjectedFrame:
    """Orthogonal projection of a frame onto ``span(basis)``.

    ``frame`` holds the coordinates of each projected vector relative to the
    unnormalized orthogonal basis ``orth_basis``.  ``gram`` is the diagonal of
    squared basis norms.  ``measurement_frame`` reweights the coordinates so
    that ``<z, q_i>`` in coordinates equals ``<sum z_k w_k, phi_i>`` in the
    ambient space, keeping magnitudes exactly comparable without square roots.
    """

    frame: FrameSpec
    orth_basis: tuple
    gram: tuple
    measurement_frame: FrameSpec

    def lift(self, z: Sequence) -> tuple:
        n = len(self.orth_basis[0])
        out = [0] * n
        for zk, w in zip(z, self.orth_basis):
            for j in range(n):
                out[j] = out[j] + zk * w[j]
        return tuple(out)


def project_frame(phi: FrameSpec, basis: Sequence[Sequence]) -> ProjectedFrame:
    """Project every frame vector onto the span of ``basis`` (exact, square-root free)."""
    if not phi.exact:
        raise ValueError("project_frame needs exact mode")
    variant = phi.variant
    basis = [tuple(K.to_variant(t, variant) for t in b) for b in basis]
    if K.rank(Matrix.from_columns(basis, nrows=phi.dim, variant=variant)) < len(basis):
        raise ValueError("projection basis is linearly dependent")
    orth: list[tuple] = []
    for b in basis:
        w = b
        for q in orth:
            w = K.vec_sub(w, K.vec_scale(K.dot(b, q) / K.norm2(q), q))
        orth.append(w)
    gram = tuple(K.norm2(w) for w in orth)
    coords = [tuple(K.dot(p, w) / g for w, g in zip(orth, gram)) for p in phi.vectors]
    weighted = [tuple(c * g for c, g in zip(cs, gram)) for cs in coords]
    k = len(orth)
    frame = validate_frame(coords, dim=k, field=phi.field, mode=phi.mode)
    meas = validate_frame(weighted, dim=k, field=phi.field, mode=phi.mode)
    return ProjectedFrame(frame, tuple(orth), gram, meas)


def lift_projected_pair(phi: FrameSpec, proj: ProjectedFrame, pair: CounterexamplePair) -> CounterexamplePair:
    """Carry an equal-magnitude pair of the projected family back into the ambient space."""
    x, y = proj.lift(pair.x), proj.lift(pair.y)
    if not equal_magnitudes(phi, x, y):
        raise AssertionError("lifted pair lost equal magnitudes")
    return _make_pair(phi, x, y)
