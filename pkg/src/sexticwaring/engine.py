"""Decision procedures for ternary sextics.

* :func:`classify` places a sextic in the stratification by the rank of its
  cubic catalecticant and the vanishing of ``H27``.
* :func:`decompose_via_kernel_cubics` finds the decomposition cut out by the
  two apolar cubics of a form with ``rank C^3 = 8``.
* :func:`construct_Wprime_form` builds a sextic with three apolar cubics.
* :func:`hilbert_burch` and :func:`second_decomposition` pass from one
  decomposition of length 9 to the other by liaison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from . import linalg
from .apolarity import apolar_component, catalecticant
from .errors import (
    DegenerateConfiguration,
    FilterMiscount,
    IllConditioned,
    KernelWrongSize,
    NoSolution,
    NonReducedIntersection,
    PositiveDimensional,
    PreconditionError,
    ResidualTooLarge,
    SyzygyRankUnexpected,
    VerificationFailed,
    WrongDegree,
    WrongHVector,
)
from .flattening import h27_ratio, h27_vanishes
from .intersect import _multiplication_matrix, common_factor, intersect_cubics, intersect_curves
from .pointsets import (
    PointSet,
    ProjectivePoint,
    WaringExpression,
    chordal_distance,
    h_vector,
    hilbert_function,
    ideal_component,
    span_membership,
    veronese_matrix,
)
from .polycore import (
    TernaryForm,
    apply_operator,
    exp_factorial,
    exponent_array,
    exponents,
    multinomial,
    n_monomials,
)
from . import kernels

ZERO_COEFF_TOL = 1e-7
FILTER_TOL = 1e-7
FILTER_GAP = 1e2
RESIDUAL_TOL = 1e-8

# ---------------------------------------------------------------------------
# classification

_LABELS = {
    (9, False): "S9",
    (9, True): "R",
    (8, False): "W",
    (8, True): "S8",
    (7, False): "Wprime",
    (7, True): "S7",
}

_EXPECTED = {"S9": 2, "R": 1, "W": 1, "S8": 1, "Wprime": "infinite", "S7": 1}

CLOSED_CONDITION_NOTE = (
    "labels certify the closed conditions of the table (catalecticant rank and "
    "vanishing of H27), not membership in the open part of a stratum"
)
RPRIME_NOTE = (
    "forms with a one-dimensional family of decompositions also satisfy these "
    "conditions; no membership test is available for them"
)


@dataclass(frozen=True)
class StratumReport:
    rank_C3: int
    H27_vanishes: bool
    label: str
    expected_decompositions: Union[int, str]
    h27_measure: float
    notes: Tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "rank_C3": self.rank_C3,
            "H27_vanishes": self.H27_vanishes,
            "label": self.label,
            "expected_decompositions": self.expected_decompositions,
            "h27_measure": self.h27_measure,
            "notes": list(self.notes),
        }


def stratum_label(rank_c3: int, vanishes: bool) -> str:
    if rank_c3 >= 10:
        return "Generic10"
    if rank_c3 <= 6:
        return f"LowRank({rank_c3})"
    return _LABELS[(rank_c3, vanishes)]


def classify(F: TernaryForm, tol: float = 1e-9) -> StratumReport:
    """Stratum of a sextic from ``rank C^3_F`` and the vanishing of ``H27``."""
    if F.degree != 6:
        raise WrongDegree(f"classify expects a sextic, got degree {F.degree}")
    r = catalecticant(F, 3).rank(tol)
    vanishes = h27_vanishes(F, tol)
    label = stratum_label(r, vanishes)
    notes = [CLOSED_CONDITION_NOTE]
    if label in ("S9", "R"):
        notes.append(RPRIME_NOTE)
    measure = 0.0 if F.is_zero() else h27_ratio(F)
    return StratumReport(r, vanishes, label, _EXPECTED.get(label, "unknown"), measure, tuple(notes))


# ---------------------------------------------------------------------------
# verification and polishing


class Verification(NamedTuple):
    residual: float
    non_redundant: bool


def verify_expression(F: TernaryForm, expr: WaringExpression, tol: float = 1e-9) -> Verification:
    """Relative residual of ``F - sum a_i L_i^d`` and a non-redundancy flag."""
    if F.degree != expr.degree:
        raise WrongDegree("form and expression have different degrees")
    target = F.to_complex().dense()
    approx = expr.form().to_complex().dense() if len(expr) else np.zeros_like(target)
    scale = np.linalg.norm(target)
    diff = np.linalg.norm(target - approx)
    residual = float(diff / scale) if scale > 0 else float(diff)
    coeffs = np.array([complex(a) for a in expr.coefficients])
    big = np.abs(coeffs).max() if coeffs.size else 0.0
    nonzero = bool(coeffs.size) and bool(np.all(np.abs(coeffs) > tol * big))
    independent = linalg.rank(veronese_matrix(expr.points, expr.degree), tol) == len(expr) if len(expr) else True
    return Verification(residual, bool(nonzero and independent))


def refine_decomposition(F: TernaryForm, expr: WaringExpression, iterations: int = 20) -> WaringExpression:
    """Gauss-Newton on the representatives ``p_i`` of ``F = sum (p_i . x)^d``.

    The coefficients are absorbed into the representatives, so the unknowns
    are ``3 n`` complex numbers and the map is holomorphic.
    """
    d = expr.degree
    exps = exponent_array(d)
    w = np.array([multinomial(tuple(e)) for e in exps], dtype=np.float64)
    target = F.to_complex().dense()
    scale = np.linalg.norm(target) or 1.0
    reps = []
    for p, a in zip(expr.points, expr.coefficients):
        a = complex(a)
        if a == 0:
            raise PreconditionError("cannot refine an expression with a zero coefficient")
        reps.append(np.asarray(p.to_complex()) * a ** (1.0 / d))
    P = np.array(reps)

    def residual(P):
        return target - (kernels.monomial_matrix(P, exps) * w).sum(axis=0)

    r = residual(P)
    best = np.linalg.norm(r)
    for _ in range(iterations):
        if best < 1e-15 * scale:
            break
        J = (kernels.monomial_jacobian(P, exps) * w).T  # columns: d/dp_{i,t}
        step, *_ = np.linalg.lstsq(J, r, rcond=None)
        trial = P + step.reshape(P.shape)
        rt = residual(trial)
        nt = np.linalg.norm(rt)
        if not nt < best:
            break
        P, r, best = trial, rt, nt
    return WaringExpression.from_representatives([list(p) for p in P], [1.0] * len(P), d)


# ---------------------------------------------------------------------------
# the kernel-cubic algorithm


@dataclass(frozen=True)
class KernelDecomposition:
    points: PointSet
    expression: WaringExpression
    verdict: str
    residual: float
    coefficients: Tuple[complex, ...]


def decompose_with_cubics(
    F: TernaryForm, D1: TernaryForm, D2: TernaryForm, tol: float = ZERO_COEFF_TOL, seed: int = 0
) -> KernelDecomposition:
    """Decompose ``F`` over the nine base points of the pencil ``<D1, D2>``."""
    if common_factor(D1, D2) is not None:
        raise PositiveDimensional("the two apolar cubics share a component")
    hits = intersect_cubics(D1, D2, seed=seed)
    if any(m > 1 for _, m in hits):
        raise NonReducedIntersection("the base locus of the cubic pencil is not reduced")
    Z = PointSet([p for p, _ in hits])
    sm = span_membership(F, Z)
    coeffs = np.asarray(sm.coefficients)
    # compare sizes on unit representatives, where they do not depend on scaling
    mags = np.abs(coeffs) * np.linalg.norm(Z.array(), axis=1) ** F.degree
    small = [i for i, a in enumerate(mags) if a < tol * mags.max()]
    if len(small) > 1:
        raise DegenerateConfiguration(f"{len(small)} coefficients vanish; F has rank below 8")
    full = WaringExpression(Z, tuple(complex(a) for a in coeffs), F.degree)
    attempts = [(full, "Rank9_CI")]
    if small:
        # a genuinely tiny coefficient fails the residual check once dropped
        attempts.insert(0, (full.drop(small[0]), "Rank8"))
    for expr, verdict in attempts:
        res = verify_expression(F, expr).residual
        if res > RESIDUAL_TOL:
            polished = refine_decomposition(F, expr)
            res2 = verify_expression(F, polished).residual
            if res2 < res:
                expr, res = polished, res2
        if res <= RESIDUAL_TOL:
            return KernelDecomposition(Z, expr, verdict, res, tuple(complex(a) for a in coeffs))
    raise ResidualTooLarge(f"decomposition residual {res:.2e}")


def decompose_via_kernel_cubics(F: TernaryForm, tol: float = ZERO_COEFF_TOL, seed: int = 0) -> KernelDecomposition:
    """Decomposition of a sextic whose cubic catalecticant has a 2-dimensional kernel.

    The two kernel cubics meet in nine points ``Z``; ``F`` is a unique
    combination of their sixth powers.  One vanishing coefficient means
    rank 8, otherwise the nine-point expression is the unique one of length 9.
    """
    if F.degree != 6:
        raise WrongDegree("expected a sextic")
    K = apolar_component(F, 3)
    if len(K) != 2:
        raise KernelWrongSize(f"kernel of C^3 has dimension {len(K)}, expected 2")
    return decompose_with_cubics(F, K[0], K[1], tol, seed)


# ---------------------------------------------------------------------------
# W'


def _check_wprime_inputs(C1, C2, C3, seed):
    for i, C in enumerate((C1, C2, C3)):
        if C.degree != 3:
            raise WrongDegree(f"cubic {i + 1} has degree {C.degree}")
    pairs = [(C1, C2), (C1, C3), (C2, C3)]
    for a, b in pairs:
        if common_factor(a, b) is not None:
            raise DegenerateConfiguration("the cubics are not pairwise coprime")
    A = intersect_cubics(C1, C2, seed=seed)
    B = intersect_cubics(C1, C3, seed=seed)
    if any(m > 1 for _, m in A) or any(m > 1 for _, m in B):
        raise DegenerateConfiguration("a pairwise intersection is not nine distinct points")
    A = PointSet([p for p, _ in A])
    B = PointSet([p for p, _ in B])
    vec3 = C3.to_complex().dense()
    vals = kernels.monomial_matrix(A.unit_array(), exponent_array(3)) @ vec3
    if np.min(np.abs(vals)) < 1e-8 * np.sum(np.abs(vec3)):
        raise DegenerateConfiguration("the three cubics have a common point")
    return A, B


def wprime_by_spans(A: PointSet, B: PointSet) -> TernaryForm:
    """Unit sextic spanning ``<v6(A)> ∩ <v6(B)>``, from the stacked complement constraints."""
    UA = linalg.orthogonal_complement(veronese_matrix(A, 6))
    UB = linalg.orthogonal_complement(veronese_matrix(B, 6))
    S = np.vstack([UA.conj().T, UB.conj().T])
    _, s, vh = np.linalg.svd(S)
    if s[-2] < 1e-6 * s[0] or s[-1] > 1e-8 * s[0]:
        raise DegenerateConfiguration("the two spans do not meet in a single point")
    v = vh[-1].conj()
    return TernaryForm.from_dense(6, v / np.linalg.norm(v), exact=False)


def construct_Wprime_form(C1: TernaryForm, C2: TernaryForm, C3: TernaryForm, seed: int = 0) -> TernaryForm:
    """The sextic in ``<v6(C1 ∩ C2)> ∩ <v6(C1 ∩ C3)>``.

    Rational cubics give a rational answer: the sextic annihilated by the
    degree-6 part of ``(C1, C2, C3)``, scaled to coprime integers.  Float
    cubics use :func:`wprime_by_spans`.
    """
    A, B = _check_wprime_inputs(C1, C2, C3, seed)
    if C1.exact and C2.exact and C3.exact:
        rows = []
        for C in (C1, C2, C3):
            cols = _multiplication_matrix(C, 3)
            for j in range(cols.shape[1]):
                rows.append([cols[i, j] * exp_factorial(e) for i, e in enumerate(exponents(6))])
        ker = linalg.kernel_basis(linalg.exact_array(rows))
        if len(ker) != 1:
            raise DegenerateConfiguration(f"annihilator has dimension {len(ker)}")
        F = TernaryForm.from_dense(6, [Fraction(v) for v in linalg.integer_vector(list(ker[0]))], exact=True)
    else:
        F = wprime_by_spans(A, B)
    K = apolar_component(F, 3)
    if len(K) != 3:
        raise DegenerateConfiguration(f"kernel of C^3 has dimension {len(K)}, expected 3")
    for C in (C1, C2, C3):
        if not apply_operator(C, F).is_zero() and F.exact:
            raise VerificationFailed("an input cubic is not apolar to the constructed form")
    return F


# ---------------------------------------------------------------------------
# Hilbert-Burch matrix and liaison


@dataclass(frozen=True)
class HilbertBurch:
    """Resolution data of nine points on a unique cubic.

    ``M`` is 4 x 3: rows 0-2 hold linear forms (one per quartic generator),
    row 3 the quadrics multiplying the cubic.  ``generators`` is
    ``(G0, G1, G2, C)`` and ``sum_r generators[r] * M[r][k] = 0`` for each
    column ``k``.
    """

    M: Tuple[Tuple[TernaryForm, ...], ...]
    generators: Tuple[TernaryForm, ...]

    @property
    def cubic(self) -> TernaryForm:
        return self.generators[3]

    def linear_block(self):
        return [list(self.M[r]) for r in range(3)]

    def minors(self) -> List[TernaryForm]:
        """The four maximal minors (delete row ``j``)."""
        return [det3([list(self.M[r]) for r in range(4) if r != j]) for j in range(4)]

    def syzygy_residual(self) -> float:
        worst = 0.0
        for k in range(3):
            total = None
            for r in range(4):
                term = self.generators[r] * self.M[r][k]
                total = term if total is None else total + term
            worst = max(worst, float(total.to_complex().norm()))
        return worst


def det3(rows: Sequence[Sequence[TernaryForm]]) -> TernaryForm:
    a, b, c = rows
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _pick_independent(candidates, base, count):
    """``count`` of ``candidates`` independent modulo the column space of ``base``."""
    if linalg.is_exact(base):
        chosen = []
        cur = base
        r = linalg.rank(cur)
        for G in candidates:
            trial = np.hstack([cur, G.dense().reshape(-1, 1)])
            rt = linalg.rank(trial)
            if rt > r:
                chosen.append(G)
                cur, r = trial, rt
            if len(chosen) == count:
                return chosen
        raise SyzygyRankUnexpected("quartics through the points do not complete the cubic multiples")
    Qb = linalg.orthonormal_basis(base)
    cand = np.column_stack([G.dense() for G in candidates])
    proj = cand - Qb @ (Qb.conj().T @ cand)
    u, s, _ = np.linalg.svd(proj, full_matrices=False)
    if len(s) < count or s[count - 1] < 1e-8 * s[0]:
        raise SyzygyRankUnexpected("quartics through the points do not complete the cubic multiples")
    d = candidates[0].degree
    return [TernaryForm.from_dense(d, u[:, i], exact=False) for i in range(count)]


def hilbert_burch(A: PointSet, tol: float = linalg.DEFAULT_TOL) -> HilbertBurch:
    """Hilbert-Burch matrix of nine points with h-vector ``(1, 2, 3, 3)``."""
    if len(A) != 9:
        raise WrongHVector(f"expected nine points, got {len(A)}")
    hv = h_vector(A, tol)
    if hv != (1, 2, 3, 3):
        raise WrongHVector(f"h-vector {tuple(hv)} is not (1, 2, 3, 3)")
    exact = A.exact
    C = ideal_component(A, 3, tol)[0]
    I4 = ideal_component(A, 4, tol)
    xC = _multiplication_matrix(C, 1)
    G = _pick_independent(I4, xC, 3)
    # syzygies sum_r l_r G_r + m C = 0 in degree 5
    blocks = [_multiplication_matrix(g, 1) for g in G] + [_multiplication_matrix(C, 2)]
    S = np.hstack(blocks)
    if not exact:
        S = S / np.linalg.norm(S, axis=0)[None, :]
    ker = linalg.kernel_basis(S, tol)
    if len(ker) != 3:
        raise SyzygyRankUnexpected(f"syzygy space has dimension {len(ker)}, expected 3")
    if not exact:
        norms = np.linalg.norm(np.hstack(blocks), axis=0)
        ker = [v / norms for v in ker]
    M = [[None] * 3 for _ in range(4)]
    for k, v in enumerate(ker):
        for r in range(3):
            M[r][k] = TernaryForm.from_dense(1, list(v[3 * r : 3 * r + 3]), exact=exact)
        M[3][k] = TernaryForm.from_dense(2, list(v[9:15]), exact=exact)
    hb = HilbertBurch(tuple(tuple(row) for row in M), tuple(G) + (C,))
    return hb


def _apolarity_system(hb: HilbertBurch, F: TernaryForm):
    """Matrix of ``q -> (C^4_F H_j(q))_j`` and the trivial solutions ``q = L u``."""
    L = hb.linear_block()
    exact = F.exact and hb.cubic.exact
    basis2 = exponents(2)
    unit = [TernaryForm.monomial(e, 1, exact=exact) for e in basis2]
    zero2 = TernaryForm.zero(2, exact=exact)
    cols = []
    for r in range(3):
        for e in range(6):
            q = [zero2, zero2, zero2]
            q[r] = unit[e]
            vecs = []
            for j in range(3):
                keep = [k for k in range(3) if k != j]
                rows = [[L[s][k] for k in keep] + [q[s]] for s in range(3)]
                vecs.append(apply_operator(det3(rows), F).dense())
            cols.append(np.concatenate(vecs))
    S = np.column_stack(cols)
    triv = []
    for k in range(3):
        for t in range(3):
            u = TernaryForm.monomial(tuple(1 if i == t else 0 for i in range(3)), 1, exact=exact)
            vec = np.concatenate([(L[r][k] * u).dense() for r in range(3)])
            triv.append(vec)
    return S, np.column_stack(triv)


def _quadric_column(hb: HilbertBurch, F: TernaryForm) -> List[TernaryForm]:
    S, T = _apolarity_system(hb, F)
    exact = linalg.is_exact(S)
    if exact:
        ker = linalg.kernel_basis(S)
        kmat = np.column_stack(ker) if ker else linalg.exact_zeros((18, 0))
        rT = linalg.rank(T)
        extra = [v for v in ker if linalg.rank(np.hstack([T, v.reshape(-1, 1)])) > rT]
        if linalg.rank(np.hstack([T, kmat])) - rT != 1 or not extra:
            raise NoSolution("apolarity system has no solution beyond the trivial ones")
        v = extra[0]
    else:
        W = linalg.orthogonal_complement(T)
        SW = S @ W
        _, s, vh = np.linalg.svd(SW)
        if s[-1] > 1e-6 * s[0]:
            raise NoSolution("apolarity system has no solution beyond the trivial ones")
        if s[-2] < 1e-9 * s[0]:
            raise DegenerateConfiguration("apolarity system has several nontrivial solutions")
        v = W @ vh[-1].conj()
    return [TernaryForm.from_dense(2, list(v[6 * r : 6 * r + 6]), exact=exact) for r in range(3)]


def _unit_eval(F: TernaryForm, pts: np.ndarray) -> np.ndarray:
    vec = F.to_complex().dense()
    return np.abs(kernels.monomial_matrix(pts, exponent_array(F.degree)) @ vec) / np.sum(np.abs(vec))


@dataclass(frozen=True)
class LiaisonResult:
    points: PointSet
    expression: WaringExpression
    residual: float
    h_vector_union: Tuple[int, ...]
    min_distance: float


def second_decomposition(
    F: TernaryForm, A: Union[PointSet, WaringExpression], tol: float = 1e-9, seed: int = 0
) -> LiaisonResult:
    """The other length-9 decomposition of ``F``, linked to ``A`` by liaison.

    The linear block of the Hilbert-Burch matrix of ``A`` is completed by a
    column of quadrics chosen so that the quartic minors are apolar to ``F``;
    the minors then cut out the second decomposition ``B``.
    """
    if isinstance(A, WaringExpression):
        A = A.points
    if F.degree != 6:
        raise WrongDegree("expected a sextic")
    sm = span_membership(F, A)
    if not sm.residual <= 1e-8 * max(F.to_complex().norm(), 1e-300):
        raise PreconditionError(f"A does not decompose F (residual {sm.residual:.2e})")
    hb = hilbert_burch(A, tol)
    kdim = len(apolar_component(F, 3))
    if kdim != 1:
        raise KernelWrongSize(f"kernel of C^3 has dimension {kdim}, expected 1")
    # B is irrational in general; the construction runs in floating point,
    # where the quadric column can be kept orthogonal to the trivial solutions
    if A.exact:
        hb = hilbert_burch(PointSet([ProjectivePoint(list(p.to_complex())) for p in A]), tol)
    q = _quadric_column(hb, F.to_complex())
    L = hb.linear_block()
    H = []
    for j in range(3):
        keep = [k for k in range(3) if k != j]
        H.append(det3([[L[s][k] for k in keep] + [q[s]] for s in range(3)]))
    C = hb.cubic
    candidates, failure = None, None
    # each minor meets C in B plus three residual points; try them in turn
    for j in range(3):
        try:
            hits = intersect_curves(C, H[j], seed=seed)
        except (PositiveDimensional, IllConditioned) as exc:
            failure = exc
            continue
        others = [H[k] for k in range(3) if k != j]
        pts = np.array([p.unit() for p, _ in hits])
        err = np.max([_unit_eval(G, pts) for G in others], axis=0)
        order = np.argsort(err)
        keep = [i for i in order if err[i] < FILTER_TOL]
        if len(keep) > 9 and err[order[9]] > FILTER_GAP * err[order[8]]:
            # residual points can sit just under the threshold; trust a clear gap
            keep = list(order[:9])
        found = [hits[i] for i in keep]
        # a residual point may land on a point of B; the later checks still apply
        if len(found) == 9:
            candidates = found
            break
        failure = FilterMiscount(f"{len(found)} points survive the filter, expected 9")
    if candidates is None:
        if isinstance(failure, PositiveDimensional):
            raise NoSolution("the generators of the linked ideal share a component")
        raise failure
    B = PointSet([p for p, _ in candidates])
    sm = span_membership(F, B)
    expr = refine_decomposition(F, WaringExpression(B, tuple(complex(a) for a in sm.coefficients), 6))
    B = expr.points
    res = verify_expression(F, expr).residual
    if res > RESIDUAL_TOL:
        raise ResidualTooLarge(f"second decomposition residual {res:.2e}")
    dmin = min(chordal_distance(a.to_complex(), b.to_complex()) for a in A for b in B)
    if dmin < 1e-6:
        raise VerificationFailed(f"the two decompositions share a point (distance {dmin:.1e})")
    union = PointSet(list(A.points) + list(B.points)) if A.exact == B.exact else PointSet(
        [ProjectivePoint(list(p.to_complex())) for p in A] + list(B)
    )
    hv = tuple(h_vector(union, tol))
    if hv != (1, 2, 3, 3, 3, 3, 2, 1):
        raise VerificationFailed(f"h-vector of the union is {hv}")
    return LiaisonResult(B, expr, res, hv, dmin)


# ---------------------------------------------------------------------------
# random test forms


def _general_position(pts: PointSet, rank_target: int) -> bool:
    n = len(pts)
    if n < rank_target:
        return False
    if hilbert_function(pts, 3) != min(n, 10):
        return False
    if n >= 6 and hilbert_function(pts, 2) != 6:
        return False
    if n <= 9:
        # no three points on a line
        arr = [p.coords for p in pts]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if linalg.determinant(linalg.exact_array([arr[i], arr[j], arr[k]])) == 0:
                        return False
    return True


def random_form(rank_target: int, seed: int = 0, height: int = 10) -> Tuple[TernaryForm, WaringExpression]:
    """A rational sextic of the given rank with its witness decomposition.

    Points have integer coordinates in ``[-height, height]``.  Each
    coefficient is a small nonzero rational divided by ``|p|^6``, so all
    terms have comparable size.  Configurations in special position are
    rejected, so the form is general for its rank.
    """
    if not 1 <= rank_target <= 10:
        raise PreconditionError("rank_target must lie in 1..10")
    rng = np.random.default_rng(seed)
    while True:
        raw = rng.integers(-height, height + 1, size=(rank_target, 3))
        if np.any(np.all(raw == 0, axis=1)):
            continue
        pts = [ProjectivePoint([Fraction(int(v)) for v in row]) for row in raw]
        try:
            Z = PointSet(pts)
        except PreconditionError:
            continue
        if not _general_position(Z, rank_target):
            continue
        nums = rng.integers(1, 10, size=rank_target) * rng.choice([-1, 1], size=rank_target)
        dens = rng.integers(1, 6, size=rank_target)
        # a / |p|^6 on the stored representative makes every term the size of a * (p / |p|)^6
        sq = [sum(c * c for c in p.coords) for p in Z]
        coeffs = [Fraction(int(a), int(b)) / n ** 3 for a, b, n in zip(nums, dens, sq)]
        expr = WaringExpression(Z, tuple(coeffs), 6)
        F = expr.form()
        if rank_target == 8:
            # the ninth base point of the cubic pencil must not repeat one of the eight
            K = apolar_component(F, 3)
            if len(K) != 2 or common_factor(K[0], K[1]) is not None:
                continue
            if any(m > 1 for _, m in intersect_cubics(K[0], K[1])):
                continue
        return F, expr
