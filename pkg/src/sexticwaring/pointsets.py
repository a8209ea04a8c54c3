"""Finite sets of points in the projective plane.

Hilbert functions, h-vectors, graded pieces of the vanishing ideal and
Waring expressions built on a point set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels, linalg
from .errors import PreconditionError, WrongCardinality, ZeroPoint
from .polycore import (
    TernaryForm,
    exponent_array,
    exponents,
    format_scalar,
    is_exact_scalar,
    multinomial,
    parse_scalar,
    power_of_linear,
    to_exact,
)

POINT_TOL = 1e-8


def chordal_distance(p, q) -> float:
    """Distance between the lines spanned by two nonzero vectors in C^3."""
    u = np.asarray(p, dtype=np.complex128)
    v = np.asarray(q, dtype=np.complex128)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    # |u ^ v| rather than sqrt(1 - |<u, v>|^2), which loses half the digits
    w = np.outer(u, v) - np.outer(v, u)
    return float(np.sqrt(0.5 * np.sum(np.abs(w) ** 2)))


class ProjectivePoint:
    """A point of P^2, stored with its last nonzero coordinate equal to 1."""

    __slots__ = ("coords", "exact")

    def __init__(self, coords: Sequence):
        if len(coords) != 3:
            raise PreconditionError("a point of P^2 needs three coordinates")
        exact = all(is_exact_scalar(c) for c in coords)
        if exact:
            c = [to_exact(x) for x in coords]
            nz = [i for i in range(3) if c[i] != 0]
            if not nz:
                raise ZeroPoint("(0, 0, 0) is not a projective point")
            s = c[nz[-1]]
            c = tuple(x / s for x in c)
        else:
            v = np.array([complex(x) for x in coords], dtype=np.complex128)
            big = np.max(np.abs(v))
            if big == 0 or not np.isfinite(big):
                raise ZeroPoint("(0, 0, 0) is not a projective point")
            nz = [i for i in range(3) if abs(v[i]) > 1e-12 * big]
            v = v / v[nz[-1]]
            for i in range(3):
                if i not in nz:
                    v[i] = 0
            c = tuple(complex(x) for x in v)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    def to_complex(self) -> np.ndarray:
        return np.array([complex(x) for x in self.coords], dtype=np.complex128)

    def unit(self) -> np.ndarray:
        v = self.to_complex()
        return v / np.linalg.norm(v)

    def distance(self, other: "ProjectivePoint") -> float:
        return chordal_distance(self.to_complex(), other.to_complex())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if self.exact and other.exact:
            return self.coords == other.coords
        return self.distance(other) < POINT_TOL

    def __hash__(self):
        if self.exact:
            return hash(self.coords)
        raise TypeError("float points are compared with a tolerance and are unhashable")

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self) -> str:
        return f"ProjectivePoint({', '.join(str(c) for c in self.coords)})"


class PointSet:
    """An ordered set of pairwise distinct projective points."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable):
        pts = tuple(p if isinstance(p, ProjectivePoint) else ProjectivePoint(p) for p in points)
        for i in range(len(pts)):
            for j in range(i):
                if pts[i] == pts[j]:
                    raise PreconditionError(f"points {j} and {i} coincide")
        object.__setattr__(self, "points", pts)

    def __setattr__(self, name, value):
        raise AttributeError("PointSet is immutable")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.points)

    def array(self) -> np.ndarray:
        """Normalized representatives as an ``(n, 3)`` complex array."""
        if not self.points:
            return np.zeros((0, 3), dtype=np.complex128)
        return np.array([p.to_complex() for p in self.points])

    def unit_array(self) -> np.ndarray:
        a = self.array()
        if len(a) == 0:
            return a
        return a / np.linalg.norm(a, axis=1)[:, None]

    def union(self, other: "PointSet") -> "PointSet":
        return PointSet(self.points + other.points)

    def matches(self, other: "PointSet", tol: float = 1e-6) -> bool:
        """Same points up to order, within chordal distance ``tol``."""
        return match_points(self, other, tol) is not None

    def __repr__(self) -> str:
        return f"PointSet({list(self.points)!r})"


def _distance_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise chordal distances between rows of two unit-vector arrays."""
    w = a[:, None, :, None] * b[None, :, None, :] - a[:, None, None, :] * b[None, :, :, None]
    return np.sqrt(0.5 * np.sum(np.abs(w) ** 2, axis=(2, 3)))


def match_points(A: PointSet, B: PointSet, tol: float = 1e-6):
    """A permutation ``perm`` with ``A[i] ~ B[perm[i]]`` or ``None``.

    Greedy matching on the chordal distance matrix, which is unambiguous
    whenever ``tol`` is below half the separation of the points.
    """
    if len(A) != len(B):
        return None
    a = A.unit_array()
    b = B.unit_array()
    if len(a) == 0:
        return []
    dist = _distance_matrix(a, b)
    perm = [-1] * len(a)
    used = set()
    for flat in np.argsort(dist, axis=None):
        i, j = divmod(int(flat), len(b))
        if perm[i] >= 0 or j in used:
            continue
        if dist[i, j] >= tol:
            return None
        perm[i] = j
        used.add(j)
    return perm


def max_match_distance(A: PointSet, B: PointSet) -> float:
    a = A.unit_array()
    b = B.unit_array()
    dist = _distance_matrix(a, b)
    r, s = linear_sum_assignment(dist)
    return float(dist[r, s].max()) if len(r) else 0.0


# ---------------------------------------------------------------------------
# evaluation and Hilbert functions


def evaluation_matrix(Z: PointSet, d: int, unit: bool = False) -> np.ndarray:
    """Rows: points, columns: degree-``d`` monomials in graded-lex order.

    Exact point sets give an exact matrix.  ``unit=True`` evaluates float
    points at unit-norm representatives, which conditions rank decisions.
    """
    exps = exponents(d)
    if Z.exact and not unit:
        rows = []
        for p in Z:
            c = p.coords
            rows.append([c[0] ** e[0] * c[1] ** e[1] * c[2] ** e[2] for e in exps])
        if not rows:
            return linalg.exact_zeros((0, len(exps)))
        return linalg.exact_array(rows)
    pts = Z.unit_array() if unit else Z.array()
    return kernels.monomial_matrix(pts, exponent_array(d))


def _eval_for_rank(Z: PointSet, d: int) -> np.ndarray:
    return evaluation_matrix(Z, d) if Z.exact else evaluation_matrix(Z, d, unit=True)


def hilbert_function(Z: PointSet, d: int, tol: float = linalg.DEFAULT_TOL) -> int:
    if len(Z) == 0:
        return 0
    return linalg.rank(_eval_for_rank(Z, d), tol)


def hilbert_sequence(Z: PointSet, tol: float = linalg.DEFAULT_TOL) -> List[int]:
    """``h_Z(0), h_Z(1), ...`` up to the first degree where it reaches ``|Z|``."""
    out = []
    d = 0
    while True:
        h = hilbert_function(Z, d, tol)
        out.append(h)
        if h >= len(Z) or d > len(Z) + 1:
            return out
        d += 1


@dataclass(frozen=True)
class HVector:
    """The nonzero values of the first difference of the Hilbert function."""

    values: Tuple[int, ...]

    def __post_init__(self):
        if self.values and self.values[0] != 1:
            raise PreconditionError("an h-vector starts with 1")
        if any(v <= 0 for v in self.values):
            raise PreconditionError("h-vector entries are positive")

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i] if 0 <= i < len(self.values) else 0

    def __eq__(self, other):
        if isinstance(other, HVector):
            return self.values == other.values
        if isinstance(other, (tuple, list)):
            return self.values == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.values)

    def total(self) -> int:
        return sum(self.values)

    def __repr__(self):
        return f"HVector{self.values}"


def difference_function(Z: PointSet, tol: float = linalg.DEFAULT_TOL) -> List[int]:
    h = hilbert_sequence(Z, tol)
    return [h[0]] + [h[i] - h[i - 1] for i in range(1, len(h))]


def h_vector(Z: PointSet, tol: float = linalg.DEFAULT_TOL) -> HVector:
    vals = []
    for v in difference_function(Z, tol):
        if v == 0:
            break
        vals.append(v)
    return HVector(tuple(vals))


def ideal_component(Z: PointSet, d: int, tol: float = linalg.DEFAULT_TOL) -> List[TernaryForm]:
    """Basis of the degree-``d`` forms vanishing on ``Z``."""
    if len(Z) == 0:
        n = len(exponents(d))
        exact = True
        return [TernaryForm.from_dense(d, [1 if j == i else 0 for j in range(n)], exact=exact) for i in range(n)]
    M = _eval_for_rank(Z, d)
    return [TernaryForm.from_dense(d, v, exact=Z.exact) for v in linalg.kernel_basis(M, tol)]


def is_complete_intersection_33(Z: PointSet, tol: float = linalg.DEFAULT_TOL) -> bool:
    """Whether nine points are the base locus of a pencil of coprime cubics."""
    from .intersect import common_factor

    if len(Z) != 9:
        raise WrongCardinality(f"expected 9 points, got {len(Z)}")
    cubics = ideal_component(Z, 3, tol)
    if len(cubics) != 2:
        return False
    if common_factor(cubics[0], cubics[1]) is not None:
        return False
    return h_vector(Z, tol) == (1, 2, 3, 2, 1)


# Predicates on difference functions, used to sanity-check computed unions.


def satisfies_b1(dh: Sequence[int], d: int) -> bool:
    """Symmetry inequality on the difference function of a union of two decompositions."""
    dh = list(dh) + [0] * (d + 3)
    return all(sum(dh[: j + 1]) <= sum(dh[d + 1 - j : d + 2]) for j in range(d + 2))


def satisfies_b3(dh_a: Sequence[int], dh_z: Sequence[int]) -> bool:
    """Strict decrease of ``Dh_Z`` after a value below some ``Dh_A(i)``, ``i < j``."""
    n = max(len(dh_a), len(dh_z)) + 2
    a = list(dh_a) + [0] * n
    z = list(dh_z) + [0] * n
    for j in range(2, n - 1):
        if z[j] > 0 and any(a[i] > z[j] for i in range(1, j)) and not z[j + 1] < z[j]:
            return False
    return True


# ---------------------------------------------------------------------------
# Waring expressions


def veronese_matrix(Z: PointSet, d: int, unit: bool = True) -> np.ndarray:
    """Columns: coefficient vectors of ``L_i^d`` for the chosen representatives."""
    if Z.exact and not unit:
        return np.column_stack([power_of_linear(p.coords, d).dense() for p in Z])
    pts = Z.unit_array() if unit else Z.array()
    mult = np.array([multinomial(e) for e in exponents(d)], dtype=np.float64)
    return (kernels.monomial_matrix(pts, exponent_array(d)) * mult[None, :]).T


class SpanMembership(NamedTuple):
    coefficients: np.ndarray
    residual: float
    member: bool


def span_membership(F: TernaryForm, Z: PointSet, tol: float = 1e-9) -> SpanMembership:
    """Least-squares coefficients of ``F`` on the powers ``L_i^d`` of the points.

    Coefficients refer to the normalized representatives stored in ``Z``.
    """
    b = F.to_complex().dense()
    if len(Z) == 0:
        res = float(np.linalg.norm(b))
        return SpanMembership(np.zeros(0, dtype=np.complex128), res, res <= tol * max(res, 1e-300))
    V = veronese_matrix(Z, F.degree, unit=True)
    x, res = linalg.solve_least_squares(V, b)
    norms = np.linalg.norm(Z.array(), axis=1)
    coeffs = x / norms ** F.degree
    fn = float(np.linalg.norm(b))
    return SpanMembership(coeffs, res, res < tol * fn if fn > 0 else res == 0)


@dataclass(frozen=True)
class WaringExpression:
    """``F = sum a_i L_i^d`` with ``L_i`` the stored representatives."""

    points: PointSet
    coefficients: Tuple
    degree: int

    def __post_init__(self):
        if len(self.points) != len(self.coefficients):
            raise PreconditionError("one coefficient per point is required")

    @classmethod
    def from_representatives(cls, reps: Sequence[Sequence], coeffs: Sequence, degree: int) -> "WaringExpression":
        """Build from arbitrary representatives, absorbing their scale into the coefficients."""
        pts = []
        out = []
        for rep, a in zip(reps, coeffs):
            p = ProjectivePoint(rep)
            # rep = s * p.coords for the scalar s of the last nonzero coordinate
            k = max(i for i in range(3) if p.coords[i] != 0)
            s = rep[k] if p.exact else complex(rep[k])
            if p.exact and is_exact_scalar(a):
                out.append(to_exact(a) * to_exact(s) ** degree)
            else:
                out.append(complex(a) * complex(s) ** degree)
            pts.append(p)
        return cls(PointSet(pts), tuple(out), degree)

    @property
    def exact(self) -> bool:
        return self.points.exact and all(is_exact_scalar(a) for a in self.coefficients)

    def __len__(self):
        return len(self.points)

    def form(self) -> TernaryForm:
        if self.exact:
            total = TernaryForm.zero(self.degree, exact=True)
            for p, a in zip(self.points, self.coefficients):
                total = total + power_of_linear(p.coords, self.degree).scale(to_exact(a))
            return total
        vec = veronese_matrix(self.points, self.degree, unit=False) @ np.array(
            [complex(a) for a in self.coefficients], dtype=np.complex128
        )
        return TernaryForm.from_dense(self.degree, vec, exact=False)

    def drop(self, index: int) -> "WaringExpression":
        pts = [p for i, p in enumerate(self.points) if i != index]
        cs = [a for i, a in enumerate(self.coefficients) if i != index]
        return WaringExpression(PointSet(pts), tuple(cs), self.degree)


# ---------------------------------------------------------------------------
# JSON


def _format_coord(v):
    return format_scalar(v)


def pointset_to_json(Z: PointSet) -> dict:
    return {"points": [[_format_coord(c) for c in p.coords] for p in Z]}


def pointset_from_json(obj) -> PointSet:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        raw = obj["points"]
    except (KeyError, TypeError):
        raise PreconditionError("point set JSON needs a 'points' array") from None
    pts = []
    for row in raw:
        coords = [parse_scalar(c) for c in row]
        if len(coords) != 3:
            raise PreconditionError(f"point {row!r} does not have three coordinates")
        if not all(isinstance(c, Fraction) for c in coords):
            coords = [complex(c) for c in coords]
        pts.append(coords)
    return PointSet(pts)


def expression_to_json(expr: WaringExpression) -> dict:
    out = pointset_to_json(expr.points)
    out["degree"] = expr.degree
    out["coefficients"] = [format_scalar(a) for a in expr.coefficients]
    return out


def expression_from_json(obj) -> WaringExpression:
    if isinstance(obj, str):
        obj = json.loads(obj)
    reps = []
    for row in obj["points"]:
        coords = [parse_scalar(c) for c in row]
        if not all(isinstance(c, Fraction) for c in coords):
            coords = [complex(c) for c in coords]
        reps.append(coords)
    coeffs = [parse_scalar(a) for a in obj["coefficients"]]
    if not all(isinstance(a, Fraction) for a in coeffs) or not all(
        isinstance(c, Fraction) for r in reps for c in r
    ):
        coeffs = [complex(a) for a in coeffs]
    return WaringExpression.from_representatives(reps, coeffs, int(obj.get("degree", 6)))
