"""Dense linear algebra over exact rationals and complex doubles.

A matrix is a 2-D numpy array.  ``dtype=object`` arrays hold
:class:`~fractions.Fraction` entries and are treated exactly; any numeric
dtype is treated as floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import NotSquare, PreconditionError

DEFAULT_TOL = 1e-9


def is_exact(M) -> bool:
    return isinstance(M, np.ndarray) and M.dtype == object


def exact_array(rows) -> np.ndarray:
    """Build an object array of Fractions from nested sequences."""
    arr = np.array(rows, dtype=object)
    flat = arr.reshape(-1)
    for i, v in enumerate(flat):
        if not isinstance(v, Fraction):
            flat[i] = Fraction(v)
    return arr


def exact_identity(n: int) -> np.ndarray:
    return exact_array([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def exact_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.reshape(-1)[:] = [Fraction(0)] * out.size
    return out


def to_float(M) -> np.ndarray:
    if is_exact(M):
        flat = [complex(v.numerator / v.denominator) for v in M.reshape(-1)]
        return np.array(flat, dtype=np.complex128).reshape(M.shape)
    return np.asarray(M, dtype=np.complex128)


def _integer_rows(M) -> Tuple[List[List[int]], int]:
    """Clear denominators row by row; returns integer rows and the product of
    the row multipliers."""
    rows = []
    scale = 1
    for row in M:
        den = 1
        for v in row:
            den = den * v.denominator // gcd(den, v.denominator)
        rows.append([int(v * den) for v in row])
        scale *= den
    return rows, scale


def _bareiss(rows: List[List[int]], full: bool) -> Tuple[int, int]:
    """Fraction-free elimination in place.

    Returns ``(rank, sign)`` where ``sign`` tracks row swaps.  When ``full``
    is set the elimination stops at the first missing pivot (determinant use).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    prev = 1
    r = 0
    sign = 1
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            if full:
                return r, 0
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        pr = rows[r]
        p = pr[c]
        for i in range(r + 1, m):
            ri = rows[i]
            a = ri[c]
            if a == 0:
                for j in range(c + 1, n):
                    ri[j] = (p * ri[j]) // prev
            else:
                for j in range(c + 1, n):
                    ri[j] = (p * ri[j] - a * pr[j]) // prev
            ri[c] = 0
        prev = p
        r += 1
    return r, sign


def rank(M, tol: float = DEFAULT_TOL) -> int:
    """Rank by Bareiss elimination (exact) or relative singular-value cutoff."""
    M = np.asarray(M) if not isinstance(M, np.ndarray) else M
    if M.size == 0:
        return 0
    if is_exact(M):
        rows, _ = _integer_rows(M)
        r, _ = _bareiss(rows, full=False)
        return r
    s = np.linalg.svd(np.asarray(M, dtype=np.complex128), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def singular_values(M) -> np.ndarray:
    return np.linalg.svd(to_float(M), compute_uv=False)


def rref(M) -> Tuple[np.ndarray, List[int]]:
    """Reduced row-echelon form over the rationals and its pivot columns."""
    A = [list(row) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        if p != 1:
            A[r] = [v / p for v in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                a = A[i][c]
                Ar = A[r]
                A[i] = [x - a * y for x, y in zip(A[i], Ar)]
        pivots.append(c)
        r += 1
    out = exact_array(A) if m else exact_zeros((0, n))
    return out, pivots


def kernel_basis(M, tol: float = DEFAULT_TOL) -> List[np.ndarray]:
    """Basis of the right null space.

    Exact input gives the canonical RREF basis: one vector per free column,
    with a 1 in that column.
    """
    if is_exact(M):
        m, n = M.shape
        if m == 0:
            return [exact_array([1 if j == i else 0 for j in range(n)]) for i in range(n)]
        R, pivots = rref(M)
        free = [c for c in range(n) if c not in set(pivots)]
        basis = []
        for f in free:
            v = [Fraction(0)] * n
            v[f] = Fraction(1)
            for i, pc in enumerate(pivots):
                v[pc] = -R[i, f]
            basis.append(exact_array(v))
        return basis
    A = np.asarray(M, dtype=np.complex128)
    m, n = A.shape
    if m == 0:
        return [np.eye(n, dtype=np.complex128)[i] for i in range(n)]
    _, s, vh = np.linalg.svd(A)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return [vh[i].conj() for i in range(r, n)]


def kernel_matrix(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Null space basis as columns of a single array."""
    basis = kernel_basis(M, tol)
    n = M.shape[1]
    if not basis:
        return exact_zeros((n, 0)) if is_exact(M) else np.zeros((n, 0), dtype=np.complex128)
    return np.column_stack(basis)


def determinant(M):
    """Bareiss determinant (exact) or LU with partial pivoting (float)."""
    M = np.asarray(M) if not isinstance(M, np.ndarray) else M
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSquare(f"determinant of a {M.shape} matrix")
    n = M.shape[0]
    if n == 0:
        return Fraction(1) if is_exact(M) else 1.0 + 0j
    if is_exact(M):
        rows, scale = _integer_rows(M)
        r, sign = _bareiss(rows, full=True)
        if r < n:
            return Fraction(0)
        return Fraction(sign * rows[n - 1][n - 1], scale)
    return complex(np.linalg.det(np.asarray(M, dtype=np.complex128)))


_PRIME = 2_147_483_629


def _rank_mod_p(rows, p: int = _PRIME) -> int:
    A = np.array([[int(v) % p for v in row] for row in rows], dtype=np.int64)
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        col = A[r + 1 :, c].copy()
        # split the product so every intermediate stays below 2**63
        A[r + 1 :] = (A[r + 1 :] - (col[:, None] * (A[r] >> 16) % p * 65536 + col[:, None] * (A[r] & 0xFFFF)) % p) % p
        r += 1
    return r


def rank_mod_p(M, p: int = _PRIME) -> int:
    """Rank of an integer matrix modulo the prime ``p`` (a lower bound for its rank)."""
    return _rank_mod_p(M, p)


def is_singular(M, tol: float = DEFAULT_TOL) -> bool:
    """Singularity of a square matrix.

    Exact input is first reduced modulo a large prime; full rank there
    certifies a nonzero determinant, otherwise Bareiss elimination decides.
    """
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"singularity of a {M.shape} matrix")
    if is_exact(M):
        rows, _ = _integer_rows(M)
        if _rank_mod_p(rows) == M.shape[0]:
            return False
        return determinant(M) == 0
    return rank(M, tol) < M.shape[0]


def log_abs_determinant(M) -> float:
    """``log|det M|`` for float matrices, safe against overflow."""
    sign, logdet = np.linalg.slogdet(to_float(M))
    return float(logdet) if sign != 0 else -np.inf


def solve_least_squares(M, b) -> Tuple[np.ndarray, float]:
    """Minimize ``||M x - b||`` with a column-pivoted QR factorization.

    Rank-deficient columns (relative diagonal of R below 1e-12) get a zero
    component in the solution.
    """
    A = to_float(M)
    b = np.asarray(b)
    y = (to_float(b) if is_exact(b) else b.astype(np.complex128)).reshape(-1)
    m, n = A.shape
    if y.shape[0] != m:
        raise PreconditionError("right-hand side has the wrong length")
    if n == 0:
        return np.zeros(0, dtype=np.complex128), float(np.linalg.norm(y))
    Q, R, perm = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    k = int(np.sum(diag > 1e-12 * diag[0])) if diag.size and diag[0] > 0 else 0
    z = np.zeros(n, dtype=np.complex128)
    if k:
        rhs = Q[:, :k].conj().T @ y
        z[:k] = scipy.linalg.solve_triangular(R[:k, :k], rhs)
    x = np.zeros(n, dtype=np.complex128)
    x[perm] = z
    residual = float(np.linalg.norm(A @ x - y))
    return x, residual


def exact_matmul(A, B) -> np.ndarray:
    return np.asarray(A, dtype=object) @ np.asarray(B, dtype=object)


def subspace_intersection_dim(U, V, tol: float = 1e-8) -> int:
    """Dimension of the intersection of the column spans of ``U`` and ``V``."""
    U = to_float(U)
    V = to_float(V)
    return rank(U, tol) + rank(V, tol) - rank(np.hstack([U, V]), tol)


def orthonormal_basis(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    A = to_float(M)
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return u[:, :r]


def orthogonal_complement(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the column span."""
    A = to_float(M)
    u, s, _ = np.linalg.svd(A, full_matrices=True)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return u[:, r:]


def integer_vector(v: Sequence[Fraction]) -> List[int]:
    """Scale a rational vector to coprime integers."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints
