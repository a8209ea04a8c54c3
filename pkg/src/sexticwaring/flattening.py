"""The Young flattening of a ternary sextic and its degree-27 invariant.

``P_f`` is a 36 x 36 matrix whose rows and columns are indexed by pairs
``(alpha, i)``: ``alpha`` a degree-2 exponent and ``i`` a row or column of
the fixed 6 x 6 matrix ``B`` of quadratic operators.  Restricting it to the
27-dimensional complement of the derivation copy of ``End(C^3)`` gives
``A_f``, and ``H27 = det A_f``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Tuple

import numpy as np

from . import kernels, linalg
from .errors import WrongDegree
from .polycore import TernaryForm, exp_factorial, exponent_index, exponents

# Nonzero entries of B: (row, col) -> [(coefficient, exponent of z)].
B_ENTRIES: Dict[Tuple[int, int], List[Tuple[int, Tuple[int, int, int]]]] = {
    (0, 3): [(1, (0, 0, 2))],
    (0, 4): [(-2, (0, 1, 1))],
    (0, 5): [(1, (0, 2, 0))],
    (1, 1): [(-2, (0, 0, 2))],
    (1, 2): [(2, (0, 1, 1))],
    (1, 4): [(2, (1, 0, 1))],
    (1, 5): [(-2, (1, 1, 0))],
    (2, 1): [(2, (0, 1, 1))],
    (2, 2): [(-2, (0, 2, 0))],
    (2, 3): [(-2, (1, 0, 1))],
    (2, 4): [(2, (1, 1, 0))],
    (3, 0): [(1, (0, 0, 2))],
    (3, 2): [(-2, (1, 0, 1))],
    (3, 5): [(1, (2, 0, 0))],
    (4, 0): [(-2, (0, 1, 1))],
    (4, 1): [(2, (1, 0, 1))],
    (4, 2): [(2, (1, 1, 0))],
    (4, 4): [(-2, (2, 0, 0))],
    (5, 0): [(1, (0, 2, 0))],
    (5, 1): [(-2, (1, 1, 0))],
    (5, 3): [(1, (2, 0, 0))],
}


def B_matrix() -> List[List[TernaryForm]]:
    """``B`` as a 6 x 6 array of quadrics in the dual variables."""
    out = []
    for i in range(6):
        row = []
        for j in range(6):
            q = TernaryForm.zero(2)
            for c, e in B_ENTRIES.get((i, j), []):
                q = q + TernaryForm.monomial(e, c)
            row.append(q)
        out.append(row)
    return out


@lru_cache(maxsize=None)
def _pf_tables():
    """Scatter tables: ``P.flat[dst[k]] += weight[k] * f[src[k]]``."""
    E2 = exponents(2)
    idx6 = exponent_index(6)
    src, dst, wt = [], [], []
    for (i, j), terms in B_ENTRIES.items():
        for c, g in terms:
            for a, al in enumerate(E2):
                for b, be in enumerate(E2):
                    e = (al[0] + be[0] + g[0], al[1] + be[1] + g[1], al[2] + be[2] + g[2])
                    src.append(idx6[e])
                    dst.append((a * 6 + i) * 36 + b * 6 + j)
                    wt.append(c * exp_factorial(e))
    return (
        np.array(src, dtype=np.int64),
        np.array(dst, dtype=np.int64),
        np.array(wt, dtype=np.int64),
    )


def _check(F: TernaryForm) -> None:
    if F.degree != 6:
        raise WrongDegree(f"expected a sextic, got degree {F.degree}")


def build_Pf(F: TernaryForm) -> np.ndarray:
    """The 36 x 36 flattening; exact for rational input."""
    _check(F)
    src, dst, wt = _pf_tables()
    vec = F.dense()
    if F.exact:
        P = linalg.exact_zeros(36 * 36)
        for s, d, w in zip(src.tolist(), dst.tolist(), wt.tolist()):
            if vec[s]:
                P[d] += w * vec[s]
        return P.reshape(36, 36)
    return kernels.scatter(vec, src, wt.astype(np.complex128), dst, 36 * 36).reshape(36, 36)


@lru_cache(maxsize=None)
def derivation_matrix() -> np.ndarray:
    """36 x 9 integer matrix; column ``3a + b`` is ``E_ab`` acting on ``Sym^2``.

    ``E_ab`` sends ``x_b`` to ``x_a``; the 6 x 6 matrix of its action (rows
    indexed by the output monomial) is flattened row by row.
    """
    E2 = exponents(2)
    idx2 = exponent_index(2)
    D = np.zeros((36, 9), dtype=np.int64)
    for a in range(3):
        for b in range(3):
            M = np.zeros((6, 6), dtype=np.int64)
            for col, e in enumerate(E2):
                for t in range(3):
                    if t == b and e[t]:
                        ne = list(e)
                        ne[b] -= 1
                        ne[a] += 1
                        M[idx2[tuple(ne)], col] += e[t]
            D[:, 3 * a + b] = M.reshape(-1)
    D.setflags(write=False)
    return D


@lru_cache(maxsize=None)
def complement_basis() -> np.ndarray:
    """36 x 27 integer basis of the orthogonal complement of the derivation image."""
    Dt = linalg.exact_array(derivation_matrix().T.tolist())
    cols = [linalg.integer_vector(v) for v in linalg.kernel_basis(Dt)]
    Q = np.array(cols, dtype=np.int64).T
    Q.setflags(write=False)
    return Q


@lru_cache(maxsize=None)
def _orthonormal_complement() -> np.ndarray:
    Q, _ = np.linalg.qr(complement_basis().astype(np.float64))
    Q.setflags(write=False)
    return Q


def build_Af(F: TernaryForm) -> np.ndarray:
    """``Q^T P_f Q`` with the integer complement basis."""
    P = build_Pf(F)
    Q = complement_basis()
    if F.exact:
        # integer arithmetic on the cleared numerators is much faster than Fractions
        den = 1
        for v in P.reshape(-1):
            den = den * v.denominator // gcd(den, v.denominator)
        Pi = np.array([[int(v * den) for v in row] for row in P], dtype=object)
        Qo = Q.astype(object)
        Ai = Qo.T @ Pi @ Qo
        return np.array([[Fraction(int(v), den) for v in row] for row in Ai], dtype=object)
    return Q.T @ P @ Q


def H27(F: TernaryForm):
    """``det A_f``: exact for rational input, floating point otherwise."""
    return linalg.determinant(build_Af(F))


def h27_ratio(F: TernaryForm) -> float:
    """Smallest over largest singular value of ``A_f`` in an orthonormal basis.

    A scale-free measure of how close ``H27`` is to vanishing.
    """
    _check(F)
    if F.is_zero():
        return 0.0
    Q = _orthonormal_complement()
    A = Q.T @ build_Pf(F.to_complex()) @ Q
    s = np.linalg.svd(A, compute_uv=False)
    return float(s[-1] / s[0])


def _af_mod_p(F: TernaryForm, p: int) -> np.ndarray:
    vec = F.dense()
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = np.array([int(v * den) % p for v in vec], dtype=np.int64)
    src, dst, wt = _pf_tables()
    P = np.zeros(36 * 36, dtype=np.int64)
    np.add.at(P, dst, (wt % p) * ints[src] % p)
    P = P.reshape(36, 36) % p
    Q = complement_basis() % p
    return (Q.T @ ((P @ Q) % p)) % p


def h27_vanishes(F: TernaryForm, tol: float = 1e-9) -> bool:
    """Exact test for rational input, singular-value ratio test otherwise.

    Rational input is first reduced modulo a large prime: full rank there
    proves ``H27 != 0`` without building ``A_f`` over the rationals.
    """
    if F.exact:
        _check(F)
        if linalg.rank_mod_p(_af_mod_p(F, linalg._PRIME)) == 27:
            return False
        return H27(F) == 0
    return h27_ratio(F) < tol


def flattening_rank(F: TernaryForm, tol: float = 1e-9) -> int:
    if F.exact:
        return linalg.rank(build_Af(F))
    _check(F)
    Q = _orthonormal_complement()
    return linalg.rank(Q.T @ build_Pf(F.to_complex()) @ Q, tol)
