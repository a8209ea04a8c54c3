"""Catalecticant matrices and graded pieces of the apolar ideal."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List

import numpy as np

from . import linalg
from .errors import DegreeMismatch
from .polycore import TernaryForm, exp_factorial, exponent_index, exponents


@lru_cache(maxsize=None)
def _cat_tables(d: int, k: int):
    rows = exponents(d - k)
    cols = exponents(k)
    idx6 = exponent_index(d)
    index = np.empty((len(rows), len(cols)), dtype=np.int64)
    weight = np.empty((len(rows), len(cols)), dtype=object)
    for i, b in enumerate(rows):
        for j, a in enumerate(cols):
            e = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
            index[i, j] = idx6[e]
            weight[i, j] = exp_factorial(e)
    return index, weight, weight.astype(np.float64)


def catalecticant_from_dense(vec: np.ndarray, d: int, k: int) -> np.ndarray:
    """Catalecticant of the degree-``d`` form with coefficient vector ``vec``."""
    index, weight, fweight = _cat_tables(d, k)
    if vec.dtype == object:
        return vec[index] * weight
    return np.asarray(vec, dtype=np.complex128)[index] * fweight


@dataclass(frozen=True)
class CatalecticantMatrix:
    """Matrix of ``D -> D(F)`` from degree-``k`` operators to degree ``d - k`` forms.

    Columns are indexed by degree-``k`` dual monomials, rows by degree
    ``d - k`` monomials, and the entry at ``(b, a)`` is the constant
    ``d^(a+b) F``.  Multiplying a dual coefficient vector gives the image
    in derivative coordinates (the coefficient of ``x^b`` times ``b!``).
    """

    k: int
    degree: int
    matrix: np.ndarray

    @property
    def exact(self) -> bool:
        return linalg.is_exact(self.matrix)

    def rank(self, tol: float = linalg.DEFAULT_TOL) -> int:
        return linalg.rank(self.matrix, tol)

    def determinant(self):
        return linalg.determinant(self.matrix)


def catalecticant(F: TernaryForm, k: int) -> CatalecticantMatrix:
    if not 0 <= k <= F.degree:
        raise DegreeMismatch(f"order {k} outside [0, {F.degree}]")
    return CatalecticantMatrix(k, F.degree, catalecticant_from_dense(F.dense(), F.degree, k))


def apolar_component(F: TernaryForm, k: int, tol: float = linalg.DEFAULT_TOL) -> List[TernaryForm]:
    """Basis of the degree-``k`` operators annihilating ``F``."""
    cat = catalecticant(F, k)
    return [TernaryForm.from_dense(k, v, exact=F.exact) for v in linalg.kernel_basis(cat.matrix, tol)]


def polar_dim(F: TernaryForm, k: int, tol: float = linalg.DEFAULT_TOL) -> int:
    """Projective dimension of the ``k``-polar space; -1 for the zero form."""
    if F.is_zero():
        return -1
    return catalecticant(F, k).rank(tol) - 1
