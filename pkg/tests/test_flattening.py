from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from sexticwaring.engine import random_form
from sexticwaring.errors import WrongDegree
from sexticwaring.flattening import (
    B_matrix,
    H27,
    build_Af,
    build_Pf,
    complement_basis,
    derivation_matrix,
    flattening_rank,
    h27_ratio,
    h27_vanishes,
)
from sexticwaring.pointsets import PointSet, WaringExpression
from sexticwaring.polycore import TernaryForm, compose_linear, power_of_linear, random_rational_form

from . import oracles

# the 6 x 6 matrix of quadrics, copied by hand from the published presentation
PUBLISHED_B = """
0, 0, 0, z2**2, -2*z1*z2, z1**2
0, -2*z2**2, 2*z1*z2, 0, 2*z0*z2, -2*z0*z1
0, 2*z1*z2, -2*z1**2, -2*z0*z2, 2*z0*z1, 0
z2**2, 0, -2*z0*z2, 0, 0, z0**2
-2*z1*z2, 2*z0*z2, 2*z0*z1, 0, -2*z0**2, 0
z1**2, -2*z0*z1, 0, z0**2, 0, 0
"""


def test_B_matches_published_matrix():
    z = dict(zip(("z0", "z1", "z2"), oracles.X))
    rows = [[sp.sympify(c, locals=z) for c in line.split(",")] for line in PUBLISHED_B.strip().splitlines()]
    B = B_matrix()
    for i in range(6):
        for j in range(6):
            assert sp.expand(oracles.to_sympy(B[i][j]) - rows[i][j]) == 0, (i, j)


def test_B_is_symmetric():
    B = B_matrix()
    assert all(B[i][j] == B[j][i] for i in range(6) for j in range(6))


def test_flattening_is_symmetric():
    F = random_rational_form(6, np.random.default_rng(0))
    P = build_Pf(F)
    assert (P == P.T).all()
    A = build_Af(F)
    assert A.shape == (27, 27) and (A == A.T).all()


def test_complement_basis():
    Q = complement_basis()
    D = derivation_matrix()
    assert Q.shape == (36, 27) and D.shape == (36, 9)
    assert not (D.T @ Q).any()
    assert np.linalg.matrix_rank(np.hstack([Q, D]).astype(float)) == 36


@pytest.mark.parametrize("seed", range(3))
def test_equivariance_block_vanishes_exactly(seed):
    F = random_rational_form(6, np.random.default_rng(seed))
    P = build_Pf(F)
    Q = complement_basis().astype(object)
    D = derivation_matrix().astype(object)
    assert all(v == 0 for v in (Q.T @ P @ D).reshape(-1))


def test_power_has_flattening_rank_three():
    assert flattening_rank(TernaryForm.monomial((6, 0, 0), 1)) == 3
    assert flattening_rank(power_of_linear((1, 2, -1), 6)) == 3
    assert flattening_rank(power_of_linear((1, 2, -1), 6).to_complex()) == 3


@pytest.mark.parametrize("r", [4, 7, 8])
def test_low_rank_forms_annihilate_H27(r):
    F, _ = random_form(r, seed=r)
    assert H27(F) == 0
    assert h27_vanishes(F)
    assert h27_vanishes(F.to_complex())


def test_rank_nine_forms_do_not():
    F, _ = random_form(9, seed=0)
    assert H27(F) != 0
    assert not h27_vanishes(F)
    assert not h27_vanishes(F.to_complex())


def test_ratio_is_scale_free():
    F = random_rational_form(6, np.random.default_rng(4)).to_complex()
    assert abs(h27_ratio(F) - h27_ratio(F.scale(1e5 + 3e4j))) < 1e-12
    assert h27_ratio(TernaryForm.zero(6, exact=False)) == 0.0


def test_exact_invariance_under_unimodular_change():
    F = random_rational_form(6, np.random.default_rng(5), height=3)
    g = [[1, 2, 0], [0, 1, -1], [1, 1, 0]]  # det 1
    assert H27(compose_linear(F, g)) == H27(F)
    t = Fraction(3, 2)
    g2 = [[t, 0, 0], [0, 1, 0], [0, 0, 1]]
    # a general linear change multiplies H27 by det(g)^54
    assert H27(compose_linear(F, g2)) == t ** 54 * H27(F)


def test_float_path_agrees_within_conditioning():
    F, _ = random_form(9, seed=3)
    exact = float(H27(F))
    A = build_Af(F.to_complex())
    cond = np.linalg.cond(A)
    assert abs(complex(H27(F.to_complex())) - exact) <= 100 * cond * 1e-16 * abs(exact)


def test_nine_secant_identity_in_floating_point():
    # constancy holds to the accuracy the float determinant allows
    rng = np.random.default_rng(6)
    Z = PointSet([list(rng.standard_normal(3)) for _ in range(9)])
    vals = []
    for _ in range(3):
        k = rng.uniform(0.5, 2, 9)
        F = WaringExpression(Z, tuple(complex(v) for v in k), 6).form()
        vals.append(complex(H27(F)) / np.prod(k) ** 3)
    spread = max(abs(v - vals[0]) for v in vals) / abs(vals[0])
    assert spread < 1e-3


def test_degree_check():
    with pytest.raises(WrongDegree):
        build_Pf(TernaryForm.monomial((3, 0, 0), 1))
