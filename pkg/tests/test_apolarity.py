from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from sexticwaring.apolarity import apolar_component, catalecticant, polar_dim
from sexticwaring.errors import DegreeMismatch
from sexticwaring.pointsets import PointSet, WaringExpression
from sexticwaring.polycore import TernaryForm, apply_operator, exp_factorial, exponents, power_of_linear, random_rational_form

from . import oracles


@pytest.mark.parametrize("k", [1, 2, 3])
def test_catalecticant_matches_sympy(k):
    F = random_rational_form(6, np.random.default_rng(k), height=6)
    C = catalecticant(F, k).matrix
    ref = oracles.catalecticant(F, k)
    # rows: image monomials in derivative coordinates (coefficient times b!)
    scale = [exp_factorial(b) for b in exponents(6 - k)]
    got = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in row] for row in C])
    assert got == sp.diag(*scale) * ref


def test_catalecticant_is_symmetric_in_middle_degree():
    F = random_rational_form(6, np.random.default_rng(7))
    C = catalecticant(F, 3).matrix
    assert (C == C.T).all()


def test_catalecticant_of_power_has_rank_one():
    F = power_of_linear((1, -2, 3), 6)
    for k in range(7):
        assert catalecticant(F, k).rank() == 1
    assert polar_dim(F, 3) == 0


def test_apolar_component_annihilates():
    F = random_rational_form(4, np.random.default_rng(3))
    K = apolar_component(F, 3)
    assert len(K) == 10 - catalecticant(F, 3).rank()
    for D in K:
        assert apply_operator(D, F).is_zero()


def test_rank_of_sums_of_powers():
    rng = np.random.default_rng(4)
    for r in range(1, 11):
        pts = []
        while len(pts) < r:
            p = [Fraction(int(v)) for v in rng.integers(-6, 7, 3)]
            if any(p):
                pts.append(p)
        expr = WaringExpression(PointSet(pts), tuple(Fraction(1) for _ in pts), 6)
        assert catalecticant(expr.form(), 3).rank() == min(r, 10)


def test_x0_sixth_and_monomial_square():
    assert polar_dim(TernaryForm.monomial((6, 0, 0), 1), 3) == 0
    # (x0 x1 x2)^2 is apolar to x0^3, x1^3, x2^3
    K = apolar_component(TernaryForm.monomial((2, 2, 2), 1), 3)
    assert len(K) == 3
    assert polar_dim(TernaryForm.zero(6), 3) == -1


def test_float_path_agrees():
    F = random_rational_form(6, np.random.default_rng(5))
    assert catalecticant(F.to_complex(), 3).rank() == catalecticant(F, 3).rank()
    assert abs(complex(catalecticant(F.to_complex(), 3).determinant()) - float(catalecticant(F, 3).determinant())) < 1e-6 * abs(
        float(catalecticant(F, 3).determinant())
    )


def test_order_out_of_range():
    with pytest.raises(DegreeMismatch):
        catalecticant(TernaryForm.monomial((2, 0, 0), 1), 3)
