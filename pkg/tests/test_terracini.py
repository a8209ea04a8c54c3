from fractions import Fraction

import numpy as np
import pytest

from sexticwaring import linalg
from sexticwaring.engine import random_form
from sexticwaring.errors import DegenerateCubicSystem
from sexticwaring.flattening import H27, h27_ratio
from sexticwaring.pointsets import ProjectivePoint
from sexticwaring.polycore import TernaryForm, exponents, power_of_linear
from sexticwaring.terracini import (
    N_value,
    R_det,
    check_lambda_N_squared,
    cubic_det,
    cubic_system_dim,
    lambda_spread,
    nonic_root_on_line,
    sixth_power_sum,
    terracini_matrix,
)

# det A_f / N^2 for f = sum p_i^6; frozen from an exact run, and identical
# for every general configuration
LAMBDA = 246865184190596510778200555429214581296852012892160000000000000000000000000000000

GRID = [(i, j, 1) for i in range(3) for j in range(3)]


def general(seed):
    return list(random_form(9, seed=seed)[1].points)


def test_lambda_is_a_universal_constant():
    for seed in range(4):
        lam, _ = check_lambda_N_squared(general(seed))
        assert lam == LAMBDA


def test_R_factors_as_C_squared_times_N():
    pts = general(1)
    N = N_value(pts)
    rng = np.random.default_rng(0)
    for _ in range(3):
        q = ProjectivePoint([Fraction(int(v)) for v in rng.integers(-9, 10, 3)])
        assert R_det(pts, q) == cubic_det(pts + [q]) ** 2 * N


def test_N_is_independent_of_auxiliary_point_exactly():
    pts = general(2)
    assert N_value(pts, aux=[1, 2, 3]) == N_value(pts, aux=[-4, 1, 7])


def test_cubic_det_vanishes_on_a_common_cubic():
    pts = GRID + [(3, 0, 1)]
    # nine of the ten points span a pencil, so some cubic passes through all ten
    assert cubic_det(pts) == 0
    assert cubic_system_dim(GRID) == 2
    assert cubic_system_dim(general(0)) == 1


def test_terracini_rank():
    assert linalg.rank(terracini_matrix(general(3))) == 27
    assert linalg.rank(terracini_matrix(GRID)) <= 26


def test_terracini_kernel_is_cubic_squared():
    pts = general(4)
    T = terracini_matrix(pts)
    K = linalg.kernel_basis(T)
    assert len(K) == 1
    rows = linalg.exact_array([[p.coords[0] ** e[0] * p.coords[1] ** e[1] * p.coords[2] ** e[2] for e in exponents(3)] for p in pts])
    c = linalg.kernel_basis(rows)[0]
    C = TernaryForm.from_dense(3, list(c), exact=True)
    sq = (C * C).dense()
    # proportional vectors
    i = next(j for j in range(28) if sq[j] != 0)
    assert all(K[0][j] * sq[i] == sq[j] * K[0][i] for j in range(28))


def test_degenerate_sets_are_rejected():
    with pytest.raises(DegenerateCubicSystem):
        N_value(GRID)
    with pytest.raises(ValueError):
        N_value(GRID[:8])
    with pytest.raises(ValueError):
        cubic_det(GRID)


def test_sixth_power_sum():
    pts = general(5)
    expected = TernaryForm.zero(6)
    for p in pts:
        expected = expected + power_of_linear(p.coords, 6)
    assert sixth_power_sum(pts) == expected


def test_float_lambda_agrees_with_exact():
    pts = [ProjectivePoint([float(c) for c in p.coords]) for p in general(6)]
    lam, _ = check_lambda_N_squared(pts)
    assert abs(complex(lam) - LAMBDA) < 1e-6 * LAMBDA
    assert lambda_spread([LAMBDA, LAMBDA]) == 0.0


def test_nonic_root_makes_H27_vanish():
    rng = np.random.default_rng(7)
    pts8 = [ProjectivePoint(list(rng.standard_normal(3))) for _ in range(8)]
    p9 = nonic_root_on_line(pts8, seed=1)
    assert h27_ratio(sixth_power_sum(pts8 + [p9])) < 1e-6
    # a generic ninth point does not
    q = ProjectivePoint(list(rng.standard_normal(3)))
    assert h27_ratio(sixth_power_sum(pts8 + [q])) > 1e-6


def test_H27_equals_lambda_N_squared_on_each_set():
    pts = general(7)
    assert H27(sixth_power_sum(pts)) == LAMBDA * N_value(pts) ** 2
