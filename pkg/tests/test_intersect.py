from fractions import Fraction

import numpy as np
import pytest

from sexticwaring.errors import PositiveDimensional, WrongDegree
from sexticwaring.intersect import common_factor, intersect_cubics, intersect_curves
from sexticwaring.pointsets import PointSet, max_match_distance
from sexticwaring.polycore import TernaryForm, evaluate, exponents, linear_form, random_rational_form

x0, x1, x2 = (linear_form(v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
GRID = PointSet([(i, j, 1) for i in range(3) for j in range(3)])


def grid_cubics():
    a = x0 * (x0 - x2) * (x0 - x2.scale(2))
    b = x1 * (x1 - x2) * (x1 - x2.scale(2))
    return a, b


@pytest.mark.parametrize("exact", [True, False])
def test_grid_is_recovered(exact):
    a, b = grid_cubics()
    if not exact:
        a, b = a.to_complex(), b.to_complex()
    hits = intersect_cubics(a, b)
    assert [m for _, m in hits] == [1] * 9
    assert max_match_distance(PointSet([p for p, _ in hits]), GRID) < 1e-10


@pytest.mark.parametrize("seed", range(6))
def test_random_cubics_meet_in_nine_points(seed):
    rng = np.random.default_rng(seed)
    C1, C2 = random_rational_form(3, rng, 5), random_rational_form(3, rng, 5)
    for A, B in ((C1, C2), (C1.to_complex(), C2.to_complex())):
        hits = intersect_cubics(A, B, seed=seed)
        assert sum(m for _, m in hits) == 9
        for p, _ in hits:
            u = p.unit()
            for G in (A, B):
                g = G.to_complex()
                assert abs(complex(evaluate(g, u))) < 1e-9 * sum(abs(v) for v in g.dense())


@pytest.mark.parametrize("exact", [True, False])
def test_multiplicities(exact):
    cases = [
        (x0 ** 3, x1 ** 3, [9]),
        (x0 * x0 * x1, x1 ** 3 - x2 ** 3, [2, 2, 2, 3]),
        (x0 * x0 - x1 * x2, x1, [2]),
    ]
    for F1, F2, mult in cases:
        if not exact:
            F1, F2 = F1.to_complex(), F2.to_complex()
        hits = intersect_curves(F1, F2)
        assert sorted(m for _, m in hits) == mult
        assert sum(m for _, m in hits) == F1.degree * F2.degree


def test_bezout_for_mixed_degrees():
    rng = np.random.default_rng(11)
    F1, F2 = random_rational_form(2, rng, 4), random_rational_form(4, rng, 4)
    hits = intersect_curves(F1, F2)
    assert sum(m for _, m in hits) == 8


def test_common_factor():
    L = x0 + x1 - x2
    a = L * (x0 * x0 + x2 * x2)
    b = L * (x1 * x1 - x0 * x2)
    g = common_factor(a, b)
    assert g is not None and g.degree == 1
    assert common_factor(*grid_cubics()) is None
    assert common_factor(a.to_complex(), b.to_complex()) is not None
    with pytest.raises(PositiveDimensional):
        intersect_cubics(a, b)


def test_input_checks():
    with pytest.raises(WrongDegree):
        intersect_cubics(x0 * x1, x0 ** 3)
    with pytest.raises(PositiveDimensional):
        intersect_curves(TernaryForm.zero(3), x0 ** 3)
