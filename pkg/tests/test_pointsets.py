import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sexticwaring.errors import PreconditionError, ZeroPoint
from sexticwaring.pointsets import (
    HVector,
    PointSet,
    ProjectivePoint,
    WaringExpression,
    chordal_distance,
    expression_from_json,
    expression_to_json,
    h_vector,
    hilbert_function,
    ideal_component,
    is_complete_intersection_33,
    match_points,
    max_match_distance,
    pointset_from_json,
    pointset_to_json,
    satisfies_b1,
    satisfies_b3,
    span_membership,
)
from sexticwaring.polycore import evaluate, power_of_linear

from . import oracles

GRID = [(i, j, 1) for i in range(3) for j in range(3)]


def exact_points(rng, n, height=8):
    pts = []
    while len(pts) < n:
        raw = rng.integers(-height, height + 1, 3)
        if not raw.any():
            continue
        q = ProjectivePoint([Fraction(int(v)) for v in raw])
        if q not in pts:
            pts.append(q)
    return PointSet(pts)


def test_normalization_exact_and_float():
    p = ProjectivePoint([2, 4, 6])
    assert p.coords == (Fraction(1, 3), Fraction(2, 3), Fraction(1))
    assert p == ProjectivePoint([-1, -2, -3])
    q = ProjectivePoint([2.0, 4.0, 0.0])
    assert q.coords == (0.5, 1.0, 0.0)
    assert p.exact and not q.exact
    with pytest.raises(ZeroPoint):
        ProjectivePoint([0, 0, 0])
    with pytest.raises(PreconditionError):
        ProjectivePoint([1, 2])


def test_pointset_rejects_duplicates_and_is_immutable():
    with pytest.raises(PreconditionError):
        PointSet([[1, 0, 0], [2, 0, 0]])
    Z = PointSet(GRID)
    with pytest.raises(AttributeError):
        Z.points = ()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=6, max_size=6), st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_chordal_distance_is_projective(v, c):
    u, w = np.array(v[:3]), np.array(v[3:])
    if np.linalg.norm(u) < 1e-3 or np.linalg.norm(w) < 1e-3:
        return
    d = chordal_distance(u, w)
    assert 0 <= d <= 1 + 1e-12
    assert abs(chordal_distance(c * u, w) - d) < 1e-9
    assert chordal_distance(u, c * u) < 1e-7


def test_chordal_distance_resolves_tiny_separations():
    u = np.array([1.0, 0, 0])
    w = np.array([1.0, 1e-12, 0])
    assert abs(chordal_distance(u, w) - 1e-12) < 1e-18


def test_matching():
    Z = PointSet(GRID)
    rev = PointSet(list(reversed(GRID)))
    perm = match_points(Z, rev)
    assert perm == list(reversed(range(9)))
    assert max_match_distance(Z, rev) < 1e-15
    moved = PointSet([(i + 1e-3, j, 1.0) for i, j, _ in GRID])
    assert match_points(Z, moved, 1e-6) is None
    assert 1e-4 < max_match_distance(Z, moved) < 1e-2


@pytest.mark.parametrize("seed", range(4))
def test_hilbert_function_matches_sympy(seed):
    rng = np.random.default_rng(seed)
    Z = exact_points(rng, int(rng.integers(4, 12)))
    assert tuple(h_vector(Z)) == oracles.h_vector([p.coords for p in Z])


def test_hvectors_of_special_sets():
    assert h_vector(PointSet(GRID)) == (1, 2, 3, 2, 1)
    line = PointSet([(i, 1, 1) for i in range(5)])
    assert h_vector(line) == (1, 1, 1, 1, 1)
    conic = PointSet([(t * t, t, 1) for t in range(7)])
    assert h_vector(conic) == (1, 2, 2, 2)
    general = exact_points(np.random.default_rng(9), 9)
    assert h_vector(general) == (1, 2, 3, 3)
    assert hilbert_function(general, 3) == 9


def test_float_points_give_the_same_hvector():
    Z = PointSet([np.array(p, dtype=float) for p in GRID])
    assert h_vector(Z) == (1, 2, 3, 2, 1)


def test_ideal_component_vanishes():
    Z = PointSet(GRID)
    cubics = ideal_component(Z, 3)
    assert len(cubics) == 2
    for C in cubics:
        assert all(evaluate(C, p.coords) == 0 for p in Z)
    assert is_complete_intersection_33(Z)
    assert not is_complete_intersection_33(exact_points(np.random.default_rng(1), 9))


def test_hvector_type():
    h = HVector((1, 2, 3, 2, 1))
    assert h.total() == 9 and h[7] == 0
    with pytest.raises(PreconditionError):
        HVector((2, 1))


def test_union_predicates():
    assert satisfies_b1((1, 2, 3, 3, 3, 3, 2, 1), 6)
    assert not satisfies_b1((1, 2, 3, 4, 5, 3), 6)
    assert satisfies_b3((1, 2, 3, 3), (1, 2, 3, 3, 3, 3, 2, 1))


def test_span_membership_coefficients_refer_to_stored_representatives():
    pts = [(1, 2, 3), (0, 1, -1), (2, -1, 1)]
    coeffs = (Fraction(2), Fraction(-1, 3), Fraction(5))
    expr = WaringExpression.from_representatives(pts, coeffs, 6)
    F = expr.form()
    sm = span_membership(F, expr.points)
    assert sm.member
    assert np.allclose(sm.coefficients, [float(a) for a in expr.coefficients])
    other = power_of_linear((1, 1, 1), 6)
    assert not span_membership(other, expr.points).member


def test_from_representatives_absorbs_scale():
    expr = WaringExpression.from_representatives([(2, 4, 2)], [Fraction(1)], 6)
    assert expr.coefficients == (Fraction(64),)
    assert expr.form() == power_of_linear((2, 4, 2), 6)


def test_json_round_trips():
    Z = PointSet(GRID)
    assert pointset_from_json(json.dumps(pointset_to_json(Z))).points == Z.points
    F = PointSet([(0.5 + 1j, 2.0, 1.0), (1.0, 0.0, 0.0)])
    back = pointset_from_json(pointset_to_json(F))
    assert max_match_distance(back, F) == 0
    expr = WaringExpression(Z, tuple(Fraction(i, 7) for i in range(1, 10)), 6)
    again = expression_from_json(json.dumps(expression_to_json(expr)))
    assert again.form() == expr.form()
    with pytest.raises(PreconditionError):
        pointset_from_json({"pts": []})
