from fractions import Fraction

import numpy as np
import pytest

from sexticwaring.engine import (
    HilbertBurch,
    classify,
    construct_Wprime_form,
    decompose_via_kernel_cubics,
    hilbert_burch,
    random_form,
    refine_decomposition,
    second_decomposition,
    stratum_label,
    verify_expression,
    wprime_by_spans,
)
from sexticwaring.errors import (
    DegenerateConfiguration,
    KernelWrongSize,
    PreconditionError,
    WrongDegree,
    WrongHVector,
)
from sexticwaring.intersect import intersect_cubics
from sexticwaring.pointsets import PointSet, ProjectivePoint, WaringExpression, h_vector, max_match_distance
from sexticwaring.polycore import TernaryForm, apply_operator, evaluate, linear_form, power_of_linear
from sexticwaring.terracini import nonic_root_on_line, sixth_power_sum

GRID = PointSet([(i, j, 1) for i in range(3) for j in range(3)])
x0, x1, x2 = (linear_form(v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def grid_form():
    return WaringExpression(GRID, tuple(Fraction(k + 1, 3) for k in range(9)), 6)


def test_stratum_table():
    assert stratum_label(10, False) == "Generic10"
    assert stratum_label(9, False) == "S9"
    assert stratum_label(9, True) == "R"
    assert stratum_label(8, False) == "W"
    assert stratum_label(8, True) == "S8"
    assert stratum_label(7, False) == "Wprime"
    assert stratum_label(7, True) == "S7"
    assert stratum_label(3, True) == "LowRank(3)"


def test_classify_examples():
    assert classify(TernaryForm.monomial((2, 2, 2), 1)).label == "Wprime"
    assert classify(power_of_linear((1, 2, 3), 6)).label == "LowRank(1)"
    rep = classify(grid_form().form())
    assert (rep.rank_C3, rep.H27_vanishes, rep.label) == (8, False, "W")
    assert rep.expected_decompositions == 1
    assert classify(random_form(9, seed=0)[0]).expected_decompositions == 2
    assert rep.to_json()["label"] == "W"


def test_classify_R_stratum_on_the_nonic():
    rng = np.random.default_rng(3)
    pts8 = [ProjectivePoint(list(rng.standard_normal(3))) for _ in range(8)]
    p9 = nonic_root_on_line(pts8, seed=0)
    rep = classify(sixth_power_sum(pts8 + [p9]))
    assert rep.label == "R"


def test_classify_rejects_wrong_degree():
    with pytest.raises(WrongDegree):
        classify(TernaryForm.monomial((3, 0, 0), 1))


def test_verify_flags_redundant_expressions():
    expr = grid_form()
    v = verify_expression(expr.form(), expr)
    assert v.residual == 0 and v.non_redundant
    pts = list(GRID) + [ProjectivePoint([5, 7, 1])]
    padded = WaringExpression(PointSet(pts), expr.coefficients + (Fraction(0),), 6)
    assert not verify_expression(expr.form(), padded).non_redundant


def test_refine_recovers_perturbed_points():
    F, witness = random_form(9, seed=4)
    rng = np.random.default_rng(0)
    reps = [p.to_complex() + 1e-5 * rng.standard_normal(3) for p in witness.points]
    start = WaringExpression.from_representatives(reps, [complex(a) for a in witness.coefficients], 6)
    assert verify_expression(F, start).residual > 1e-6
    out = refine_decomposition(F, start)
    assert verify_expression(F, out).residual < 1e-10
    assert max_match_distance(out.points, witness.points) < 1e-9


def test_kernel_cubics_on_a_complete_intersection():
    expr = grid_form()
    out = decompose_via_kernel_cubics(expr.form())
    assert out.verdict == "Rank9_CI"
    assert max_match_distance(out.points, GRID) < 1e-10
    assert out.residual < 1e-10


def test_kernel_cubics_rank_eight():
    F, witness = random_form(8, seed=5)
    out = decompose_via_kernel_cubics(F)
    assert out.verdict == "Rank8" and len(out.expression) == 8
    assert max_match_distance(out.expression.points, witness.points) < 1e-8


def test_kernel_size_checks():
    with pytest.raises(KernelWrongSize):
        decompose_via_kernel_cubics(random_form(9, seed=1)[0])
    with pytest.raises(KernelWrongSize):
        decompose_via_kernel_cubics(TernaryForm.monomial((2, 2, 2), 1))


def test_random_form_is_seeded_and_has_the_requested_rank():
    F, w = random_form(9, seed=12)
    G, _ = random_form(9, seed=12)
    assert F == G and len(w) == 9
    assert w.form() == F
    with pytest.raises(PreconditionError):
        random_form(11)


def test_hilbert_burch_of_general_points():
    _, w = random_form(9, seed=2)
    hb = hilbert_burch(w.points)
    assert isinstance(hb, HilbertBurch)
    assert hb.syzygy_residual() == 0
    # the maximal minors generate the ideal, up to sign and scale
    for G in hb.minors():
        assert all(evaluate(G, p.coords) == 0 for p in w.points)
    assert all(evaluate(hb.cubic, p.coords) == 0 for p in w.points)
    with pytest.raises(WrongHVector):
        hilbert_burch(GRID)


@pytest.mark.parametrize("seed", [0, 7])
def test_liaison_round_trip(seed):
    F, w = random_form(9, seed=seed)
    out = second_decomposition(F, w)
    assert out.h_vector_union == (1, 2, 3, 3, 3, 3, 2, 1)
    assert out.min_distance > 1e-6
    assert verify_expression(F, out.expression).residual < 1e-8
    back = second_decomposition(F, out.points, seed=seed)
    assert max_match_distance(back.points, w.points) < 1e-6


def test_liaison_preconditions():
    F, w = random_form(9, seed=0)
    other = random_form(9, seed=1)[1].points
    with pytest.raises(PreconditionError):
        second_decomposition(F, other)
    with pytest.raises(WrongHVector):
        second_decomposition(grid_form().form(), GRID)


def test_wprime_from_fermat_cubics():
    C = [x0 ** 3 - x1 ** 3, x1 ** 3 - x2 ** 3, x0 ** 3 + x1 ** 3 + x2 ** 3]
    F = construct_Wprime_form(*C)
    assert set(F.coeffs) == {(2, 2, 2)}
    for D in C:
        assert apply_operator(D, F).is_zero()


def test_wprime_float_route_matches_exact():
    rng = np.random.default_rng([0, 3])
    C = [TernaryForm.from_dense(3, [Fraction(int(v)) for v in rng.integers(-5, 6, 10)]) for _ in range(3)]
    F = construct_Wprime_form(*C)
    A = PointSet([p for p, _ in intersect_cubics(C[0], C[1])])
    B = PointSet([p for p, _ in intersect_cubics(C[0], C[2])])
    G = wprime_by_spans(A, B)
    f = F.to_complex().dense()
    g = G.dense()
    cos = abs(np.vdot(f, g)) / (np.linalg.norm(f) * np.linalg.norm(g))
    assert cos > 1 - 1e-10


def test_wprime_rejects_bad_input():
    with pytest.raises(WrongDegree):
        construct_Wprime_form(x0 ** 2, x1 ** 3, x2 ** 3)
    L = x0 + x1
    with pytest.raises(DegenerateConfiguration):
        construct_Wprime_form(L * x0 * x0, L * x1 * x1, x2 ** 3)
