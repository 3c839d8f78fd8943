import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwssolve.estimates import (
    EstimatePreconditionError,
    fourier_tail_bound,
    l_uniformity_experiment,
    leading_direction,
    operator_evaluator,
    verify_max_principle,
    verify_solution_estimate,
    weighted_sup_norm,
)
from pwssolve.fourier import assemble
from pwssolve.grids import NormSpec, SampleGrid, theta_grid
from pwssolve.polyring import LAM, MPoly, Poly
from pwssolve.pws import Level3Operator, Level3Vector, apply
from pwssolve.solver import solve_system

t = Poly([0, 1])
lam = Poly([0, 1], LAM)
one = Poly([1])
grid = SampleGrid()
coarse = SampleGrid(5.0, 21)


def test_weighted_sup_norm_examples():
    assert weighted_sup_norm(1, NormSpec(0, 0), grid) == pytest.approx(1)
    assert weighted_sup_norm(1, NormSpec(0, 1), grid) == pytest.approx(1)
    R = grid.R_max
    val = weighted_sup_norm(lam * lam, NormSpec(0, 1), grid)
    assert val < 1
    assert val == pytest.approx(1 - 1 / (1 + 2 * R * R))


def test_weight_factor_in_real_part():
    # e^{-r |Re λ|} with φ = e^{λ}: sup over the grid of e^{(1-r) Re λ}
    phi = lambda pts: np.exp(pts[:, 0])
    assert weighted_sup_norm(phi, NormSpec(1.0, 0), coarse) == pytest.approx(1)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.integers(0, 2))
def test_grid_refinement_monotone(cs, N):
    p = Poly(cs, LAM)
    g = SampleGrid(4.0, 9)
    assert weighted_sup_norm(p, NormSpec(0, N), g.refined()) >= weighted_sup_norm(p, NormSpec(0, N), g)


def test_operator_norm_is_spectral():
    P = Level3Operator([0, 0], [0], [[one, one]])
    ev = operator_evaluator(P)
    vals = ev(np.array([[0.3 + 0.1j]]))
    assert vals.shape == (1, 1, 2)
    assert weighted_sup_norm(P, NormSpec(0, 0), coarse) == pytest.approx(math.sqrt(2))


def test_max_principle_examples():
    res = verify_max_principle(1, lam, 0)
    assert res.holds and res.lhs == pytest.approx(1) and res.rhs == pytest.approx(1)
    res = verify_max_principle(7, 3 * lam ** 4, 0)
    assert abs(res.margin) < 1e-9
    res = verify_max_principle(lam, lam - 5, 0)
    assert res.holds and res.lhs == 0 and res.margin > 0
    with pytest.raises(ValueError):
        verify_max_principle(1, Poly((), LAM), 0)


def test_max_principle_reports_witness_on_violation():
    # a non-polynomial evaluator that peaks at the centre breaks the inequality
    f = lambda pts: np.where(np.abs(np.asarray(pts)[..., 0]) < 1e-9, 10.0, 0.0)
    res = verify_max_principle(f, lam, 0)
    assert not res.holds and res.witness is not None


def test_max_principle_accepts_even_polynomials():
    res = verify_max_principle(1, t - 1, 0.5)
    assert res.holds


def test_leading_direction_examples():
    l1, l2 = MPoly.variable(0, 2, LAM), MPoly.variable(1, 2, LAM)
    v = leading_direction(l1)
    assert abs(abs(v[0]) - 1) < 1e-12 and abs(v[1]) < 1e-12
    v = leading_direction(l1 * l2)
    np.testing.assert_allclose(np.abs(v), [1 / math.sqrt(2)] * 2, atol=1e-9)
    v = leading_direction(l1 * l1 + l2 * l2)
    assert abs(v[0] ** 2 + v[1] ** 2) > 0.5
    v = leading_direction(MPoly.variable(1, 2))  # t2 -> λ2²
    assert abs(abs(v[1]) - 1) < 1e-12
    with pytest.raises(ValueError):
        leading_direction(MPoly((), 2))


def test_leading_direction_three_variables():
    p = MPoly({(1, 1, 1): 1}, 3, LAM)
    v = leading_direction(p)
    assert abs(np.linalg.norm(v) - 1) < 1e-12
    assert abs(v[0] * v[1] * v[2]) > 0.1


def test_solution_estimate_examples():
    P = Level3Operator.identity([0])
    u = Level3Vector(0, [0], [one])
    assert verify_solution_estimate(P, u, u, NormSpec(0, 0), 0, grid) == pytest.approx(1)
    z = Level3Vector.zero(0, [0])
    assert verify_solution_estimate(P, z, z, NormSpec(0, 0), 0, grid) == 0


def test_solution_estimate_bezout_regression():
    P = Level3Operator([0, 0], [0], [[t - 1, t - 2]])
    w = Level3Vector(0, [0], [one])
    v = solve_system(P, w, 0, "row_induction").solution
    ratio = verify_solution_estimate(P, v, v, NormSpec(0, 1), 0, grid)
    # v = (1, -1) and P v = 1: the weighted sups are sqrt(2) and 1, both at λ = 0
    assert ratio == pytest.approx(1.4142135623730951, rel=1e-12)


def test_solution_estimate_zero_image_nonzero_v():
    P = Level3Operator([0, 0], [0], [[one, one]])
    u = Level3Vector.zero(0, [0, 0])
    v = Level3Vector(0, [0, 0], [one, -one])
    assert verify_solution_estimate(P, u, v, NormSpec(0, 0), 0, coarse) == math.inf


def test_solution_estimate_precondition():
    P = Level3Operator.identity([0])
    with pytest.raises(EstimatePreconditionError):
        verify_solution_estimate(P, Level3Vector(0, [0], [one]), Level3Vector(0, [0], [t]),
                                 NormSpec(0, 0), 0, coarse)


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0))
def test_solution_estimate_scaling_invariance(c):
    P = Level3Operator([2, 0], [0], [[one, t - 1]])
    u = Level3Vector(2, [2, 0], [t, one])
    v = solve_system(P, apply(P, u), 2).solution
    base = verify_solution_estimate(P, u, v, NormSpec(0, 1), 1, coarse)
    scaled = verify_solution_estimate(P, u.scale(c), v.scale(c), NormSpec(0, 1), 1, coarse)
    assert scaled == pytest.approx(base, rel=1e-12)


def test_tail_bound_examples():
    v0 = Level3Vector(0, [0], [t + 1])
    for p in range(4):
        rep = fourier_tail_bound(assemble({0: v0}), p, NormSpec(0, 2), coarse)
        row = rep.per_ktype[v0.ktype]
        assert row["lhs"] == pytest.approx(row["rhs"], rel=1e-12)
    v3 = Level3Vector(3, [1], [one])
    rep = fourier_tail_bound(assemble({3: v3}), 1, NormSpec(0, 1), coarse)
    row = rep.per_ktype[v3.ktype]
    assert row["lhs"] == pytest.approx(row["rhs"], rel=1e-12)
    assert rep.zp_norm == pytest.approx(10 * row["lhs"], rel=1e-12)
    empty = assemble({}, [0])
    rep = fourier_tail_bound(empty, 2, NormSpec(0, 0), coarse)
    assert rep.holds and rep.zp_norm == 0


def test_theta_grid_resolves_fourier_modes():
    th = theta_grid(10, 1)
    assert len(th) > 20
    assert theta_grid(2, 2).shape[1] == 2


def test_uniformity_report():
    P = Level3Operator([2, 0], [0], [[one, one]])
    rep = l_uniformity_experiment(P, range(-6, 7), NormSpec(0, 1), 0, coarse)
    assert [r["l"] for r in rep.table] == [-6, -4, -2, 0, 2, 4, 6]
    assert rep.skipped == [-5, -3, -1, 1, 3, 5]
    assert rep.max_over_median >= 1 and "not a verification" in rep.note
    assert set(rep.to_json()) >= {"table", "max_over_median", "factor", "within_factor"}
