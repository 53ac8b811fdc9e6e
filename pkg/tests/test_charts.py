import math

import numpy as np
import pytest

from g2forge import EXACT, parse_salamon
from g2forge.charts import (
    SALAMON,
    ChartCheck,
    closure_check,
    coframe,
    default_structure_equations,
    determinant_check,
    fd_structure_check,
    gradient_function_check,
    group_element,
    group_params,
    maurer_cartan_check,
    sample_points,
)
from g2forge.errors import ToleranceExceeded

from conftest import SALAMON_H


def test_chart_algebra_matches_fixture():
    assert SALAMON == SALAMON_H
    # parseable and valid (Jacobi passes)
    parse_salamon(SALAMON, EXACT)


def test_identity_at_origin():
    assert np.allclose(group_element(np.zeros(7)), np.eye(7))


def test_diagonal_at_x7():
    m = group_element([0, 0, 0, 0, 0, 0, 1.0])
    e = math.e
    assert np.allclose(np.diag(m), [1, 1, e, 1 / e, 1 / e, 1 / e, 1])
    assert np.allclose(m - np.diag(np.diag(m)), 0)


def test_determinant_law():
    chk = determinant_check(samples=50, seed=3)
    assert chk.passed
    for x in sample_points(5, seed=11):
        assert abs(np.linalg.det(group_element(x)) - math.exp(-2 * x[6])) < 1e-10


def test_group_params_round_trip():
    for x in sample_points(20, seed=5):
        params = group_params(group_element(x))
        assert params is not None
        assert np.allclose(params, x, atol=1e-9)
    assert group_params(np.diag([2.0, 1, 1, 1, 1, 1, 1])) is None


def test_closure_under_multiplication():
    assert closure_check(samples=40, seed=9).passed


def test_coframe_at_origin():
    e = coframe(np.zeros(7))
    expected = np.zeros((7, 7))
    expected[0, 5] = 1.0  # e1 = dx6
    expected[1, 4] = -1.0  # e2 = -dx5
    expected[2, 1] = 1.0  # e3 = dx2
    expected[3, 0] = 1.0  # e4 = dx1
    expected[4, 3] = 2.0  # e5 = 2 dx4
    expected[5, 2] = 2.0  # e6 = 2 dx3
    expected[6, 6] = -1.0  # e7 = -dx7
    assert np.allclose(e, expected)


def test_coframe_invertible_everywhere():
    for x in sample_points(50, seed=13):
        e = coframe(x)
        assert np.max(np.abs(e @ np.linalg.inv(e) - np.eye(7))) < 1e-10


def test_maurer_cartan_consistency():
    chk = maurer_cartan_check(samples=100, step=1e-6, tol=1e-6, seed=7)
    assert chk.passed
    assert "identification" in chk.extra


def test_structure_equations_pass_defaults():
    chk = fd_structure_check(samples=100, step=1e-6, tol=1e-5, seed=7)
    assert chk.passed


def test_flat_generators_numerically():
    # de1 = de2 = de7 = 0: rows with empty equations must still pass
    eqs = default_structure_equations()
    assert eqs[0] == {} and eqs[1] == {} and eqs[6] == {}
    assert fd_structure_check(samples=40, seed=19).passed


def test_sign_sentinel_fails():
    eqs = default_structure_equations()
    eqs[2] = {(3, 7): 1.0}  # wrong sign on de3
    with pytest.raises(ToleranceExceeded) as err:
        fd_structure_check(samples=20, eqs=eqs)
    assert err.value.worst is not None


def test_residuals_scale_quadratically():
    coarse = fd_structure_check(samples=30, step=1e-3, tol=1e30, seed=7)
    fine = fd_structure_check(samples=30, step=1e-4, tol=1e30, seed=7)
    ratio = coarse.max_residual / fine.max_residual
    assert 25.0 <= ratio <= 400.0


def test_gradient_function_check_passes():
    assert gradient_function_check(samples=100, tol=1e-9, seed=7).passed


def test_gradient_components_at_origin():
    # df = 4 dx7 expressed in the coframe at x = 0 is -4 e^7, and raising the
    # index in the orthonormal frame keeps the same components
    e0 = coframe(np.zeros(7))
    df_dx = np.zeros(7)
    df_dx[6] = 4.0
    comps = df_dx @ np.linalg.inv(e0)
    expected = np.zeros(7)
    expected[6] = -4.0
    assert np.allclose(comps, expected, atol=1e-14)


def test_gradient_function_shift_invariance():
    # the constant drops under d; with a step this large the central
    # difference of a linear function carries no truncation term, so only
    # negligible round-off distinguishes the two shifts
    a = gradient_function_check(samples=40, seed=23, shift=0.0, step=1e-3)
    b = gradient_function_check(samples=40, seed=23, shift=5.0, step=1e-3)
    assert a.passed and b.passed
    assert abs(a.max_residual - b.max_residual) < 1e-9


def test_chart_check_require():
    failing = ChartCheck("demo", 1.0, {"point": None}, tol=1e-3)
    with pytest.raises(ToleranceExceeded):
        failing.require()
