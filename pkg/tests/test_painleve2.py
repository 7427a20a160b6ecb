import math

import numpy as np
import pytest

from gueedge.errors import RegimeError
from gueedge.operators import airy_ops, painleve2
from gueedge.operators.specfun import airy_ai


def test_left_asymptote():
    assert painleve2.left_asymptote(-6.0) == pytest.approx(math.sqrt(3.0) * (1 - 1 / 1728), rel=1e-14)


def test_grid_covers_default_interval(hm_grid):
    assert hm_grid.s_min == -12.0
    assert hm_grid.s_max == 8.0
    assert np.all(np.diff(hm_grid.abscissae) > 0)
    assert np.all(hm_grid.q > 0)


def test_painleve_residual_on_mesh(hm_grid):
    interior = hm_grid.abscissae[1:-1]
    assert np.max(painleve2.painleve_residual(hm_grid, interior)) < 1e-8


def test_right_boundary_follows_airy(hm_grid):
    q, _, _, _ = painleve2.evaluate(hm_grid, 6.0)
    assert q[0] / airy_ai(6.0) == pytest.approx(1.0, abs=1e-6)


def test_left_boundary_follows_asymptote(hm_grid):
    q, _, _, _ = painleve2.evaluate(hm_grid, -6.0)
    assert q[0] / math.sqrt(3.0) == pytest.approx(1.0, abs=5e-3)


@pytest.mark.parametrize("s", [-8.0, -3.0, 0.0, 2.0, 5.0])
def test_q_matches_resolvent_route(hm_grid, s):
    q, _, _, _ = painleve2.evaluate(hm_grid, s)
    assert q[0] == pytest.approx(airy_ops.functionals(s).q[0], abs=1e-6)


def test_derive_aux(hm_grid):
    aux = painleve2.derive_aux(hm_grid)
    assert aux.abscissae.shape == aux.u.shape == aux.v.shape == aux.p.shape
    assert abs(aux.u[-1]) < 1e-10
    np.testing.assert_allclose(aux.u * aux.u - 2 * aux.v, hm_grid.q ** 2, atol=1e-12)


def test_v_derivative_is_minus_pq(hm_grid):
    h = 1e-4
    s = np.array([-4.0, -1.0, 0.5, 3.0])
    q, p, _, _ = painleve2.aux_at(hm_grid, s)
    _, _, _, v_hi = painleve2.aux_at(hm_grid, s + h)
    _, _, _, v_lo = painleve2.aux_at(hm_grid, s - h)
    np.testing.assert_allclose((v_hi - v_lo) / (2 * h) + p * q, 0.0, atol=1e-6)


def test_aux_matches_resolvent_route(hm_grid):
    f = airy_ops.functionals(0.0)
    q, p, u, v = painleve2.aux_at(hm_grid, 0.0)
    assert u[0] == pytest.approx(f.u[0], abs=1e-6)
    assert v[0] == pytest.approx(f.v[0], abs=1e-6)
    assert p[0] == pytest.approx(f.p[0], abs=1e-6)


def test_f2_from_q(hm_grid):
    assert painleve2.f2_from_q(hm_grid, hm_grid.s_max) == pytest.approx(1.0, abs=1e-10)
    assert painleve2.f2_from_q(hm_grid, 0.0) == pytest.approx(airy_ops.f2_cdf(0.0), abs=1e-7)
    ladder = [painleve2.f2_from_q(hm_grid, s) for s in np.linspace(-8.0, 4.0, 10)]
    assert all(a < b for a, b in zip(ladder, ladder[1:]))


def test_f2_from_q_right_of_grid(hm_grid):
    assert painleve2.f2_from_q(hm_grid, 9.0) == 1.0
    assert airy_ops.f2_cdf(12.0, "q-integral") == 1.0
    assert airy_ops.f2_cdf(9.0, "determinant") == pytest.approx(1.0, abs=1e-12)


def test_out_of_regime(hm_grid):
    with pytest.raises(RegimeError):
        painleve2.f2_from_q(hm_grid, -13.0)
    with pytest.raises(RegimeError):
        painleve2.evaluate(hm_grid, 9.0)
    with pytest.raises(RegimeError):
        painleve2.hm_solve(s_min=-13.0)
    with pytest.raises(RegimeError):
        painleve2.hm_solve(s_max=5.0)
    with pytest.raises(RegimeError):
        painleve2.hm_solve(npts=5)


@pytest.mark.slow
def test_refined_solve_agrees():
    coarse = painleve2.hm_solve(-10.0, 8.0, 300)
    fine = painleve2.hm_solve(-10.0, 8.0, 1200)
    q_coarse, _, _, _ = painleve2.evaluate(coarse, 0.0)
    q_fine, _, _, _ = painleve2.evaluate(fine, 0.0)
    assert q_coarse[0] == pytest.approx(q_fine[0], abs=1e-9)
