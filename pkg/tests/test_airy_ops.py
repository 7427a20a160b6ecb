import math

import numpy as np
import pytest

from gueedge.errors import RegimeError
from gueedge.operators import airy_ops, painleve2, quad
from gueedge.operators.specfun import airy_ai, airy_ai_prime

IDENTITY_S = [-4.0, -2.0, 0.0, 2.0]


def test_airy_kernel_diagonal_at_zero():
    # K_Ai(0, 0) = Ai'(0)^2
    assert airy_ops.airy_kernel(0.0, 0.0) == pytest.approx(airy_ai_prime(0.0) ** 2, abs=1e-14)
    assert airy_ops.airy_kernel(0.0, 0.0) == pytest.approx(0.06698748377966, abs=1e-13)


def test_airy_kernel_is_exactly_symmetric():
    assert airy_ops.airy_kernel(1.3, -0.4) == airy_ops.airy_kernel(-0.4, 1.3)


def test_airy_kernel_integral_representation():
    rule = quad.truncated_halfline(0.0, 30.0, 200)
    expected = rule.integrate(airy_ai(0.5 + rule.nodes) * airy_ai(1.0 + rule.nodes))
    assert airy_ops.airy_kernel(0.5, 1.0) == pytest.approx(expected, abs=1e-9)


def test_airy_kernel_is_continuous_across_the_near_diagonal_band():
    x = 0.8
    inside = airy_ops.airy_kernel(x - 2.5e-7, x + 2.5e-7)
    outside = airy_ops.airy_kernel(x - 1e-6, x + 1e-6)
    assert inside == pytest.approx(outside, abs=1e-10)


def test_resolvent_far_right_is_identity():
    sample = airy_ops.build_resolvent(10.0)
    assert np.max(np.abs(sample.Q[0] - airy_ai(sample.rule.nodes))) < 1e-10


def test_resolvent_residual_and_positivity():
    assert airy_ops.build_resolvent(0.0).residual < 1e-10
    sample = airy_ops.build_resolvent(-2.0)
    assert np.all(np.diag(sample.R) > 0)


def test_resolvent_kernel_extension_matches_node_values():
    sample = airy_ops.build_resolvent(-1.0)
    nodes = sample.rule.nodes[::9]
    R = airy_ops.resolvent_kernel_at(sample, nodes, nodes)
    np.testing.assert_allclose(R, sample.R[::9, ::9], atol=1e-10)
    np.testing.assert_allclose(R, R.T, atol=1e-12)


def test_extend_moments_matches_node_values():
    sample = airy_ops.build_resolvent(-1.0)
    Q, P = airy_ops.extend_moments(sample, sample.rule.nodes)
    np.testing.assert_allclose(Q, sample.Q, atol=1e-12)
    np.testing.assert_allclose(P, sample.P, atol=1e-12)


def test_resolvent_inner_product_identities():
    for s in (-2.0, 0.0):
        residuals = airy_ops.resolvent_identity_residuals(airy_ops.build_resolvent(s))
        assert set(residuals) == {"Q0", "Q1", "Q2", "P0", "P1", "P2"}
        assert max(residuals.values()) < 1e-9


def test_regime_is_enforced():
    with pytest.raises(RegimeError):
        airy_ops.build_resolvent(-12.5)
    with pytest.raises(RegimeError):
        airy_ops.f2_cdf(-10.5)
    with pytest.raises(RegimeError):
        airy_ops.f2_cdf(0.0, method="series")


def test_functionals_vanish_to_the_right():
    f = airy_ops.functionals(10.0)
    assert f.max_abs() < 1e-7
    assert f.q[0] == pytest.approx(airy_ai(10.0), rel=1e-9)
    assert abs(f.u[0]) < 1e-18


def test_q_follows_airy_on_the_right(functionals_at):
    assert functionals_at(6.0).q[0] / airy_ai(6.0) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("s", [-3.0, 0.0, 3.0])
def test_q_dominates_airy(functionals_at, s):
    # Ai changes sign left of its first zero; q stays positive
    q = functionals_at(s).q[0]
    assert q >= airy_ai(s)
    assert q > 0.0


def test_u_is_the_integral_of_q_squared(functionals_at, hm_grid):
    _, _, u, _ = painleve2.evaluate(hm_grid, 0.0)
    assert functionals_at(0.0).u[0] == pytest.approx(u[0], abs=1e-8)


def test_as_dict_names_every_functional(functionals_at):
    d = functionals_at(0.0).as_dict()
    assert len(d) == 1 + 18
    assert d["vt1"] == functionals_at(0.0).vt[1]


@pytest.mark.parametrize("s", [-4.0, 0.0, 2.0])
def test_derivative_relations(s):
    h = 1e-4
    f = airy_ops.functionals(s)
    lo, hi = airy_ops.functionals(s - h), airy_ops.functionals(s + h)
    assert (hi.u[0] - lo.u[0]) / (2 * h) == pytest.approx(-f.q[0] ** 2, abs=1e-6)
    assert (hi.v[0] - lo.v[0]) / (2 * h) == pytest.approx(-f.p[0] * f.q[0], abs=1e-6)


@pytest.mark.parametrize("s", [-2.0, 0.0, 1.0])
def test_log_f2_second_derivative(s):
    h = 1e-4
    logs = [math.log(airy_ops.f2_cdf(x)) for x in (s - h, s, s + h)]
    second = (logs[0] - 2 * logs[1] + logs[2]) / h ** 2
    assert second == pytest.approx(-airy_ops.functionals(s).q[0] ** 2, abs=1e-6)


@pytest.mark.parametrize("s", IDENTITY_S)
def test_first_moment_identity(functionals_at, s):
    f = functionals_at(s)
    assert f.q[1] == pytest.approx(s * f.q[0] - f.v[0] * f.q[0] + f.u[0] * f.p[0], abs=1e-8)


@pytest.mark.parametrize("s", IDENTITY_S)
def test_u1_identity(functionals_at, s):
    f = functionals_at(s)
    assert abs(f.u[1] - f.u[0] * f.v[0] + f.w[0] + f.p[0] * f.q[0]) < 1e-8


@pytest.mark.parametrize("s", IDENTITY_S)
def test_commutator_identity(functionals_at, s):
    f = functionals_at(s)
    assert f.v[1] - f.vt[1] == pytest.approx(f.v[0] ** 2 - f.u[0] * f.w[0], abs=1e-8)


def test_symmetric_functionals_agree(functionals_at):
    f = functionals_at(-1.0)
    assert f.v[0] == pytest.approx(f.vt[0], abs=1e-12)


def test_functionals_refine_with_m():
    coarse = airy_ops.functionals(-2.0, m=100)
    fine = airy_ops.functionals(-2.0, m=200)
    for name in ("q", "p", "u", "v", "vt", "w"):
        np.testing.assert_allclose(getattr(coarse, name), getattr(fine, name), atol=1e-9)


def test_f2_limits():
    assert airy_ops.f2_cdf(8.0) == pytest.approx(1.0, abs=1e-12)
    assert 0.0 < airy_ops.f2_cdf(-9.0) < 1e-4


def test_f2_is_increasing():
    values = [airy_ops.f2_cdf(s) for s in np.linspace(-6.0, 4.0, 11)]
    assert all(a < b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("s", [-6.0, -4.0, -2.0, 0.0, 2.0])
def test_f2_routes_agree(s, hm_grid):
    assert airy_ops.f2_cdf(s, "determinant") == pytest.approx(
        painleve2.f2_from_q(hm_grid, s), abs=1e-7
    )
    assert airy_ops.f2_cdf(s, "q-integral") == pytest.approx(
        painleve2.f2_from_q(hm_grid, s), abs=1e-15
    )


def test_compose_integral_of_q_squared_is_u():
    value = airy_ops.compose_integral(lambda f: f.q[0] ** 2, 0.0)
    assert value == pytest.approx(airy_ops.functionals(0.0).u[0], abs=1e-8)


def test_functionals_many_preserves_order():
    values = airy_ops.functionals_many([1.0, -1.0, 0.5], workers=2)
    assert [f.s for f in values] == [1.0, -1.0, 0.5]
