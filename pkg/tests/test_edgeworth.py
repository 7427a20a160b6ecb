import numpy as np
import pytest

from gueedge.errors import RegimeError
from gueedge.models import AiryFunctionals, EdgeworthTerms, ScalingMap
from gueedge.operators import airy_ops, edgeworth, hermite_n


def synthetic(**values) -> AiryFunctionals:
    """Functionals that are zero except for entries like v0=1.0 or w1=1.0."""
    arrays = {name: np.zeros(3) for name in ("q", "p", "u", "v", "vt", "w")}
    for key, value in values.items():
        arrays[key[:-1]][int(key[-1])] = value
    return AiryFunctionals(s=0.0, **arrays)


# -- closed form ----------------------------------------------------------------


def test_ec2_v0_coefficient():
    assert edgeworth.ec2_from(synthetic(v0=1.0), 0.0) == pytest.approx(3.0)
    assert edgeworth.ec2_from(synthetic(v0=1.0), 1.0) == pytest.approx(-17.0)


@pytest.mark.parametrize("key, expected", [("w1", 2.0), ("u2", -3.0)])
def test_ec2_leading_terms(key, expected):
    assert edgeworth.ec2_from(synthetic(**{key: 1.0}), 0.0) == pytest.approx(expected)


def test_ec2_cubic_terms():
    assert edgeworth.ec2_from(synthetic(u0=2.0, v0=1.0), 0.0) == pytest.approx(3.0 + 2.0)
    assert edgeworth.ec2_from(synthetic(u0=2.0, w0=1.0), 0.0) == pytest.approx(-4.0)


def test_ec2_variants_differ_only_in_v1():
    f = synthetic(u0=1.0, v1=1.0)
    assert edgeworth.ec2_from(f, 0.0, "printed") == pytest.approx(-1.0)
    assert edgeworth.ec2_from(f, 0.0, "tilde") == pytest.approx(0.0)
    g = synthetic(u0=1.0, vt1=1.0)
    assert edgeworth.ec2_from(g, 0.0, "printed") == pytest.approx(0.0)
    assert edgeworth.ec2_from(g, 0.0, "tilde") == pytest.approx(-1.0)


def test_ec2_rejects_unknown_variant():
    with pytest.raises(RegimeError):
        edgeworth.ec2_from(synthetic(), 0.0, "other")


def test_ec2_vanishes_far_right():
    assert abs(edgeworth.ec2(10.0, 0.0)) < 1e-9


@pytest.mark.parametrize("c", [-0.5, 0.5, 1.0])
def test_ec2_c_dependence(c):
    f = airy_ops.functionals(0.0)
    shift = edgeworth.ec2_from(f, c) - edgeworth.ec2_from(f, 0.0)
    assert shift == pytest.approx(-20.0 * c * c * f.v[0], abs=1e-10)


# -- integral bracket -----------------------------------------------------------


def test_bracket_integrand_synthetic():
    assert edgeworth.bracket_integrand(synthetic(u1=1.0)) == pytest.approx(-5.0)
    assert edgeworth.bracket_integrand(synthetic(w0=1.0)) == pytest.approx(2.0)
    assert edgeworth.bracket_integrand(synthetic(u0=1.0, u2=1.0)) == pytest.approx(2.0)
    assert edgeworth.bracket_integrand(synthetic(v0=1.0, v1=2.0, v2=1.0)) == pytest.approx(-6.0)


def test_bracket_vanishes_far_right():
    assert abs(edgeworth.bracket_integral(10.0, 0.0)) < 1e-8


def test_bracket_c_dependence():
    v0 = airy_ops.functionals(0.0).v[0]
    shift = edgeworth.bracket_integral(0.0, 1.0) - edgeworth.bracket_integral(0.0, 0.0)
    assert shift == pytest.approx(20.0 * v0, abs=1e-10)


# -- assembled distribution ------------------------------------------------------


def test_assembled_orders():
    parts = EdgeworthTerms(s=0.0, c=1.0, f2=0.5, term1=0.2, term2_closed=-0.1, term2_integral=0.3)
    n = 64
    assert parts.assembled(n, 0) == 0.5
    assert parts.assembled(n, 1) == pytest.approx(0.5 * (1 + 0.2 / 4))
    assert parts.assembled(n, 2) == pytest.approx(0.5 * (1 + 0.2 / 4 - 0.1 / 16))
    assert parts.assembled(n, 2, integral=True) == pytest.approx(0.5 * (1 + 0.2 / 4 + 0.3 / 16))


def test_assembled_above_one_is_flagged_not_clamped(caplog):
    parts = EdgeworthTerms(s=4.0, c=1.0, f2=0.999, term1=0.2, term2_closed=0.0, term2_integral=0.0)
    value = parts.assembled(64, 1)
    assert value == pytest.approx(0.999 * 1.05)
    assert "exceeds 1" in caplog.text


def test_terms_without_integral():
    parts = edgeworth.terms(0.0, 0.0)
    assert parts.term1 == 0.0
    assert np.isnan(parts.term2_integral)
    assert parts.f2 == pytest.approx(airy_ops.f2_cdf(0.0, "determinant"), rel=1e-14)


def test_order0_is_tracy_widom():
    assert edgeworth.edgeworth_cdf(64, 1.0, -1.0, order=0) == pytest.approx(
        airy_ops.f2_cdf(-1.0, "determinant"), rel=1e-14
    )


def test_order1_equals_order0_without_shift():
    assert edgeworth.edgeworth_cdf(64, 0.0, 0.5, order=1) == edgeworth.edgeworth_cdf(64, 0.0, 0.5, order=0)


def test_first_order_improves_at_n64():
    exact = hermite_n.cdf_fredholm(64, ScalingMap(64, 1.0).tau(0.0))
    order0 = edgeworth.edgeworth_cdf(64, 1.0, 0.0, order=0)
    order1 = edgeworth.edgeworth_cdf(64, 1.0, 0.0, order=1)
    assert abs(order1 - exact) < abs(order0 - exact)


@pytest.mark.parametrize("n, order", [(0, 2), (16, 3)])
def test_edgeworth_cdf_rejects(n, order):
    with pytest.raises(RegimeError):
        edgeworth.edgeworth_cdf(n, 0.0, 0.0, order=order)


def test_order_estimate_needs_four_points():
    with pytest.raises(RegimeError):
        edgeworth.order_estimate(1.0, 0.0, [16, 32, 64])


# -- integrand expansion and identities -------------------------------------------


def test_integrand_first_term_vanishes_without_shift():
    a, _ = edgeworth.integrand_terms(airy_ops.functionals(-1.0), 0.0)
    assert a == 0.0


def test_integrand_terms_synthetic():
    a, b = edgeworth.integrand_terms(synthetic(p0=1.0, q0=1.0), 1.0)
    assert a == pytest.approx(2.0)
    # only the p^2 term survives, with coefficient 20c^2 - 5
    assert b == pytest.approx(15.0)


def test_first_term_identity():
    lhs, rhs = edgeworth.first_term_identity(0.0, 1.0)
    assert lhs == pytest.approx(rhs, abs=1e-5)


@pytest.mark.parametrize("s", [-2.0, 0.0])
def test_c_term_identity(s):
    lhs, rhs = edgeworth.c_term_identity(s)
    assert lhs == pytest.approx(rhs, abs=1e-5)


@pytest.mark.parametrize("s", [-2.0, 0.0])
def test_v_term_identity(s):
    lhs, rhs = edgeworth.v_term_identity(s)
    assert lhs == pytest.approx(rhs, abs=1e-5)


def test_matching_identity():
    lhs, rhs = edgeworth.matching_identity(0.0)
    assert lhs == pytest.approx(rhs, abs=1e-5)


@pytest.mark.slow
def test_adjudication_picks_printed():
    report = edgeworth.adjudicate()
    assert report.printed_passes
    assert not report.tilde_passes
    assert report.winner == edgeworth.DEFAULT_VARIANT == "printed"


@pytest.mark.slow
@pytest.mark.parametrize("s", [-4.0, -2.0, 0.0, 2.0])
def test_closed_and_integral_forms_assemble_alike(s):
    parts = edgeworth.terms(s, 0.5, with_integral=True)
    for n in (16, 64, 256):
        assert parts.assembled(n, 2) == pytest.approx(parts.assembled(n, 2, integral=True), abs=1e-5)


@pytest.mark.slow
def test_integrand_expansion_slope():
    report = edgeworth.integrand_expansion_check((64, 128, 256, 512, 1024), 0.5, (-1.0, 0.0, 1.0))
    assert report.fits[2].slope == pytest.approx(-1.0, abs=0.25)


@pytest.mark.slow
def test_order_slopes_with_shift():
    fits = edgeworth.order_estimate(1.0, 0.0, (16, 32, 64, 128, 256, 512))
    assert fits[0].slope == pytest.approx(-1.0 / 3.0, abs=0.1)
    assert fits[1].slope == pytest.approx(-2.0 / 3.0, abs=0.1)


@pytest.mark.slow
def test_order2_slope_with_half_shift():
    fits = edgeworth.order_estimate(0.5, 0.0, (16, 32, 64, 128, 256, 512))
    assert fits[2].slope == pytest.approx(-1.0, abs=0.25)


@pytest.mark.slow
def test_order2_remainder_is_smaller_without_shift():
    # the n^{-1} coefficient vanishes at c = 0, leaving n^{-4/3}
    fits = edgeworth.order_estimate(0.0, 0.0, (16, 32, 64, 128, 256, 512))
    assert fits[2].slope == pytest.approx(-4.0 / 3.0, abs=0.15)


@pytest.mark.slow
def test_first_order_sequence_settles():
    seq, limit = edgeworth.first_order_sequence(1.0, 0.0, (64, 256, 1024))
    steps = [abs(b - a) for a, b in zip(seq, seq[1:])]
    assert steps[1] < steps[0]
    assert abs(seq[-1] - limit) < abs(seq[0] - limit)
