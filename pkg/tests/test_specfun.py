import math

import numpy as np
import pytest

from gueedge.errors import RegimeError
from gueedge.operators import quad
from gueedge.operators.specfun import (
    airy_ai,
    airy_ai_prime,
    erf,
    hermite_phi,
    hermite_phi_block,
    hermite_phi_prime,
)


def _airy_asymptotic(x: float, terms: int = 8) -> float:
    zeta = 2.0 / 3.0 * x ** 1.5
    u, total = 1.0, 1.0
    for k in range(1, terms):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        total += (-1) ** k * u / zeta ** k
    return math.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x ** 0.25) * total


def test_airy_at_zero():
    assert airy_ai(0.0) == pytest.approx(0.355028053887817, abs=1e-13)
    assert airy_ai_prime(0.0) == pytest.approx(-0.258819403792807, abs=1e-13)


def test_airy_first_zero():
    assert abs(airy_ai(-2.33810741045977)) < 1e-12


def test_airy_matches_asymptotic_series():
    assert airy_ai(6.0) == pytest.approx(_airy_asymptotic(6.0), rel=1e-6)


def test_airy_prime_decays_faster_than_airy():
    assert airy_ai_prime(6.0) < 0.0
    assert abs(airy_ai_prime(6.0)) > airy_ai(6.0)


def test_airy_prime_central_difference():
    h = 1e-5
    fd = (airy_ai(h) - airy_ai(-h)) / (2 * h)
    assert fd == pytest.approx(airy_ai_prime(0.0), abs=1e-9)


def test_airy_ode_residual():
    x = np.linspace(-10.0, 10.0, 41)
    h = 1e-3

    def d(step):
        return (airy_ai_prime(x + step) - airy_ai_prime(x - step)) / (2 * step)

    second = (4.0 * d(h / 2) - d(h)) / 3.0
    assert np.max(np.abs(second - x * airy_ai(x))) < 1e-10


def test_airy_underflows_to_zero():
    assert airy_ai(200.0) == 0.0
    assert isinstance(airy_ai(1.0), float)
    assert airy_ai(np.array([0.0, 1.0])).shape == (2,)


def test_hermite_closed_forms():
    assert hermite_phi(0, 0.0) == pytest.approx(math.pi ** -0.25, abs=1e-15)
    assert hermite_phi(1, 0.0) == 0.0
    x = 0.7
    assert hermite_phi(1, x) == pytest.approx(
        math.sqrt(2.0) * x * math.pi ** -0.25 * math.exp(-x * x / 2), rel=1e-14
    )


def test_hermite_normalized_at_order_50():
    rule = quad.affine_rule(-30.0, 30.0, 600)
    assert rule.integrate(hermite_phi(50, rule.nodes) ** 2) == pytest.approx(1.0, abs=1e-10)


def test_hermite_orthonormality():
    rule = quad.affine_rule(-20.0, 20.0, 600)
    block = hermite_phi_block(0, 60, rule.nodes)
    gram = (block * rule.weights) @ block.T
    assert np.max(np.abs(gram - np.eye(61))) < 1e-9


@pytest.mark.parametrize("k", [0, 3, 7, 40])
def test_hermite_parity(k):
    x = np.linspace(0.1, 6.0, 13)
    np.testing.assert_allclose(hermite_phi(k, -x), (-1) ** k * hermite_phi(k, x), rtol=1e-12, atol=1e-300)


def test_hermite_no_overflow_near_turning_point():
    k = 2000
    x = np.array([math.sqrt(2 * k + 1) - 1.0, math.sqrt(2 * k + 1), math.sqrt(2 * k + 1) + 10.0])
    values = hermite_phi(k, x)
    assert np.all(np.isfinite(values))
    assert np.all(np.abs(values) < 1.0)
    assert abs(values[2]) < 1e-30


def test_hermite_prime_matches_central_difference():
    h = 1e-5
    x = np.linspace(-3.0, 3.0, 7)
    fd = (hermite_phi(5, x + h) - hermite_phi(5, x - h)) / (2 * h)
    np.testing.assert_allclose(hermite_phi_prime(5, x), fd, atol=1e-8)


def test_hermite_rejects_negative_order():
    with pytest.raises(RegimeError):
        hermite_phi(-1, 0.0)


def test_erf_values():
    assert erf(0.0) == 0.0
    assert erf(1.0) == pytest.approx(0.842700792949715, abs=1e-14)
    assert erf(10.0) == 1.0


def test_hermite_keeps_input_shape():
    X, Y = np.meshgrid(np.linspace(-2.0, 2.0, 5), np.linspace(0.0, 3.0, 4), indexing="ij")
    values = hermite_phi(3, X)
    assert values.shape == (5, 4)
    np.testing.assert_allclose(values.ravel(), hermite_phi(3, X.ravel()), rtol=1e-15)
    assert hermite_phi_prime(3, Y).shape == (5, 4)
    assert (hermite_phi(0, X) * hermite_phi(0, Y)).shape == (5, 4)
