import math

import mpmath
import numpy as np
import pytest

from fracconvex.errors import DomainError
from fracconvex.exprlang import as_function
from fracconvex.fraccalc import FracOrder, caputo_left, caputo_limit_check, caputo_right
from fracconvex.specfun import gamma


def power_oracle(m, alpha, a, x):
    return float(mpmath.gamma(m + 1) / mpmath.gamma(m + 1 - alpha) * mpmath.mpf(x - a) ** (m - alpha))


def test_order_validation():
    assert FracOrder(1, 0.25).p == 0.75
    assert FracOrder.from_p(1.5) == FracOrder(2, 0.5)
    for bad in [(0, 0.5), (1, 1.0), (1, -0.1), (1.5, 0.2)]:
        with pytest.raises(DomainError):
            FracOrder(*bad)


def test_constant_has_zero_derivative():
    assert caputo_left("3", 1, 2) == 0.0
    assert caputo_right("3", 1, 2) == 0.0


def test_identity_left():
    assert caputo_left("x", 1, 2, FracOrder(1, 0.5)) == pytest.approx(1 / gamma(1.5), rel=1e-14)


def test_square_left():
    assert caputo_left("x^2", 0, 1, FracOrder(1, 0.5)) == pytest.approx(2 / gamma(2.5), rel=1e-12)


def test_identity_right():
    assert caputo_right("x", 1, 2, FracOrder(1, 0.5)) == pytest.approx(-1 / gamma(1.5), rel=1e-14)
    assert caputo_right("x", 0, 1, FracOrder(1, 0.0)) == pytest.approx(-1.0, rel=1e-14)


def test_against_high_resolution_quadrature():
    ref = mpmath.quad(lambda s: (2 - s) ** -0.3 * mpmath.exp(s), [1, 2]) / mpmath.gamma(0.7)
    assert caputo_left("exp(x)", 1, 2, FracOrder(1, 0.3)) == pytest.approx(float(ref), rel=1e-10)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("alpha", [round(0.1 * k, 1) for k in range(1, 10)])
def test_power_function_oracle(m, alpha):
    v = caputo_left(f"(x-1)^{m}", 1.0, 2.0, FracOrder(1, alpha))
    assert abs(v - power_oracle(m, alpha, 1.0, 2.0)) / power_oracle(m, alpha, 1.0, 2.0) <= 1e-6


def test_higher_order():
    # n = 2 integrates f'' = 6x against the kernel of exponent p - 1: 6 x^(1+p) / Gamma(2+p)
    order = FracOrder(2, 0.4)
    assert caputo_left("x^3", 0, 1.5, order) == pytest.approx(6 * 1.5 ** (1 + order.p) / gamma(2 + order.p), rel=1e-8)


def test_linearity(rng):
    for _ in range(10):
        c1, c2 = map(float, rng.uniform(-2, 2, 2))
        order = FracOrder(1, float(rng.uniform(0.05, 0.95)))
        lin, e0 = caputo_left(f"({c1!r})*exp(x) + ({c2!r})*x^2", 1, 2, order, full_output=True)
        a, e1 = caputo_left("exp(x)", 1, 2, order, full_output=True)
        b, e2 = caputo_left("x^2", 1, 2, order, full_output=True)
        assert abs(lin - c1 * a - c2 * b) <= e0 + abs(c1) * e1 + abs(c2) * e2 + 1e-13


def test_translation_invariance():
    order = FracOrder(1, 0.35)
    a = caputo_left("x^2*ln(x)", 1.0, 3.0, order)
    b = caputo_left("(x+0.5)^2*ln(x+0.5)", 0.5, 2.5, order)
    assert a == pytest.approx(b, rel=1e-9)


def test_callable_uses_finite_differences():
    v = caputo_left(lambda x: np.exp(x), 1, 2, FracOrder(1, 0.5))
    assert v == pytest.approx(caputo_left("exp(x)", 1, 2, FracOrder(1, 0.5)), rel=1e-7)


def test_limit_check_square():
    r = caputo_limit_check("x^2", 0.0, 1.0)
    assert r.at_alpha_near_1 == pytest.approx(2.0, rel=0.02)
    assert r.classical_derivative == 2.0
    assert r.at_alpha_near_0 == pytest.approx(1.0, rel=0.01)
    assert r.increment == 1.0


def test_limit_check_constant():
    r = caputo_limit_check("5", 0.0, 1.0)
    assert (r.at_alpha_near_1, r.classical_derivative, r.at_alpha_near_0, r.increment) == (0, 0, 0, 0)


@pytest.mark.parametrize("fn, args", [(caputo_left, (1, 1)), (caputo_left, (2, 1)), (caputo_right, (2, 1))])
def test_bad_bounds(fn, args):
    with pytest.raises(DomainError):
        fn("x", *args)
