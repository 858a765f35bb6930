import numpy as np
import pytest

from fracconvex.convexity import (
    SampleGrid,
    check_abs_power,
    check_def1,
    check_def2,
    check_eq_a12,
    def1_sides,
    dyadic_chain,
)
from fracconvex.errors import DomainError
from fracconvex.exprlang import as_function
from fracconvex.verdict import VerdictKind


def test_default_grid_shape():
    g = SampleGrid.default()
    assert g.t_values[0] == 2.0 ** -20
    assert 0.5 in g.t_values and g.t_values[-1] == 1.0
    assert list(g.t_values) == sorted(set(g.t_values))


def test_grid_rejects_bad_t():
    with pytest.raises(DomainError):
        SampleGrid((0.0, 0.5))
    with pytest.raises(DomainError):
        SampleGrid((0.5, 1.5))


def test_pairs_deterministic_and_ordered():
    g = SampleGrid.default(seed=42)
    a, b = g.pairs((1, 3)), g.pairs((1, 3))
    assert np.array_equal(a, b)
    assert np.all(a[:, 1] < a[:, 0])
    assert tuple(a[0]) == (3.0, 1.0)


def test_def1_identity_fails_at_quarter():
    v = check_def1("x", (1, 2), 1.0, grid=SampleGrid((0.25,)), pairs=[(2.0, 1.0)])
    assert v.kind is VerdictKind.FAILS
    w = v.witness
    assert (w.lhs, w.rhs, w.margin) == (1.25, 1.0, 0.25)


def test_def1_constant_at_t_one():
    # at t = 1 the weight |t^p - (1-t)^p| equals 1, so rhs = 2c and the margin is c
    v = check_def1("3", (1, 2), 0.5, grid=SampleGrid((1.0,)))
    assert v.is_holds and v.min_margin == 3.0


def test_def1_identity_on_upper_half_of_t():
    # with f = x, p = 1 the bound reads t x + (1-t) y <= t x + (2t-1) y, true only for t >= 2/3
    grid = SampleGrid.default().restricted(0.5, 1.0)
    assert check_def1("x", (1, 2), 1.0, grid=grid).is_fails
    assert check_def1("x", (1, 2), 1.0, grid=SampleGrid.default().restricted(2 / 3, 1.0)).is_holds


def test_def1_witness_reevaluates():
    v = check_def1("x^2", (1, 3), 0.5)
    assert v.is_fails
    w = v.witness
    lhs, rhs = def1_sides(as_function("x^2"), w.t, w.x, w.y, 0.5)
    assert abs(lhs - w.lhs) <= 1e-12 and abs(rhs - w.rhs) <= 1e-12
    assert lhs - rhs > 0


def test_def1_reproducible():
    assert check_def1("exp(x)", (1, 2), 0.3) == check_def1("exp(x)", (1, 2), 0.3)


def test_def1_negative_function_is_indeterminate():
    v = check_def1("x - 1.5", (1, 2), 1.0)
    assert v.is_indeterminate and "negative" in v.reason


@pytest.mark.parametrize("p", [0.0, 1.5, -1.0])
def test_def1_rejects_bad_p_or_interval(p):
    with pytest.raises(DomainError):
        check_def1("x", (1, 2), p) if p != 0.0 else check_def1("x", (0.5, 2), 1.0)


def test_eq_a12_examples():
    assert check_eq_a12("x", (1, 2), 1.0, grid=SampleGrid((0.75,)), pairs=[(2.0, 1.0)]).is_holds
    assert check_eq_a12("x^2", (1, 2), 1.0, grid=SampleGrid((0.5,)), pairs=[(2.0, 1.0)]).min_margin == 0.25
    assert check_eq_a12("exp(x)", (1, 4), 0.7).is_holds


def test_eq_a12_drops_small_t():
    v = check_eq_a12("x", (1, 2), 1.0, grid=SampleGrid((0.1, 0.75)))
    assert v.is_holds


def test_def2_literal_printed_example():
    v = check_def2("x", 4, 2, 1.0, 1, literal=True)
    assert v.is_holds
    assert (v.witness.lhs, v.witness.rhs) == (1.5, 5.0)


def test_def2_corrected():
    v = check_def2("x", 8, 4, 1.0, 2, literal=False)
    assert (v.witness.lhs, v.witness.rhs) == (7.0, 21.0)


def test_def2_literal_leaves_domain():
    v = check_def2("x", 1, 1, 1.0, 1, literal=True)
    assert v.is_indeterminate and "0.5" in v.reason


@pytest.mark.parametrize("t1, t2, p, lhs, rhs", [(0.3, 0.3, 0.5, 0.0, 0.0), (1, 0, 0.5, 1.0, 1.0)])
def test_abs_power_examples(t1, t2, p, lhs, rhs):
    r = check_abs_power(t1, t2, p)
    assert (r.lhs, r.rhs, r.holds) == (lhs, rhs, True)


def test_abs_power_identity_case():
    r = check_abs_power(0.8, 0.3, 1.0)
    assert r.holds and r.lhs == pytest.approx(0.5) and r.rhs == pytest.approx(0.5)


def test_abs_power_zero_with_nonpositive_p():
    with pytest.raises(DomainError):
        check_abs_power(0.0, 0.5, -0.5)


@pytest.mark.parametrize("p", [0.1, 0.25, 0.5, 0.75, 1.0])
def test_abs_power_grid(p):
    t = np.linspace(0, 1, 200)
    t1, t2 = np.meshgrid(t, t)
    lhs = np.abs(t1 ** p - t2 ** p)
    rhs = np.abs(t1 - t2) ** p
    assert np.all(lhs <= rhs + 1e-12)


@pytest.mark.parametrize("p", [0.1, 0.25, 0.5, 0.75, 1.0])
def test_upper_half_fact(p):
    t = np.linspace(0.5, 1, 501)
    assert np.all(np.abs(2 * t - 1) ** p <= t ** p)


def test_dyadic_coefficients():
    assert [d.coefficient for d in dyadic_chain(4, 1.0)] == [0.5, 0.75, 0.875, 0.9375]
    assert dyadic_chain(1, 0.5)[0].coefficient == pytest.approx(0.7071067812, abs=1e-10)
    assert abs(dyadic_chain(21, 1.0)[-1].coefficient - 1) <= 1e-6


@pytest.mark.parametrize("p", [0.1, 0.5, 1.0])
def test_dyadic_coefficients_monotone(p):
    c = [d.coefficient for d in dyadic_chain(30, p)]
    assert all(a < b for a, b in zip(c, c[1:]))


def test_dyadic_margins_with_function():
    chain = dyadic_chain(4, 1.0, "x", 2.0, 1.0)
    # pattern form: f((2^k-1)/2^k x + y/2^k) vs (2^k-1)/2^k (f(x)+f(y))
    assert chain[3].pattern_margin == pytest.approx(0.9375 * 3 - (15 / 16 * 2 + 1 / 16))
    assert chain[0].a17_margin is None  # printed argument 0.75 lies below 1
