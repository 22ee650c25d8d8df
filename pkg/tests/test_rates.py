import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgreedy import (
    GreedyTrace,
    InputError,
    InsufficientDataError,
    SmoothnessClass,
    fit_algebraic,
    fit_exponential,
    fit_fill_decay,
    theorem4_constants,
    theoretical_curve,
)
from pgreedy.rates import default_window, fixed_rate_prefactor

N = np.arange(1, 201, dtype=float)


def test_algebraic_exact_recovery():
    fit = fit_algebraic(0.08 * N**-2.0)
    assert fit.c == pytest.approx(0.08, rel=1e-10)
    assert fit.p == pytest.approx(-2.0, abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_constant_trace():
    fit = fit_algebraic(np.full(40, 0.3))
    assert fit.p == pytest.approx(0.0, abs=1e-12)
    assert fit.c == pytest.approx(0.3, rel=1e-12)
    assert fit.r_squared == 1.0


@pytest.mark.parametrize("dim,c2,c3,n", [(1, 3.47, 1.22, 25), (2, 5.10, 1.80, 200), (3, 6.37, 2.31, 600)])
def test_exponential_exact_recovery(dim, c2, c3, n):
    k = np.arange(1, n + 1, dtype=float)
    # the default window drops values below sqrt(100 tau); keep the synthetic data above it
    fit = fit_exponential(c2 * np.exp(-c3 * k ** (1 / dim)), dim, window=(1, n))
    assert fit.c2 == pytest.approx(c2, rel=1e-10)
    assert fit.c3 == pytest.approx(c3, rel=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fill_decay_exact():
    fit = fit_fill_decay(N**-0.5)
    assert fit.p == pytest.approx(-0.5, abs=1e-12)
    fit = fit_fill_decay(2.0 / N)
    assert (fit.c, fit.p) == (pytest.approx(2.0, rel=1e-12), pytest.approx(-1.0, abs=1e-12))


def test_fill_decay_requires_column():
    with pytest.raises(InputError):
        fit_fill_decay(GreedyTrace.from_values(1 / N))


def test_fill_window_follows_power_column():
    power = np.concatenate([np.full(100, 1.0), np.full(100, 1e-9)])
    trace = GreedyTrace.from_values(power, 1 / N)
    assert fit_fill_decay(trace).window == default_window(power) == (51, 100)


def test_insufficient_data():
    with pytest.raises(InsufficientDataError):
        fit_algebraic([1.0, 0.5, 0.3], window=(2, 3))
    with pytest.raises(InsufficientDataError):
        fit_algebraic([1.0, 0.5])


def test_nonpositive_values_rejected():
    with pytest.raises(InputError):
        fit_algebraic([1.0, 0.5, 0.0, 0.1], window=(1, 4))


def test_default_window():
    # 20 rows: drop 5 burn-in rows, then stop before the first value with y^2 < 1e-13
    y = np.logspace(0, -9, 20)
    lo, hi = default_window(y, 1e-15)
    assert lo == 6
    assert y[hi - 1] ** 2 >= 1e-13 > y[hi] ** 2


def test_explicit_window():
    y = 0.5 * N**-1.5
    y[:10] = 1.0
    fit = fit_algebraic(y, window=(11, 200))
    assert fit.window == (11, 200)
    assert fit.p == pytest.approx(-1.5, abs=1e-10)


def test_fit_of_trace_uses_its_tolerance():
    y = np.logspace(0, -6, 30)
    strict = fit_exponential(GreedyTrace.from_values(y, tol_sq=1e-15), 1)
    loose = fit_exponential(GreedyTrace.from_values(y, tol_sq=1e-9), 1)
    assert loose.window[1] < strict.window[1]


def test_theorem4_examples():
    hc1, hc2, hc3 = theorem4_constants(1.0, 2.0, 8.0, beta=2, dim=1)
    assert hc1 == pytest.approx(2**8.5, rel=1e-14)
    assert hc1 == pytest.approx(362.0387, rel=1e-7)
    assert hc2 == pytest.approx(2.0, rel=1e-15)
    assert theorem4_constants(1.0, 2.0, 8.0, beta=2, dim=2)[2] == pytest.approx(2.0, rel=1e-15)


def test_theorem4_rejects_nonpositive():
    with pytest.raises(InputError):
        theorem4_constants(0.0, 1.0, 1.0, 2, 1)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.01, 10), st.floats(1.01, 1.5),
    st.sampled_from([0, 1, 2]), st.floats(1.0, 4.0), st.integers(1, 3),
)
def test_theorem4_monotone(c1, c2, c3, factor, which, beta, dim):
    base = [c1, c2, c3]
    bumped = list(base)
    bumped[which] *= factor
    assert theorem4_constants(*bumped, beta, dim)[which] > theorem4_constants(*base, beta, dim)[which]


def test_theoretical_curve_examples():
    fin = SmoothnessClass(2.0)
    assert theoretical_curve(fin, 1, 1.0, [4])[0] == pytest.approx(0.125, rel=1e-15)
    assert theoretical_curve(SmoothnessClass.infinite(), 1, (1.0, 1.0), [0])[0] == 1.0
    val = theoretical_curve(SmoothnessClass(3.0), 3, 0.67, [1000], improved=True)[0]
    assert val == pytest.approx(0.67e-3, rel=1e-12)


def test_rate_fit_callable():
    fit = fit_algebraic(0.34 * N**-1.0)
    np.testing.assert_allclose(fit(N), 0.34 / N, rtol=1e-10)


def test_fixed_rate_prefactor():
    assert fixed_rate_prefactor(0.49 * N ** (-2 / 3), -2 / 3, (10, 200)) == pytest.approx(0.49, rel=1e-12)


def test_summary_row():
    row = fit_algebraic(0.08 * N**-2.0, dim=1).summary_row("wendland-k0", 2.0)
    assert list(row) == ["kernel", "dim", "beta", "model", "c", "p_or_c3", "window_lo", "window_hi", "r_squared"]
    assert row["model"] == "algebraic" and row["window_lo"] == 51


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 100), st.floats(-3, 0), st.floats(1e-3, 1e3))
def test_algebraic_scale_invariance(c, p, scale):
    y = c * N**p * (1 + 0.1 * np.sin(N))
    a, b = fit_algebraic(y, window=(1, 200)), fit_algebraic(scale * y, window=(1, 200))
    assert b.p == pytest.approx(a.p, abs=1e-9)
    assert b.c == pytest.approx(scale * a.c, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 10), st.floats(0.01, 0.1), st.floats(1e-3, 1e3), st.integers(1, 3))
def test_exponential_scale_invariance(c2, c3, scale, dim):
    y = c2 * np.exp(-c3 * N ** (1 / dim)) * (1 + 0.1 * np.cos(N))
    a, b = fit_exponential(y, dim, window=(1, 200)), fit_exponential(scale * y, dim, window=(1, 200))
    assert b.c3 == pytest.approx(a.c3, abs=1e-9)
    assert b.c2 == pytest.approx(scale * a.c2, rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 10), st.floats(-4, 0))
def test_algebraic_round_trip_property(c, p):
    fit = fit_algebraic(c * N**p, window=(1, 200))
    assert fit.p == pytest.approx(p, abs=1e-10)
    assert math.log(fit.c) == pytest.approx(math.log(c), abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
