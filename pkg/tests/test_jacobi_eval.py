import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_jacobi as scipy_jacobi

from jacobi_bounds.gamma_core import DomainError, JacobiParams, log_gamma
from jacobi_bounds.jacobi_eval import (
    EvalResult,
    Method,
    OracleRangeError,
    SignedLogValue,
    contour_integral,
    eval_g,
    eval_g_contour_oracle,
    eval_jacobi,
    eval_jacobi_contour,
    eval_jacobi_series_oracle,
    evaluate,
    g_log_at,
    g_log_table,
    jacobi_log_table,
    overlap_integral,
    schur_integral,
)

nonneg = st.floats(0.0, 50.0, allow_nan=False)
xs = st.floats(-1.0, 1.0, allow_nan=False)


def close(a: SignedLogValue, b: SignedLogValue, rel: float, abs_zero: float = 1e-10) -> bool:
    if b.sign == 0:
        return abs(float(a)) <= abs_zero
    return a.rel_diff(b) <= rel


# ---------------------------------------------------------------- SignedLogValue


def test_signed_log_roundtrip_and_ops():
    for v in (1.0, -2.5, 1e-300, -1e300, 3.0, 5e-324, 1.7976931348623157e308):
        s = SignedLogValue.from_float(v)
        assert float(s) == v
        assert s.log_mag == pytest.approx(math.log(abs(v)), rel=1e-15)
    z = SignedLogValue.from_float(0.0)
    assert z == SignedLogValue.zero() and float(z) == 0.0
    a, b = SignedLogValue.from_float(-3.0), SignedLogValue.from_float(2.0)
    assert float(a * b) == pytest.approx(-6.0)
    assert float(-a) == pytest.approx(3.0)
    assert float(abs(a)) == pytest.approx(3.0)
    assert float(a.scale_log(math.log(2.0))) == pytest.approx(-6.0)
    assert (a * z).sign == 0
    assert float(SignedLogValue(1, 1000.0)) == math.inf
    with pytest.raises(ValueError):
        SignedLogValue(0, 1.0)
    with pytest.raises(ValueError):
        SignedLogValue(1, -math.inf)
    with pytest.raises(ValueError):
        SignedLogValue(2, 0.0)


def test_eval_result_rejects_negative_error():
    with pytest.raises(ValueError):
        EvalResult(SignedLogValue.zero(), Method.SERIES, -1.0)


# ---------------------------------------------------------------- recurrence


def test_eval_jacobi_examples():
    for al, be in ((0, 0), (3, 7.5), (100, 2)):
        assert float(eval_jacobi(JacobiParams(0, al, be), 0.3)) == 1.0
    for be in (0, 1.5, 9):
        assert float(eval_jacobi(JacobiParams(3, 2, be), 1.0)) == pytest.approx(10.0, rel=1e-14)
    assert float(eval_jacobi(JacobiParams(2, 0, 0), 0.0)) == pytest.approx(-0.5, rel=1e-15)


def test_eval_jacobi_endpoints_closed_form():
    for n, al, be in ((7, 0.5, 2), (40, 3, 10), (200, 1000, 0.5)):
        p = JacobiParams(n, al, be)
        top = eval_jacobi(p, 1.0)
        assert top.sign == 1
        assert top.log_mag == pytest.approx(log_gamma(n + al + 1) - log_gamma(al + 1) - log_gamma(n + 1), rel=1e-14)
        bottom = eval_jacobi(p, -1.0)
        assert bottom.sign == (-1) ** n
        assert bottom.log_mag == pytest.approx(log_gamma(n + be + 1) - log_gamma(be + 1) - log_gamma(n + 1), rel=1e-14)


def test_domain_errors():
    p = JacobiParams(3, 1, 1)
    for fn in (eval_jacobi, eval_g):
        with pytest.raises(DomainError):
            fn(p, 1.5)
    with pytest.raises(DomainError):
        g_log_table(3, 0, 0, np.array([0.0, -1.01]))


def test_recurrence_matches_scipy_moderate():
    x = np.linspace(-1, 1, 101)
    for al, be in ((0, 0), (0.5, 1.5), (3, 0), (10, 20)):
        s, l = jacobi_log_table(25, al, be, x)
        vals = s * np.exp(l)
        for n in range(26):
            ref = scipy_jacobi(n, al, be, x)
            assert np.allclose(vals[n], ref, rtol=1e-11, atol=1e-11 * np.max(np.abs(ref)))


def test_table_and_per_element_agree():
    x = np.linspace(-0.99, 0.99, 23)
    st_, lt = g_log_table(30, 2.5, 7.0, x)
    for n in (0, 1, 2, 17, 30):
        s, l = g_log_at(n, 2.5, 7.0, x)
        assert np.array_equal(s, st_[n])
        assert np.allclose(l, lt[n], rtol=0, atol=1e-13)
    s, l = g_log_at(np.array([0, 5, 30]), 2.5, 7.0, 0.1)
    for i, n in enumerate((0, 5, 30)):
        assert l[i] == pytest.approx(eval_g(JacobiParams(n, 2.5, 7.0), 0.1).log_mag, abs=1e-13)


def test_large_parameters_stay_finite():
    p = JacobiParams(200, 10000.0, 50.0)
    for x in (0.3, 0.99, 1.0):
        v = eval_jacobi(p, x)
        assert math.isfinite(v.log_mag)
        assert eval_g(p, x).log_mag <= 1e-12
    # P_n(1) = binomial(n + alpha, n) is far beyond double range here
    assert eval_jacobi(p, 1.0).log_mag > 709.8
    s, l = g_log_table(200, 1000.0, 1000.0, np.linspace(-1, 1, 51))
    assert np.all(l <= 1e-12)


# ---------------------------------------------------------------- series oracle


def test_series_examples():
    assert float(eval_jacobi_series_oracle(JacobiParams(0, 3, 4), 0.2)) == 1.0
    assert float(eval_jacobi_series_oracle(JacobiParams(1, 0, 0), 0.5)) == pytest.approx(0.5, rel=1e-15)
    for al, be, x in ((1.0, 2.0, 0.3), (0.5, 7.0, -0.8)):
        ref = (al + 1) + (al + be + 2) * (x - 1) / 2
        assert float(eval_jacobi_series_oracle(JacobiParams(1, al, be), x)) == pytest.approx(ref, rel=1e-14)
    p = JacobiParams(4, 1, 2)
    assert eval_jacobi(p, -0.25).rel_diff(eval_jacobi_series_oracle(p, -0.25)) <= 1e-12
    with pytest.raises(OracleRangeError):
        eval_jacobi_series_oracle(JacobiParams(61, 0, 0), 0.1)


def test_recurrence_vs_series_grid():
    params = (0.0, 0.5, 1.0, 2.5, 10.0, 20.0)
    k = np.arange(41)
    cheb = np.cos((2 * k + 1) * np.pi / 82)
    worst = 0.0
    for al in params:
        for be in params:
            s, l = jacobi_log_table(30, al, be, cheb)
            for n in range(31):
                for j, x in enumerate(cheb):
                    ref = eval_jacobi_series_oracle(JacobiParams(n, al, be), float(x))
                    got = SignedLogValue(int(s[n, j]), float(l[n, j]) if s[n, j] else -math.inf)
                    assert close(got, ref, 1e-10), (n, al, be, x)
                    if ref.sign:
                        worst = max(worst, got.rel_diff(ref))
    assert worst <= 1e-10


# ---------------------------------------------------------------- g


def test_eval_g_examples():
    assert float(eval_g(JacobiParams(0, 0, 0), 0.7)) == 1.0
    assert float(eval_g(JacobiParams(1, 0, 0), 0.5)) == pytest.approx(0.5, rel=1e-15)
    assert eval_g(JacobiParams(0, 3, 0), 1.0).sign == 0
    assert eval_g(JacobiParams(4, 0, 2.5), -1.0).sign == 0
    assert eval_g(JacobiParams(4, 2.5, 0), -1.0).sign != 0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 80), nonneg, nonneg, xs)
def test_g_bounded_by_one(n, al, be, x):
    assert eval_g(JacobiParams(n, al, be), x).log_mag <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 60), nonneg, nonneg, st.floats(-0.999, 0.999))
def test_reflection_symmetry(n, al, be, x):
    lhs = eval_jacobi(JacobiParams(n, al, be), -x)
    rhs = eval_jacobi(JacobiParams(n, be, al), x)
    rhs = rhs if n % 2 == 0 else -rhs
    # zeros of P_n may move by an ulp under x -> -x; compare absolutely near them
    scale = max(abs(float(eval_jacobi(JacobiParams(n, al, be), 1.0))), 1.0)
    if abs(float(rhs)) > 1e-6 * scale:
        assert lhs.rel_diff(rhs) <= 1e-12 * max(1, n)
    else:
        assert abs(float(lhs) - float(rhs)) <= 1e-12 * scale * max(1, n)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 40), nonneg, nonneg)
def test_boundary_zero(n, al, be):
    assert (eval_g(JacobiParams(n, al, be), 1.0).sign == 0) == (al > 0)
    assert (eval_g(JacobiParams(n, al, be), -1.0).sign == 0) == (be > 0)


# ---------------------------------------------------------------- contour oracle


def test_contour_examples():
    p = JacobiParams(1, 0, 0)
    assert abs(float(eval_jacobi_contour(p, 0.0, 4096))) <= 1e-10
    assert abs(float(eval_g_contour_oracle(p, 0.0, 4096))) <= 1e-10
    p = JacobiParams(5, 2, 1)
    assert eval_jacobi_contour(p, 0.3, 4096).rel_diff(eval_jacobi(p, 0.3)) <= 1e-8
    assert eval_g_contour_oracle(p, 0.3, 4096).rel_diff(eval_g(p, 0.3)) <= 1e-8
    p = JacobiParams(10, 0, 0)
    ref = scipy_jacobi(10, 0, 0, 0.9)
    assert abs(float(eval_jacobi_contour(p, 0.9, 8192)) - ref) <= 1e-8 * abs(ref)


def test_contour_domain():
    with pytest.raises(DomainError):
        eval_jacobi_contour(JacobiParams(3, 0.5, 0), 0.1)
    with pytest.raises(DomainError):
        eval_jacobi_contour(JacobiParams(3, 1, 0), 1.0)
    with pytest.raises(DomainError):
        eval_jacobi_contour(JacobiParams(0, 1, 0), 0.2)
    with pytest.raises(DomainError):
        eval_jacobi_contour(JacobiParams(3, 1, 0), 0.2, m=32)


def test_contour_reports_convergence():
    val, m, est = contour_integral(JacobiParams(12, 3, 4), 0.4, 64)
    assert 64 < m <= 2**16 and est <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 20), st.integers(0, 10), st.integers(0, 10), st.floats(-0.95, 0.95))
def test_contour_matches_recurrence(n, al, be, x):
    p = JacobiParams(n, al, be)
    got, ref = eval_jacobi_contour(p, x, 64), eval_jacobi(p, x)
    # next to a zero of P_n only absolute agreement on the scale of P_n is meaningful
    scale = max(float(eval_jacobi(p, 1.0)), abs(float(eval_jacobi(p, -1.0))))
    if abs(float(ref)) > 1e-6 * scale:
        assert got.rel_diff(ref) <= 1e-8
    else:
        assert abs(float(got) - float(ref)) <= 1e-12 * scale


def test_evaluate_dispatch():
    p = JacobiParams(6, 2, 3)
    ref = eval_jacobi(p, 0.2)
    for m in Method:
        r = evaluate(p, 0.2, m)
        assert r.method is m and r.est_error >= 0
        assert r.value.rel_diff(ref) <= 1e-8
    assert evaluate(p, 0.2, "series").method is Method.SERIES


# ---------------------------------------------------------------- quadrature identities


def test_schur_examples():
    # leggauss weights at order 2000 carry ~1e-13 rounding
    assert schur_integral(JacobiParams(0, 0, 0)) == pytest.approx(1.0, abs=1e-12)
    assert schur_integral(JacobiParams(3, 1, 2)) == pytest.approx(0.1, abs=1e-12)
    assert schur_integral(JacobiParams(20, 7.5, 0.5)) == pytest.approx(1 / 49, abs=1e-12)
    with pytest.raises(DomainError):
        schur_integral(JacobiParams(1, 0, 0), quadrature_order=32)


def test_schur_plain_rule_also_available():
    assert schur_integral(JacobiParams(3, 1, 2), graded=False) == pytest.approx(0.1, abs=1e-12)


def test_orthogonality():
    for al in (0.0, 1.0, 2.5, 5.0):
        for be in (0.0, 0.5, 3.0, 5.0):
            for n in range(16):
                for m in range(n + 1, 16):
                    assert abs(overlap_integral(n, m, al, be)) <= 1e-8
            assert overlap_integral(4, 4, al, be) == pytest.approx(1 / (9 + al + be), abs=1e-10)
