import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jacobi_bounds.envelope import CONSTANTS
from jacobi_bounds.gamma_core import DomainError, JacobiParams
from jacobi_bounds.jacobi_eval import eval_g
from jacobi_bounds.wigner_su2 import (
    SectorError,
    WignerIndex,
    spherical_harmonic_magnitude,
    theorem2_check,
    theorem2_sweep,
    unitarity_column_check,
    unitarity_row_check,
    wigner_d_element,
    wigner_d_magnitude,
)

thetas = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


@st.composite
def indices(draw, max_two_l=60):
    two_l = draw(st.integers(0, max_two_l))
    two_p = draw(st.integers(0, two_l)) * 2 - two_l
    two_q = draw(st.integers(0, two_l)) * 2 - two_l
    return WignerIndex(two_l, two_p, two_q)


@st.composite
def sector_indices(draw, max_two_l=60):
    idx = draw(indices(max_two_l))
    p, q = max(abs(idx.two_p), abs(idx.two_q)), min(abs(idx.two_p), abs(idx.two_q))
    sign = draw(st.sampled_from([1, -1]))
    return WignerIndex(idx.two_l, p, sign * q)


def test_index_validation():
    for bad in ((-2, 0, 0), (2, 4, 0), (2, 1, 0), (3, 1, 0), (1.5, 1, 1)):
        with pytest.raises(DomainError):
            WignerIndex(*bad)
    idx = WignerIndex.from_spin(2.5, 0.5, -1.5)
    assert (idx.two_l, idx.two_p, idx.two_q) == (5, 1, -3)
    assert (idx.alpha, idx.beta, idx.n) == (2, 1, 1)
    with pytest.raises(DomainError):
        WignerIndex.from_spin(1.25, 0, 0)


@settings(max_examples=500, deadline=None)
@given(indices(200))
def test_dimension_identity(idx):
    n, al, be = idx.jacobi_indices()
    assert 2 * n + al + be + 1 == idx.two_l + 1
    assert n >= 0 and al >= 0 and be >= 0


def test_magnitude_examples():
    for th in (0.0, 0.3, 1.2, 2.9):
        assert wigner_d_magnitude(WignerIndex(0, 0, 0), th) == pytest.approx(1.0, rel=1e-15)
        assert wigner_d_magnitude(WignerIndex(1, 1, 1), th) == pytest.approx(abs(math.cos(th)), rel=1e-13, abs=1e-15)
        for two_l in (2, 7, 30):
            ref = abs(math.cos(th)) ** two_l
            assert wigner_d_magnitude(WignerIndex(two_l, two_l, two_l), th) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_spin_half_entries():
    th = 0.41
    assert wigner_d_magnitude(WignerIndex(1, 1, -1), th) == pytest.approx(abs(math.sin(th)), rel=1e-13)
    assert wigner_d_magnitude(WignerIndex(1, -1, 1), th) == pytest.approx(abs(math.sin(th)), rel=1e-13)


def test_element_examples():
    assert wigner_d_element(WignerIndex(0, 0, 0), 0, 0, 0) == pytest.approx(1 + 0j)
    th = 0.6
    z = wigner_d_element(WignerIndex(2, 2, 0), math.pi / 4, th, 0.0)
    g = float(eval_g(JacobiParams(0, 1, 1), math.cos(2 * th)))
    assert z == pytest.approx(-1j * g, abs=1e-15)
    with pytest.raises(SectorError):
        wigner_d_element(WignerIndex(2, 0, 2), 0, th, 0)
    with pytest.raises(SectorError):
        wigner_d_element(WignerIndex(2, -2, 0), 0, th, 0)


@settings(max_examples=300, deadline=None)
@given(sector_indices(), thetas, thetas, thetas)
def test_element_magnitude_consistency(idx, phi, theta, psi):
    z = wigner_d_element(idx, phi, theta, psi)
    assert abs(abs(z) - wigner_d_magnitude(idx, theta)) <= 1e-14


def test_element_phase_dependence():
    idx = WignerIndex(6, 4, -2)
    base = wigner_d_element(idx, 0.0, 0.7, 0.0)
    z = wigner_d_element(idx, 0.3, 0.7, -0.2)
    assert z == pytest.approx(base * cmath.exp(-1j * 4 * 0.3) * cmath.exp(1j * -2 * -0.2), abs=1e-14)


@settings(max_examples=300, deadline=None)
@given(indices(80), st.floats(0.0, math.pi / 2))
def test_theta_symmetry(idx, theta):
    # cos 2(pi/2 - theta) = -cos 2 theta, and q -> -q swaps alpha and beta
    mirrored = WignerIndex(idx.two_l, idx.two_p, -idx.two_q)
    lhs = wigner_d_magnitude(idx, math.pi / 2 - theta)
    assert abs(lhs - wigner_d_magnitude(mirrored, theta)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(indices(80), st.floats(0.0, math.pi))
def test_pi_periodicity(idx, theta):
    # the magnitude is a function of cos 2 theta; theta -> pi - theta is an exact symmetry
    assert abs(wigner_d_magnitude(idx, math.pi - theta) - wigner_d_magnitude(idx, theta)) <= 1e-12


def test_unitarity_examples():
    assert unitarity_row_check(0, 0, 0.3) == 1.0
    th = 0.77
    assert unitarity_row_check(1, 1, th) == pytest.approx(math.cos(th) ** 2 + math.sin(th) ** 2, abs=1e-15)
    assert abs(unitarity_row_check(50, -6, 0.7) - 1.0) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(indices(50), st.floats(0, math.pi))
def test_unitarity_property(idx, theta):
    assert abs(unitarity_row_check(idx.two_l, idx.two_p, theta) - 1.0) <= 1e-10
    assert abs(unitarity_column_check(idx.two_l, idx.two_q, theta) - 1.0) <= 1e-10


def test_unitarity_validation():
    with pytest.raises(DomainError):
        unitarity_row_check(3, 0, 0.1)


def test_theorem2_examples():
    grid = np.linspace(0, math.pi, 1001)
    r = theorem2_check(WignerIndex(0, 0, 0), grid)
    assert r.holds and r.max_ratio == pytest.approx(1.0, abs=1e-6)
    for two_p in range(-50, 51, 2):
        for two_q in range(-50, 51, 2):
            assert theorem2_check(WignerIndex(50, two_p, two_q), grid).holds


def test_theorem2_sweep_matches_direct():
    grid = np.linspace(0, math.pi, 181)
    levels = theorem2_sweep(12, grid)
    assert [lv.two_l for lv in levels] == list(range(13))
    for lv in levels:
        direct = max(
            theorem2_check(WignerIndex(lv.two_l, p, q), grid).max_ratio
            for p in range(-lv.two_l, lv.two_l + 1, 2)
            for q in range(-lv.two_l, lv.two_l + 1, 2)
        )
        assert lv.max_ratio == pytest.approx(direct, rel=1e-13)
        assert theorem2_check(lv.witness, grid).max_ratio == pytest.approx(lv.max_ratio, rel=1e-13)


def test_theorem2_sharpness_probe():
    # p = q = l: |sin 2t|^(1/2) |cos t|^(2l) (2l+1)^(1/4), which by Laplace's method
    # peaks near t^2 = 1/(4l) with limiting value 2^(1/4) e^(-1/4)
    limit = 2**0.25 * math.exp(-0.25)
    ratios = []
    for l in (10, 100, 1000, 10**4):
        grid = np.linspace(1e-6, 10.0 / math.sqrt(l), 20001)
        ratios.append(theorem2_check(WignerIndex(2 * l, 2 * l, 2 * l), grid).max_ratio)
    assert all(0.5 < r < CONSTANTS.C_general for r in ratios)
    errors = [abs(r - limit) for r in ratios]
    assert errors == sorted(errors, reverse=True)
    assert errors[-1] < 1e-3


def test_spherical_harmonic_examples():
    for th in (0.0, 0.5, 2.0):
        assert spherical_harmonic_magnitude(0, 0, th) == pytest.approx((4 * math.pi) ** -0.5, rel=1e-15)
    assert spherical_harmonic_magnitude(1, 0, 0.0) == pytest.approx(math.sqrt(3 / (4 * math.pi)), rel=1e-15)
    grid = np.linspace(0, math.pi, 721)
    y = spherical_harmonic_magnitude(40, 17, grid)
    lhs = np.sqrt(np.abs(np.sin(grid))) * y
    assert np.all(lhs <= CONSTANTS.C_general * (4 * math.pi) ** -0.5 * 81**0.25)
    with pytest.raises(DomainError):
        spherical_harmonic_magnitude(2, 3, 0.1)
    with pytest.raises(DomainError):
        spherical_harmonic_magnitude(-1, 0, 0.1)


def test_spherical_harmonics_match_scipy():
    from scipy.special import sph_harm_y

    grid = np.linspace(0.01, math.pi - 0.01, 37)
    for l in range(0, 12):
        for m in range(-l, l + 1):
            ref = np.abs(sph_harm_y(l, m, grid, 0.3))
            assert np.allclose(spherical_harmonic_magnitude(l, m, grid), ref, rtol=1e-11, atol=1e-14)
