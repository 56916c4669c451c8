"""Kernel moment functions against quadrature and finite-difference oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shiftfronts.errors import DomainError
from shiftfronts.kernels import (KernelFamily, KernelSpec, density, mgf,
                                 mgf_d1, mgf_d2, mgf_quadrature)

FAMILIES = list(KernelFamily)
WIDTHS = [0.5, 1.0, 2.0, 3.7]
SPECS = [KernelSpec(f, h) for f in FAMILIES for h in WIDTHS]


def spec_ids(spec):
    return f"{spec.family.value}-h{spec.half_width}"


# -- construction -------------------------------------------------------------

def test_rejects_bad_half_width():
    for bad in [0.0, -1.0, float("nan"), float("inf")]:
        with pytest.raises(ValueError):
            KernelSpec(KernelFamily.UNIFORM, bad)


def test_family_coerced_from_string():
    spec = KernelSpec("triangle", 1.0)
    assert spec.family is KernelFamily.TRIANGLE


def test_rejects_unknown_family():
    with pytest.raises(ValueError):
        KernelSpec("gaussian", 1.0)


# -- density ------------------------------------------------------------------

@pytest.mark.parametrize("spec", SPECS, ids=spec_ids)
def test_density_is_a_unit_mass_symmetric_bump(spec):
    h = spec.half_width
    y = np.linspace(-h, h, 20001)
    j = density(spec, y)
    assert np.all(j >= 0.0)
    assert np.allclose(j, density(spec, -y), atol=1e-14)
    mass = np.trapezoid(j, y)
    assert abs(mass - 1.0) < 1e-6, f"trapezoid mass {mass}"
    exact = mgf_quadrature(spec, 0.0)
    assert abs(exact - 1.0) < 1e-12, f"quadrature mass {exact}"
    assert density(spec, h + 1e-9) == 0.0
    assert density(spec, -h - 1e-9) == 0.0


# -- pinned values ------------------------------------------------------------

def test_uniform_values():
    spec = KernelSpec(KernelFamily.UNIFORM, 1.0)
    assert mgf(spec, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert mgf(spec, 1.0) == pytest.approx(math.sinh(1.0), abs=1e-12)
    assert mgf_d1(spec, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert mgf_d2(spec, 0.0) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_triangle_values():
    spec = KernelSpec(KernelFamily.TRIANGLE, 1.0)
    assert mgf(spec, 1.0) == pytest.approx(2.0 * (math.cosh(1.0) - 1.0), abs=1e-12)
    assert mgf_d1(spec, 0.0) == pytest.approx(0.0, abs=1e-14)
    # second moment of the triangle on [-1,1] is 1/6
    assert mgf_d2(spec, 0.0) == pytest.approx(1.0 / 6.0, abs=1e-12)


def test_raised_cosine_second_moment():
    # 1/3 - 2/pi^2 by direct integration of y^2 (1+cos(pi y))/2 on [-1,1]
    spec = KernelSpec(KernelFamily.RAISED_COSINE, 1.0)
    assert mgf_d2(spec, 0.0) == pytest.approx(1.0 / 3.0 - 2.0 / math.pi**2, abs=1e-12)


# -- closed form vs quadrature ------------------------------------------------

@pytest.mark.parametrize("spec", SPECS, ids=spec_ids)
def test_closed_form_matches_quadrature(spec):
    for p in np.linspace(-10.0, 10.0, 41):
        closed = mgf(spec, p)
        direct = mgf_quadrature(spec, p)
        assert abs(closed - direct) <= 1e-10 * max(1.0, abs(direct)), (
            f"p={p}: closed={closed!r} quadrature={direct!r}")


# -- derivatives vs finite differences ---------------------------------------

@pytest.mark.parametrize("spec", SPECS, ids=spec_ids)
def test_first_derivative_matches_central_difference(spec):
    eps = 1e-5
    for p in np.linspace(-10.0, 10.0, 81):
        fd = (mgf(spec, p + eps) - mgf(spec, p - eps)) / (2.0 * eps)
        d1 = mgf_d1(spec, p)
        assert abs(d1 - fd) <= 1e-6 * max(1.0, abs(fd)), f"p={p}: {d1} vs {fd}"


@pytest.mark.parametrize("spec", SPECS, ids=spec_ids)
def test_second_derivative_matches_central_difference(spec):
    eps = 1e-4
    for p in np.linspace(-10.0, 10.0, 81):
        fd = (mgf(spec, p + eps) - 2.0 * mgf(spec, p) + mgf(spec, p - eps)) / eps**2
        d2 = mgf_d2(spec, p)
        assert abs(d2 - fd) <= 1e-6 * max(1.0, abs(fd)), f"p={p}: {d2} vs {fd}"


# -- structural properties ----------------------------------------------------

@given(p=st.floats(-10.0, 10.0), fi=st.sampled_from(range(3)),
       h=st.sampled_from(WIDTHS))
@settings(max_examples=200, deadline=None)
def test_mgf_is_even(p, fi, h):
    spec = KernelSpec(FAMILIES[fi], h)
    assert abs(mgf(spec, p) - mgf(spec, -p)) <= 1e-12 * max(1.0, mgf(spec, p))


@given(p=st.floats(-10.0, 10.0), fi=st.sampled_from(range(3)),
       h=st.sampled_from(WIDTHS))
@settings(max_examples=200, deadline=None)
def test_mgf_at_least_one_with_equality_only_at_zero(p, fi, h):
    spec = KernelSpec(FAMILIES[fi], h)
    m = mgf(spec, p)
    assert m >= 1.0 - 1e-15
    if abs(p) > 1e-6:
        assert m > 1.0 + 1e-14, f"M({p})={m} not strictly above 1"


@given(p=st.floats(-10.0, 10.0), fi=st.sampled_from(range(3)),
       h=st.sampled_from(WIDTHS))
@settings(max_examples=200, deadline=None)
def test_mgf_second_derivative_positive(p, fi, h):
    spec = KernelSpec(FAMILIES[fi], h)
    assert mgf_d2(spec, p) > 0.0


def test_odd_symmetry_of_first_derivative():
    for spec in SPECS:
        for p in np.linspace(0.1, 8.0, 17):
            assert mgf_d1(spec, p) == pytest.approx(-mgf_d1(spec, -p), rel=1e-12)
            assert mgf_d1(spec, p) > 0.0


# -- vectorization and errors -------------------------------------------------

def test_accepts_arrays():
    spec = KernelSpec(KernelFamily.TRIANGLE, 2.0)
    p = np.linspace(-3.0, 3.0, 11)
    for fn in (mgf, mgf_d1, mgf_d2):
        vec = fn(spec, p)
        scal = np.array([fn(spec, x) for x in p])
        assert np.allclose(vec, scal, rtol=0.0, atol=1e-14)


def test_series_switch_is_seamless():
    # values straddling |p h| = 1e-4 must line up to tight tolerance
    for spec in SPECS:
        h = spec.half_width
        ps = np.array([0.5e-4, 0.99e-4, 1.01e-4, 2e-4]) / h
        vals = mgf(spec, ps)
        quadvals = np.array([mgf_quadrature(spec, p) for p in ps])
        assert np.allclose(vals, quadvals, rtol=0.0, atol=1e-12)


def test_non_finite_p_raises():
    spec = KernelSpec(KernelFamily.UNIFORM, 1.0)
    for bad in [float("nan"), float("inf"), -float("inf")]:
        for fn in (mgf, mgf_d1, mgf_d2):
            with pytest.raises(DomainError):
                fn(spec, bad)
    with pytest.raises(DomainError):
        mgf(spec, np.array([0.0, float("nan")]))
