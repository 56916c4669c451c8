"""Rate-profile construction and viscosity certification checks.

Every region (plus both compactly-supported branches) gets a concrete
scenario; the assembled profile must be continuous, carry the right
tail slope, put its zero front exactly at the classifier speed, and
pass the sub/supersolution residual checks against the reaction
ceiling/floor fields.  Deliberately broken profiles must fail.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftfronts.classifier import Scenario, Side, prey_speeds
from shiftfronts.errors import DomainError
from shiftfronts.hamiltonians import (INFINITY, H, dH, lagrangian,
                                      min_speed, speed_curve)
from shiftfronts.kernels import KernelSpec
from shiftfronts.viscosity import (CoefficientField, FieldKind, LevelTag,
                                   Piece, PieceKind, PiecewiseProfile,
                                   build_profile, certify_subsolution,
                                   certify_supersolution, check_boundary,
                                   check_continuity, large_deviation_rate,
                                   lower_field, predator_field, upper_field)

K1 = KernelSpec("uniform", 1.0)
BASE = dict(d1=1.0, d2=0.2, r1=1.0, r2=0.5, a=0.4, b=1.5,
            alpha_minus=1.5, alpha_plus=1.0, kernel1=K1, kernel2=K1,
            c_e=0.8, lambda1_r=1.0, lambda1_l=1.5,
            lambda2_r=2.0, lambda2_l=2.0)


def make_scenario(**overrides):
    params = dict(BASE)
    params.update(overrides)
    return Scenario(**params)


# One witness per construction case.  Fronts were cross-checked against
# the closed-form speed formulas (see test_classifier for those pins).
CASES = [
    ("right/Va/affine", Side.RIGHT, dict(lambda1_r=1.0, c_e=0.8),
     ["zero", "affine"], 1.175201),
    ("right/Va/arc", Side.RIGHT, dict(lambda1_r=2.5, c_e=0.8),
     ["zero", "arc", "affine"], 0.905262),
    ("right/Va/compact", Side.RIGHT, dict(lambda1_r=INFINITY, c_e=0.8),
     ["zero", "arc"], 0.905262),
    ("right/Vb/two-affine", Side.RIGHT, dict(lambda1_r=2.6, c_e=1.03),
     ["zero", "affine", "affine"], 1.03),
    ("right/Vb/affine-arc", Side.RIGHT, dict(lambda1_r=3.0, c_e=1.03),
     ["zero", "affine", "arc", "affine"], 1.03),
    ("right/Vb/compact", Side.RIGHT, dict(lambda1_r=INFINITY, c_e=1.03),
     ["zero", "affine", "arc"], 1.03),
    ("right/Vc/pstar-arc", Side.RIGHT, dict(lambda1_r=1.55, c_e=1.6),
     ["zero", "arc", "affine", "affine"], 1.148150),
    ("right/Vc/chord", Side.RIGHT, dict(lambda1_r=2.0, c_e=1.6),
     ["zero", "arc", "affine", "affine"], 1.148150),
    ("right/Vc/double-arc", Side.RIGHT, dict(lambda1_r=3.5, c_e=1.6),
     ["zero", "arc", "affine", "arc", "affine"], 1.148150),
    ("right/Vc/compact", Side.RIGHT, dict(lambda1_r=INFINITY, c_e=1.6),
     ["zero", "arc", "affine", "arc"], 1.148150),
    ("right/Vd/pstar", Side.RIGHT, dict(lambda1_r=0.8, c_e=2.8),
     ["zero", "affine", "affine"], 1.672483),
    ("left/Va/affine", Side.LEFT, dict(lambda1_l=1.5, c_e=-0.8),
     ["affine", "zero"], -1.279680),
    ("left/Va/arc", Side.LEFT, dict(lambda1_l=2.5, c_e=-0.8),
     ["affine", "arc", "zero"], -1.148150),
    ("left/Va/compact", Side.LEFT, dict(lambda1_l=INFINITY, c_e=-0.8),
     ["arc", "zero"], -1.148150),
    ("left/Vc/punder", Side.LEFT, dict(lambda1_l=1.0, c_e=-2.0),
     ["affine", "affine", "zero"], -1.539188),
    ("left/Vb/pbar", Side.LEFT, dict(lambda1_l=3.2, c_e=-1.4),
     ["affine", "arc", "affine", "zero"], -0.977585),
    ("left/Vb/compact", Side.LEFT, dict(lambda1_l=INFINITY, c_e=-1.4),
     ["arc", "affine", "zero"], -0.977585),
    ("left/Vd/punder-arc", Side.LEFT, dict(lambda1_l=2.5, c_e=-2.3),
     ["affine", "affine", "arc", "zero"], -0.905262),
    ("left/Vd/pbar-arc", Side.LEFT, dict(lambda1_l=3.2, c_e=-2.2),
     ["affine", "arc", "affine", "arc", "zero"], -0.905262),
    ("left/Vd/compact", Side.LEFT, dict(lambda1_l=INFINITY, c_e=-2.2),
     ["arc", "affine", "arc", "zero"], -0.905262),
]
CASE_IDS = [c[0].replace("/", "-") for c in CASES]


def build_case(case):
    _, side, overrides, _, _ = case
    sc = make_scenario(**overrides)
    return sc, build_profile(sc, side), side


# -- coefficient fields -------------------------------------------------------

def test_upper_field_levels_and_envelopes():
    sc = make_scenario(c_e=0.8)
    fld = upper_field(sc)
    assert fld.kind is FieldKind.R_BAR
    assert fld.thresholds == (0.8,)
    assert fld.values == (1.5, 1.0)
    assert fld.plain(-2.0) == 1.5
    assert fld.plain(2.0) == 1.0
    assert fld.upper(0.8) == 1.5
    assert fld.lower(0.8) == 1.0


def test_lower_field_layout_moving_band_behind():
    # habitat edge faster than the predator's rightward trail
    sc = make_scenario(c_e=0.8)
    fld = lower_field(sc)
    assert fld.kind is FieldKind.R_UNDER_1
    s2r = s2l = 0.393843
    np.testing.assert_allclose(fld.thresholds, (-s2l, s2r, 0.8), atol=1e-6)
    # levels: bare trailing, predated trailing, bare trailing, bare leading
    assert fld.values == (1.5, 1.5 - 0.4 * 1.25, 1.5, 1.0)
    assert fld.values[1] == pytest.approx(1.0)


def test_lower_field_layout_edge_inside_band():
    sc = make_scenario(c_e=0.3)
    fld = lower_field(sc)
    assert fld.kind is FieldKind.R_UNDER_2
    assert fld.thresholds[1] == 0.3
    assert fld.values == (1.5, 1.0, 1.0 - 0.4 * 1.25, 1.0)


def test_lower_field_layout_edge_left_of_band():
    sc = make_scenario(c_e=-0.8)
    fld = lower_field(sc)
    assert fld.kind is FieldKind.R_UNDER_3
    assert fld.thresholds[0] == -0.8
    assert fld.values == (1.5, 1.0, 1.0 - 0.4 * 1.25, 1.0)


def test_lower_field_positive_under_weak_predation():
    for ce in (-2.5, -0.3, 0.0, 0.3, 2.5):
        fld = lower_field(make_scenario(c_e=ce))
        assert min(fld.values) > 0.0, f"floor went nonpositive at c_e={ce}"


def test_predator_field_levels():
    fld = predator_field(make_scenario(c_e=1.2))
    assert fld.kind is FieldKind.R_0
    assert fld.thresholds == (1.2,)
    assert fld.values == (0.5 * 1.25, 0.5 * 0.5)


def test_field_envelopes_with_coincident_thresholds():
    fld = CoefficientField(FieldKind.R_UNDER_2, (0.3, 0.3, 1.1),
                           (4.0, 2.0, 3.0, 1.0))
    assert fld.upper(0.3) == 4.0
    assert fld.lower(0.3) == 2.0
    assert fld.upper(0.3 + 5e-13) == 4.0  # within merge tolerance
    assert fld.plain(0.7) == 3.0
    assert fld.upper(1.1) == 3.0 and fld.lower(1.1) == 1.0


def test_field_validation():
    with pytest.raises(ValueError, match="one more value"):
        CoefficientField(FieldKind.R_BAR, (0.0,), (1.0,))
    with pytest.raises(ValueError, match="nondecreasing"):
        CoefficientField(FieldKind.R_BAR, (1.0, 0.0), (1.0, 2.0, 3.0))


# -- construction -------------------------------------------------------------

@pytest.mark.parametrize("case", CASES, ids=CASE_IDS)
def test_case_dispatch_and_shape(case):
    name, _, _, kinds, front = case
    _, prof, _ = build_case(case)
    assert prof.case == name
    assert [p.kind.value for p in prof.pieces] == kinds, prof.describe()
    assert prof.zero_front == pytest.approx(front, abs=2e-6)


@pytest.mark.parametrize("case", CASES, ids=CASE_IDS)
def test_continuity_boundary_and_front(case):
    _, side, overrides, _, _ = case
    sc, prof, _ = build_case(case)
    assert check_continuity(prof) <= 1e-10
    lam = sc.lambda1_r if side is Side.RIGHT else sc.lambda1_l
    assert check_boundary(prof, lam)
    cu_r, cu_l, _ = prey_speeds(sc)
    want = cu_r if side is Side.RIGHT else cu_l
    assert abs(prof.zero_front - want) <= 1e-8, \
        f"front {prof.zero_front} vs classifier speed {want}"


@pytest.mark.parametrize("case", CASES, ids=CASE_IDS)
def test_certification_both_sides(case):
    sc, prof, _ = build_case(case)
    sup = certify_supersolution(prof, lower_field(sc), n_grid=1500)
    assert sup.passed, str(sup)
    sub = certify_subsolution(prof, upper_field(sc), n_grid=1500)
    assert sub.passed, str(sub)
    assert sub.n_checked > 0
    assert "passes" in str(sup)


def test_breakpoints_strictly_increasing():
    for case in CASES:
        _, prof, _ = build_case(case)
        bps = prof.breakpoints
        assert all(b2 > b1 for b1, b2 in zip(bps, bps[1:])), prof.describe()


def test_profile_nonnegative_and_zero_at_origin():
    for case in CASES:
        _, prof, side = build_case(case)
        assert prof.value(0.0) == 0.0
        span = np.linspace(0.0, 4.0, 97) if side is Side.RIGHT \
            else np.linspace(-4.0, 0.0, 97)
        vals = [prof.value(s) for s in span]
        assert min(vals) >= -1e-12


def test_value_outside_halfline_rejected():
    _, prof, _ = build_case(CASES[0])
    with pytest.raises(DomainError, match="s >= 0"):
        prof.value(-0.5)
    _, lprof, _ = build_case(CASES[11])
    with pytest.raises(DomainError, match="s <= 0"):
        lprof.value(0.5)


def test_slope_is_right_continuous_at_kinks():
    sc, prof, _ = build_case(CASES[3])  # two-affine: kink at s_hat
    s_hat = prof.breakpoints[-1]
    assert prof.slope(s_hat) == prof.pieces[-1].mu
    assert prof.slope(s_hat - 1e-9) == prof.pieces[-2].mu


def test_table_and_describe():
    _, prof, _ = build_case(CASES[0])
    tab = prof.table([0.0, 1.0, 2.0])
    assert len(tab) == 3 and tab[0] == (0.0, 0.0)
    assert tab[2][1] == pytest.approx(prof.value(2.0))
    text = prof.describe()
    assert "zero front" in text and "affine" in text


def test_convexity_on_each_smooth_piece():
    for case in CASES:
        _, prof, _ = build_case(case)
        for piece in prof.pieces:
            lo = piece.lo if math.isfinite(piece.lo) else -8.0
            hi = piece.hi if math.isfinite(piece.hi) else 8.0
            if hi - lo < 1e-3:
                continue
            ss = np.linspace(lo + 1e-7, hi - 1e-7, 41)
            vv = np.array([prof.value(s) for s in ss])
            second = vv[:-2] - 2.0 * vv[1:-1] + vv[2:]
            assert second.min() >= -1e-9, \
                f"{prof.case}: concave dip inside {piece.describe()}"


def test_left_profiles_are_globally_convex():
    for case in CASES:
        _, prof, side = build_case(case)
        if side is not Side.LEFT:
            continue
        ss = np.linspace(-6.0, 0.0, 241)
        vv = np.array([prof.value(s) for s in ss])
        second = vv[:-2] - 2.0 * vv[1:-1] + vv[2:]
        assert second.min() >= -1e-9, prof.case


def test_trailing_lagrangian_is_a_constant_shift_of_leading():
    pair = make_scenario().prey_pair()
    for q in np.linspace(-3.5, 3.5, 29):
        diff = lagrangian(pair.env_minus, q) - lagrangian(pair.env_plus, q)
        assert diff == pytest.approx(-0.5, abs=1e-9)  # -r1*(alpha_- - alpha_+)


# -- rejection of broken profiles ---------------------------------------------

def test_wrong_level_profile_fails_supersolution():
    # glide on the trailing level where the leading one is required
    sc = make_scenario(lambda1_r=1.0, c_e=0.8)
    pair = sc.prey_pair()
    front = speed_curve(pair.env_minus, 1.0)
    fake = PiecewiseProfile(Side.RIGHT, pair, (
        Piece(PieceKind.ZERO, 0.0, front),
        Piece(PieceKind.AFFINE, front, math.inf, mu=1.0,
              level=LevelTag.MINUS),
    ), front, "broken")
    assert check_continuity(fake) <= 1e-10  # continuous, yet not admissible
    rep = certify_supersolution(fake, lower_field(sc), n_grid=800)
    assert not rep.passed
    assert rep.max_violation == pytest.approx(0.5, abs=1e-6)  # r1*(a- - a+)


def test_front_kink_rejects_steep_single_level_glide():
    # classical residuals vanish on both pieces; only the front-kink
    # slope sweep can expose that this front is too fast
    sc = make_scenario(lambda1_r=3.2, c_e=1.03)
    pair = sc.prey_pair()
    mu = 3.2
    front = speed_curve(pair.env_plus, mu)
    fake = PiecewiseProfile(Side.RIGHT, pair, (
        Piece(PieceKind.ZERO, 0.0, front),
        Piece(PieceKind.AFFINE, front, math.inf, mu=mu, level=LevelTag.PLUS),
    ), front, "broken")
    rep = certify_supersolution(fake, lower_field(sc), n_grid=800)
    assert not rep.passed
    kink = [k for k in rep.kinks if k.get("checked")]
    assert kink and kink[0]["violation"] > 1e-3


def test_discontinuous_profile_raises():
    sc = make_scenario(lambda1_r=1.0, c_e=0.8)
    pair = sc.prey_pair()
    fake = PiecewiseProfile(Side.RIGHT, pair, (
        Piece(PieceKind.ZERO, 0.0, 1.0),
        Piece(PieceKind.AFFINE, 1.0, math.inf, mu=1.0, level=LevelTag.PLUS),
    ), 1.0, "broken")
    with pytest.raises(RuntimeError, match="value gap"):
        check_continuity(fake)


def test_boundary_check_rejects_wrong_tail_slope():
    sc = make_scenario(lambda1_r=1.0, c_e=0.8)
    prof = build_profile(sc, Side.RIGHT)
    assert check_boundary(prof, 1.0)
    assert not check_boundary(prof, 0.7)
    assert not check_boundary(prof, INFINITY)
    cprof = build_profile(make_scenario(lambda1_r=INFINITY), Side.RIGHT)
    assert check_boundary(cprof, INFINITY)
    assert not check_boundary(cprof, 1.0)


# -- decay-rate queries -------------------------------------------------------

def test_large_deviation_rate_values_and_none():
    sc = make_scenario(lambda1_r=1.0, c_e=0.8)
    prof = build_profile(sc, Side.RIGHT)
    assert large_deviation_rate(prof, 0.5 * prof.zero_front) is None
    c = prof.zero_front + 1.0
    want = 1.0 * c - H(sc.prey_pair().env_plus, 1.0)
    assert large_deviation_rate(prof, c) == pytest.approx(want, rel=1e-12)


def test_large_deviation_rate_matches_value_on_left():
    sc = make_scenario(lambda1_l=1.0, c_e=-2.0)
    prof = build_profile(sc, Side.LEFT)
    c = prof.zero_front - 0.7
    assert large_deviation_rate(prof, c) == pytest.approx(prof.value(c))
    assert large_deviation_rate(prof, 0.5 * prof.zero_front) is None


# -- stability as the tail steepens toward compact support --------------------

def test_profiles_approach_compact_limit_as_tail_steepens():
    ref = build_profile(make_scenario(lambda1_r=INFINITY, c_e=1.03),
                        Side.RIGHT)
    cstar_m = min_speed(ref.pair.env_minus).c_star
    grid = np.linspace(0.0, 3.0 * cstar_m, 301)
    gaps = []
    for lam in (2.8, 3.0, 3.3, 4.0, 10.0, 100.0, 1e4):
        prof = build_profile(make_scenario(lambda1_r=lam, c_e=1.03),
                             Side.RIGHT)
        gaps.append(max(abs(prof.value(s) - ref.value(s)) for s in grid))
    assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:])), gaps
    assert gaps[0] > gaps[1] > gaps[2] > 1e-4  # genuine decrease early on
    assert gaps[-1] <= 1e-12


def test_extreme_tail_profile_evaluates_finitely():
    prof = build_profile(make_scenario(lambda1_r=1e4, c_e=1.03), Side.RIGHT)
    vals = [prof.value(s) for s in np.linspace(0.0, 5.0, 50)]
    assert all(math.isfinite(v) for v in vals)
    assert prof.pieces[-1].kind is PieceKind.ARC  # affine tail out of range


# -- property checks ----------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(lam=st.floats(0.3, 5.0), ce=st.floats(-2.9, 2.9))
def test_random_right_profiles_are_consistent(lam, ce):
    sc = make_scenario(lambda1_r=lam, c_e=ce)
    prof = build_profile(sc, Side.RIGHT)
    assert check_continuity(prof) <= 1e-10
    cu_r, _, _ = prey_speeds(sc)
    assert abs(prof.zero_front - cu_r) <= 1e-8
    for s in np.linspace(0.0, 4.0, 23):
        assert prof.value(s) >= -1e-12


@settings(max_examples=30, deadline=None)
@given(lam=st.floats(0.3, 5.0), ce=st.floats(-2.9, 2.9))
def test_random_left_profiles_are_consistent(lam, ce):
    sc = make_scenario(lambda1_l=lam, c_e=ce)
    prof = build_profile(sc, Side.LEFT)
    assert check_continuity(prof) <= 1e-10
    _, cu_l, _ = prey_speeds(sc)
    assert abs(prof.zero_front - cu_l) <= 1e-8
    for s in np.linspace(-4.0, 0.0, 23):
        assert prof.value(s) >= -1e-12
