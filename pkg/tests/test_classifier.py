"""Tests for scenario validation, region classification and speed formulas."""

from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftfronts.classifier import (INFINITY, AssumptionResult, Label,
                                    RegionLabel, Scenario, Side, SpeciesTag,
                                    TerraceInterval, classify_left,
                                    classify_right, predator_upper_bounds,
                                    prey_speeds, speed_report,
                                    terrace_prediction, validate)
from shiftfronts.errors import DomainError, UnsupportedRegime
from shiftfronts.hamiltonians import (HamiltonianEnv, dH, lagrangian_slope,
                                      min_speed, speed_curve)
from shiftfronts.kernels import KernelSpec
from shiftfronts.roots import SpeciesPair, c_bar, mu0, p_bar
from shiftfronts.classifier import _left_speed, _right_speed

K1 = KernelSpec("uniform", 1.0)

BASE = dict(d1=1.0, d2=0.2, r1=1.0, r2=0.5, a=0.4, b=1.5,
            alpha_minus=1.5, alpha_plus=1.0, kernel1=K1, kernel2=K1,
            c_e=0.8, lambda1_r=1.0, lambda1_l=1.5,
            lambda2_r=2.0, lambda2_l=2.0)


def make_scenario(**overrides) -> Scenario:
    return Scenario(**{**BASE, **overrides})


def prey_pair() -> SpeciesPair:
    return make_scenario().prey_pair()


# -- Scenario construction and derived levels ---------------------------------

def test_reference_scenario_levels():
    sc = make_scenario()
    assert abs(sc.V_minus - 1.25) < 1e-15
    assert abs(sc.V_plus - 0.5) < 1e-15


def test_scenario_rejects_nonpositive_parameters():
    for name in ("d1", "d2", "r1", "r2", "alpha_minus", "alpha_plus"):
        with pytest.raises(ValueError):
            make_scenario(**{name: 0.0})
        with pytest.raises(ValueError):
            make_scenario(**{name: -1.0})
    # interaction strengths may be zero (decoupled modes) but not negative
    for name in ("a", "b"):
        assert getattr(make_scenario(**{name: 0.0}), name) == 0.0
        with pytest.raises(ValueError):
            make_scenario(**{name: -1.0})


def test_scenario_rejects_bad_c_e_and_decay():
    with pytest.raises(ValueError):
        make_scenario(c_e=float("nan"))
    with pytest.raises(ValueError):
        make_scenario(lambda1_r=0.0)
    with pytest.raises(ValueError):
        make_scenario(lambda2_l=-2.0)


def test_scenario_accepts_infinite_decay_spellings():
    sc = make_scenario(lambda1_r=INFINITY, lambda1_l=float("inf"))
    assert sc.lambda1_r is INFINITY
    assert sc.lambda1_l is INFINITY


# -- assumption validation ----------------------------------------------------

def test_reference_scenario_passes_all_assumptions():
    report = validate(make_scenario())
    assert set(report) == {"J", "A", "H1", "H2", "FU", "I"}
    for res in report.values():
        assert isinstance(res, AssumptionResult)
        assert res.passed, f"({res.name}) unexpectedly fails: {res.detail}"
    assert abs(report["H1"].values["V_plus"] - 0.5) < 1e-15
    assert abs(report["H2"].values["alpha_plus_minus_aV_minus"] - 0.5) < 1e-15


def test_h1_fails_on_the_persistence_boundary():
    report = validate(make_scenario(b=1.0))  # b = 1/alpha_plus
    assert not report["H1"].passed
    assert report["A"].passed


def test_h2_fails_under_heavy_predation():
    report = validate(make_scenario(a=1.0))  # alpha_plus - a V_minus = -0.25
    assert not report["H2"].passed
    assert report["H1"].passed


def test_a_fails_when_levels_are_equal():
    report = validate(make_scenario(alpha_minus=1.0, alpha_plus=1.0))
    assert not report["A"].passed


def test_fu_fails_for_a_predator_as_fast_as_the_prey():
    # predator with the prey's dispersal data and a richer trailing level
    report = validate(make_scenario(d2=1.0, r2=1.0, b=5.0 / 3.0, a=0.1,
                                    lambda2_r=1.0, lambda2_l=1.5))
    assert report["H1"].passed and report["H2"].passed
    assert not report["FU"].passed
    vals = report["FU"].values
    assert vals["s2_minus_r"] > vals["s1_plus_r"]


def test_fu_reported_not_computable_when_trailing_level_collapses():
    report = validate(make_scenario(b=0.5))  # V_minus = -0.25
    assert not report["FU"].passed
    assert "not computable" in report["FU"].detail


def test_prey_speeds_refuses_broken_assumptions():
    with pytest.raises(UnsupportedRegime):
        prey_speeds(make_scenario(a=1.0))
    with pytest.raises(UnsupportedRegime):
        prey_speeds(make_scenario(b=1.0))


def test_predator_bounds_need_only_a_and_h1():
    # (H2) broken: prey speeds refuse, predator bounds still answer
    sc = make_scenario(a=1.0)
    cv_r, cv_l, branches = predator_upper_bounds(sc)
    assert math.isfinite(cv_r) and math.isfinite(cv_l)
    assert branches["right"]["upper_bound_only"] is True


# -- region partition ---------------------------------------------------------

def grid_points(n=60):
    # offsets keep the grid clear of the measure-zero boundary curves
    lams = [0.05 + (4.0 - 0.05) * (i + 0.437) / n for i in range(n)]
    ces = [-3.0 + 6.0 * (j + 0.291) / n for j in range(n)]
    return lams, ces


def test_right_partition_is_exhaustive_and_exclusive():
    pair = prey_pair()
    lams, ces = grid_points()
    seen = set()
    for lam in lams:
        for ce in ces:
            lab = classify_right(pair, lam, ce)
            assert lab.side is Side.RIGHT
            seen.add(lab.label)
    assert {Label.VA, Label.VB, Label.VC, Label.VD} <= seen


def test_left_partition_is_exhaustive_and_exclusive():
    pair = prey_pair()
    lams, ces = grid_points()
    seen = set()
    for lam in lams:
        for ce in ces:
            lab = classify_left(pair, lam, ce)
            assert lab.side is Side.LEFT
            seen.add(lab.label)
    assert {Label.VA, Label.VB, Label.VC, Label.VD} <= seen


def test_predator_pair_partition_also_covers():
    pair = make_scenario().predator_pair()
    lams, ces = grid_points(40)
    for lam in lams:
        for ce in ces:
            classify_right(pair, lam, ce, SpeciesTag.PREDATOR)
            classify_left(pair, lam, ce, SpeciesTag.PREDATOR)


def test_points_on_curves_get_the_band_label():
    pair = prey_pair()
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    lab = classify_right(pair, 1.2, speed_curve(pair.env_plus, 1.2))
    assert lab.label is Label.ON_BOUNDARY_BAND and lab.gamma is Label.GAMMA_A
    lab = classify_right(pair, ms_plus.mu_star + 1.0, ms_plus.c_star)
    assert lab.gamma is Label.GAMMA_B
    lab = classify_right(pair, ms_minus.mu_star + 1.0, ms_minus.c_star)
    assert lab.gamma is Label.GAMMA_D
    lab = classify_left(pair, 1.2, -speed_curve(pair.env_minus, 1.2))
    assert lab.label is Label.ON_BOUNDARY_BAND and lab.gamma is Label.GAMMA_O
    lab = classify_left(pair, ms_minus.mu_star + 1.0, -ms_minus.c_star)
    assert lab.gamma is Label.GAMMA_P


def test_classify_rejects_bad_queries():
    pair = prey_pair()
    with pytest.raises(DomainError):
        classify_right(pair, -1.0, 0.5)
    with pytest.raises(DomainError):
        classify_left(pair, 1.0, float("nan"))


@settings(max_examples=200, deadline=None)
@given(lam=st.floats(min_value=0.02, max_value=8.0),
       ce=st.floats(min_value=-4.0, max_value=4.0))
def test_every_query_gets_exactly_one_label(lam, ce):
    pair = prey_pair()
    right = classify_right(pair, lam, ce)
    left = classify_left(pair, lam, ce)
    assert isinstance(right, RegionLabel) and isinstance(left, RegionLabel)


# -- speed continuity across the division curves ------------------------------

def right_speed(pair, lam, ce):
    return _right_speed(pair, lam, ce, SpeciesTag.PREY)[0]


def left_speed(pair, lam, ce):
    return _left_speed(pair, lam, ce, SpeciesTag.PREY)[0]


def cross(speed_fn, pair, lam_of_t, ce_of_t, eps=1e-7, tol=1e-6):
    lo = speed_fn(pair, lam_of_t(-eps), ce_of_t(-eps))
    hi = speed_fn(pair, lam_of_t(+eps), ce_of_t(+eps))
    assert abs(hi - lo) <= tol, f"speed jumps across curve: {lo} vs {hi}"


def test_right_speed_continuous_across_each_curve():
    pair = prey_pair()
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    m0 = mu0(pair)
    # gamma_a: vertical crossing at lam = 1.0 < mu*_plus
    ca = speed_curve(pair.env_plus, 1.0)
    cross(right_speed, pair, lambda t: 1.0, lambda t: ca + t)
    # gamma_b: vertical crossing at lam = mu*_plus + 0.8
    cross(right_speed, pair, lambda t: ms_plus.mu_star + 0.8,
          lambda t: ms_plus.c_star + t)
    # gamma_c: vertical crossing at lam midway between mu0 and mu*_minus
    lam_c = 0.5 * (m0 + ms_minus.mu_star)
    from shiftfronts.roots import k_curve
    kc = k_curve(pair, lam_c)
    cross(right_speed, pair, lambda t: lam_c, lambda t: kc + t)
    # gamma_d: vertical crossing at lam = mu*_minus + 1.0
    cross(right_speed, pair, lambda t: ms_minus.mu_star + 1.0,
          lambda t: ms_minus.c_star + t)


def test_left_speed_continuous_across_each_curve():
    pair = prey_pair()
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    cb = c_bar(pair)
    ld = lagrangian_slope(pair.env_minus, cb)
    from shiftfronts.roots import g_curve
    # gamma_o at lam = 1.0
    co = speed_curve(pair.env_minus, 1.0)
    cross(left_speed, pair, lambda t: 1.0, lambda t: -co + t)
    # gamma_p at lam = mu*_minus + 1.0
    cross(left_speed, pair, lambda t: ms_minus.mu_star + 1.0,
          lambda t: -ms_minus.c_star + t)
    # gamma_q at lam midway between mu*_plus and L'(c_bar)
    lam_q = 0.5 * (ms_plus.mu_star + ld)
    gq = g_curve(pair, lam_q)
    cross(left_speed, pair, lambda t: lam_q, lambda t: -gq + t)
    # gamma_r at lam = L'(c_bar) + 0.7
    cross(left_speed, pair, lambda t: ld + 0.7, lambda t: -cb + t)
    # gamma_s at lam midway between mu*_minus and L'(c_bar)
    lam_s = 0.5 * (ms_minus.mu_star + ld)
    hs = dH(pair.env_minus, lam_s)
    cross(left_speed, pair, lambda t: lam_s, lambda t: -hs + t)


def test_oblique_crossing_of_gamma_a():
    pair = prey_pair()
    # diagonal path through (1.0, c_plus(1.0))
    ca = speed_curve(pair.env_plus, 1.0)

    def lam_of(t):
        return 1.0 + 0.5 * t

    def ce_of(t):
        return speed_curve(pair.env_plus, 1.0 + 0.5 * t) + t

    cross(right_speed, pair, lam_of, ce_of)


def test_corner_values_match_between_meeting_curves():
    pair = prey_pair()
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    m0 = mu0(pair)
    # gamma_c meets gamma_d at (mu0, c*_minus)
    v1 = right_speed(pair, m0 - 1e-7, ms_minus.c_star + 1e-7)
    v2 = right_speed(pair, m0 + 1e-7, ms_minus.c_star - 1e-7)
    assert abs(v1 - v2) < 1e-5
    # gamma_a meets gamma_b at (mu*_plus, c*_plus)
    v1 = right_speed(pair, ms_plus.mu_star - 1e-7, ms_plus.c_star - 1e-7)
    v2 = right_speed(pair, ms_plus.mu_star + 1e-7, ms_plus.c_star - 1e-7)
    assert abs(v1 - v2) < 1e-5


# -- speed values -------------------------------------------------------------

def test_reference_right_speeds_by_region():
    sc_va = make_scenario(lambda1_r=1.0, c_e=0.8)
    cu_r, _, br = prey_speeds(sc_va)
    expected = speed_curve(sc_va.prey_pair().env_plus, 1.0)
    assert br["right"]["region"].label is Label.VA
    assert abs(cu_r - expected) < 1e-12

    sc_vb = make_scenario(lambda1_r=3.0, c_e=1.03)
    cu_r, _, br = prey_speeds(sc_vb)
    assert br["right"]["region"].label is Label.VB
    assert cu_r == pytest.approx(1.03, abs=1e-15)

    sc_vc = make_scenario(lambda1_r=3.0, c_e=1.6)
    cu_r, _, br = prey_speeds(sc_vc)
    ms_minus = min_speed(sc_vc.prey_pair().env_minus)
    assert br["right"]["region"].label is Label.VC
    assert abs(cu_r - ms_minus.c_star) < 1e-12


def test_vd_right_speed_comes_from_the_tail_matching_slope():
    sc = make_scenario(lambda1_r=0.8, c_e=2.8)
    cu_r, _, br = prey_speeds(sc)
    assert br["right"]["region"].label is Label.VD
    pair = sc.prey_pair()
    from shiftfronts.roots import p_star
    ps = p_star(pair, 2.8, 0.8)
    assert ps is not None and ps > 0.8
    assert abs(cu_r - speed_curve(pair.env_minus, ps)) < 1e-12
    # the witness genuinely differs from every closed-form branch value
    s1p_r = speed_curve(pair.env_plus, 0.8)
    ms_minus = min_speed(pair.env_minus)
    for other in (s1p_r, 2.8, ms_minus.c_star):
        assert abs(cu_r - other) > 1e-6


def test_reference_left_speeds_by_region():
    pair = prey_pair()
    sc = make_scenario(c_e=-0.8)  # lambda1_l = 1.5 < mu*_minus
    _, cu_l, br = prey_speeds(sc)
    assert br["left"]["region"].label is Label.VA
    assert abs(cu_l + speed_curve(pair.env_minus, 1.5)) < 1e-12

    sc = make_scenario(lambda1_l=3.2, c_e=-1.4)
    _, cu_l, br = prey_speeds(sc)
    assert br["left"]["region"].label is Label.VB
    pb = p_bar(pair, 1.4)
    assert abs(cu_l + speed_curve(pair.env_plus, pb)) < 1e-12

    sc = make_scenario(lambda1_l=1.0, c_e=-2.0)
    _, cu_l, br = prey_speeds(sc)
    assert br["left"]["region"].label is Label.VC
    from shiftfronts.roots import p_under
    pu = p_under(pair, 2.0, 1.0)
    assert abs(cu_l + speed_curve(pair.env_plus, pu)) < 1e-12

    sc = make_scenario(lambda1_l=2.5, c_e=-2.3)
    _, cu_l, br = prey_speeds(sc)
    ms_plus = min_speed(pair.env_plus)
    assert br["left"]["region"].label is Label.VD
    assert abs(cu_l + ms_plus.c_star) < 1e-12


def test_infinite_tail_right_columns():
    pair = prey_pair()
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    assert abs(right_speed(pair, INFINITY, 0.5) - ms_plus.c_star) < 1e-12
    assert abs(right_speed(pair, INFINITY, 1.03) - 1.03) < 1e-15
    assert abs(right_speed(pair, INFINITY, 2.5) - ms_minus.c_star) < 1e-12
    # continuity at both thresholds
    for c0 in (ms_plus.c_star, ms_minus.c_star):
        lo = right_speed(pair, INFINITY, c0 - 1e-7)
        hi = right_speed(pair, INFINITY, c0 + 1e-7)
        assert abs(hi - lo) < 1e-6


def test_infinite_tail_left_columns():
    pair = prey_pair()
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    cb = c_bar(pair)
    assert abs(left_speed(pair, INFINITY, 0.3) + ms_minus.c_star) < 1e-12
    mid = -0.5 * (ms_minus.c_star + cb)
    pb = p_bar(pair, -mid)
    assert abs(left_speed(pair, INFINITY, mid)
               + speed_curve(pair.env_plus, pb)) < 1e-12
    assert abs(left_speed(pair, INFINITY, -cb - 0.5) + ms_plus.c_star) < 1e-12
    for c0 in (-ms_minus.c_star, -cb):
        lo = left_speed(pair, INFINITY, c0 - 1e-7)
        hi = left_speed(pair, INFINITY, c0 + 1e-7)
        assert abs(hi - lo) < 1e-6


@settings(max_examples=150, deadline=None)
@given(lam=st.one_of(st.floats(min_value=0.05, max_value=6.0),
                     st.just(INFINITY)),
       ce=st.floats(min_value=-3.0, max_value=3.0))
def test_prey_speed_bounds_hold_everywhere(lam, ce):
    pair = prey_pair()
    ms_plus = min_speed(pair.env_plus)
    v_r = right_speed(pair, lam, ce)
    v_l = left_speed(pair, lam, ce)
    assert v_r >= ms_plus.c_star - 1e-9
    assert v_l <= -ms_plus.c_star + 1e-9
    assert v_r > v_l


# -- predator bounds ----------------------------------------------------------

def test_predator_bound_below_prey_speed_on_the_right():
    for lam1, lam2, ce in [(1.0, 2.0, 0.8), (3.0, 2.0, 1.03),
                           (3.0, 2.0, 1.6), (0.8, 2.0, 2.8),
                           (1.0, 1.0, -0.8), (2.0, 4.0, 0.3)]:
        sc = make_scenario(lambda1_r=lam1, lambda2_r=lam2, c_e=ce)
        cu_r, _, _ = prey_speeds(sc)
        cv_r, _, _ = predator_upper_bounds(sc)
        assert cv_r < cu_r, f"bound {cv_r} not below prey {cu_r} at {ce}"


def test_prey_right_speed_dominates_predator_naive_speed():
    from shiftfronts.hamiltonians import directional_speed
    for ce in (-2.0, -0.5, 0.4, 1.03, 2.8):
        sc = make_scenario(c_e=ce)
        cu_r, _, _ = prey_speeds(sc)
        env2_minus = HamiltonianEnv(sc.d2, sc.r2, sc.V_minus, sc.kernel2)
        s2m_r = directional_speed(env2_minus, sc.lambda2_r)
        assert cu_r >= s2m_r - 1e-9


def test_predator_infinite_tail_edge_locked_bound():
    sc = make_scenario(lambda2_r=INFINITY, lambda2_l=INFINITY, c_e=0.3)
    cv_r, cv_l, br = predator_upper_bounds(sc)
    pair = sc.predator_pair()
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    assert ms_plus.c_star < 0.3 < ms_minus.c_star
    assert cv_r == pytest.approx(0.3, abs=1e-15)
    # and above the top threshold the bound saturates at c*_minus
    sc2 = make_scenario(lambda2_r=INFINITY, c_e=1.03)
    cv_r2, _, _ = predator_upper_bounds(sc2)
    assert abs(cv_r2 - ms_minus.c_star) < 1e-12


# -- terrace ------------------------------------------------------------------

def expected_edges(sc):
    env1_plus = HamiltonianEnv(sc.d1, sc.r1, sc.alpha_plus, sc.kernel1)
    env1_minus = HamiltonianEnv(sc.d1, sc.r1, sc.alpha_minus, sc.kernel1)
    env2_minus = HamiltonianEnv(sc.d2, sc.r2, sc.V_minus, sc.kernel2)
    from shiftfronts.hamiltonians import directional_speed
    return (directional_speed(env1_plus, sc.lambda1_r),
            directional_speed(env1_minus, sc.lambda1_l),
            directional_speed(env2_minus, sc.lambda2_r),
            directional_speed(env2_minus, sc.lambda2_l))


def test_speed_ordering_under_fu():
    sc = make_scenario()
    s1p_r, s1m_l, s2m_r, s2m_l = expected_edges(sc)
    assert -s1m_l < -s2m_l < 0.0 < s2m_r < s1p_r


def test_terrace_case_a_fast_rightward_edge():
    sc = make_scenario(lambda1_r=3.0, c_e=1.6)
    items = terrace_prediction(sc)
    s1p_r, s1m_l, s2m_r, s2m_l = expected_edges(sc)
    cu_r, _, _ = prey_speeds(sc)
    assert [t.case for t in items] == ["a", "a"]
    assert items[0].s_min == pytest.approx(s2m_r)
    assert items[0].s_max == pytest.approx(cu_r)
    assert items[0].level == sc.alpha_minus
    assert items[1].s_min == pytest.approx(-s1m_l)
    assert items[1].s_max == pytest.approx(-s2m_l)
    assert items[1].level == sc.alpha_minus


def test_terrace_case_b_edge_inside_prey_zone():
    sc = make_scenario(lambda1_r=1.0, c_e=0.8)
    items = terrace_prediction(sc)
    s1p_r, s1m_l, s2m_r, s2m_l = expected_edges(sc)
    assert s2m_r < 0.8 < s1p_r
    assert [(t.level, t.case) for t in items] == \
        [(sc.alpha_plus, "b"), (sc.alpha_minus, "b"), (sc.alpha_minus, "b")]
    assert items[0].s_min == pytest.approx(0.8)
    assert items[0].s_max == pytest.approx(s1p_r)
    assert items[1].s_max == pytest.approx(0.8)


def test_terrace_case_c_leftward_edge_inside_prey_zone():
    sc = make_scenario(c_e=-0.8)
    items = terrace_prediction(sc)
    s1p_r, s1m_l, s2m_r, s2m_l = expected_edges(sc)
    assert -s1m_l < -0.8 < -s2m_l
    assert [(t.level, t.case) for t in items] == \
        [(sc.alpha_plus, "c"), (sc.alpha_plus, "c"), (sc.alpha_minus, "c")]
    assert items[1].s_min == pytest.approx(-0.8)
    assert items[1].s_max == pytest.approx(-s2m_l)
    assert items[2].s_min == pytest.approx(-s1m_l)


def test_terrace_case_d_fast_leftward_edge():
    sc = make_scenario(lambda1_l=2.5, c_e=-2.3)
    items = terrace_prediction(sc)
    s1p_r, s1m_l, s2m_r, s2m_l = expected_edges(sc)
    _, cu_l, _ = prey_speeds(sc)
    assert [(t.level, t.case) for t in items] == \
        [(sc.alpha_plus, "d"), (sc.alpha_plus, "d")]
    assert items[0].s_min == pytest.approx(s2m_r)
    assert items[0].s_max == pytest.approx(s1p_r)
    assert items[1].s_min == pytest.approx(cu_l)
    assert items[1].s_max == pytest.approx(-s2m_l)


def test_terrace_gap_yields_no_prediction():
    sc = make_scenario(c_e=0.1)  # inside [-s2-_l, s2-_r]
    assert terrace_prediction(sc) == []


def test_terrace_case_boundary_reports_both_labels():
    sc0 = make_scenario(lambda1_r=1.0)
    s1p_r, s1m_l, _, _ = expected_edges(sc0)
    items = terrace_prediction(make_scenario(lambda1_r=1.0, c_e=s1p_r))
    assert items and all(t.case == "a|b" for t in items)
    items = terrace_prediction(make_scenario(c_e=-s1m_l))
    assert items and all(t.case == "c|d" for t in items)


def test_terrace_intervals_are_ordered_and_disjoint():
    for ce in (1.6, 0.8, -0.8, -2.3):
        items = terrace_prediction(make_scenario(c_e=ce))
        for t in items:
            assert t.s_min < t.s_max
        spans = sorted((t.s_min, t.s_max) for t in items)
        for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
            assert a1 <= b0 + 1e-12


# -- assembled report ---------------------------------------------------------

def test_speed_report_round_trips_through_json():
    rep = speed_report(make_scenario())
    blob = json.dumps(rep.to_dict(), sort_keys=True)
    back = json.loads(blob)
    assert back["predator_values_are_upper_bounds_only"] is True
    assert len(back["regions"]) == 4
    assert back["prey_right"] == rep.prey_right
    assert {r["species"] for r in back["regions"]} == {"prey", "predator"}


def test_speed_report_regions_cover_both_sides_and_species():
    rep = speed_report(make_scenario())
    combos = {(r.side, r.species) for r in rep.regions}
    assert combos == {(Side.RIGHT, SpeciesTag.PREY),
                      (Side.LEFT, SpeciesTag.PREY),
                      (Side.RIGHT, SpeciesTag.PREDATOR),
                      (Side.LEFT, SpeciesTag.PREDATOR)}
