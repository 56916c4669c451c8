"""Scenario validation, (lambda, c_e) region classification and speed formulas.

A scenario couples two species through a shifting habitat profile that
decreases from a trailing level (alpha_minus, the richer state left
behind by the shift) to a leading level (alpha_plus, ahead of the
edge).  The prey sees levels alpha_-, alpha_+; the predator sees
V_- = b alpha_- - 1 and V_+ = b alpha_+ - 1.

For each species and each propagation direction, the quarter-plane of
(tail decay rate lambda, shift speed c_e) splits into four regions
Va-Vd separated by explicit curves (gamma_a..gamma_d on the right,
gamma_o..gamma_s on the left); each region carries one closed-form
speed branch.  Prey speeds are exact; predator values are upper bounds
only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .errors import DomainError, UnsupportedRegime
from .hamiltonians import (INFINITY, HamiltonianEnv, dH, directional_speed,
                           is_infinite, lagrangian_slope, min_speed,
                           speed_curve)
from .kernels import KernelSpec
from .roots import (BOUNDARY_BAND, SpeciesPair, c_bar, g_curve, k_curve, mu0,
                    p_bar, p_star, p_under)

__all__ = ["Side", "SpeciesTag", "Label", "RegionLabel", "Scenario",
           "AssumptionResult", "validate", "classify_right", "classify_left",
           "prey_speeds", "predator_upper_bounds", "terrace_prediction",
           "TerraceInterval", "SpeedReport", "speed_report"]


class Side(str, Enum):
    RIGHT = "right"
    LEFT = "left"


class SpeciesTag(str, Enum):
    PREY = "prey"
    PREDATOR = "predator"


class Label(str, Enum):
    VA = "Va"
    VB = "Vb"
    VC = "Vc"
    VD = "Vd"
    GAMMA_A = "gamma_a"
    GAMMA_B = "gamma_b"
    GAMMA_C = "gamma_c"
    GAMMA_D = "gamma_d"
    GAMMA_O = "gamma_o"
    GAMMA_P = "gamma_p"
    GAMMA_Q = "gamma_q"
    GAMMA_R = "gamma_r"
    GAMMA_S = "gamma_s"
    ON_BOUNDARY_BAND = "on_boundary_band"


@dataclass(frozen=True)
class RegionLabel:
    """Classification of one (lambda, c_e) query."""

    side: Side
    species: SpeciesTag
    label: Label
    gamma: Label | None = None  # curve identity when label is the band

    def to_dict(self):
        return {"side": self.side.value, "species": self.species.value,
                "label": self.label.value,
                "gamma": None if self.gamma is None else self.gamma.value}


def _decay(value):
    """Validate a decay rate: positive real or the INFINITY sentinel."""
    if is_infinite(value):
        return INFINITY
    v = float(value)
    if not math.isfinite(v) or v <= 0.0:
        raise ValueError(f"decay rate must be > 0 or INFINITY, got {value!r}")
    return v


@dataclass(frozen=True)
class Scenario:
    """Full problem instance for the coupled system."""

    d1: float
    d2: float
    r1: float
    r2: float
    a: float
    b: float
    alpha_minus: float
    alpha_plus: float
    kernel1: KernelSpec
    kernel2: KernelSpec
    c_e: float
    lambda1_r: object
    lambda1_l: object
    lambda2_r: object
    lambda2_l: object

    def __post_init__(self):
        for name in ("d1", "d2", "r1", "r2",
                     "alpha_minus", "alpha_plus"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name} must be a positive real, got {v!r}")
            object.__setattr__(self, name, v)
        # interaction strengths may vanish (decoupled test modes)
        for name in ("a", "b"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be nonnegative, got {v!r}")
            object.__setattr__(self, name, v)
        c = float(self.c_e)
        if not math.isfinite(c):
            raise ValueError(f"c_e must be finite, got {self.c_e!r}")
        object.__setattr__(self, "c_e", c)
        for name in ("lambda1_r", "lambda1_l", "lambda2_r", "lambda2_l"):
            object.__setattr__(self, name, _decay(getattr(self, name)))

    # derived predator levels
    @property
    def V_minus(self) -> float:
        return self.b * self.alpha_minus - 1.0

    @property
    def V_plus(self) -> float:
        return self.b * self.alpha_plus - 1.0

    def prey_pair(self) -> SpeciesPair:
        return SpeciesPair(
            HamiltonianEnv(self.d1, self.r1, self.alpha_minus, self.kernel1),
            HamiltonianEnv(self.d1, self.r1, self.alpha_plus, self.kernel1))

    def predator_pair(self) -> SpeciesPair:
        if self.V_plus <= 0.0:
            raise UnsupportedRegime(
                f"predator leading level V_plus = {self.V_plus} <= 0; "
                "the predator cannot establish ahead of the edge")
        return SpeciesPair(
            HamiltonianEnv(self.d2, self.r2, self.V_minus, self.kernel2),
            HamiltonianEnv(self.d2, self.r2, self.V_plus, self.kernel2))


# -- assumption validation ----------------------------------------------------

@dataclass(frozen=True)
class AssumptionResult:
    name: str
    passed: bool
    detail: str
    values: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed,
                "detail": self.detail, "values": dict(self.values)}


def validate(scenario: Scenario) -> dict[str, AssumptionResult]:
    """Check each standing assumption; failures are data, not errors."""
    out: dict[str, AssumptionResult] = {}
    out["J"] = AssumptionResult(
        "J", True,
        "kernels are symmetric, nonnegative, compactly supported, unit mass "
        "by construction of the named families",
        {"half_width1": scenario.kernel1.half_width,
         "half_width2": scenario.kernel2.half_width})
    a_ok = scenario.alpha_minus > scenario.alpha_plus > 0.0
    out["A"] = AssumptionResult(
        "A", a_ok,
        "habitat levels must satisfy alpha_minus > alpha_plus > 0",
        {"alpha_minus": scenario.alpha_minus,
         "alpha_plus": scenario.alpha_plus})
    V_plus, V_minus = scenario.V_plus, scenario.V_minus
    out["H1"] = AssumptionResult(
        "H1", V_plus > 0.0,
        "predators must persist at the leading prey level (b alpha_plus > 1)",
        {"V_plus": V_plus})
    h2 = scenario.alpha_plus - scenario.a * V_minus
    out["H2"] = AssumptionResult(
        "H2", h2 > 0.0,
        "prey must withstand saturated predation (alpha_plus - a V_minus > 0)",
        {"alpha_plus_minus_aV_minus": h2, "V_minus": V_minus})
    if V_minus > 0.0:
        env1_plus = HamiltonianEnv(scenario.d1, scenario.r1,
                                   scenario.alpha_plus, scenario.kernel1)
        env2_minus = HamiltonianEnv(scenario.d2, scenario.r2, V_minus,
                                    scenario.kernel2)
        s1p_r = directional_speed(env1_plus, scenario.lambda1_r)
        s1p_l = directional_speed(env1_plus, scenario.lambda1_l)
        s2m_r = directional_speed(env2_minus, scenario.lambda2_r)
        s2m_l = directional_speed(env2_minus, scenario.lambda2_l)
        fu_ok = s2m_r < s1p_r and s2m_l < s1p_l
        out["FU"] = AssumptionResult(
            "FU", fu_ok,
            "prey must outrun predators in both directions "
            "(s2-_r < s1+_r and s2-_l < s1+_l)",
            {"s1_plus_r": s1p_r, "s1_plus_l": s1p_l,
             "s2_minus_r": s2m_r, "s2_minus_l": s2m_l})
    else:
        out["FU"] = AssumptionResult(
            "FU", False,
            "not computable: predator trailing level V_minus <= 0",
            {"V_minus": V_minus})
    out["I"] = AssumptionResult(
        "I", True,
        "initial tails: positive exponential decay rates, or INFINITY for "
        "compactly supported / faster-than-exponential data",
        {"lambda1_r": _decay_repr(scenario.lambda1_r),
         "lambda1_l": _decay_repr(scenario.lambda1_l),
         "lambda2_r": _decay_repr(scenario.lambda2_r),
         "lambda2_l": _decay_repr(scenario.lambda2_l)})
    return out


def _decay_repr(lam):
    return "inf" if is_infinite(lam) else float(lam)


def _require(report: dict[str, AssumptionResult], names: tuple[str, ...]):
    for n in names:
        if not report[n].passed:
            raise UnsupportedRegime(
                f"assumption ({n}) fails: {report[n].detail} "
                f"[{report[n].values}]")


# -- cached per-pair constants ------------------------------------------------

@lru_cache(maxsize=None)
def _pair_facts(pair: SpeciesPair):
    ms_minus = min_speed(pair.env_minus)
    ms_plus = min_speed(pair.env_plus)
    cb = c_bar(pair)
    return {
        "mu_star_minus": ms_minus.mu_star, "c_star_minus": ms_minus.c_star,
        "mu_star_plus": ms_plus.mu_star, "c_star_plus": ms_plus.c_star,
        "mu0": mu0(pair), "c_bar": cb,
        "ld_c_bar": lagrangian_slope(pair.env_minus, cb),
    }


# -- region classification ----------------------------------------------------

def classify_right(pair: SpeciesPair, lambda_r, c_e: float,
                   species: SpeciesTag = SpeciesTag.PREY) -> RegionLabel:
    """Place (lambda_r, c_e) in the rightward division Va-Vd / gamma_a-d.

    Points within BOUNDARY_BAND of a curve return the band label with
    the curve identity attached; the INFINITY sentinel uses the
    lambda -> infinity limits of the curves.
    """
    f = _pair_facts(pair)
    c_e = float(c_e)
    if not math.isfinite(c_e):
        raise DomainError(f"c_e must be finite, got {c_e!r}")

    def band(gamma: Label) -> RegionLabel:
        return RegionLabel(Side.RIGHT, species, Label.ON_BOUNDARY_BAND, gamma)

    def plain(label: Label) -> RegionLabel:
        return RegionLabel(Side.RIGHT, species, label)

    if is_infinite(lambda_r):
        if abs(c_e - f["c_star_plus"]) <= BOUNDARY_BAND:
            return band(Label.GAMMA_B)
        if abs(c_e - f["c_star_minus"]) <= BOUNDARY_BAND:
            return band(Label.GAMMA_D)
        if c_e < f["c_star_plus"]:
            return plain(Label.VA)
        if c_e < f["c_star_minus"]:
            return plain(Label.VB)
        return plain(Label.VC)

    lam = float(lambda_r)
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f"lambda_r must be > 0 or INFINITY, got {lambda_r!r}")

    c_plus_lam = speed_curve(pair.env_plus, lam)
    k_lam = k_curve(pair, lam) if lam < f["mu_star_minus"] else None

    # curve bands, in canonical order
    if lam <= f["mu_star_plus"] + BOUNDARY_BAND and \
            abs(c_e - c_plus_lam) <= BOUNDARY_BAND:
        return band(Label.GAMMA_A)
    if lam >= f["mu_star_plus"] - BOUNDARY_BAND and \
            abs(c_e - f["c_star_plus"]) <= BOUNDARY_BAND:
        return band(Label.GAMMA_B)
    if k_lam is not None and lam >= f["mu0"] - BOUNDARY_BAND and \
            abs(c_e - k_lam) <= BOUNDARY_BAND:
        return band(Label.GAMMA_C)
    if lam >= f["mu0"] - BOUNDARY_BAND and \
            abs(c_e - f["c_star_minus"]) <= BOUNDARY_BAND:
        return band(Label.GAMMA_D)

    s_plus_r = c_plus_lam if lam <= f["mu_star_plus"] else f["c_star_plus"]

    in_va = c_e < s_plus_r
    in_vb = lam > f["mu0"] and s_plus_r < c_e < f["c_star_minus"]
    in_vc = ((f["mu0"] < lam < f["mu_star_minus"] and k_lam is not None
              and f["c_star_minus"] < c_e < k_lam)
             or (lam >= f["mu_star_minus"] and c_e > f["c_star_minus"]))
    in_vd = (lam < f["mu_star_minus"] and k_lam is not None
             and c_e > max(c_plus_lam, k_lam))
    fired = [lab for lab, ok in ((Label.VA, in_va), (Label.VB, in_vb),
                                 (Label.VC, in_vc), (Label.VD, in_vd)) if ok]
    if len(fired) != 1:
        raise RuntimeError(
            f"partition violation at (lambda={lam}, c_e={c_e}): {fired}")
    return plain(fired[0])


def classify_left(pair: SpeciesPair, lambda_l, c_e: float,
                  species: SpeciesTag = SpeciesTag.PREY) -> RegionLabel:
    """Place (lambda_l, c_e) in the leftward division Va-Vd / gamma_o-s."""
    f = _pair_facts(pair)
    c_e = float(c_e)
    if not math.isfinite(c_e):
        raise DomainError(f"c_e must be finite, got {c_e!r}")

    def band(gamma: Label) -> RegionLabel:
        return RegionLabel(Side.LEFT, species, Label.ON_BOUNDARY_BAND, gamma)

    def plain(label: Label) -> RegionLabel:
        return RegionLabel(Side.LEFT, species, label)

    if is_infinite(lambda_l):
        if abs(c_e + f["c_star_minus"]) <= BOUNDARY_BAND:
            return band(Label.GAMMA_P)
        if abs(c_e + f["c_bar"]) <= BOUNDARY_BAND:
            return band(Label.GAMMA_R)
        if c_e > -f["c_star_minus"]:
            return plain(Label.VA)
        if c_e > -f["c_bar"]:
            return plain(Label.VB)
        return plain(Label.VD)

    lam = float(lambda_l)
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f"lambda_l must be > 0 or INFINITY, got {lambda_l!r}")

    c_minus_lam = speed_curve(pair.env_minus, lam)
    dh_lam = dH(pair.env_minus, lam)
    in_g_domain = f["mu_star_plus"] < lam <= f["ld_c_bar"] + BOUNDARY_BAND
    g_lam = g_curve(pair, lam) if in_g_domain else None

    if lam <= f["mu_star_minus"] + BOUNDARY_BAND and \
            abs(c_e + c_minus_lam) <= BOUNDARY_BAND:
        return band(Label.GAMMA_O)
    if lam >= f["mu_star_minus"] - BOUNDARY_BAND and \
            abs(c_e + f["c_star_minus"]) <= BOUNDARY_BAND:
        return band(Label.GAMMA_P)
    if g_lam is not None and abs(c_e + g_lam) <= BOUNDARY_BAND:
        return band(Label.GAMMA_Q)
    if lam >= f["ld_c_bar"] - BOUNDARY_BAND and \
            abs(c_e + f["c_bar"]) <= BOUNDARY_BAND:
        return band(Label.GAMMA_R)
    if f["mu_star_minus"] - BOUNDARY_BAND <= lam <= f["ld_c_bar"] + BOUNDARY_BAND \
            and abs(c_e + dh_lam) <= BOUNDARY_BAND:
        return band(Label.GAMMA_S)

    s_minus_l = c_minus_lam if lam <= f["mu_star_minus"] else f["c_star_minus"]

    in_va = c_e > -s_minus_l
    in_vb = (lam > f["mu_star_minus"]
             and max(-dh_lam, -f["c_bar"]) < c_e < -f["c_star_minus"])
    in_vc = ((lam <= f["mu_star_plus"] and c_e < -c_minus_lam)
             or (f["mu_star_plus"] < lam < f["mu_star_minus"]
                 and g_lam is not None and -g_lam < c_e < -c_minus_lam)
             or (f["mu_star_minus"] <= lam < f["ld_c_bar"]
                 and g_lam is not None and -g_lam < c_e < -dh_lam))
    in_vd = ((g_lam is not None and c_e < -g_lam)
             or (lam > f["ld_c_bar"] and c_e < -f["c_bar"]))
    fired = [lab for lab, ok in ((Label.VA, in_va), (Label.VB, in_vb),
                                 (Label.VC, in_vc), (Label.VD, in_vd)) if ok]
    if len(fired) != 1:
        raise RuntimeError(
            f"partition violation at (lambda={lam}, c_e={c_e}): {fired}")
    return plain(fired[0])


# -- speed dispatch -----------------------------------------------------------

_RIGHT_BRANCH_OF_GAMMA = {Label.GAMMA_A: Label.VA, Label.GAMMA_B: Label.VA,
                          Label.GAMMA_C: Label.VC, Label.GAMMA_D: Label.VB}
_LEFT_BRANCH_OF_GAMMA = {Label.GAMMA_O: Label.VA, Label.GAMMA_P: Label.VA,
                         Label.GAMMA_S: Label.VB, Label.GAMMA_Q: Label.VD,
                         Label.GAMMA_R: Label.VD}


def _right_speed(pair: SpeciesPair, lam, c_e: float,
                 species: SpeciesTag) -> tuple[float, RegionLabel, str]:
    f = _pair_facts(pair)
    region = classify_right(pair, lam, c_e, species)
    label = region.label
    if label is Label.ON_BOUNDARY_BAND:
        branch = _RIGHT_BRANCH_OF_GAMMA[region.gamma]
        note = f" (on curve {region.gamma.value})"
    else:
        branch, note = label, ""

    if is_infinite(lam):
        # compact/fast tails: the three-way split in c_e
        if branch is Label.VA:
            return (f["c_star_plus"], region,
                    "right: compact tail, slow shift -> minimal leading-level "
                    f"speed c*_plus = {f['c_star_plus']:.12g}" + note)
        if branch is Label.VB:
            on_top = abs(c_e - f["c_star_minus"]) <= BOUNDARY_BAND
            value = f["c_star_minus"] if on_top else c_e
            return (value, region,
                    "right: compact tail, edge-locked regime -> speed c_e"
                    + note)
        return (f["c_star_minus"], region,
                "right: compact tail, fast shift -> minimal trailing-level "
                f"speed c*_minus = {f['c_star_minus']:.12g}" + note)

    lam = float(lam)
    if branch is Label.VA:
        value = directional_speed(pair.env_plus, lam)
        return (value, region,
                f"right: tail-driven leading-level speed s_plus_r = "
                f"c_plus(min(lambda, mu*_plus)) = {value:.12g}" + note)
    if branch is Label.VB:
        return (c_e, region,
                "right: front locked to the habitat edge -> speed c_e" + note)
    if branch is Label.VC:
        return (f["c_star_minus"], region,
                f"right: minimal trailing-level speed c*_minus = "
                f"{f['c_star_minus']:.12g}" + note)
    ps = p_star(pair, c_e, lam)
    if ps is None:
        raise RuntimeError(
            f"p_star unavailable inside Vd at (lambda={lam}, c_e={c_e})")
    value = speed_curve(pair.env_minus, ps)
    return (value, region,
            f"right: nonlocally determined speed c_minus(p*) = {value:.12g} "
            f"with tail-matching slope p* = {ps:.12g}" + note)


def _left_speed(pair: SpeciesPair, lam, c_e: float,
                species: SpeciesTag) -> tuple[float, RegionLabel, str]:
    f = _pair_facts(pair)
    region = classify_left(pair, lam, c_e, species)
    label = region.label
    if label is Label.ON_BOUNDARY_BAND:
        branch = _LEFT_BRANCH_OF_GAMMA[region.gamma]
        note = f" (on curve {region.gamma.value})"
    else:
        branch, note = label, ""

    if is_infinite(lam):
        if branch is Label.VA:
            return (-f["c_star_minus"], region,
                    "left: compact tail, shift no faster than -c*_minus -> "
                    f"speed -c*_minus = {-f['c_star_minus']:.12g}" + note)
        if branch is Label.VB:
            value = -speed_curve(pair.env_plus, p_bar(pair, -c_e))
            return (value, region,
                    "left: compact tail, intermediate leftward shift -> "
                    f"-c_plus(p_bar) = {value:.12g}" + note)
        return (-f["c_star_plus"], region,
                "left: compact tail, fast leftward shift -> "
                f"-c*_plus = {-f['c_star_plus']:.12g}" + note)

    lam = float(lam)
    if branch is Label.VA:
        value = -directional_speed(pair.env_minus, lam)
        return (value, region,
                f"left: tail-driven trailing-level speed -s_minus_l = "
                f"-c_minus(min(lambda, mu*_minus)) = {value:.12g}" + note)
    if branch is Label.VC:
        pu = p_under(pair, -c_e, lam)
        value = -speed_curve(pair.env_plus, pu)
        return (value, region,
                f"left: nonlocally determined speed -c_plus(p_under) = "
                f"{value:.12g} with left-tail slope p_under = {pu:.12g}" + note)
    if branch is Label.VB:
        pb = p_bar(pair, -c_e)
        value = -speed_curve(pair.env_plus, pb)
        return (value, region,
                f"left: nonlocally determined speed -c_plus(p_bar) = "
                f"{value:.12g} with slope p_bar = {pb:.12g}" + note)
    return (-f["c_star_plus"], region,
            f"left: minimal leading-level speed -c*_plus = "
            f"{-f['c_star_plus']:.12g}" + note)


def prey_speeds(scenario: Scenario):
    """Exact rightward/leftward prey spreading speeds with provenance.

    Returns (c_u_r, c_u_l, branches) where branches maps each side to
    its region label and formula string.
    """
    report = validate(scenario)
    _require(report, ("A", "H1", "H2", "FU"))
    pair = scenario.prey_pair()
    c_u_r, reg_r, why_r = _right_speed(pair, scenario.lambda1_r,
                                       scenario.c_e, SpeciesTag.PREY)
    c_u_l, reg_l, why_l = _left_speed(pair, scenario.lambda1_l,
                                      scenario.c_e, SpeciesTag.PREY)
    branches = {"right": {"region": reg_r, "formula": why_r},
                "left": {"region": reg_l, "formula": why_l}}
    return c_u_r, c_u_l, branches


def predator_upper_bounds(scenario: Scenario):
    """Upper bounds for the predator spreading speeds (bounds only;
    exact predator speeds are open).

    Returns (cv_r_upper, cv_l_upper, branches); branches carry an
    `upper_bound_only` marker.
    """
    report = validate(scenario)
    _require(report, ("A", "H1"))
    pair = scenario.predator_pair()
    f = _pair_facts(pair)
    lam_r = scenario.lambda2_r
    c_e = scenario.c_e
    if is_infinite(lam_r) and abs(c_e - f["c_star_minus"]) <= BOUNDARY_BAND:
        # closed right endpoint in the compact-tail edge-locked branch:
        # the bound is stated as c_e there (the adjacent branch gives the
        # same value c*_minus, so the choice is value-irrelevant)
        reg = classify_right(pair, lam_r, c_e, SpeciesTag.PREDATOR)
        cv_r = c_e
        why_r = ("right: compact tail, edge-locked regime (closed endpoint "
                 "at c*_minus) -> bound c_e; adjacent branch agrees")
    else:
        cv_r, reg, why_r = _right_speed(pair, lam_r, c_e, SpeciesTag.PREDATOR)
    cv_l, reg_l, why_l = _left_speed(pair, scenario.lambda2_l, c_e,
                                     SpeciesTag.PREDATOR)
    branches = {"right": {"region": reg, "formula": why_r,
                          "upper_bound_only": True},
                "left": {"region": reg_l, "formula": why_l,
                         "upper_bound_only": True}}
    return cv_r, cv_l, branches


# -- terrace ------------------------------------------------------------------

@dataclass(frozen=True)
class TerraceInterval:
    """Predicted plateau: u -> level uniformly on (s_min t, s_max t)."""

    s_min: float
    s_max: float
    level: float
    case: str

    def to_dict(self):
        return {"s_min": self.s_min, "s_max": self.s_max,
                "level": self.level, "case": self.case}


def terrace_prediction(scenario: Scenario) -> list[TerraceInterval]:
    """Long-time plateau layout of the prey between the moving fronts.

    Four cases keyed on c_e against s1+_r, s2-_r, -s2-_l, -s1-_l; for
    c_e inside [-s2-_l, s2-_r] (edge within the predator-occupied band)
    no plateau is asserted and the list is empty.  At a case boundary
    both case tags are attached.
    """
    report = validate(scenario)
    _require(report, ("A", "H1", "H2", "FU"))
    env1_plus = HamiltonianEnv(scenario.d1, scenario.r1, scenario.alpha_plus,
                               scenario.kernel1)
    env1_minus = HamiltonianEnv(scenario.d1, scenario.r1, scenario.alpha_minus,
                                scenario.kernel1)
    env2_minus = HamiltonianEnv(scenario.d2, scenario.r2, scenario.V_minus,
                                scenario.kernel2)
    s1p_r = directional_speed(env1_plus, scenario.lambda1_r)
    s1m_l = directional_speed(env1_minus, scenario.lambda1_l)
    s2m_r = directional_speed(env2_minus, scenario.lambda2_r)
    s2m_l = directional_speed(env2_minus, scenario.lambda2_l)
    c_u_r, c_u_l, _ = prey_speeds(scenario)
    c_e = scenario.c_e
    am, ap = scenario.alpha_minus, scenario.alpha_plus

    def near(x, y):
        return abs(x - y) <= BOUNDARY_BAND

    items: list[TerraceInterval] = []

    def add(lo, hi, level, case):
        if hi - lo > 0.0:
            items.append(TerraceInterval(lo, hi, level, case))

    if c_e >= s1p_r - BOUNDARY_BAND:
        case = "a|b" if near(c_e, s1p_r) else "a"
        add(s2m_r, c_u_r, am, case)
        add(-s1m_l, -s2m_l, am, case)
    elif c_e > s2m_r:
        case = "b"
        add(c_e, s1p_r, ap, case)
        add(s2m_r, c_e, am, case)
        add(-s1m_l, -s2m_l, am, case)
    elif c_e >= -s2m_l:
        return []  # edge sits inside the predator-occupied band
    elif c_e > -s1m_l + BOUNDARY_BAND:
        case = "c"
        add(s2m_r, s1p_r, ap, case)
        add(c_e, -s2m_l, ap, case)
        add(-s1m_l, c_e, am, case)
    else:
        case = "c|d" if near(c_e, -s1m_l) else "d"
        add(s2m_r, s1p_r, ap, case)
        add(c_u_l, -s2m_l, ap, case)
    return items


# -- assembled report ---------------------------------------------------------

@dataclass(frozen=True)
class SpeedReport:
    prey_right: float
    prey_left: float
    predator_right_upper: float
    predator_left_upper: float
    regions: tuple[RegionLabel, ...]
    formula_branch: dict
    terrace: tuple[TerraceInterval, ...]
    predator_values_are_upper_bounds_only: bool = True

    def to_dict(self):
        return {
            "prey_right": self.prey_right,
            "prey_left": self.prey_left,
            "predator_right_upper": self.predator_right_upper,
            "predator_left_upper": self.predator_left_upper,
            "regions": [r.to_dict() for r in self.regions],
            "formula_branch": self.formula_branch,
            "terrace": [t.to_dict() for t in self.terrace],
            "predator_values_are_upper_bounds_only":
                self.predator_values_are_upper_bounds_only,
        }


def speed_report(scenario: Scenario) -> SpeedReport:
    """All speed outputs for a validated scenario in one structure."""
    c_u_r, c_u_l, prey_branches = prey_speeds(scenario)
    cv_r, cv_l, pred_branches = predator_upper_bounds(scenario)
    regions = (prey_branches["right"]["region"],
               prey_branches["left"]["region"],
               pred_branches["right"]["region"],
               pred_branches["left"]["region"])
    formula_branch = {
        "prey_right": prey_branches["right"]["formula"],
        "prey_left": prey_branches["left"]["formula"],
        "predator_right_upper": pred_branches["right"]["formula"],
        "predator_left_upper": pred_branches["left"]["formula"],
    }
    terrace = tuple(terrace_prediction(scenario))
    return SpeedReport(
        prey_right=c_u_r, prey_left=c_u_l,
        predator_right_upper=cv_r, predator_left_upper=cv_l,
        regions=regions, formula_branch=formula_branch, terrace=terrace)
