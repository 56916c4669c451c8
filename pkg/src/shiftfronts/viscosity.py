"""Closed-form rate profiles and numerical certification of their
viscosity sub/supersolution properties.

The long-time behaviour of the prey along rays x = st is governed by a
rate function rho(s) solving an obstacle Hamilton-Jacobi equation
min{rho - s rho' + H(rho') + R(s), rho} = 0 with a piecewise-constant
reaction ceiling/floor R.  Each classifier region admits an explicit
rho assembled from three kinds of pieces: affine tails mu*s - H(mu),
Legendre arcs L(s), and a flat zero plateau whose endpoint -- the zero
front -- is exactly the spreading speed.

This module builds those profiles, checks their internal consistency
(continuity, tangency, boundary slopes) and certifies the defining
inequalities on dense grids, including the test-slope sweeps demanded
by the viscosity definitions at kinks.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .classifier import (Label, Scenario, Side, SpeciesTag,
                         _LEFT_BRANCH_OF_GAMMA, _RIGHT_BRANCH_OF_GAMMA,
                         classify_left, classify_right)
from .errors import DomainError
from .hamiltonians import (H, HamiltonianEnv, dH, directional_speed,
                           is_infinite, lagrangian, lagrangian_slope,
                           min_speed, speed_curve)
from .kernels import mgf
from .roots import SpeciesPair, c_bar, check_hat_p, p_bar, p_star, p_under

__all__ = ["PieceKind", "LevelTag", "Piece", "PiecewiseProfile",
           "FieldKind", "CoefficientField", "upper_field", "lower_field",
           "predator_field", "build_profile", "check_continuity",
           "check_boundary", "certify_supersolution", "certify_subsolution",
           "large_deviation_rate", "CertificationReport"]


class PieceKind(str, Enum):
    AFFINE = "affine"
    ARC = "arc"
    ZERO = "zero"


class LevelTag(str, Enum):
    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class Piece:
    """One smooth span of the rate profile on [lo, hi]."""

    kind: PieceKind
    lo: float
    hi: float
    mu: float | None = None        # affine slope (signed)
    level: LevelTag | None = None  # which habitat level's Hamiltonian

    def describe(self) -> str:
        span = f"[{self.lo:.10g}, {self.hi:.10g}]"
        if self.kind is PieceKind.ZERO:
            return f"zero on {span}"
        if self.kind is PieceKind.AFFINE:
            return (f"affine mu={self.mu:.10g} level {self.level.value} "
                    f"on {span}")
        return f"arc level {self.level.value} on {span}"


def _env_of(pair: SpeciesPair, level: LevelTag) -> HamiltonianEnv:
    return pair.env_plus if level is LevelTag.PLUS else pair.env_minus


def _piece_value(piece: Piece, pair: SpeciesPair, s: float) -> float:
    if piece.kind is PieceKind.ZERO:
        return 0.0
    env = _env_of(pair, piece.level)
    if piece.kind is PieceKind.AFFINE:
        return piece.mu * s - H(env, piece.mu)
    return lagrangian(env, s)


def _piece_slope(piece: Piece, pair: SpeciesPair, s: float) -> float:
    if piece.kind is PieceKind.ZERO:
        return 0.0
    if piece.kind is PieceKind.AFFINE:
        return piece.mu
    return lagrangian_slope(_env_of(pair, piece.level), s)


@dataclass(frozen=True)
class PiecewiseProfile:
    """Ordered pieces of rho(s) on a half-line, with its zero front."""

    side: Side
    pair: SpeciesPair
    pieces: tuple[Piece, ...]
    zero_front: float
    case: str

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(p.lo for p in self.pieces[1:])

    def _locate(self, s: float) -> Piece:
        if self.side is Side.RIGHT:
            if s < 0.0 or not math.isfinite(s):
                raise DomainError(f"rightward profile needs s >= 0, got {s}")
        elif s > 0.0 or not math.isfinite(s):
            raise DomainError(f"leftward profile needs s <= 0, got {s}")
        los = [p.lo for p in self.pieces]
        i = bisect.bisect_right(los, s) - 1
        return self.pieces[max(i, 0)]

    def value(self, s: float) -> float:
        return _piece_value(self._locate(float(s)), self.pair, float(s))

    def slope(self, s: float) -> float:
        """Derivative inside a piece (one-sided from the right at kinks)."""
        return _piece_slope(self._locate(float(s)), self.pair, float(s))

    def table(self, s_values) -> list[tuple[float, float]]:
        return [(float(s), self.value(s)) for s in np.asarray(s_values, float)]

    def describe(self) -> str:
        lines = [f"{self.side.value} profile ({self.case}), "
                 f"zero front {self.zero_front:.10g}"]
        lines += ["  " + p.describe() for p in self.pieces]
        return "\n".join(lines)


# -- coefficient fields -------------------------------------------------------

class FieldKind(str, Enum):
    R_BAR = "RBar"
    R_UNDER_1 = "RUnder1"
    R_UNDER_2 = "RUnder2"
    R_UNDER_3 = "RUnder3"
    R_0 = "R0"


@dataclass(frozen=True)
class CoefficientField:
    """Piecewise-constant reaction bound with envelope evaluation."""

    kind: FieldKind
    thresholds: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.thresholds) + 1:
            raise ValueError("need one more value than thresholds")
        if any(b < a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be nondecreasing")

    def _bracket(self, s: float, atol: float = 1e-12) -> tuple[float, ...]:
        js = [j for j, t in enumerate(self.thresholds) if abs(s - t) <= atol]
        if not js:
            i = bisect.bisect_left(self.thresholds, s)
            return (self.values[i],)
        return tuple(self.values[min(js):max(js) + 2])

    def plain(self, s: float) -> float:
        i = bisect.bisect_right(self.thresholds, s)
        return self.values[i]

    def upper(self, s: float) -> float:
        """Upper semicontinuous envelope R*."""
        return max(self._bracket(s))

    def lower(self, s: float) -> float:
        """Lower semicontinuous envelope R_*."""
        return min(self._bracket(s))


def _predator_trail_speeds(sc: Scenario) -> tuple[float, float]:
    env2_minus = HamiltonianEnv(sc.d2, sc.r2, sc.V_minus, sc.kernel2)
    return (directional_speed(env2_minus, sc.lambda2_r),
            directional_speed(env2_minus, sc.lambda2_l))


def upper_field(sc: Scenario) -> CoefficientField:
    """Reaction ceiling: prey growth ignores predation entirely."""
    return CoefficientField(FieldKind.R_BAR, (sc.c_e,),
                            (sc.r1 * sc.alpha_minus, sc.r1 * sc.alpha_plus))


def lower_field(sc: Scenario) -> CoefficientField:
    """Reaction floor: predation saturated on the predator-occupied band.

    The band [-s2-_l, s2-_r] moves with the predator's own spreading;
    three layouts arise depending on where c_e sits relative to it.
    """
    s2r, s2l = _predator_trail_speeds(sc)
    am = sc.r1 * sc.alpha_minus
    ap = sc.r1 * sc.alpha_plus
    am_sat = sc.r1 * (sc.alpha_minus - sc.a * sc.V_minus)
    ap_sat = sc.r1 * (sc.alpha_plus - sc.a * sc.V_minus)
    if sc.c_e > s2r:
        return CoefficientField(FieldKind.R_UNDER_1,
                                (-s2l, s2r, sc.c_e), (am, am_sat, am, ap))
    if sc.c_e >= -s2l:
        return CoefficientField(FieldKind.R_UNDER_2,
                                (-s2l, sc.c_e, s2r), (am, am_sat, ap_sat, ap))
    return CoefficientField(FieldKind.R_UNDER_3,
                            (sc.c_e, -s2l, s2r), (am, ap, ap_sat, ap))


def predator_field(sc: Scenario) -> CoefficientField:
    """Predator growth levels on either side of the habitat edge."""
    return CoefficientField(FieldKind.R_0, (sc.c_e,),
                            (sc.r2 * sc.V_minus, sc.r2 * sc.V_plus))


# -- profile construction -----------------------------------------------------

def _pieces(raw) -> tuple[Piece, ...]:
    kept = [p for p in raw if p.hi > p.lo]
    if not kept:
        raise RuntimeError("profile construction produced no pieces")
    return tuple(kept)


def _nu2(pair: SpeciesPair, c_e: float) -> float:
    """Larger slope at which the leading-level speed curve crosses c_e."""
    env = pair.env_plus
    ms = min_speed(env)
    if c_e <= ms.c_star:
        raise DomainError(f"c_e={c_e} not above the minimal speed {ms.c_star}")

    def f(mu):
        return c_e * mu - H(env, mu)

    hi = ms.mu_star + 1.0
    while f(hi) > 0.0:
        hi = ms.mu_star + 2.0 * (hi - ms.mu_star)
        if hi > 1e8:
            raise RuntimeError("no upper crossing found for nu2")
    root = brentq(f, ms.mu_star, hi, xtol=1e-14)
    if abs(f(root)) > 1e-9 * max(1.0, abs(c_e)):
        raise RuntimeError(f"nu2 residual too large: {f(root)}")
    return float(root)


def _build_right(sc: Scenario) -> PiecewiseProfile:
    pair = sc.prey_pair()
    lam, c_e = sc.lambda1_r, sc.c_e
    region = classify_right(pair, lam, c_e, SpeciesTag.PREY)
    branch = region.label if region.label is not Label.ON_BOUNDARY_BAND \
        else _RIGHT_BRANCH_OF_GAMMA[region.gamma]
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    inf = math.inf

    if branch is Label.VA:
        if is_infinite(lam):
            return PiecewiseProfile(Side.RIGHT, pair, _pieces([
                Piece(PieceKind.ZERO, 0.0, ms_plus.c_star),
                Piece(PieceKind.ARC, ms_plus.c_star, inf,
                      level=LevelTag.PLUS),
            ]), ms_plus.c_star, "right/Va/compact")
        lam = float(lam)
        if lam <= ms_plus.mu_star:
            front = speed_curve(pair.env_plus, lam)
            return PiecewiseProfile(Side.RIGHT, pair, _pieces([
                Piece(PieceKind.ZERO, 0.0, front),
                Piece(PieceKind.AFFINE, front, inf, mu=lam,
                      level=LevelTag.PLUS),
            ]), front, "right/Va/affine")
        bend = dH(pair.env_plus, lam)
        return PiecewiseProfile(Side.RIGHT, pair, _pieces([
            Piece(PieceKind.ZERO, 0.0, ms_plus.c_star),
            Piece(PieceKind.ARC, ms_plus.c_star, bend, level=LevelTag.PLUS),
            Piece(PieceKind.AFFINE, bend, inf, mu=lam, level=LevelTag.PLUS),
        ]), ms_plus.c_star, "right/Va/arc")

    if branch is Label.VB:
        nu2 = _nu2(pair, c_e)
        bend2 = dH(pair.env_plus, nu2)
        if is_infinite(lam):
            return PiecewiseProfile(Side.RIGHT, pair, _pieces([
                Piece(PieceKind.ZERO, 0.0, c_e),
                Piece(PieceKind.AFFINE, c_e, bend2, mu=nu2,
                      level=LevelTag.PLUS),
                Piece(PieceKind.ARC, bend2, inf, level=LevelTag.PLUS),
            ]), c_e, "right/Vb/compact")
        lam = float(lam)
        if lam < nu2:
            s_hat = ((H(pair.env_plus, nu2) - H(pair.env_plus, lam))
                     / (nu2 - lam))
            return PiecewiseProfile(Side.RIGHT, pair, _pieces([
                Piece(PieceKind.ZERO, 0.0, c_e),
                Piece(PieceKind.AFFINE, c_e, s_hat, mu=nu2,
                      level=LevelTag.PLUS),
                Piece(PieceKind.AFFINE, s_hat, inf, mu=lam,
                      level=LevelTag.PLUS),
            ]), c_e, "right/Vb/two-affine")
        bend = dH(pair.env_plus, lam)
        return PiecewiseProfile(Side.RIGHT, pair, _pieces([
            Piece(PieceKind.ZERO, 0.0, c_e),
            Piece(PieceKind.AFFINE, c_e, bend2, mu=nu2, level=LevelTag.PLUS),
            Piece(PieceKind.ARC, bend2, bend, level=LevelTag.PLUS),
            Piece(PieceKind.AFFINE, bend, inf, mu=lam, level=LevelTag.PLUS),
        ]), c_e, "right/Vb/affine-arc")

    if branch is Label.VD:
        lam = float(lam)
        ps = p_star(pair, c_e, lam)
        if ps is None:
            raise RuntimeError(
                f"tail-matching slope unavailable in Vd at ({lam}, {c_e})")
        front = speed_curve(pair.env_minus, ps)
        return PiecewiseProfile(Side.RIGHT, pair, _pieces([
            Piece(PieceKind.ZERO, 0.0, front),
            Piece(PieceKind.AFFINE, front, c_e, mu=ps, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, c_e, inf, mu=lam, level=LevelTag.PLUS),
        ]), front, "right/Vd/pstar")

    # branch Vc: front at the trailing minimal speed
    front = ms_minus.c_star
    p_check, p_hat = check_hat_p(pair, c_e)
    if is_infinite(lam):
        bend_hat = dH(pair.env_plus, p_hat)
        return PiecewiseProfile(Side.RIGHT, pair, _pieces([
            Piece(PieceKind.ZERO, 0.0, front),
            Piece(PieceKind.ARC, front, c_e, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, c_e, bend_hat, mu=p_hat,
                  level=LevelTag.PLUS),
            Piece(PieceKind.ARC, bend_hat, inf, level=LevelTag.PLUS),
        ]), front, "right/Vc/compact")
    lam = float(lam)
    if lam <= p_check:
        ps = p_star(pair, c_e, lam)
        if ps is None:
            raise RuntimeError(
                f"tail-matching slope unavailable in Vc at ({lam}, {c_e})")
        bend = dH(pair.env_minus, ps)
        return PiecewiseProfile(Side.RIGHT, pair, _pieces([
            Piece(PieceKind.ZERO, 0.0, front),
            Piece(PieceKind.ARC, front, bend, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, bend, c_e, mu=ps, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, c_e, inf, mu=lam, level=LevelTag.PLUS),
        ]), front, "right/Vc/pstar-arc")
    if lam < p_hat:
        s_hat = ((H(pair.env_plus, p_hat) - H(pair.env_plus, lam))
                 / (p_hat - lam))
        return PiecewiseProfile(Side.RIGHT, pair, _pieces([
            Piece(PieceKind.ZERO, 0.0, front),
            Piece(PieceKind.ARC, front, c_e, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, c_e, s_hat, mu=p_hat,
                  level=LevelTag.PLUS),
            Piece(PieceKind.AFFINE, s_hat, inf, mu=lam, level=LevelTag.PLUS),
        ]), front, "right/Vc/chord")
    bend_hat = dH(pair.env_plus, p_hat)
    bend = dH(pair.env_plus, lam)
    return PiecewiseProfile(Side.RIGHT, pair, _pieces([
        Piece(PieceKind.ZERO, 0.0, front),
        Piece(PieceKind.ARC, front, c_e, level=LevelTag.MINUS),
        Piece(PieceKind.AFFINE, c_e, bend_hat, mu=p_hat, level=LevelTag.PLUS),
        Piece(PieceKind.ARC, bend_hat, bend, level=LevelTag.PLUS),
        Piece(PieceKind.AFFINE, bend, inf, mu=lam, level=LevelTag.PLUS),
    ]), front, "right/Vc/double-arc")


def _build_left(sc: Scenario) -> PiecewiseProfile:
    pair = sc.prey_pair()
    lam, c_e = sc.lambda1_l, sc.c_e
    region = classify_left(pair, lam, c_e, SpeciesTag.PREY)
    branch = region.label if region.label is not Label.ON_BOUNDARY_BAND \
        else _LEFT_BRANCH_OF_GAMMA[region.gamma]
    ms_plus = min_speed(pair.env_plus)
    ms_minus = min_speed(pair.env_minus)
    ninf = -math.inf

    if branch is Label.VA:
        if is_infinite(lam):
            return PiecewiseProfile(Side.LEFT, pair, _pieces([
                Piece(PieceKind.ARC, ninf, -ms_minus.c_star,
                      level=LevelTag.MINUS),
                Piece(PieceKind.ZERO, -ms_minus.c_star, 0.0),
            ]), -ms_minus.c_star, "left/Va/compact")
        lam = float(lam)
        if lam <= ms_minus.mu_star:
            front = -speed_curve(pair.env_minus, lam)
            return PiecewiseProfile(Side.LEFT, pair, _pieces([
                Piece(PieceKind.AFFINE, ninf, front, mu=-lam,
                      level=LevelTag.MINUS),
                Piece(PieceKind.ZERO, front, 0.0),
            ]), front, "left/Va/affine")
        bend = -dH(pair.env_minus, lam)
        return PiecewiseProfile(Side.LEFT, pair, _pieces([
            Piece(PieceKind.AFFINE, ninf, bend, mu=-lam,
                  level=LevelTag.MINUS),
            Piece(PieceKind.ARC, bend, -ms_minus.c_star,
                  level=LevelTag.MINUS),
            Piece(PieceKind.ZERO, -ms_minus.c_star, 0.0),
        ]), -ms_minus.c_star, "left/Va/arc")

    if branch is Label.VC:
        lam = float(lam)
        pu = p_under(pair, -c_e, lam)
        front = -speed_curve(pair.env_plus, pu)
        return PiecewiseProfile(Side.LEFT, pair, _pieces([
            Piece(PieceKind.AFFINE, ninf, c_e, mu=-lam, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, c_e, front, mu=-pu, level=LevelTag.PLUS),
            Piece(PieceKind.ZERO, front, 0.0),
        ]), front, "left/Vc/punder")

    if branch is Label.VB:
        pb = p_bar(pair, -c_e)
        front = -speed_curve(pair.env_plus, pb)
        if is_infinite(lam):
            return PiecewiseProfile(Side.LEFT, pair, _pieces([
                Piece(PieceKind.ARC, ninf, c_e, level=LevelTag.MINUS),
                Piece(PieceKind.AFFINE, c_e, front, mu=-pb,
                      level=LevelTag.PLUS),
                Piece(PieceKind.ZERO, front, 0.0),
            ]), front, "left/Vb/compact")
        lam = float(lam)
        bend = -dH(pair.env_minus, lam)
        return PiecewiseProfile(Side.LEFT, pair, _pieces([
            Piece(PieceKind.AFFINE, ninf, bend, mu=-lam,
                  level=LevelTag.MINUS),
            Piece(PieceKind.ARC, bend, c_e, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, c_e, front, mu=-pb, level=LevelTag.PLUS),
            Piece(PieceKind.ZERO, front, 0.0),
        ]), front, "left/Vb/pbar")

    # branch Vd: front at the leading minimal speed
    front = -ms_plus.c_star
    if is_infinite(lam):
        pb = p_bar(pair, -c_e)
        bend_b = -dH(pair.env_plus, pb)
        return PiecewiseProfile(Side.LEFT, pair, _pieces([
            Piece(PieceKind.ARC, ninf, c_e, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, c_e, bend_b, mu=-pb, level=LevelTag.PLUS),
            Piece(PieceKind.ARC, bend_b, front, level=LevelTag.PLUS),
            Piece(PieceKind.ZERO, front, 0.0),
        ]), front, "left/Vd/compact")
    lam = float(lam)
    ld_cb = lagrangian_slope(pair.env_minus, c_bar(pair))
    if lam <= ld_cb or c_e < -dH(pair.env_minus, lam):
        pu = p_under(pair, -c_e, lam)
        bend_u = -dH(pair.env_plus, pu)
        return PiecewiseProfile(Side.LEFT, pair, _pieces([
            Piece(PieceKind.AFFINE, ninf, c_e, mu=-lam, level=LevelTag.MINUS),
            Piece(PieceKind.AFFINE, c_e, bend_u, mu=-pu, level=LevelTag.PLUS),
            Piece(PieceKind.ARC, bend_u, front, level=LevelTag.PLUS),
            Piece(PieceKind.ZERO, front, 0.0),
        ]), front, "left/Vd/punder-arc")
    pb = p_bar(pair, -c_e)
    bend = -dH(pair.env_minus, lam)
    bend_b = -dH(pair.env_plus, pb)
    return PiecewiseProfile(Side.LEFT, pair, _pieces([
        Piece(PieceKind.AFFINE, ninf, bend, mu=-lam, level=LevelTag.MINUS),
        Piece(PieceKind.ARC, bend, c_e, level=LevelTag.MINUS),
        Piece(PieceKind.AFFINE, c_e, bend_b, mu=-pb, level=LevelTag.PLUS),
        Piece(PieceKind.ARC, bend_b, front, level=LevelTag.PLUS),
        Piece(PieceKind.ZERO, front, 0.0),
    ]), front, "left/Vd/pbar-arc")


def build_profile(scenario: Scenario, side: Side) -> PiecewiseProfile:
    """Assemble the explicit rate profile for the scenario's region."""
    side = Side(side)
    return _build_right(scenario) if side is Side.RIGHT \
        else _build_left(scenario)


# -- structural checks --------------------------------------------------------

def check_continuity(profile: PiecewiseProfile, tol: float = 1e-10,
                     slope_tol: float = 1e-8) -> float:
    """Max value gap at junctions; raises on a construction bug.

    Tangency junctions (an affine meeting a Lagrangian arc of its own
    level) must also match first derivatives.
    """
    pair = profile.pair
    max_gap = 0.0
    for left, right in zip(profile.pieces, profile.pieces[1:]):
        s0 = left.hi
        gap = abs(_piece_value(left, pair, s0) - _piece_value(right, pair, s0))
        max_gap = max(max_gap, gap)
        if gap > tol:
            raise RuntimeError(
                f"value gap {gap:.3e} at junction s={s0!r} between "
                f"[{left.describe()}] and [{right.describe()}]")
        tangent = (
            {left.kind, right.kind} == {PieceKind.AFFINE, PieceKind.ARC}
            and left.level == right.level)
        if tangent:
            ds = abs(_piece_slope(left, pair, s0)
                     - _piece_slope(right, pair, s0))
            if ds > slope_tol:
                raise RuntimeError(
                    f"tangency slope mismatch {ds:.3e} at s={s0!r}")
    return max_gap


def check_boundary(profile: PiecewiseProfile, lam) -> bool:
    """Origin value zero and the far tail carries the initial decay."""
    if profile.value(0.0) != 0.0:
        return False
    tail = profile.pieces[-1] if profile.side is Side.RIGHT \
        else profile.pieces[0]
    if is_infinite(lam):
        return tail.kind is PieceKind.ARC
    lam = float(lam)
    if tail.kind is not PieceKind.AFFINE:
        return False
    return abs(abs(tail.mu) - lam) <= 1e-12 * max(1.0, lam)


# -- certification ------------------------------------------------------------

@dataclass(frozen=True)
class CertificationReport:
    target: str              # "supersolution" or "subsolution"
    passed: bool
    max_violation: float
    worst_s: float | None
    worst_slope: float | None
    n_checked: int
    kinks: tuple[dict, ...] = field(default_factory=tuple)

    def __str__(self):
        state = "passes" if self.passed else "FAILS"
        return (f"{self.target} certification {state}: "
                f"max violation {self.max_violation:.3e} over "
                f"{self.n_checked} samples")


def _h_bare(pair: SpeciesPair, p: float) -> float:
    env = pair.env_plus
    return env.d * (mgf(env.kernel, p) - 1.0)


def _eval_piece(piece: Piece, pair: SpeciesPair,
                s: float) -> tuple[float, float]:
    """(rho, rho') on a piece with a single root solve on arcs."""
    if piece.kind is PieceKind.ZERO:
        return 0.0, 0.0
    env = _env_of(pair, piece.level)
    if piece.kind is PieceKind.AFFINE:
        return piece.mu * s - H(env, piece.mu), piece.mu
    p = lagrangian_slope(env, s)
    return s * p - H(env, p), p


def _grid(profile: PiecewiseProfile, n: int,
          exclusion: float = 1e-6) -> np.ndarray:
    finite_bps = [b for b in profile.breakpoints if math.isfinite(b)]
    ms_minus = min_speed(profile.pair.env_minus)
    extent = max(3.0 * ms_minus.c_star,
                 max((abs(b) for b in finite_bps), default=0.0) + 1.0)
    extent = min(extent, max(3.0 * ms_minus.c_star, 50.0))
    if profile.side is Side.RIGHT:
        s = np.linspace(0.0, extent, n)
    else:
        s = np.linspace(-extent, 0.0, n)
    keep = np.ones_like(s, dtype=bool)
    for b in finite_bps:
        keep &= np.abs(s - b) > exclusion
    return s[keep]


def _kink_sweep(profile, field_at, s0, lo_slope, hi_slope, sign,
                tol, n_slopes=100):
    """Worst residual of rho(s0) - s0 phi' + H(phi') + R(s0) over the
    admissible test slopes; sign=+1 demands >= -tol, sign=-1 <= tol."""
    pair = profile.pair
    rho0 = profile.value(s0)
    worst = 0.0
    worst_slope = None
    for phi in np.linspace(lo_slope, hi_slope, n_slopes):
        val = rho0 - s0 * phi + _h_bare(pair, phi) + field_at
        breach = -val if sign > 0 else val
        if breach > worst:
            worst, worst_slope = breach, float(phi)
    return worst, worst_slope


def certify_supersolution(profile: PiecewiseProfile,
                          fld: CoefficientField,
                          n_grid: int = 10_000,
                          tol: float = 1e-8) -> CertificationReport:
    """Verify min{rho - s rho' + H(rho') + R*(s), rho} >= 0.

    Classical check away from kinks plus a 100-slope sweep at each kink
    where the test function can touch from below (slope increasing).
    """
    pair = profile.pair
    worst = 0.0
    worst_s = worst_slope = None
    grid = _grid(profile, n_grid)
    los = [p.lo for p in profile.pieces]
    for s in grid:
        piece = profile.pieces[max(bisect.bisect_right(los, s) - 1, 0)]
        rho, rp = _eval_piece(piece, pair, s)
        e_val = rho - s * rp + _h_bare(pair, rp) + fld.upper(s)
        breach = -min(e_val, rho)
        if breach > worst:
            worst, worst_s, worst_slope = breach, float(s), float(rp)
    kinks = []
    for left, right in zip(profile.pieces, profile.pieces[1:]):
        s0 = left.hi
        a = _piece_slope(left, pair, s0)
        b = _piece_slope(right, pair, s0)
        if b - a < -1e-12:  # concave kink: no touching test function
            kinks.append({"s": s0, "checked": False, "reason": "concave"})
            continue
        breach, slope = _kink_sweep(profile, fld.upper(s0), s0,
                                    min(a, b), max(a, b), +1, tol)
        kinks.append({"s": s0, "checked": True, "violation": breach})
        if breach > worst:
            worst, worst_s, worst_slope = breach, s0, slope
    return CertificationReport("supersolution", worst <= tol, worst,
                               worst_s, worst_slope, len(grid), tuple(kinks))


def certify_subsolution(profile: PiecewiseProfile,
                        fld: CoefficientField,
                        n_grid: int = 10_000,
                        tol: float = 1e-8) -> CertificationReport:
    """Verify rho - s rho' + H(rho') + R_*(s) <= 0 wherever rho > 0."""
    pair = profile.pair
    worst = 0.0
    worst_s = worst_slope = None
    checked = 0
    los = [p.lo for p in profile.pieces]
    for s in _grid(profile, n_grid):
        piece = profile.pieces[max(bisect.bisect_right(los, s) - 1, 0)]
        rho, rp = _eval_piece(piece, pair, s)
        if rho <= 0.0:
            continue
        checked += 1
        e_val = rho - s * rp + _h_bare(pair, rp) + fld.lower(s)
        if e_val > worst:
            worst, worst_s, worst_slope = e_val, float(s), float(rp)
    kinks = []
    for left, right in zip(profile.pieces, profile.pieces[1:]):
        s0 = left.hi
        if profile.value(s0) <= 0.0:
            kinks.append({"s": s0, "checked": False, "reason": "rho zero"})
            continue
        a = _piece_slope(left, pair, s0)
        b = _piece_slope(right, pair, s0)
        if a - b < -1e-12:  # convex kink: no touching test function
            kinks.append({"s": s0, "checked": False, "reason": "convex"})
            continue
        breach, slope = _kink_sweep(profile, fld.lower(s0), s0,
                                    min(a, b), max(a, b), -1, tol)
        kinks.append({"s": s0, "checked": True, "violation": breach})
        if breach > worst:
            worst, worst_s, worst_slope = breach, s0, slope
    return CertificationReport("subsolution", worst <= tol, worst,
                               worst_s, worst_slope, checked, tuple(kinks))


def large_deviation_rate(profile: PiecewiseProfile, c: float) -> float | None:
    """Predicted decay rate of the density along x = ct; None where the
    profile vanishes (no decay to estimate)."""
    val = profile.value(c)
    return None if val <= 0.0 else val
