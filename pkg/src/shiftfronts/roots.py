"""Scalar auxiliary roots feeding the speed formulas.

All equations here live on one species: a pair of Hamiltonian
environments sharing (d, r, kernel) and differing only in the habitat
level (level_minus > level_plus > 0).  Since the level enters H as an
additive constant, both environments share H' and hence the Lagrangian
slope; we exploit that freely.

Quantities:

    mu0        smallest mu > 0 with c_plus(mu) = c*_minus
    p_check,   the two roots of  c_e p - H_plus(p) = L_minus(c_e)
    p_hat      around the tangency slope L'(c_e)
    p_star     smallest root of  c_e p - H_minus(p) = c_e lam_r - H_plus(lam_r)
               in (lam_r, L'(c_e)]       (right-tail anchored)
    p_bar      alias for p_check as a function of a trial speed
    c_bar      the unique speed > c*_minus with p_bar = mu*_plus
    p_under    smallest root of  c p - H_plus(p) = c lam_l - H_minus(lam_l)
               in (0, min(lam_l, L'(c)))  (left-tail anchored)
    k, g       secant-slope auxiliaries through (mu*_minus, H_minus) and
               (mu*_plus, H_plus)

"Smallest root" is computed by a coarse forward scan from the lower
bracket edge for the first sign change, then brentq plus a Newton
polish; every public root re-checks its defining residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from scipy.optimize import brentq

from .errors import DomainError
from .hamiltonians import (H, HamiltonianEnv, dH, d2H, lagrangian,
                           lagrangian_slope, min_speed, speed_curve)

__all__ = ["SpeciesPair", "Where", "BOUNDARY_BAND", "mu0", "check_hat_p",
           "p_star", "p_star_region", "p_bar", "c_bar", "p_under",
           "under_region", "k_curve", "g_curve"]

#: Half-width of the band in which a point counts as lying on a curve
#: (region boundaries are measure zero and unreachable exactly).
BOUNDARY_BAND = 1e-9


class Where(Enum):
    """Three-way result of a region-membership test."""

    INSIDE = "inside"
    OUTSIDE = "outside"
    ON_BOUNDARY = "on_boundary"


@dataclass(frozen=True)
class SpeciesPair:
    """One species' Hamiltonian environments at the two habitat levels.

    level_minus >= level_plus > 0; equality is admitted only as a
    degenerate diagnostic case (the two-root structure collapses).
    """

    env_minus: HamiltonianEnv
    env_plus: HamiltonianEnv

    def __post_init__(self):
        em, ep = self.env_minus, self.env_plus
        if (em.d, em.r, em.kernel) != (ep.d, ep.r, ep.kernel):
            raise ValueError("pair environments must share d, r and kernel")
        if not (em.level >= ep.level > 0.0):
            raise ValueError(
                f"need level_minus >= level_plus > 0, got {em.level}, {ep.level}")


# -- generic machinery --------------------------------------------------------

def _polish(f, df, x: float, iters: int = 2) -> float:
    for _ in range(iters):
        d = df(x)
        if d == 0.0 or not math.isfinite(d):
            break
        x = x - f(x) / d
    return x


def _smallest_root(f, lo: float, hi: float, df=None):
    """First root of f in [lo, hi], scanning from lo; None if none found."""
    if hi < lo:
        return None
    flo = f(lo)
    if flo == 0.0:
        return lo
    step = min(1e-2, (hi - lo) / 100.0) if hi > lo else 0.0
    if step == 0.0:
        return None
    x, fx = lo, flo
    while x < hi:
        y = min(x + step, hi)
        fy = f(y)
        if fx * fy <= 0.0:
            if fy == 0.0:
                root = y
            else:
                root = brentq(f, x, y, xtol=1e-14, rtol=8.9e-16)
            if df is not None:
                root = _polish(f, df, root)
            return root
        x, fx = y, fy
    return None


def _residual_check(name: str, res: float, tol: float = 1e-10):
    if not abs(res) <= tol:
        raise RuntimeError(f"{name}: residual {res} exceeds {tol}")


# -- mu0 ----------------------------------------------------------------------

def mu0(pair: SpeciesPair) -> float:
    """Smallest mu > 0 where the plus-level speed curve meets c*_minus."""
    return _mu0_cached(pair)


@lru_cache(maxsize=None)
def _mu0_cached(pair: SpeciesPair) -> float:
    c_star_minus = min_speed(pair.env_minus).c_star
    mu_star_plus = min_speed(pair.env_plus).mu_star

    def f(mu):
        return speed_curve(pair.env_plus, mu) - c_star_minus

    # c_plus decreases from +inf to c*_plus < c*_minus on (0, mu*_plus]
    root = brentq(f, 1e-12, mu_star_plus, xtol=1e-15, rtol=8.9e-16)
    root = _polish(f, lambda m: (dH(pair.env_plus, m) * m
                                 - H(pair.env_plus, m)) / m**2, root)
    _residual_check("mu0", f(root))
    return float(root)


# -- the two roots around the tangency slope ---------------------------------

def check_hat_p(pair: SpeciesPair, c_e: float) -> tuple[float, float]:
    """Roots p_check < L'(c_e) < p_hat of c_e p - H_plus(p) = L_minus(c_e).

    Defined for c_e >= c*_minus.  At c_e = c*_minus the lower root is
    mu0; with equal levels the two roots collapse onto L'(c_e).
    """
    c_e = float(c_e)
    c_star_minus = min_speed(pair.env_minus).c_star
    if not math.isfinite(c_e) or c_e < c_star_minus - BOUNDARY_BAND:
        raise DomainError(
            f"check_hat_p needs c_e >= c*_minus = {c_star_minus}, got {c_e}")
    c_e = max(c_e, c_star_minus)
    rhs = lagrangian(pair.env_minus, c_e)
    slope = lagrangian_slope(pair.env_minus, c_e)  # shared H' => same slope

    def G(p):
        return c_e * p - H(pair.env_plus, p) - rhs

    def dG(p):
        return c_e - dH(pair.env_plus, p)

    top = G(slope)  # = L_plus(c_e) - L_minus(c_e) >= 0
    if top <= 1e-14:
        return slope, slope  # degenerate equal-level collapse
    p_check = brentq(G, 0.0, slope, xtol=1e-14, rtol=8.9e-16)
    p_check = _polish(G, dG, p_check)
    hi = slope + 1.0
    while G(hi) > 0.0:
        hi = slope + 2.0 * (hi - slope)
    p_hat = brentq(G, slope, hi, xtol=1e-14, rtol=8.9e-16)
    p_hat = _polish(G, dG, p_hat)
    _residual_check("p_check", G(p_check))
    _residual_check("p_hat", G(p_hat))
    return float(p_check), float(p_hat)


# -- p_star -------------------------------------------------------------------

def p_star_region(pair: SpeciesPair, c_e: float, lambda_r: float) -> Where:
    """Membership test for p_star's admissible set.

    The set is {c_e > c_plus(lam) for lam <= mu0} U {c_e > c*_plus for
    lam > mu0}, intersected with {c_e lam - H_plus(lam) <= L_minus(c_e)}
    (equivalently lam <= p_check when c_e >= c*_minus).  The two branch
    conditions genuinely disagree on the split line lam = mu0 when
    c*_plus < c_e <= c*_minus; points within BOUNDARY_BAND of a spot
    where the test flips report ON_BOUNDARY.
    """
    lam = float(lambda_r)
    c_e = float(c_e)
    if not (math.isfinite(lam) and lam > 0.0) or not math.isfinite(c_e):
        raise DomainError(f"need finite lambda_r > 0 and c_e, got {lambda_r}, {c_e}")
    m0 = mu0(pair)
    t_at_lam = speed_curve(pair.env_plus, lam)
    t_flat = min_speed(pair.env_plus).c_star
    threshold = t_at_lam if lam <= m0 else t_flat
    other = t_flat if lam <= m0 else t_at_lam
    if abs(lam - m0) <= BOUNDARY_BAND and (c_e > threshold) != (c_e > other):
        return Where.ON_BOUNDARY
    if abs(c_e - threshold) <= BOUNDARY_BAND:
        return Where.ON_BOUNDARY
    if c_e < threshold:
        return Where.OUTSIDE
    gap = lagrangian(pair.env_minus, c_e) - (c_e * lam - H(pair.env_plus, lam))
    if gap < 0.0:
        # allow the lam = p_check edge itself (unique-root case)
        if c_e >= min_speed(pair.env_minus).c_star:
            pc, _ = check_hat_p(pair, c_e)
            if abs(lam - pc) <= BOUNDARY_BAND:
                return Where.INSIDE
        return Where.OUTSIDE
    return Where.INSIDE


def p_star(pair: SpeciesPair, c_e: float, lambda_r: float):
    """Smallest root of c_e p - H_minus(p) = c_e lam - H_plus(lam) in
    (lam, L'(c_e)]; None outside the admissible set.

    At lam = p_check the root degenerates to exactly L'(c_e).
    """
    where = p_star_region(pair, c_e, lambda_r)
    if where is Where.OUTSIDE:
        return None
    lam = float(lambda_r)
    c_e = float(c_e)
    slope = lagrangian_slope(pair.env_minus, c_e)
    if c_e >= min_speed(pair.env_minus).c_star:
        pc, _ = check_hat_p(pair, c_e)
        if abs(lam - pc) <= BOUNDARY_BAND:
            return float(slope)  # unique (double) root at the tangency slope
    rhs = c_e * lam - H(pair.env_plus, lam)

    def f(p):
        return c_e * p - H(pair.env_minus, p) - rhs

    def df(p):
        return c_e - dH(pair.env_minus, p)

    root = _smallest_root(f, lam, slope, df)
    if root is None:
        return None
    _residual_check("p_star", f(root))
    return float(root)


# -- p_bar / c_bar ------------------------------------------------------------

def p_bar(pair: SpeciesPair, ce_tilde: float) -> float:
    """Smallest root of c p - H_plus(p) = L_minus(c) in (0, L'(c));
    the lower of the check_hat_p pair, viewed as a function of the speed."""
    return check_hat_p(pair, ce_tilde)[0]


def c_bar(pair: SpeciesPair) -> float:
    """The unique speed > c*_minus at which p_bar reaches mu*_plus."""
    return _c_bar_cached(pair)


@lru_cache(maxsize=None)
def _c_bar_cached(pair: SpeciesPair) -> float:
    c_star_minus = min_speed(pair.env_minus).c_star
    mu_star_plus = min_speed(pair.env_plus).mu_star

    def f(c):
        return p_bar(pair, c) - mu_star_plus

    lo = c_star_minus + 1e-8
    if f(lo) >= 0.0:
        raise RuntimeError("p_bar already above mu*_plus at c*_minus")
    offset = 1.0
    while f(c_star_minus + offset) < 0.0:
        offset *= 2.0
        if offset > 1e8:
            raise RuntimeError("c_bar bracket growth failed")
    root = brentq(f, lo, c_star_minus + offset, xtol=1e-13, rtol=8.9e-16)
    if abs(p_bar(pair, root) - mu_star_plus) > 1e-8:
        raise RuntimeError("c_bar residual check failed")
    return float(root)


# -- p_under ------------------------------------------------------------------

def under_region(pair: SpeciesPair, ce_tilde: float, lambda_l: float) -> Where:
    """Membership in the closed set {c >= c_minus(lam) for lam <= mu*_minus;
    c >= H'(lam) for lam > mu*_minus}."""
    lam = float(lambda_l)
    c = float(ce_tilde)
    if not (math.isfinite(lam) and lam > 0.0) or not math.isfinite(c):
        raise DomainError(f"need finite lambda_l > 0 and speed, got {lambda_l}, {ce_tilde}")
    mu_star_minus = min_speed(pair.env_minus).mu_star
    if lam <= mu_star_minus:
        threshold = speed_curve(pair.env_minus, lam)
    else:
        threshold = dH(pair.env_minus, lam)
    if abs(c - threshold) <= BOUNDARY_BAND:
        return Where.ON_BOUNDARY
    return Where.INSIDE if c > threshold else Where.OUTSIDE


def p_under(pair: SpeciesPair, ce_tilde: float, lambda_l: float) -> float:
    """Smallest root of c p - H_plus(p) = c lam - H_minus(lam) in
    (0, min(lam, L'(c)))."""
    if under_region(pair, ce_tilde, lambda_l) is Where.OUTSIDE:
        raise DomainError(
            f"(ce_tilde, lambda_l) = ({ce_tilde}, {lambda_l}) outside the "
            "admissible set")
    lam = float(lambda_l)
    c = float(ce_tilde)
    rhs = c * lam - H(pair.env_minus, lam)
    slope = lagrangian_slope(pair.env_minus, c) if c > 0.0 else lam

    def f(p):
        return c * p - H(pair.env_plus, p) - rhs

    def df(p):
        return c - dH(pair.env_plus, p)

    hi = min(lam, slope)
    root = _smallest_root(f, 1e-14, hi, df)
    if root is None:
        # boundary case: the root sits at the top of the interval
        if abs(f(hi)) <= 1e-8:
            root = _polish(f, df, hi)
        else:
            raise RuntimeError(
                f"p_under found no root in (0, {hi}) for c={c}, lam={lam}")
    _residual_check("p_under", f(root))
    return float(root)


# -- secant-slope auxiliaries -------------------------------------------------

def k_curve(pair: SpeciesPair, mu: float) -> float:
    """k(mu) = (H_minus(mu*_minus) - H_plus(mu)) / (mu*_minus - mu) on
    (0, mu*_minus); strictly increasing, k(mu0) = c*_minus, blows up at
    the right endpoint."""
    mu = float(mu)
    mu_star_minus = min_speed(pair.env_minus).mu_star
    if not math.isfinite(mu) or not (0.0 < mu < mu_star_minus):
        raise DomainError(f"k_curve needs mu in (0, {mu_star_minus}), got {mu}")
    return float((H(pair.env_minus, mu_star_minus) - H(pair.env_plus, mu))
                 / (mu_star_minus - mu))


def g_curve(pair: SpeciesPair, mu: float) -> float:
    """g(mu) = (H_minus(mu) - H_plus(mu*_plus)) / (mu - mu*_plus) on
    (mu*_plus, L'(c_bar)]; strictly decreasing, g(L'(c_bar)) = c_bar."""
    mu = float(mu)
    mu_star_plus = min_speed(pair.env_plus).mu_star
    top = lagrangian_slope(pair.env_minus, c_bar(pair))
    if not math.isfinite(mu) or not (mu_star_plus < mu <= top + BOUNDARY_BAND):
        raise DomainError(
            f"g_curve needs mu in ({mu_star_plus}, {top}], got {mu}")
    return float((H(pair.env_minus, mu) - H(pair.env_plus, mu_star_plus))
                 / (mu - mu_star_plus))
