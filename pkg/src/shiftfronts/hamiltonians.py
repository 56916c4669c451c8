"""Per-species Hamiltonians, Lagrangians and wave-speed curves.

For one species with dispersal rate d, growth rate r and habitat level
``level`` (prey: alpha_+ or alpha_-; predator: V_+ = b alpha_+ - 1 or
V_- = b alpha_- - 1) the relevant objects are

    H(p)     = d (M(p) - 1) + r * level        (M = kernel moment)
    c(mu)    = H(mu) / mu                      (speed curve, mu > 0)
    (mu*,c*) = argmin/min of c                 (tangency mu H' = H)
    L(q)     = sup_p [ p q - H(p) ]            (Lagrangian)

H is even, strictly convex and superlinear, so the speed curve has a
unique interior minimum whenever level > 0, H' is a bijection of the
reals, and L is finite, even and convex with L(q) <= 0 iff |q| <= c*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, UnsupportedRegime
from .kernels import KernelSpec, mgf, mgf_d1, mgf_d2

__all__ = ["INFINITY", "Sentinel", "HamiltonianEnv", "MinSpeed", "H", "dH",
           "d2H", "speed_curve", "min_speed", "lagrangian", "lagrangian_slope",
           "directional_speed", "is_infinite"]


class Sentinel(Enum):
    """Non-numeric markers for scenario inputs."""

    INFINITY = "inf"


#: Decay-rate sentinel for initial data with compact support (or decay
#: faster than every exponential).  A distinct branch in every formula,
#: hence an enum value rather than a large float.
INFINITY = Sentinel.INFINITY


def is_infinite(lam) -> bool:
    """True for the INFINITY sentinel (or an actual float infinity)."""
    if lam is INFINITY:
        return True
    return isinstance(lam, (int, float)) and math.isinf(lam)


@dataclass(frozen=True)
class HamiltonianEnv:
    """One species' dispersal/growth data at a fixed habitat level."""

    d: float
    r: float
    level: float
    kernel: KernelSpec

    def __post_init__(self):
        for name in ("d", "r", "level"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.d <= 0.0:
            raise ValueError(f"dispersal rate d must be > 0, got {self.d}")
        if self.r <= 0.0:
            raise ValueError(f"growth rate r must be > 0, got {self.r}")


@dataclass(frozen=True)
class MinSpeed:
    """Minimizer and minimum of the speed curve c(mu) = H(mu)/mu."""

    mu_star: float
    c_star: float


def H(env: HamiltonianEnv, p):
    """H(p) = d (M(p) - 1) + r * level (level term included)."""
    return env.d * (mgf(env.kernel, p) - 1.0) + env.r * env.level


def dH(env: HamiltonianEnv, p):
    """H'(p) = d M'(p); odd, strictly increasing, unbounded."""
    return env.d * mgf_d1(env.kernel, p)


def d2H(env: HamiltonianEnv, p):
    """H''(p) = d M''(p) > 0."""
    return env.d * mgf_d2(env.kernel, p)


def speed_curve(env: HamiltonianEnv, mu):
    """c(mu) = H(mu)/mu for mu > 0."""
    arr = np.asarray(mu, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"speed_curve needs mu > 0, got {mu!r}")
    out = H(env, arr) / arr
    return out if np.ndim(mu) else float(out)


def _grow_bracket(f, lo: float, hi: float, grow: float = 2.0,
                  max_iter: int = 200) -> tuple[float, float]:
    """Expand [lo, hi] geometrically to the right until f changes sign."""
    flo = f(lo)
    if flo == 0.0:
        return lo, lo
    for _ in range(max_iter):
        fhi = f(hi)
        if fhi == 0.0:
            return hi, hi
        if flo * fhi < 0.0:
            return lo, hi
        lo, flo = hi, fhi
        hi *= grow
    raise RuntimeError(f"no sign change up to {hi}")


def min_speed(env: HamiltonianEnv) -> MinSpeed:
    """Minimal wave speed: the unique mu* > 0 with mu H'(mu) = H(mu).

    Requires level > 0 (otherwise the speed curve has no interior
    positive minimum and the notion is outside the standing regime).
    """
    if env.level <= 0.0:
        raise UnsupportedRegime(
            f"min_speed undefined for level <= 0 (got {env.level})")
    return _min_speed_cached(env)


@lru_cache(maxsize=None)
def _min_speed_cached(env: HamiltonianEnv) -> MinSpeed:
    def tangency(mu):
        return mu * dH(env, mu) - H(env, mu)

    # tangency(0+) = -H(0) = -r*level < 0 and grows without bound
    lo, hi = _grow_bracket(tangency, 1e-6, 1.0)
    mu = lo if lo == hi else brentq(tangency, lo, hi, xtol=1e-14, rtol=8.9e-16)
    # one Newton polish: tangency'(mu) = mu H''(mu)
    mu -= tangency(mu) / (mu * d2H(env, mu))
    res = tangency(mu)
    if abs(res) > 1e-10:
        raise RuntimeError(f"tangency residual {res} at mu={mu}")
    return MinSpeed(mu_star=float(mu), c_star=float(H(env, mu) / mu))


def lagrangian_slope(env: HamiltonianEnv, q):
    """The unique p with H'(p) = q (inverse of the odd increasing H')."""
    if np.ndim(q):
        return np.array([lagrangian_slope(env, float(x)) for x in np.asarray(q).ravel()]).reshape(np.shape(q))
    q = float(q)
    if not math.isfinite(q):
        raise DomainError(f"lagrangian_slope needs finite q, got {q!r}")
    if q == 0.0:
        return 0.0
    sign = 1.0 if q > 0.0 else -1.0
    qa = abs(q)

    def f(p):
        return dH(env, p) - qa

    flo = f(1e-6)
    if flo == 0.0:
        p = 1e-6
    elif flo > 0.0:  # root below the initial bracket; f(0) = -qa < 0
        p = brentq(f, 0.0, 1e-6, xtol=1e-16, rtol=8.9e-16)
    else:
        lo, hi = _grow_bracket(f, 1e-6, 1.0)
        p = lo if lo == hi else brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16)
    p -= f(p) / d2H(env, p)  # Newton polish
    if abs(f(p)) > 1e-12 * max(1.0, qa):
        raise RuntimeError(f"dH inversion residual {f(p)} at q={q}")
    return sign * p


def lagrangian(env: HamiltonianEnv, q):
    """L(q) = sup_p [ p q - H(p) ] = q p(q) - H(p(q)), p(q) = (H')^{-1}(q)."""
    if np.ndim(q):
        return np.array([lagrangian(env, float(x)) for x in np.asarray(q).ravel()]).reshape(np.shape(q))
    p = lagrangian_slope(env, q)
    return float(q) * p - H(env, p)


def directional_speed(env: HamiltonianEnv, lam) -> float:
    """Spreading speed of a single species with exponential tail e^{-lam x}.

    Equals c(min(lam, mu*)); the INFINITY sentinel (compactly supported
    or faster-than-exponential data) gives the minimal speed c*.
    """
    ms = min_speed(env)
    if is_infinite(lam):
        return ms.c_star
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0.0:
        raise DomainError(f"decay rate must be > 0 or INFINITY, got {lam!r}")
    return speed_curve(env, min(lam, ms.mu_star))
