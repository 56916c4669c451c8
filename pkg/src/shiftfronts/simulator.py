"""Direct integration of the shifting-habitat predator-prey system.

Method of lines: the nonlocal dispersal operators become discrete
convolutions with trapezoid weights, the reaction is evaluated
pointwise, and time stepping is explicit four-stage Runge-Kutta with
the habitat profile advected at the edge speed per stage.  Helpers
track threshold front positions, regress spreading speeds, and compare
the solution against terrace and decay-rate predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .classifier import Scenario, Side, TerraceInterval
from .errors import DomainError, SimulationAbort
from .hamiltonians import is_infinite, min_speed
from .kernels import KernelSpec, density
from .viscosity import PiecewiseProfile

__all__ = ["Grid", "HabitatShape", "HabitatProfile", "InitialKind",
           "InitialData", "State", "DiscreteKernel", "discretize_kernel",
           "nonlocal_op", "reaction_lipschitz", "stable_dt", "default_grid",
           "default_initial", "step", "SimControls", "RunResult",
           "run_simulation", "front_position", "estimate_speed",
           "hopf_cole_diagnostic", "terrace_check"]

DENSITY_FLOOR = 1e-300  # positive floor for log-space diagnostics


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.n >= 16):
            raise DomainError("grid needs x_max > x_min and n >= 16")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)


class HabitatShape(str, Enum):
    STEP = "step"
    LOGISTIC_RAMP = "logistic_ramp"


@dataclass(frozen=True)
class HabitatProfile:
    """Nonincreasing resource profile with limits alpha_minus/plus."""

    shape: HabitatShape
    alpha_minus: float
    alpha_plus: float
    width: float = 5.0

    def __post_init__(self):
        if self.alpha_minus < self.alpha_plus:
            raise DomainError("habitat must be nonincreasing: "
                              f"{self.alpha_minus} < {self.alpha_plus}")
        if self.shape is HabitatShape.LOGISTIC_RAMP and self.width <= 0:
            raise DomainError("ramp width must be positive")

    def evaluate(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if self.shape is HabitatShape.STEP:
            return np.where(y < 0.0, self.alpha_minus, self.alpha_plus)
        drop = self.alpha_minus - self.alpha_plus
        # logistic ramp: alpha_- far behind, alpha_+ far ahead; `width`
        # is the total transition span (>=99% of the drop inside +-w/2)
        z = np.clip(10.0 * y / self.width, -60.0, 60.0)
        return self.alpha_plus + drop / (1.0 + np.exp(z))


class InitialKind(str, Enum):
    EXP_DECAY = "exp_decay"
    COMPACT_BUMP = "compact_bump"


@dataclass(frozen=True)
class InitialData:
    """Front-generating initial condition for one species.

    EXP_DECAY: amplitude at the origin with e^{-lam_r x} / e^{lam_l x}
    tails; an infinite rate truncates that side to zero (mixed tails).
    COMPACT_BUMP: cosine-squared bump of the given radius.
    """

    kind: InitialKind
    amplitude: float
    lambda_r: object = None   # float or the INFINITY sentinel
    lambda_l: object = None
    radius: float = 5.0

    def __post_init__(self):
        if not (self.amplitude > 0.0 and math.isfinite(self.amplitude)):
            raise DomainError("initial amplitude must be positive")
        if self.kind is InitialKind.COMPACT_BUMP and self.radius <= 0:
            raise DomainError("bump radius must be positive")

    def build(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind is InitialKind.COMPACT_BUMP:
            inside = np.abs(x) < self.radius
            bump = np.cos(0.5 * np.pi * x / self.radius) ** 2
            return self.amplitude * np.where(inside, bump, 0.0)
        out = np.full_like(x, self.amplitude)
        right = x > 0.0
        if is_infinite(self.lambda_r):
            out[right] = 0.0
        else:
            out[right] *= np.exp(-float(self.lambda_r) * x[right])
        left = x < 0.0
        if is_infinite(self.lambda_l):
            out[left] = 0.0
        else:
            out[left] *= np.exp(float(self.lambda_l) * x[left])
        return out


@dataclass
class State:
    t: float
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def copy(self) -> "State":
        return State(self.t, self.x, self.u.copy(), self.v.copy())


@dataclass(frozen=True)
class DiscreteKernel:
    weights: np.ndarray   # symmetric, length 2*radius + 1, unit sum
    radius: int
    dx: float
    renorm: float         # factor applied to reach unit mass


def discretize_kernel(spec: KernelSpec, dx: float) -> DiscreteKernel:
    """Trapezoid-weight taps on the kernel support, renormalized.

    The outermost taps take a half cell inward plus the uncovered
    sliver [radius*dx, half_width], so the weights vary continuously
    in dx and the mass stays exact for the uniform family even when
    dx does not divide the half-width.
    """
    hw = spec.half_width
    if dx > hw / 8.0 + 1e-12:
        raise DomainError(
            f"dx={dx} too coarse for kernel half-width {hw} (need <= hw/8)")
    radius = int(math.floor(hw / dx + 1e-9))
    offsets = np.arange(-radius, radius + 1) * dx
    w = dx * density(spec, offsets)
    sliver = max(hw - radius * dx, 0.0)
    edge = float(density(spec, min(radius * dx, hw)))
    w[0] = w[-1] = (0.5 * dx + sliver) * edge
    total = w.sum()
    if not total > 0.0:
        raise DomainError("kernel discretization has no mass")
    return DiscreteKernel(w / total, radius, dx, 1.0 / total)


def nonlocal_op(component: np.ndarray, dk: DiscreteKernel,
                d: float) -> np.ndarray:
    """d * (J convolved with the field - field), edge-replicated."""
    padded = np.pad(component, dk.radius, mode="edge")
    return d * (np.convolve(padded, dk.weights, mode="valid") - component)


def reaction_lipschitz(sc: Scenario) -> float:
    """Jacobian row-sum bound over the invariant box [0,a-]x[0,V-]."""
    am, vm = sc.alpha_minus, sc.V_minus
    l_u = sc.r1 * (2.0 * am + sc.a * vm + sc.a * am)
    l_v = sc.r2 * (1.0 + 2.0 * vm + sc.b * am + sc.b * vm)
    return max(l_u, l_v)


def stable_dt(sc: Scenario) -> float:
    return 0.9 / (max(sc.d1, sc.d2) + reaction_lipschitz(sc))


def default_grid(sc: Scenario, horizon: float, dx: float | None = None,
                 pad: float = 30.0) -> Grid:
    """Domain wide enough that every front keeps its edge margin."""
    cstar_m = min_speed(sc.prey_pair().env_minus).c_star
    extent = (abs(sc.c_e) + cstar_m + 2.0) * horizon + pad
    if dx is None:
        dx = min(sc.kernel1.half_width, sc.kernel2.half_width) / 8.0
    half_cells = int(math.ceil(extent / dx))  # keep dx exact on the grid
    return Grid(-half_cells * dx, half_cells * dx, 2 * half_cells + 1)


def default_initial(sc: Scenario, species: str) -> InitialData:
    if species == "prey":
        lam_r, lam_l = sc.lambda1_r, sc.lambda1_l
        amp = 0.5 * sc.alpha_plus
    elif species == "predator":
        lam_r, lam_l = sc.lambda2_r, sc.lambda2_l
        amp = 0.5 * sc.V_plus if sc.V_plus > 0.0 else 0.25 * sc.V_minus
    else:
        raise ValueError(f"unknown species {species!r}")
    if is_infinite(lam_r) and is_infinite(lam_l):
        return InitialData(InitialKind.COMPACT_BUMP, amp, radius=5.0)
    return InitialData(InitialKind.EXP_DECAY, amp,
                       lambda_r=lam_r, lambda_l=lam_l)


# -- stepping -----------------------------------------------------------------

def _rates(u, v, t, x, sc: Scenario, dk1, dk2, habitat: HabitatProfile):
    alpha = habitat.evaluate(x - sc.c_e * t)
    du = nonlocal_op(u, dk1, sc.d1) + sc.r1 * u * (alpha - u - sc.a * v)
    dv = nonlocal_op(v, dk2, sc.d2) + sc.r2 * v * (-1.0 + sc.b * u - v)
    return du, dv


def step(state: State, sc: Scenario, dt: float, dk1: DiscreteKernel,
         dk2: DiscreteKernel, habitat: HabitatProfile,
         clamp_tol: float = 1e-12) -> tuple[State, float]:
    """One RK4 step; returns the new state and the clamp magnitude."""
    t, x, u, v = state.t, state.x, state.u, state.v
    k1u, k1v = _rates(u, v, t, x, sc, dk1, dk2, habitat)
    k2u, k2v = _rates(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v,
                      t + 0.5 * dt, x, sc, dk1, dk2, habitat)
    k3u, k3v = _rates(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v,
                      t + 0.5 * dt, x, sc, dk1, dk2, habitat)
    k4u, k4v = _rates(u + dt * k3u, v + dt * k3v,
                      t + dt, x, sc, dk1, dk2, habitat)
    un = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    vn = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    if not (np.isfinite(un).all() and np.isfinite(vn).all()):
        raise SimulationAbort(f"non-finite state at t={t + dt:.4f}")
    clamp = max(0.0, float(-un.min(initial=0.0)), float(-vn.min(initial=0.0)))
    if clamp > clamp_tol:
        raise SimulationAbort(
            f"negativity {clamp:.3e} beyond tolerance at t={t + dt:.4f}")
    np.maximum(un, 0.0, out=un)
    np.maximum(vn, 0.0, out=vn)
    box_u = un.max(initial=0.0) - sc.alpha_minus
    box_v = vn.max(initial=0.0) - sc.V_minus
    if box_u > 1e-9 or box_v > 1e-9:
        raise SimulationAbort(
            f"invariant box violated at t={t + dt:.4f}: "
            f"u excess {box_u:.3e}, v excess {box_v:.3e}")
    return State(t + dt, x, un, vn), clamp


# -- measurements -------------------------------------------------------------

def front_position(state: State, species: str, direction: Side,
                   threshold: float) -> float | None:
    """Outermost threshold crossing with sub-grid interpolation."""
    if threshold <= 0.0:
        raise DomainError("front threshold must be positive")
    f = state.u if species == "prey" else state.v
    above = f >= threshold
    if not above.any():
        return None
    x = state.x
    if direction is Side.RIGHT:
        i = int(np.flatnonzero(above)[-1])
        if i == len(f) - 1:
            return float(x[-1])
        j = i + 1
    else:
        i = int(np.flatnonzero(above)[0])
        if i == 0:
            return float(x[0])
        j = i - 1
    # linear interpolation between the last point above and first below
    frac = (f[i] - threshold) / (f[i] - f[j])
    return float(x[i] + frac * (x[j] - x[i]))


def estimate_speed(trajectory) -> tuple[float, float] | None:
    """Least-squares slope over the trailing half of the samples."""
    pts = [(t, p) for t, p in trajectory if p is not None
           and math.isfinite(p)]
    if not pts:
        return None
    t_end = pts[-1][0]
    window = [(t, p) for t, p in pts if t >= 0.5 * t_end]
    if len(window) < 20:
        return None
    ts = np.array([t for t, _ in window])
    xs = np.array([p for _, p in window])
    tc = ts - ts.mean()
    denom = float(tc @ tc)
    slope = float(tc @ (xs - xs.mean())) / denom
    resid = xs - xs.mean() - slope * tc
    dof = max(len(window) - 2, 1)
    stderr = math.sqrt(float(resid @ resid) / dof / denom)
    return slope, stderr


# -- orchestration ------------------------------------------------------------

@dataclass
class SimControls:
    horizon: float = 200.0
    dx: float | None = None
    dt: float | None = None
    pad: float = 30.0
    sample_every: float = 1.0
    snapshot_times: tuple[float, ...] = ()
    threshold_frac: float = 0.01
    habitat_shape: HabitatShape = HabitatShape.LOGISTIC_RAMP
    habitat_width: float | None = None   # default 5 x kernel half-width
    init_u: InitialData | None = None
    init_v: InitialData | None = None
    grid: Grid | None = None


@dataclass
class RunResult:
    scenario: Scenario
    grid: Grid
    times: np.ndarray
    fronts: dict[str, np.ndarray]    # u_right, u_left, v_right, v_left
    snapshots: dict[float, State]
    final: State
    max_clamp: float
    renorm: tuple[float, float]
    min_margin: float
    thresholds: dict[str, float]

    def trajectory(self, key: str):
        pos = self.fronts[key]
        return [(float(t), None if math.isnan(p) else float(p))
                for t, p in zip(self.times, pos)]

    def speed(self, key: str) -> tuple[float, float] | None:
        return estimate_speed(self.trajectory(key))


def run_simulation(sc: Scenario, controls: SimControls | None = None,
                   habitat: HabitatProfile | None = None) -> RunResult:
    ct = controls or SimControls()
    grid = ct.grid or default_grid(sc, ct.horizon, dx=ct.dx, pad=ct.pad)
    dx = grid.dx
    dk1 = discretize_kernel(sc.kernel1, dx)
    dk2 = discretize_kernel(sc.kernel2, dx)
    if habitat is None:
        width = ct.habitat_width
        if width is None:
            width = 5.0 * sc.kernel1.half_width
        habitat = HabitatProfile(ct.habitat_shape, sc.alpha_minus,
                                 sc.alpha_plus, width)
    x = grid.xs()
    init_u = ct.init_u or default_initial(sc, "prey")
    init_v = ct.init_v or default_initial(sc, "predator")
    state = State(0.0, x, init_u.build(x), init_v.build(x))

    thr_u = ct.threshold_frac * sc.alpha_plus
    thr_v = ct.threshold_frac * (sc.V_plus if sc.V_plus > 0.0
                                 else sc.V_minus)
    thresholds = {"u": thr_u, "v": thr_v}
    margin = 5.0 * max(sc.kernel1.half_width, sc.kernel2.half_width)
    safe_lo, safe_hi = grid.x_min + margin, grid.x_max - margin

    dt = ct.dt if ct.dt is not None else stable_dt(sc)
    if dt > stable_dt(sc) * (1.0 + 1e-9):
        raise DomainError(f"dt={dt} exceeds the stability bound "
                          f"{stable_dt(sc):.6f}")

    times, recs = [], {k: [] for k in
                       ("u_right", "u_left", "v_right", "v_left")}
    snapshots: dict[float, State] = {}
    snap_left = sorted(set(ct.snapshot_times))
    max_clamp = 0.0
    min_margin = math.inf

    def record(st: State):
        nonlocal min_margin
        times.append(st.t)
        for key, (species, side) in {
                "u_right": ("prey", Side.RIGHT),
                "u_left": ("prey", Side.LEFT),
                "v_right": ("predator", Side.RIGHT),
                "v_left": ("predator", Side.LEFT)}.items():
            pos = front_position(st, species, side,
                                 thresholds["u" if species == "prey"
                                            else "v"])
            recs[key].append(math.nan if pos is None else pos)
            if pos is not None:
                min_margin = min(min_margin, pos - grid.x_min,
                                 grid.x_max - pos)
                if not (safe_lo <= pos <= safe_hi):
                    raise SimulationAbort(
                        f"{key} front at {pos:.2f} violates the "
                        f"{margin:.2f}-wide edge margin at t={st.t:.2f}")

    record(state)
    next_sample = ct.sample_every
    t_end = ct.horizon
    while state.t < t_end - 1e-12:
        dt_step = min(dt, t_end - state.t)
        state, clamp = step(state, sc, dt_step, dk1, dk2, habitat)
        max_clamp = max(max_clamp, clamp)
        while snap_left and state.t >= snap_left[0] - 1e-9:
            snapshots[snap_left.pop(0)] = state.copy()
        if state.t >= next_sample - 1e-9 or state.t >= t_end - 1e-12:
            record(state)
            next_sample += ct.sample_every
    return RunResult(sc, grid, np.array(times),
                     {k: np.array(v) for k, v in recs.items()},
                     snapshots, state, max_clamp,
                     (dk1.renorm, dk2.renorm), min_margin, thresholds)


# -- theory-vs-simulation diagnostics -----------------------------------------

def hopf_cole_diagnostic(state: State, profile: PiecewiseProfile,
                         rho_min: float = 0.1, s_margin: float = 2.0,
                         n_s: int = 201) -> dict:
    """Sup gap between -ln u(st,t)/t and the predicted rate profile."""
    t = state.t
    if t <= 0.0:
        raise DomainError("rate diagnostic needs t > 0")
    if profile.side is Side.RIGHT:
        s_grid = np.linspace(0.0, profile.zero_front + s_margin, n_s)
    else:
        s_grid = np.linspace(profile.zero_front - s_margin, 0.0, n_s)
    rho = np.array([profile.value(s) for s in s_grid])
    keep = rho > rho_min
    s_grid, rho = s_grid[keep], rho[keep]
    u = np.interp(s_grid * t, state.x, state.u)
    measured = -np.log(np.maximum(u, DENSITY_FLOOR)) / t
    gap = np.abs(measured - rho)
    return {"t": t, "s": s_grid, "rate": measured, "predicted": rho,
            "gap": gap, "sup_gap": float(gap.max(initial=0.0)),
            "n_points": int(len(s_grid))}


def terrace_check(state: State, prediction: list[TerraceInterval],
                  shrink: float = 0.05) -> list[dict]:
    """Sup deviation from each predicted plateau on shrunk intervals."""
    out = []
    t = state.t
    for iv in prediction:
        eta = shrink * (iv.s_max - iv.s_min)
        lo, hi = (iv.s_min + eta) * t, (iv.s_max - eta) * t
        entry = {"s_min": iv.s_min, "s_max": iv.s_max,
                 "level": iv.level, "case": iv.case}
        mask = (state.x >= lo) & (state.x <= hi)
        if hi <= lo or not mask.any():
            entry.update(sup_dev=None, n_points=0,
                         note="shrunk interval is empty on this grid")
        else:
            dev = np.abs(state.u[mask] - iv.level)
            entry.update(sup_dev=float(dev.max()),
                         n_points=int(mask.sum()))
        out.append(entry)
    return out
