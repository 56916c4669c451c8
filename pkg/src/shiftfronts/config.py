"""Scenario files: a flat key/value (TOML) format with a JSON alternative.

A config file is a reproduction recipe: the physical scenario plus the
simulation controls and comparison tolerances used by the command line
tools.  The same mapping can be written as TOML (the human-editable
form) or JSON; ``parse -> dump -> parse`` is idempotent.

Unbounded initial decay (compactly supported data) is spelled ``inf``.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised only on 3.10
    import tomli as tomllib

from .classifier import Scenario
from .hamiltonians import INFINITY, is_infinite
from .kernels import KernelSpec
from .simulator import (Grid, HabitatShape, InitialData, InitialKind,
                        SimControls, default_initial)

__all__ = ["ConfigError", "ScenarioConfig", "parse_config", "load_config",
           "dump_config", "config_to_dict"]

_SCENARIO_KEYS = ("d1", "r1", "d2", "r2", "a", "b",
                  "alpha_minus", "alpha_plus", "c_e")
_DECAY_KEYS = ("lambda1_r", "lambda1_l", "lambda2_r", "lambda2_l")
_KERNEL_KEYS = ("kernel1", "kernel2")

_SHAPE_NAMES = {"step": HabitatShape.STEP,
                "ramp": HabitatShape.LOGISTIC_RAMP}


class ConfigError(ValueError):
    """A config problem attributable to one named field."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config field '{key}': {message}")


@dataclass(frozen=True)
class ScenarioConfig:
    """A parsed scenario plus everything needed to run and judge it."""

    scenario: Scenario
    name: str = "scenario"
    # simulation controls
    horizon: float = 200.0
    dx: float | None = None
    dt: float | None = None
    x_min: float | None = None
    x_max: float | None = None
    pad: float = 30.0
    sample_every: float = 1.0
    snapshots: tuple[float, ...] = ()
    threshold_frac: float = 0.01
    habitat_shape: str = "ramp"
    habitat_width: float | None = None
    # initial data overrides (defaults follow the scenario decay rates)
    init_amplitude_u: float | None = None
    init_amplitude_v: float | None = None
    init_radius: float = 5.0
    # comparison tolerances for `verify`
    tolerance_speed: float = 0.05
    tolerance_terrace: float = 0.05
    tolerance_rate: float = 0.1
    # plumbing
    out_dir: str | None = None
    seed: int = 0

    def controls(self) -> SimControls:
        grid = None
        if self.x_min is not None and self.x_max is not None:
            dx = self.dx if self.dx is not None else 0.125
            n = int(round((self.x_max - self.x_min) / dx)) + 1
            grid = Grid(self.x_min, self.x_max, n)
        init_u = _initial_override(self.scenario, "prey",
                                   self.init_amplitude_u, self.init_radius)
        init_v = _initial_override(self.scenario, "predator",
                                   self.init_amplitude_v, self.init_radius)
        return SimControls(
            horizon=self.horizon, dx=self.dx, dt=self.dt, pad=self.pad,
            sample_every=self.sample_every, snapshot_times=self.snapshots,
            threshold_frac=self.threshold_frac,
            habitat_shape=_SHAPE_NAMES[self.habitat_shape],
            habitat_width=self.habitat_width,
            init_u=init_u, init_v=init_v, grid=grid)


def _initial_override(sc, species, amplitude, radius):
    if amplitude is None and radius == 5.0:
        return None  # let the simulator pick its defaults
    base = default_initial(sc, species)
    if amplitude is None:
        amplitude = base.amplitude
    if base.kind is InitialKind.COMPACT_BUMP:
        return InitialData(InitialKind.COMPACT_BUMP, amplitude, radius=radius)
    return InitialData(InitialKind.EXP_DECAY, amplitude,
                       lambda_r=base.lambda_r, lambda_l=base.lambda_l)


# -- reading ------------------------------------------------------------------

def _as_float(key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    return float(value)


def _as_decay(key: str, value):
    if isinstance(value, str):
        if value.strip().lower() == "inf":
            return INFINITY
        raise ConfigError(key, f"expected a positive number or \"inf\", "
                               f"got {value!r}")
    v = _as_float(key, value)
    if math.isinf(v) and v > 0:
        return INFINITY
    if not math.isfinite(v) or v <= 0.0:
        raise ConfigError(key, f"decay rate must be > 0 or inf, got {value!r}")
    return v


def _as_kernel(key: str, value) -> KernelSpec:
    if not isinstance(value, dict):
        raise ConfigError(key, "expected a table like "
                               '{ family = "uniform", half_width = 1.0 }')
    extra = set(value) - {"family", "half_width"}
    if extra:
        raise ConfigError(key, f"unknown kernel entries {sorted(extra)}")
    try:
        return KernelSpec(value["family"],
                          _as_float(f"{key}.half_width", value["half_width"]))
    except KeyError as missing:
        raise ConfigError(key, f"missing kernel entry {missing}") from None
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from None


_CONTROL_SPEC = {
    # key: (converter tag, default)  -- None default means "optional float"
    "horizon": ("pos_float", 200.0),
    "dx": ("opt_pos_float", None),
    "dt": ("opt_pos_float", None),
    "x_min": ("opt_float", None),
    "x_max": ("opt_float", None),
    "pad": ("pos_float", 30.0),
    "sample_every": ("pos_float", 1.0),
    "snapshots": ("float_list", ()),
    "threshold_frac": ("unit_float", 0.01),
    "habitat_shape": ("shape", "ramp"),
    "habitat_width": ("opt_pos_float", None),
    "init_amplitude_u": ("opt_pos_float", None),
    "init_amplitude_v": ("opt_pos_float", None),
    "init_radius": ("pos_float", 5.0),
    "tolerance_speed": ("pos_float", 0.05),
    "tolerance_terrace": ("pos_float", 0.05),
    "tolerance_rate": ("pos_float", 0.1),
    "out_dir": ("string", None),
    "seed": ("int", 0),
    "name": ("string", "scenario"),
}


def _convert_control(key: str, tag: str, value):
    if tag == "pos_float":
        v = _as_float(key, value)
        if not math.isfinite(v) or v <= 0.0:
            raise ConfigError(key, f"must be a positive number, got {value!r}")
        return v
    if tag == "opt_pos_float":
        return None if value is None else _convert_control(key, "pos_float",
                                                           value)
    if tag == "opt_float":
        if value is None:
            return None
        v = _as_float(key, value)
        if not math.isfinite(v):
            raise ConfigError(key, f"must be finite, got {value!r}")
        return v
    if tag == "unit_float":
        v = _as_float(key, value)
        if not 0.0 < v < 1.0:
            raise ConfigError(key, f"must lie in (0, 1), got {value!r}")
        return v
    if tag == "float_list":
        if not isinstance(value, (list, tuple)):
            raise ConfigError(key, f"expected a list of times, got {value!r}")
        return tuple(sorted(_as_float(f"{key}[{i}]", t)
                            for i, t in enumerate(value)))
    if tag == "shape":
        if value not in _SHAPE_NAMES:
            raise ConfigError(key, f"expected one of {sorted(_SHAPE_NAMES)}, "
                                   f"got {value!r}")
        return value
    if tag == "string":
        if value is not None and not isinstance(value, str):
            raise ConfigError(key, f"expected a string, got {value!r}")
        return value
    if tag == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return value
    raise AssertionError(tag)


def from_mapping(data: dict) -> ScenarioConfig:
    """Build a config from a parsed TOML/JSON mapping, field by field."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a key/value table")
    known = set(_SCENARIO_KEYS) | set(_DECAY_KEYS) | set(_KERNEL_KEYS) \
        | set(_CONTROL_SPEC)
    for key in data:
        if key not in known:
            raise ConfigError(key, "unknown key")
    for key in _SCENARIO_KEYS + _DECAY_KEYS + _KERNEL_KEYS:
        if key not in data:
            raise ConfigError(key, "missing required key")

    scen_kwargs = {k: _as_float(k, data[k]) for k in _SCENARIO_KEYS}
    scen_kwargs.update({k: _as_decay(k, data[k]) for k in _DECAY_KEYS})
    scen_kwargs.update({k: _as_kernel(k, data[k]) for k in _KERNEL_KEYS})
    try:
        scenario = Scenario(**scen_kwargs)
    except ValueError as exc:
        # Scenario errors already lead with the offending field name
        key = str(exc).split()[0] if str(exc) else "<scenario>"
        raise ConfigError(key, str(exc)) from None

    ctl = {}
    for key, (tag, default) in _CONTROL_SPEC.items():
        ctl[key] = _convert_control(key, tag, data.get(key, default))
    if (ctl["x_min"] is None) != (ctl["x_max"] is None):
        raise ConfigError("x_min", "x_min and x_max must be given together")
    if ctl["x_min"] is not None and ctl["x_min"] >= ctl["x_max"]:
        raise ConfigError("x_min", "x_min must be below x_max")
    for t in ctl["snapshots"]:
        if t <= 0.0 or t > ctl["horizon"]:
            raise ConfigError("snapshots",
                              f"snapshot time {t} outside (0, horizon]")
    return ScenarioConfig(scenario=scenario, **ctl)


def parse_config(text: str) -> ScenarioConfig:
    """Parse config text; JSON if it opens with '{', TOML otherwise."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<syntax>", f"invalid JSON: {exc}") from None
    else:
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError("<syntax>", f"invalid TOML: {exc}") from None
    return from_mapping(data)


def load_config(path) -> ScenarioConfig:
    return parse_config(Path(path).read_text())


# -- writing ------------------------------------------------------------------

def _decay_out(value):
    return "inf" if is_infinite(value) else float(value)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """The canonical mapping form (JSON-ready; decays spelled "inf")."""
    sc = cfg.scenario
    out: dict = {k: getattr(sc, k) for k in _SCENARIO_KEYS}
    for k in _DECAY_KEYS:
        out[k] = _decay_out(getattr(sc, k))
    for k in _KERNEL_KEYS:
        spec = getattr(sc, k)
        out[k] = {"family": spec.family.value,
                  "half_width": spec.half_width}
    for f in fields(ScenarioConfig):
        if f.name == "scenario":
            continue
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            value = list(value)
        out[f.name] = value
    return out


def _toml_value(value, bare_inf: bool = False) -> str:
    if isinstance(value, str):
        return "inf" if bare_inf and value == "inf" else json.dumps(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    if isinstance(value, dict):
        inner = ", ".join(f"{k} = {_toml_value(v)}" for k, v in value.items())
        return "{ " + inner + " }"
    raise TypeError(f"cannot serialize {value!r}")


def dump_config(cfg: ScenarioConfig) -> str:
    """Serialize to the key/value text form; parse(dump(c)) == c."""
    data = config_to_dict(cfg)
    lines = [f"# scenario: {cfg.name}"]
    for key, value in data.items():
        if value is None:
            continue  # optional key left at its default
        lines.append(f"{key} = {_toml_value(value, key in _DECAY_KEYS)}")
    return "\n".join(lines) + "\n"
