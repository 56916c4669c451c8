"""Command line entry point: scenario files in, JSON/CSV artifacts out.

Subcommands
    validate   check the standing assumptions and report each one
    speeds     predicted spreading speeds / upper bounds as JSON
    classify   region labels for both species and sides
    profile    piecewise rate profiles with sampled (s, rho) CSV tables
    simulate   run the time stepper; front CSV, snapshots, JSON summary
    verify     full pipeline: predictions vs certification vs simulation

Exit codes: 0 success, 1 verification mismatch, 2 invalid config or
failed assumption, 3 numerical abort (resolution, margin, blow-up).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from pathlib import Path

import numpy as np

from .classifier import Side, speed_report, validate
from .config import (ConfigError, ScenarioConfig, config_to_dict, dump_config,
                     load_config)
from .errors import DomainError, SimulationAbort, UnsupportedRegime
from .simulator import hopf_cole_diagnostic, run_simulation, terrace_check
from .viscosity import (build_profile, certify_subsolution,
                        certify_supersolution, check_boundary,
                        check_continuity, lower_field, upper_field)

__all__ = ["main", "run_verification"]

REQUIRED_ASSUMPTIONS = ("J", "A", "H1", "H2", "FU")
CERT_GRID = 10_000
PREDATOR_SLACK = 0.03  # absolute slack on one-sided predator bounds
SPEED_FLOOR = 0.03     # absolute floor under the relative speed tolerance


# -- shared plumbing ----------------------------------------------------------

def _jsonify(obj):
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, np.ndarray):
        return [_jsonify(x) for x in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonify(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_jsonify(payload), sort_keys=True, indent=2)
    path.write_text(text + "\n")


def _out_dir(args, cfg: ScenarioConfig | None) -> Path:
    if args.out is not None:
        return Path(args.out)
    if cfg is not None and cfg.out_dir is not None:
        return Path(cfg.out_dir)
    return Path(".")


def _parse_snapshots(text: str) -> tuple[float, ...]:
    try:
        return tuple(sorted(float(t) for t in text.split(",") if t.strip()))
    except ValueError:
        raise ConfigError("snapshots", f"bad time list {text!r}") from None


def _apply_overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    changes = {}
    if getattr(args, "horizon", None) is not None:
        if args.horizon <= 0:
            raise ConfigError("horizon", "must be positive")
        changes["horizon"] = args.horizon
    if getattr(args, "snapshots", None) is not None:
        changes["snapshots"] = _parse_snapshots(args.snapshots)
    if getattr(args, "tolerance_speed", None) is not None:
        if args.tolerance_speed <= 0:
            raise ConfigError("tolerance_speed", "must be positive")
        changes["tolerance_speed"] = args.tolerance_speed
    if not changes:
        return cfg
    cfg = dataclasses.replace(cfg, **changes)
    bad = [t for t in cfg.snapshots if t <= 0 or t > cfg.horizon]
    if bad:
        raise ConfigError("snapshots",
                          f"snapshot times {bad} outside (0, horizon]")
    return cfg


def _failed_assumption(report: dict) -> str | None:
    for name in REQUIRED_ASSUMPTIONS:
        if not report[name].passed:
            return name
    return None


# -- simple subcommands -------------------------------------------------------

def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    report = validate(cfg.scenario)
    for name, res in report.items():
        print(f"[{name}] {'pass' if res.passed else 'FAIL'}  {res.detail}")
    if args.out is not None:
        _write_json(_out_dir(args, cfg) / f"{cfg.name}.assumptions.json",
                    {k: v.to_dict() for k, v in report.items()})
    failed = _failed_assumption(report)
    if failed is not None:
        print(f"assumption {failed} fails", file=sys.stderr)
        return 2
    return 0


def _require_assumptions(cfg: ScenarioConfig) -> None:
    failed = _failed_assumption(validate(cfg.scenario))
    if failed is not None:
        raise UnsupportedRegime(f"assumption {failed} fails for this scenario")


def _cmd_speeds(args) -> int:
    cfg = load_config(args.config)
    _require_assumptions(cfg)
    payload = speed_report(cfg.scenario).to_dict()
    print(json.dumps(_jsonify(payload), sort_keys=True, indent=2))
    if args.out is not None:
        _write_json(_out_dir(args, cfg) / f"{cfg.name}.speeds.json", payload)
    return 0


def _cmd_classify(args) -> int:
    cfg = load_config(args.config)
    _require_assumptions(cfg)
    rep = speed_report(cfg.scenario)
    keys = ("prey_right", "prey_left", "predator_right", "predator_left")
    payload = {k: r.to_dict() for k, r in zip(keys, rep.regions)}
    print(json.dumps(_jsonify(payload), sort_keys=True, indent=2))
    if args.out is not None:
        _write_json(_out_dir(args, cfg) / f"{cfg.name}.regions.json", payload)
    return 0


def _profile_samples(prof, n: int = 601):
    front = prof.zero_front
    if prof.side is Side.RIGHT:
        lo, hi = 0.0, max(front, 0.0) + 3.0
    else:
        lo, hi = min(front, 0.0) - 3.0, 0.0
    return prof.table(np.linspace(lo, hi, n))


def _cmd_profile(args) -> int:
    cfg = load_config(args.config)
    _require_assumptions(cfg)
    out = _out_dir(args, cfg) if args.out is not None else None
    for side in (Side.RIGHT, Side.LEFT):
        prof = build_profile(cfg.scenario, side)
        print(prof.describe())
        rows = _profile_samples(prof)
        if out is None:
            print("s,rho")
            for s, rho in rows:
                print(f"{s:.12g},{rho:.12g}")
        else:
            path = out / f"{cfg.name}.profile_{side.value}.csv"
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w") as fh:
                fh.write("s,rho\n")
                for s, rho in rows:
                    fh.write(f"{s:.12g},{rho:.12g}\n")
            print(f"wrote {path}")
    return 0


# -- simulate -----------------------------------------------------------------

def _speed_entries(res) -> dict:
    speeds = {}
    for key in ("u_right", "u_left", "v_right", "v_left"):
        est = res.speed(key)
        speeds[key] = (None if est is None
                       else {"speed": est[0], "stderr": est[1]})
    return speeds


def _terrace_entries(cfg: ScenarioConfig, res):
    try:
        prediction = speed_report(cfg.scenario).terrace
    except UnsupportedRegime as exc:
        return None, str(exc)
    return terrace_check(res.final, list(prediction)), None


def _hopf_cole_entry(cfg: ScenarioConfig, res, side: Side):
    try:
        prof = build_profile(cfg.scenario, side)
        diag = hopf_cole_diagnostic(res.final, prof)
    except (UnsupportedRegime, RuntimeError, DomainError) as exc:
        return {"sup_gap": None, "note": str(exc)}
    return {"sup_gap": diag["sup_gap"], "n_points": diag["n_points"]}


def _write_fronts_csv(path: Path, res) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    keys = ("u_right", "u_left", "v_right", "v_left")
    with path.open("w") as fh:
        fh.write("t,x_right_u,x_left_u,x_right_v,x_left_v\n")
        for i, t in enumerate(res.times):
            cells = ",".join(f"{res.fronts[k][i]:.10g}" for k in keys)
            fh.write(f"{t:.10g},{cells}\n")


def _write_snapshot_csv(path: Path, state) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        fh.write("x,u,v\n")
        for x, u, v in zip(state.x, state.u, state.v):
            fh.write(f"{x:.10g},{u:.12g},{v:.12g}\n")


def _cmd_simulate(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    out = _out_dir(args, cfg)
    res = run_simulation(cfg.scenario, cfg.controls())
    _write_fronts_csv(out / f"{cfg.name}.fronts.csv", res)
    for t, state in sorted(res.snapshots.items()):
        _write_snapshot_csv(out / f"{cfg.name}.snapshot_t{t:g}.csv", state)
    terrace, terrace_note = _terrace_entries(cfg, res)
    summary = {
        "name": cfg.name,
        "config": config_to_dict(cfg),
        "grid": {"x_min": res.grid.x_min, "x_max": res.grid.x_max,
                 "n": res.grid.n, "dx": res.grid.dx},
        "horizon": cfg.horizon,
        "speeds": _speed_entries(res),
        "thresholds": res.thresholds,
        "max_clamp": res.max_clamp,
        "min_margin": res.min_margin,
        "terrace": terrace,
        "terrace_note": terrace_note,
        "hopf_cole": {
            "right": _hopf_cole_entry(cfg, res, Side.RIGHT),
            "left": _hopf_cole_entry(cfg, res, Side.LEFT),
        },
    }
    _write_json(out / f"{cfg.name}.summary.json", summary)
    for key, entry in summary["speeds"].items():
        shown = "none" if entry is None else f"{entry['speed']:+.6f}"
        print(f"{key:8s} {shown}")
    print(f"wrote {out / f'{cfg.name}.summary.json'}")
    return 0


# -- verify -------------------------------------------------------------------

def _compare(name, measured, target, tol, one_sided=False, note=""):
    if measured is None:
        # a missing front satisfies an upper bound, fails an equality
        passed = one_sided
        return {"name": name, "measured": None, "target": target,
                "tolerance": tol, "passed": passed,
                "note": note or "front not detected"}
    if one_sided:
        passed = measured <= target + tol
    else:
        passed = abs(measured - target) <= tol
    return {"name": name, "measured": measured, "target": target,
            "tolerance": tol, "passed": bool(passed), "note": note}


def _certification_block(cfg: ScenarioConfig, predictions) -> tuple[dict, dict]:
    profiles, block = {}, {}
    sc = cfg.scenario
    for side, key, lam, speed in (
            (Side.RIGHT, "right", sc.lambda1_r, predictions.prey_right),
            (Side.LEFT, "left", sc.lambda1_l, predictions.prey_left)):
        prof = build_profile(sc, side)
        gap = check_continuity(prof)
        boundary_ok = check_boundary(prof, lam)
        sup = certify_supersolution(prof, lower_field(sc), n_grid=CERT_GRID)
        sub = certify_subsolution(prof, upper_field(sc), n_grid=CERT_GRID)
        front_ok = abs(prof.zero_front - speed) <= 1e-8
        profiles[key] = prof
        block[key] = {
            "case": prof.case,
            "zero_front": prof.zero_front,
            "continuity_gap": gap,
            "boundary": boundary_ok,
            "supersolution": {"passed": sup.passed,
                              "max_violation": sup.max_violation},
            "subsolution": {"passed": sub.passed,
                            "max_violation": sub.max_violation},
            "front_matches_classifier": front_ok,
            "passed": bool(boundary_ok and sup.passed and sub.passed
                           and front_ok),
        }
    return profiles, block


def _spot_checks(cfg: ScenarioConfig, profiles: dict) -> dict:
    rng = np.random.default_rng(cfg.seed)
    out = {"seed": cfg.seed, "draws": 200, "all_finite": True}
    for key, prof in profiles.items():
        front = prof.zero_front
        if prof.side is Side.RIGHT:
            lo, hi = 0.0, max(front, 0.0) + 2.0
        else:
            lo, hi = min(front, 0.0) - 2.0, 0.0
        vals = np.array([prof.value(s)
                         for s in rng.uniform(lo, hi, size=200)])
        finite = bool(np.isfinite(vals).all()) and float(vals.min()) >= -1e-12
        out[f"max_rate_{key}"] = float(vals.max())
        out["all_finite"] = out["all_finite"] and finite
    return out


def run_verification(cfg: ScenarioConfig) -> tuple[dict, int]:
    """Predictions -> certification -> simulation -> comparisons.

    Returns the JSON-ready report and the process exit code.
    """
    report: dict = {"name": cfg.name, "config": config_to_dict(cfg)}
    sc = cfg.scenario

    assumptions = validate(sc)
    report["assumptions"] = {k: v.to_dict() for k, v in assumptions.items()}
    failed = _failed_assumption(assumptions)
    if failed is not None:
        report["passed"] = False
        report["error"] = {"kind": "assumption", "assumption": failed,
                           "detail": assumptions[failed].detail}
        return report, 2

    predictions = speed_report(sc)
    report["predictions"] = predictions.to_dict()

    try:
        profiles, cert = _certification_block(cfg, predictions)
        report["certification"] = cert
    except (RuntimeError, DomainError) as exc:
        report["passed"] = False
        report["error"] = {"kind": "numerical", "stage": "certification",
                           "detail": str(exc)}
        return report, 3

    try:
        res = run_simulation(sc, cfg.controls())
    except (SimulationAbort, DomainError) as exc:
        report["passed"] = False
        report["error"] = {"kind": "numerical", "stage": "simulation",
                           "detail": str(exc)}
        return report, 3

    speeds = _speed_entries(res)
    report["simulation"] = {
        "speeds": speeds,
        "horizon": cfg.horizon,
        "grid": {"x_min": res.grid.x_min, "x_max": res.grid.x_max,
                 "n": res.grid.n, "dx": res.grid.dx},
        "max_clamp": res.max_clamp,
        "min_margin": res.min_margin,
    }

    comparisons = []
    for key, target, side_name in (
            ("u_right", predictions.prey_right, "right"),
            ("u_left", predictions.prey_left, "left")):
        measured = None if speeds[key] is None else speeds[key]["speed"]
        tol = max(cfg.tolerance_speed * abs(target), SPEED_FLOOR)
        comparisons.append(_compare(f"prey_{side_name}_speed",
                                    measured, target, tol))
    for key, bound, side_name in (
            ("v_right", predictions.predator_right_upper, "right"),
            ("v_left", predictions.predator_left_upper, "left")):
        measured = None if speeds[key] is None else speeds[key]["speed"]
        if side_name == "left":
            # leftward: bound is a lower barrier on a negative speed
            entry = _compare(f"predator_{side_name}_bound",
                             None if measured is None else -measured,
                             -bound, PREDATOR_SLACK, one_sided=True)
        else:
            entry = _compare(f"predator_{side_name}_bound",
                             measured, bound, PREDATOR_SLACK, one_sided=True)
        comparisons.append(entry)

    terrace = terrace_check(res.final, list(predictions.terrace))
    report["simulation"]["terrace"] = terrace
    devs = [e["sup_dev"] for e in terrace if e.get("sup_dev") is not None]
    if devs:
        comparisons.append(_compare("terrace_sup_deviation", max(devs), 0.0,
                                    cfg.tolerance_terrace))
    elif terrace:
        comparisons.append({"name": "terrace_sup_deviation", "measured": None,
                            "target": 0.0,
                            "tolerance": cfg.tolerance_terrace,
                            "passed": False,
                            "note": "no terrace interval held data"})

    hc = hopf_cole_diagnostic(res.final, profiles["right"])
    report["simulation"]["hopf_cole_right"] = {
        "sup_gap": hc["sup_gap"], "n_points": hc["n_points"]}
    comparisons.append(_compare("hopf_cole_right_gap", hc["sup_gap"], 0.0,
                                cfg.tolerance_rate))

    for key in ("right", "left"):
        entry = dict(cert[key])
        comparisons.append({"name": f"certification_{key}",
                            "measured": entry["continuity_gap"],
                            "target": 0.0, "tolerance": 1e-8,
                            "passed": entry["passed"], "note": entry["case"]})

    report["spot_checks"] = _spot_checks(cfg, profiles)
    report["comparisons"] = comparisons
    ok = all(c["passed"] for c in comparisons) \
        and report["spot_checks"]["all_finite"]
    report["passed"] = bool(ok)
    return report, 0 if ok else 1


def _verify_one(path: str, out_dir: str, overrides: dict) -> tuple:
    """Worker for one config file; returns (name, code, report_path)."""
    stem = Path(path).stem
    report_path = Path(out_dir) / f"{stem}.verify.json"
    try:
        cfg = load_config(path)
        ns = argparse.Namespace(**overrides)
        cfg = _apply_overrides(cfg, ns)
    except (ConfigError, OSError) as exc:
        _write_json(report_path, {"name": stem, "passed": False,
                                  "error": {"kind": "config",
                                            "detail": str(exc)}})
        return stem, 2, str(report_path), str(exc)
    report, code = run_verification(cfg)
    _write_json(report_path, report)
    note = report.get("error", {}).get("detail", "")
    return cfg.name, code, str(report_path), note


def _config_paths(target: Path) -> list[Path]:
    if target.is_dir():
        found = sorted(p for p in target.iterdir()
                       if p.suffix in (".toml", ".json", ".cfg"))
        if not found:
            raise ConfigError("<config>", f"no config files in {target}")
        return found
    return [target]


def _cmd_verify(args) -> int:
    paths = _config_paths(Path(args.config))
    out_dir = args.out if args.out is not None else "."
    overrides = {"horizon": args.horizon, "snapshots": args.snapshots,
                 "tolerance_speed": args.tolerance_speed}
    jobs = max(1, args.jobs)
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_one, [str(p) for p in paths],
                                    [out_dir] * len(paths),
                                    [overrides] * len(paths)))
    else:
        results = [_verify_one(str(p), out_dir, overrides) for p in paths]
    worst = 0
    for name, code, report_path, note in results:
        status = {0: "PASS", 1: "FAIL", 2: "INVALID", 3: "ABORT"}[code]
        trailer = f"  ({note})" if note else ""
        print(f"{status:7s} {name}{trailer}  report: {report_path}")
        worst = max(worst, code)
    return worst


# -- argument parsing ---------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftfronts",
        description="Spreading speeds and front profiles for a nonlocal "
                    "predator-prey system in a shifting habitat.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True,
                        help="scenario file (TOML key/value or JSON)")
        sp.add_argument("--out", help="output directory")
        return sp

    common("validate", "check standing assumptions")
    common("speeds", "predicted speeds and bounds as JSON")
    common("classify", "region labels for each species and side")
    common("profile", "piecewise rate profiles and CSV tables")

    sim = common("simulate", "integrate the system and record fronts")
    sim.add_argument("--horizon", type=float, help="override horizon T")
    sim.add_argument("--snapshots", help="comma separated snapshot times")

    ver = common("verify", "run the full prediction/simulation cross-check")
    ver.add_argument("--tolerance-speed", type=float, dest="tolerance_speed",
                     help="relative speed tolerance override")
    ver.add_argument("--horizon", type=float, help="override horizon T")
    ver.add_argument("--snapshots", help="comma separated snapshot times")
    ver.add_argument("--jobs", type=int, default=1,
                     help="concurrent scenarios when --config is a directory")
    return parser


_COMMANDS = {
    "validate": _cmd_validate,
    "speeds": _cmd_speeds,
    "classify": _cmd_classify,
    "profile": _cmd_profile,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedRegime as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SimulationAbort, DomainError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
