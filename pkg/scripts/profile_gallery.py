#!/usr/bin/env python3
"""Build and certify the piecewise front profiles across all speed regions.

For one witness scenario per region (both propagation directions, eight in
total) plus a compactly supported pair, assemble the piecewise decay-rate
profile, certify it from both sides against the comparison fields, and
tabulate every piece.  Artifacts: one CSV of sampled (s, rho) per witness,
and a JSON summary with the piece structure, the zero-front location, and
the certification margins.

This is the cheap half of the pipeline (no time integration), so the whole
gallery runs in seconds.

Typical use:

    python3 scripts/profile_gallery.py --plot
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from shiftfronts.classifier import Scenario, Side
from shiftfronts.hamiltonians import INFINITY
from shiftfronts.kernels import KernelSpec
from shiftfronts.viscosity import (build_profile, certify_subsolution,
                                   certify_supersolution, check_continuity,
                                   lower_field, upper_field)

REFERENCE = dict(d1=1.0, r1=1.0, d2=0.2, r2=0.5, a=0.4, b=1.5,
                 alpha_minus=1.5, alpha_plus=1.0,
                 kernel1=KernelSpec("uniform", 1.0),
                 kernel2=KernelSpec("uniform", 1.0))

# One witness per region; same parameter points the acceptance tests use.
WITNESSES = {
    "right_Va": dict(lambda1_r=0.5, lambda1_l=1.5, c_e=1.0, side="right"),
    "right_Vb": dict(lambda1_r=2.6, lambda1_l=1.5, c_e=1.03, side="right"),
    "right_Vc": dict(lambda1_r=1.55, lambda1_l=1.5, c_e=1.6, side="right"),
    "right_Vd": dict(lambda1_r=0.8, lambda1_l=1.5, c_e=2.8, side="right"),
    "left_Va": dict(lambda1_r=1.0, lambda1_l=1.5, c_e=-0.7, side="left"),
    "left_Vb": dict(lambda1_r=1.0, lambda1_l=3.2, c_e=-1.4, side="left"),
    "left_Vc": dict(lambda1_r=1.0, lambda1_l=1.5, c_e=-1.6, side="left"),
    "left_Vd": dict(lambda1_r=1.0, lambda1_l=2.5, c_e=-2.3, side="left"),
    "compact_right": dict(lambda1_r=INFINITY, lambda1_l=INFINITY,
                          c_e=1.03, side="right"),
    "compact_left": dict(lambda1_r=INFINITY, lambda1_l=INFINITY,
                         c_e=1.03, side="left"),
}


def witness_scenario(spec: dict) -> Scenario:
    return Scenario(**REFERENCE, c_e=spec["c_e"],
                    lambda1_r=spec["lambda1_r"], lambda1_l=spec["lambda1_l"],
                    lambda2_r=2.0, lambda2_l=2.0)


def gallery_entry(name: str, spec: dict, n_grid: int):
    sc = witness_scenario(spec)
    side = Side.RIGHT if spec["side"] == "right" else Side.LEFT
    prof = build_profile(sc, side)
    sup = certify_supersolution(prof, lower_field(sc), n_grid=n_grid)
    sub = certify_subsolution(prof, upper_field(sc), n_grid=n_grid)
    front = prof.zero_front
    if side is Side.RIGHT:
        samples = np.linspace(0.0, max(front, 0.0) + 3.0, 601)
    else:
        samples = np.linspace(min(front, 0.0) - 3.0, 0.0, 601)
    table = prof.table(samples)
    entry = dict(name=name, side=spec["side"], case=prof.case,
                 zero_front=front,
                 continuity_gap=check_continuity(prof),
                 supersolution=dict(passed=sup.passed,
                                    max_violation=sup.max_violation),
                 subsolution=dict(passed=sub.passed,
                                  max_violation=sub.max_violation),
                 describe=prof.describe())
    return entry, table


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-grid", type=int, default=4000,
                        help="certification grid points")
    parser.add_argument("--out", default="results/profiles")
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries, tables = [], {}
    for name, spec in WITNESSES.items():
        entry, table = gallery_entry(name, spec, args.n_grid)
        entries.append(entry)
        tables[name] = table
        path = out / f"{name}.csv"
        with path.open("w") as fh:
            fh.write("s,rho\n")
            for s, rho in table:
                fh.write(f"{s:.12g},{rho:.12g}\n")
        ok = entry["supersolution"]["passed"] and \
            entry["subsolution"]["passed"]
        print(f"{name:14s} case {entry['case']:12s} front "
              f"{entry['zero_front']:+.4f}  certified={ok}")

    (out / "summary.json").write_text(
        json.dumps(entries, indent=2, default=float) + "\n")
    print(f"wrote {out / 'summary.json'}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, (axr, axl) = plt.subplots(1, 2, figsize=(10.5, 4.2))
        for name, spec in WITNESSES.items():
            ax = axr if spec["side"] == "right" else axl
            rows = tables[name]
            ax.plot([s for s, _ in rows], [rho for _, rho in rows],
                    label=name, lw=1.4)
        for ax, title in ((axr, "rightward profiles"),
                          (axl, "leftward profiles")):
            ax.set_xlabel("similarity variable s = x/t")
            ax.set_ylabel("decay-rate profile rho(s)")
            ax.axhline(0.0, color="0.8", lw=0.8)
            ax.set_title(title)
            ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(out / "gallery.png", dpi=160)
        print(f"wrote {out / 'gallery.png'}")

    bad = [e["name"] for e in entries
           if not (e["supersolution"]["passed"]
                   and e["subsolution"]["passed"])]
    if bad:
        print(f"certification FAILED for {bad}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
