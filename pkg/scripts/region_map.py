#!/usr/bin/env python3
"""Map the (decay rate, edge speed) plane into its speed-selection regions.

For one species and one propagation direction, sweep a rectangle of
(lambda, c_e) values at the reference parameters, record the region label
and the predicted front speed at every grid point, and dump the result as
CSV.  With --plot, also render a two-panel figure: the region partition
(colored by label, curve bands drawn in black) next to the speed surface.

The interesting structure is all in the right panel: the speed is constant
in c_e inside Va, follows the edge inside Vb, and interpolates along the
intermediate branches in Vc/Vd, continuously across every boundary curve.

Typical use:

    python3 scripts/region_map.py --side right --n 161 --plot
    python3 scripts/region_map.py --species predator --side left
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

from shiftfronts.classifier import (Scenario, SpeciesTag, classify_left,
                                    classify_right, predator_upper_bounds,
                                    prey_speeds)
from shiftfronts.kernels import KernelSpec

# Reference parameter set used throughout the repo (see configs/).
REFERENCE = dict(d1=1.0, r1=1.0, d2=0.2, r2=0.5, a=0.4, b=1.5,
                 alpha_minus=1.5, alpha_plus=1.0,
                 kernel1=KernelSpec("uniform", 1.0),
                 kernel2=KernelSpec("uniform", 1.0))

# Decay rates for the three slots not being swept.
FIXED_DECAYS = dict(lambda1_r=1.0, lambda1_l=1.5,
                    lambda2_r=2.0, lambda2_l=2.0)


def sweep_point(species: str, side: str, lam: float, c_e: float):
    """Classify one (lambda, c_e) query and return (label, gamma, speed)."""
    decays = dict(FIXED_DECAYS)
    slot = ("lambda1_" if species == "prey" else "lambda2_") + side[0]
    decays[slot] = lam
    sc = Scenario(**REFERENCE, c_e=c_e, **decays)
    pair = sc.prey_pair() if species == "prey" else sc.predator_pair()
    tag = SpeciesTag.PREY if species == "prey" else SpeciesTag.PREDATOR
    if side == "right":
        label = classify_right(pair, lam, c_e, tag)
    else:
        label = classify_left(pair, lam, c_e, tag)
    speeds = prey_speeds(sc) if species == "prey" \
        else predator_upper_bounds(sc)
    speed = speeds[0] if side == "right" else speeds[1]
    return label, speed


def run_sweep(args):
    lams = np.linspace(args.lam_min, args.lam_max, args.n)
    ces = np.linspace(args.ce_min, args.ce_max, args.n)
    labels = np.empty((args.n, args.n), dtype=object)
    gammas = np.empty((args.n, args.n), dtype=object)
    speeds = np.empty((args.n, args.n))
    t0 = time.perf_counter()
    for i, lam in enumerate(lams):
        for j, c_e in enumerate(ces):
            lab, speed = sweep_point(args.species, args.side, lam, c_e)
            labels[i, j] = lab.label.value
            gammas[i, j] = "" if lab.gamma is None else lab.gamma.value
            speeds[i, j] = speed
    elapsed = time.perf_counter() - t0
    print(f"classified {args.n * args.n} points in {elapsed:.1f}s")
    return lams, ces, labels, gammas, speeds


def write_csv(path: Path, lams, ces, labels, gammas, speeds):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "c_e", "label", "gamma", "speed"])
        for i, lam in enumerate(lams):
            for j, c_e in enumerate(ces):
                writer.writerow([f"{lam:.10g}", f"{c_e:.10g}", labels[i, j],
                                 gammas[i, j], f"{speeds[i, j]:.12g}"])
    print(f"wrote {path}")


def plot(path: Path, args, lams, ces, labels, speeds):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = sorted({lab for row in labels for lab in row})
    index = {name: k for k, name in enumerate(names)}
    grid = np.array([[index[lab] for lab in row] for row in labels])
    on_curve = np.array([[lab.startswith("gamma") for lab in row]
                         for row in labels])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.4), sharey=True)
    extent = [lams[0], lams[-1], ces[0], ces[-1]]
    ax1.imshow(grid.T, origin="lower", extent=extent, aspect="auto",
               cmap="tab10", vmin=0, vmax=max(9, len(names) - 1))
    if on_curve.any():
        ys, xs = np.nonzero(on_curve)
        ax1.plot(lams[ys], ces[xs], "k.", ms=1.5)
    handles = [plt.Line2D([], [], marker="s", ls="", color=plt.cm.tab10(k),
                          label=name) for name, k in index.items()
               if not name.startswith("gamma")]
    ax1.legend(handles=handles, loc="upper right", fontsize=8)
    ax1.set_xlabel("decay rate lambda")
    ax1.set_ylabel("edge speed c_e")
    ax1.set_title(f"{args.species} / {args.side}: region partition")

    im = ax2.imshow(speeds.T, origin="lower", extent=extent, aspect="auto",
                    cmap="viridis")
    fig.colorbar(im, ax=ax2, label="predicted front speed")
    ax2.set_xlabel("decay rate lambda")
    ax2.set_title("speed surface (continuous across boundaries)")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    print(f"wrote {path}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--species", choices=("prey", "predator"),
                        default="prey")
    parser.add_argument("--side", choices=("right", "left"), default="right")
    parser.add_argument("--n", type=int, default=121,
                        help="grid points per axis")
    parser.add_argument("--lam-min", type=float, default=0.05)
    parser.add_argument("--lam-max", type=float, default=4.0)
    parser.add_argument("--ce-min", type=float, default=-3.0)
    parser.add_argument("--ce-max", type=float, default=3.0)
    parser.add_argument("--out", default="results",
                        help="output directory")
    parser.add_argument("--plot", action="store_true",
                        help="also write a PNG figure")
    args = parser.parse_args(argv)

    lams, ces, labels, gammas, speeds = run_sweep(args)
    stem = f"region_map_{args.species}_{args.side}"
    out = Path(args.out)
    write_csv(out / f"{stem}.csv", lams, ces, labels, gammas, speeds)
    if args.plot:
        plot(out / f"{stem}.png", args, lams, ces, labels, speeds)

    counts = {}
    for row in labels:
        for lab in row:
            counts[lab] = counts.get(lab, 0) + 1
    for name in sorted(counts):
        print(f"  {name:12s} {counts[name]:7d} points")
    return 0


if __name__ == "__main__":
    sys.exit(main())
