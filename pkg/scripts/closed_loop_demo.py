#!/usr/bin/env python3
"""Stabilize the open-loop-unstable 6DOF model by chain pole placement and
watch the regulation transient from a perturbed start.

Prints the decay of the state norm over time. The open-loop model has its
entire spectrum at the origin, so without feedback the same perturbation
grows quadratically; with all poles placed at the chosen location the norm
decays once the repeated-pole polynomial transients die off.

Usage: python scripts/closed_loop_demo.py [--params FILE] [--pole -2.0]
       [--out traj.csv]
"""

import argparse
import json

import numpy as np

from quadmodel import (
    PoleSpec,
    QuadParams,
    SimConfig,
    analyze,
    build_6dof,
    design_6dof_gains,
    simulate,
    validate,
)
from quadmodel.cli import write_trajectory_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--params", default="params.example.json")
    ap.add_argument("--pole", type=float, default=-2.0,
                    help="repeated closed-loop pole for every chain")
    ap.add_argument("--t-final", type=float, default=10.0, dest="t_final")
    ap.add_argument("--out", help="optional trajectory CSV")
    args = ap.parse_args()

    with open(args.params, "r", encoding="utf-8") as fh:
        p = validate(QuadParams(**json.load(fh)))
    model = build_6dof(p)

    report = analyze(model)
    print(f"open loop: stability={report.stability_class}, "
          f"controllability rank {report.controllability_rank}/12")

    gains = design_6dof_gains(p, PoleSpec.uniform_6dof(args.pole))
    x0 = np.zeros(12)
    x0[0] = x0[1] = x0[2] = 0.5   # half a metre off in every axis
    x0[6] = x0[7] = 0.05          # three degrees of tilt
    traj = simulate(model, x0, lambda t, x: gains.feedback_input(x),
                    SimConfig(t_final=args.t_final, dt=0.001))

    n0 = np.linalg.norm(x0)
    print(f"\nclosed loop, all poles at {args.pole}:")
    print(f"{'t [s]':>6}  {'|x|/|x0|':>10}")
    norms = np.linalg.norm(traj.states, axis=1) / n0
    for t in np.arange(0.0, args.t_final + 1e-9, 1.0):
        i = int(round(t / 0.001))
        print(f"{t:6.1f}  {norms[i]:10.3e}")

    below = np.nonzero(norms < 1e-3)[0]
    if below.size:
        print(f"\nnorm first drops below 1e-3 of initial at t = {traj.times[below[0]]:.3f} s")
    else:
        print("\nnorm never drops below 1e-3 of initial on this horizon")

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_trajectory_csv(traj, fh)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
