"""Sweep theta for the two-state spin and tabulate relaxation quantities.

For each theta, starts from the delta distribution on "up" and reports the
equilibrium mean, the initial contact Hamiltonian, the quadrature curve
length at t=0 and the fitted decay rate.  Writes CSV to stdout.

    python scripts/relaxation_sweep.py > sweep.csv
"""
import argparse
import csv
import sys

import numpy as np

from paracontact.contact_core import ContactPoint, GeneratingFunction, contact_hamiltonian
from paracontact.length_quad import QuadratureConfig, convergence_rate, curve_length
from paracontact.moment_flow import MomentState
from paracontact.state_space import Distribution, ObservableSystem, equilibrium_expectation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--theta-min", type=float, default=-2.0)
    ap.add_argument("--theta-max", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=21)
    args = ap.parse_args()

    spin = ObservableSystem(["up", "down"], [[1.0, -1.0]])
    w = GeneratingFunction.from_system(spin)
    cfg = QuadratureConfig()
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["theta", "mean_eq", "h0", "length0", "rate"])
    for th in np.linspace(args.theta_min, args.theta_max, args.steps):
        m = MomentState.from_distribution(spin, [th], Distribution.delta(2, 0))
        pt0 = ContactPoint(m.theta, m.expectations, m.psi)
        h0 = contact_hamiltonian(w, pt0)
        rate = convergence_rate(w, pt0, [0, 1, 2, 3], cfg) if abs(h0) > 1e-12 else float("nan")
        out.writerow([f"{th:.4f}", f"{equilibrium_expectation(spin, [th])[0]:.12f}", f"{h0:.12f}",
                      f"{curve_length(w, pt0, 0.0, cfg):.12f}", f"{rate:.12f}"])


if __name__ == "__main__":
    main()
