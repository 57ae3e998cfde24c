"""Empirical convergence order of RK4 on the solvable master equation.

    python scripts/rk4_order_study.py --states 6 --seed 3
"""
import argparse

import numpy as np

from paracontact.integrators import IntegratorConfig
from paracontact.master_engine import exact_solution, integrate, solvable_rhs_fn
from paracontact.state_space import ObservableSystem


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--states", type=int, default=4)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--t-end", type=float, default=3.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    sys = ObservableSystem.from_table(rng.uniform(-2, 2, (args.n, args.states)))
    theta = rng.uniform(-1, 1, args.n)
    p0 = rng.dirichlet(np.ones(args.states))

    print(f"{'dt':>8} {'max error':>12} {'ratio':>8}")
    prev = None
    for dt in (0.4, 0.2, 0.1, 0.05, 0.025):
        traj = integrate(solvable_rhs_fn(sys, theta), p0, IntegratorConfig(dt, args.t_end))
        exact = np.array([exact_solution(sys, theta, p0, t).probs for t in traj.times])
        err = np.max(np.abs(traj.states - exact))
        ratio = "" if prev is None else f"{prev / err:8.2f}"
        print(f"{dt:8.3f} {err:12.3e} {ratio}")
        prev = err


if __name__ == "__main__":
    main()
