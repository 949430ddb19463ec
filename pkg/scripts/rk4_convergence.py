#!/usr/bin/env python3
"""Convergence and drift study for the fixed-step integrator.

Halves the step repeatedly against the exact mode solution and prints the
error ratios (expect about 16 for a fourth-order method) plus the
conservation drift of the first three Hamiltonians at each step size.
"""
import numpy as np

import pu6

OMEGAS = (3.0, 2.0, 1.0)
T_END = 20.0
STEPS = (4e-3, 2e-3, 1e-3, 5e-4)


def main():
    f = pu6.frequency_triple(*OMEGAS)
    p = pu6.params_from_frequencies(f)
    rng = np.random.default_rng(0)
    s0 = rng.uniform(-1.0, 1.0, size=6)
    sol = pu6.solve_exact(f, s0)
    forms = [pu6.hamiltonian_form(k, p) for k in (1, 2, 3)]

    print(f"omegas {OMEGAS}, t_end {T_END}")
    print(f"{'dt':>10} {'max err':>12} {'ratio':>8} {'drift H1':>12} {'drift H2':>12} {'drift H3':>12}")
    prev = None
    for dt in STEPS:
        traj = pu6.integrate_rk4(p, s0, T_END, dt)
        err = float(np.abs(traj.states - sol.states(traj.times)).max())
        drift = pu6.conservation_drift(traj, forms)
        ratio = f"{prev / err:8.2f}" if prev else "       -"
        print(f"{dt:10.1e} {err:12.3e} {ratio} {drift[0]:12.3e} {drift[1]:12.3e} {drift[2]:12.3e}")
        prev = err


if __name__ == "__main__":
    main()
