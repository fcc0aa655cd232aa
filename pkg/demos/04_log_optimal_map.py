#!/usr/bin/env python3
"""Tabulating the long-only log-optimal portfolio map of an ergodic chain.

For each grid state x the one-step program max_p E[log <p, y/x>] is solved
on kernel samples by exponentiated gradient; the tabulated solutions
interpolate into a portfolio map.  For the mean-reverting benchmark the
solutions approach the closed-form numeraire line 0.75 - 0.5 x as the chain
mesh shrinks.
"""

import numpy as np

import growthlab as gl


def main():
    spec = gl.wright_fisher(1.5, [0.5, 0.5], 1.0)
    kernel = gl.euler_kernel(spec, 0.005)
    print("solving the per-state program on a 1/8 grid (n = 500k per state) ...")
    table = gl.log_optimal_map(kernel, 1 / 8, 500_000, eps=1e-3, seed=3)
    print(f"{'x1':>7} {'p_hat':>8} {'0.75-0.5x':>10} {'L(x)':>9}")
    for x, p, L in zip(table.states[:, 0], table.p_hat[:, 0], table.L):
        print(f"{x:7.3f} {p:8.4f} {0.75 - 0.5 * x:10.4f} {L:9.5f}")

    print("\nL(x) vanishes at the balanced state (the market portfolio is "
          "optimal there)\nand grows toward the boundary; its stationary "
          "average is the growth rate 1.125 * dt")

    # two exactly solvable one-step programs
    from growthlab.markets import two_point_kernel

    x = gl.make_simplex_point([0.5, 0.5])
    k = two_point_kernel([0.5, 0.5], [2 / 3, 1 / 3], [1 / 3, 2 / 3], 0.6)
    p, L = gl.log_optimal_state(x, k, 1000, 0.0, 0)
    print(f"\ntwo-outcome market, 60/40: p_hat = {p.coords.round(6)}, L = {L:.6f}"
          "  (exact: (0.8, 0.2), 0.020136)")
    k = two_point_kernel([0.5, 0.5], [2 / 3, 1 / 3], [1 / 3, 2 / 3], 0.8)
    p, L = gl.log_optimal_state(x, k, 1000, 0.0, 0)
    print(f"two-outcome market, 80/20: p_hat = {p.coords.round(6)}, L = {L:.6f}"
          "  (exact: (1, 0), 0.149053)")


if __name__ == "__main__":
    main()
