#!/usr/bin/env python3
"""Functionally generated portfolios and the pathwise master equation.

A concave generator G on the simplex induces the long-only map

    pi_i(x) = x_i (D_i G/G + 1 - sum_j x_j D_j G/G),

whose wealth has the pathwise form V_T = (G(mu_T)/G(mu_0)) exp(g[0,T]) with
a nonnegative drift g fed by the quadratic variation of the weights: the
portfolio harvests volatility.  The demo reconciles the three wealth
engines (rebalancing recursion, master equation, stochastic exponential) on
one simulated path and shows the drift's monotonicity in curvature.
"""

import numpy as np

import growthlab as gl


def main():
    spec = gl.wright_fisher(1.5, [0.5, 0.5], 1.0)
    mu0 = gl.SimplexPoint(np.array([0.5, 0.5]))
    path = gl.simulate_diffusion(spec, 100.0, 1e-3, mu0, 123)
    pq = gl.quadratic_variation(path, gl.RefiningPartition(1e-3))

    G = gl.generator("quadratic", [2.0, 1.0], dim=2)
    fgm = gl.fg_map(G)
    m = gl.wealth_master_equation(pq, G).final
    d = gl.wealth_discrete(path, fgm).final
    e = gl.wealth_diffusion_exponential(path, fgm, spec).final
    print("G = 2 - |x|^2/2 on a T=100 path (dt = 1e-3):")
    print(f"  master equation   log V_T = {m: .6f}")
    print(f"  discrete recursion log V_T = {d: .6f}")
    print(f"  stochastic exp.    log V_T = {e: .6f}")

    inc = gl.wealth_master_equation(pq, G).meta["g_increments"]
    print(f"  drift increments: min = {inc.min():.3e} (never negative), "
          f"total = {inc.sum():.4f}")

    print("\nvolatility harvesting grows with curvature (drift term):")
    for c1 in (0.0, 0.4, 0.8, 1.2):
        Gc = gl.generator("quadratic", [1.4, c1], dim=2)
        v = gl.wealth_master_equation(pq, Gc).final
        print(f"  curvature {c1:.1f}:  log V_T = {v: .4f}")

    print("\nmesh-halving agreement of the engines (T = 100):")
    for stride in (4, 2, 1):
        sub = path.subsample(stride)
        dt = 1e-3 * stride
        subq = gl.quadratic_variation(sub, gl.RefiningPartition(dt))
        mm = gl.wealth_master_equation(subq, G).final
        dd = gl.wealth_discrete(sub, fgm).final
        print(f"  dt = {dt:g}:  |master - discrete| = {abs(mm - dd):.2e}")


if __name__ == "__main__":
    main()
