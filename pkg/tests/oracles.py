"""Independent brute-force oracles used to freeze expected test values.

Everything here is deliberately dumb: dense grid searches, zooming grid
searches, direct Monte Carlo of known distributions.  None of it shares code
with the solvers it checks.
"""

import numpy as np


def grid_argmax_1d(f, lo=0.0, hi=1.0, n=2_000_001):
    """Dense 1-d grid argmax of a vectorized function."""
    g = np.linspace(lo, hi, n)
    v = f(g)
    i = int(np.argmax(v))
    return float(g[i]), float(v[i])


def zoom_argmax_1d(f, lo=0.0, hi=1.0, n=10_001, rounds=6):
    """Zooming grid search: refine around the argmax until ~1e-12 wide."""
    for _ in range(rounds):
        g = np.linspace(lo, hi, n)
        v = f(g)
        i = int(np.argmax(v))
        span = (hi - lo) / (n - 1)
        lo = max(lo, g[i] - 2 * span)
        hi = min(hi, g[i] + 2 * span)
    g = np.linspace(lo, hi, n)
    v = f(g)
    i = int(np.argmax(v))
    return float(g[i]), float(v[i])


def two_point_objective(ratios_up, ratios_down, p_up):
    """Expected one-step log yield of (p, 1-p) under a two-outcome move."""
    ru = np.asarray(ratios_up)
    rd = np.asarray(ratios_down)

    def f(p):
        p = np.asarray(p)
        a = p * ru[0] + (1 - p) * ru[1]
        b = p * rd[0] + (1 - p) * rd[1]
        return p_up * np.log(a) + (1 - p_up) * np.log(b)

    return f


def constant_map_objective(ratio_matrix):
    """Realized log wealth of the constant vector (p, 1-p) on a d=2 path."""
    R = np.asarray(ratio_matrix)

    def f(p):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        vals = np.log(np.outer(R[:, 0], p) + np.outer(R[:, 1], 1 - p)).sum(axis=0)
        return vals if vals.size > 1 else vals[0]

    return f


def beta_inverse_moment(alpha, beta):
    """E[1/X] for X ~ Beta(alpha, beta), finite when alpha > 1."""
    return (alpha + beta - 1.0) / (alpha - 1.0)


def beta_moments_mc(alpha, beta, n, seed):
    """Monte Carlo mean/variance/inverse-moment of a Beta law (independent
    of the package's samplers)."""
    rng = np.random.default_rng(seed)
    x = rng.beta(alpha, beta, n)
    return {
        "mean": float(x.mean()),
        "var": float(x.var(ddof=1)),
        "inv_mean": float((1.0 / x).mean()),
        "se_mean": float(x.std(ddof=1) / np.sqrt(n)),
    }


def wf_lnum_exact(kappa, sigma2, theta):
    """Closed-form stationary growth rate of the numeraire portfolio for the
    mean-reverting square-root model with Dirichlet(2 kappa theta / sigma2)
    stationary law (d = 2):

        lam' c lam = (kappa^2 / sigma2) (sum_i theta_i^2 / x_i - 1),
        E[1/x_i]   = (a0 - 1) / (a_i - 1),   a_i = 2 kappa theta_i / sigma2.
    """
    theta = np.asarray(theta, dtype=float)
    a = 2.0 * kappa * theta / sigma2
    a0 = a.sum()
    inv = (a0 - 1.0) / (a - 1.0)
    return 0.5 * (kappa**2 / sigma2) * (float((theta**2 * inv).sum()) - 1.0)


def wf_lnum_mc(kappa, sigma2, theta, n, seed):
    """The same rate by direct Monte Carlo of the Dirichlet stationary law."""
    theta = np.asarray(theta, dtype=float)
    a = 2.0 * kappa * theta / sigma2
    rng = np.random.default_rng(seed)
    x = rng.dirichlet(a, size=n)
    vals = 0.5 * (kappa**2 / sigma2) * ((theta[None, :] ** 2 / x).sum(axis=1) - 1.0)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n))
