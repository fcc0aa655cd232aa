"""Wealth accounting relative to the market portfolio.

Three engines compute the same object on different information:

* ``wealth_discrete`` - the discrete rebalancing recursion
  V_{t+1}/V_t = sum_j pi_j(mu_t) mu^j_{t+1}/mu^j_t (non-anticipating:
  weights chosen from the left endpoint).
* ``wealth_master_equation`` - the pathwise master equation for
  functionally generated maps, V_T = (G(mu_T)/G(mu_0)) exp(g[0,T]) with
  g(dt) = -(1/2G) sum_ij D_ij G d[mu_i, mu_j], needing only the path and its
  quadratic variation.
* ``wealth_diffusion_exponential`` - the stochastic exponential
  log V_T = int (pi/mu)' dmu - 1/2 int (pi/mu)' c (pi/mu) dt using the
  generating model's diffusion matrix as compensator (simulator cross-check).

Mixture (universal) wealth is the weighted average of atom wealths,
accumulated in the log domain with an index-ordered log-sum-exp so results
are bitwise reproducible under parallel atom evaluation.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import MissingQV, MissingSpec, NonPositiveReturn
from .markets import DiffusionSpec
from .portfolios import GeneratorFunction, MixtureMeasure, PortfolioMapSpec
from .rng import parallel_map
from .simplex import MarketPath, PortfolioWeights, _frozen


@dataclass(frozen=True)
class WealthCurve:
    """Log relative wealth along a path; log_values[0] = 0 (V_0 = 1)."""

    times: np.ndarray
    log_values: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = _frozen(self.times)
        lv = _frozen(self.log_values)
        if t.size != lv.size or lv[0] != 0.0:
            raise NonPositiveReturn("curve must start at log V = 0 on the path grid")
        if not np.all(np.isfinite(lv)):
            raise NonPositiveReturn("log wealth must stay finite")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "log_values", lv)

    @property
    def final(self):
        return float(self.log_values[-1])


class PathwiseIntegrator:
    """Accumulator for the master-equation drift and return integrals.

    Tracks the running drift integral g[0, t] (one increment per step) and
    the componentwise return integrals R_i = int dmu_i / mu_i.  For a
    concave generator every drift increment is nonnegative: the pairing of
    minus the Hessian with a PSD quadratic-variation increment supported on
    the tangent space cannot be negative.
    """

    def __init__(self, d):
        self.g_increments = []
        self.returns = np.zeros(d)
        self.log_wealth = 0.0

    def add(self, g_inc, dmu_over_mu):
        self.g_increments.append(float(g_inc))
        self.returns += dmu_over_mu

    @property
    def g_total(self):
        return float(np.sum(self.g_increments))


def _step_log_factors(path: MarketPath, pmap: PortfolioMapSpec):
    w = path.weights
    pi = pmap.evaluate_path(w[:-1])
    factors = np.einsum("ij,ij->i", pi, w[1:] / w[:-1])
    if np.any(factors <= 0.0):
        raise NonPositiveReturn(
            f"one-step wealth factor <= 0 at step {int(np.argmax(factors <= 0))}"
        )
    return np.log(factors)


def wealth_discrete(path: MarketPath, pmap: PortfolioMapSpec) -> WealthCurve:
    """Discrete rebalancing recursion, accumulated in the log domain."""
    if path.times.size < 2:
        raise NonPositiveReturn("need a path with at least one step")
    steps = _step_log_factors(path, pmap)
    lv = np.concatenate([[0.0], np.cumsum(steps)])
    return WealthCurve(path.times, lv, label=pmap.label or pmap.variant)


def wealth_master_equation(path: MarketPath, G: GeneratorFunction) -> WealthCurve:
    """Pathwise wealth of the map generated by G, from path + quadratic variation.

    log V_t = log G(mu_t) - log G(mu_0) + sum_{s<t} -(1/2 G(mu_s)) <Hess G(mu_s), dQV_s>
    with left-point evaluation of G and its Hessian.
    """
    if path.qv is None:
        raise MissingQV("path carries no quadratic variation; call quadratic_variation first")
    X = path.weights
    gv = G.value(X)
    H = G.hess(X[:-1])
    dq = np.diff(path.qv, axis=0)
    g_inc = -0.5 * np.einsum("nij,nij->n", H, dq) / gv[:-1]
    lv = np.log(gv) - np.log(gv[0]) + np.concatenate([[0.0], np.cumsum(g_inc)])
    lv = lv - lv[0]
    return WealthCurve(
        path.times, lv, label=f"master:{G.family}", meta={"g_increments": g_inc}
    )


def wealth_diffusion_exponential(path: MarketPath, pmap: PortfolioMapSpec,
                                 spec: DiffusionSpec = None) -> WealthCurve:
    """Stochastic-exponential wealth with the model compensator.

    Left-point Riemann sums of (pi/mu)' dmu and (pi/mu)' c(mu) (pi/mu) dt.
    """
    if spec is None:
        raise MissingSpec("the exponential engine needs the generating DiffusionSpec")
    X = path.weights
    dt = np.diff(path.times)
    pi = pmap.evaluate_path(X[:-1])
    q = pi / X[:-1]
    stoch = np.einsum("ij,ij->i", q, np.diff(X, axis=0))
    if spec.quadform_batch is not None:
        quad = spec.quadform_batch(X[:-1], q)
    else:
        quad = np.array([qi @ spec.c(xi) @ qi for xi, qi in zip(X[:-1], q)])
    inc = stoch - 0.5 * quad * dt
    lv = np.concatenate([[0.0], np.cumsum(inc)])
    return WealthCurve(
        path.times,
        lv,
        label=pmap.label or pmap.variant,
        meta={"compensator_increments": quad * dt},
    )


def _atom_curve(path, atom, mode, spec):
    if mode == "discrete":
        return wealth_discrete(path, atom)
    if mode == "master-equation":
        if atom.variant != "fg":
            raise MissingQV("master-equation mode needs functionally generated atoms")
        return wealth_master_equation(path, atom.G)
    if mode == "exponential":
        return wealth_diffusion_exponential(path, atom, spec)
    raise NonPositiveReturn(f"unknown wealth mode {mode!r}")


def atom_log_wealths(path: MarketPath, mixture: MixtureMeasure, mode="discrete",
                     spec: DiffusionSpec = None):
    """Log-wealth curves of every atom, shape (n_atoms, len(times))."""
    curves = parallel_map(lambda a: _atom_curve(path, a, mode, spec), mixture.atoms)
    return np.stack([c.log_values for c in curves])

def wealth_universal(path: MarketPath, mixture: MixtureMeasure, mode="discrete",
                     spec: DiffusionSpec = None) -> WealthCurve:
    """Wealth of the mixture strategy: V_t(nu) = sum_k w_k V_t(pi_k).

    Computed with a stable log-sum-exp over (log w_k + log V_k) in fixed atom
    order; atom curves may be evaluated in parallel without changing the
    result.
    """
    logs = atom_log_wealths(path, mixture, mode, spec)
    shifted = logs + np.log(mixture.weights)[:, None]
    m = shifted.max(axis=0)
    lv = m + np.log(np.exp(shifted - m[None, :]).sum(axis=0))
    lv = lv - lv[0]
    return WealthCurve(
        path.times,
        lv,
        label=f"universal:{mixture.provenance.get('class', '?')}",
        meta={"atom_final_logs": logs[:, -1].copy()},
    )


def wealth_to_csv(curve: WealthCurve, filename):
    """Write a wealth curve as CSV with header ``t,log_V``."""
    with open(filename, "w") as fh:
        fh.write("t,log_V\n")
        for t, lv in zip(curve.times, curve.log_values):
            fh.write(f"{float(t)!r},{float(lv)!r}\n")


def universal_weights_at(path: MarketPath, mixture: MixtureMeasure, t: int,
                         mode="discrete", spec: DiffusionSpec = None) -> PortfolioWeights:
    """Portfolio vector of the mixture strategy at step index t.

    The wealth-weighted average of atom weights (a posterior mean): at t=0 it
    is the plain mixture average, and as one atom's wealth dominates it
    converges to that atom's weights.
    """
    logs = atom_log_wealths(path, mixture, mode, spec)[:, t]
    logs = logs + np.log(mixture.weights)
    w = np.exp(logs - logs.max())
    w = w / w.sum()
    x = path.weights[t]
    pis = np.stack([a.evaluate_path(x[None, :])[0] for a in mixture.atoms])
    out = w @ pis
    out = np.maximum(out, 0.0)
    return PortfolioWeights(out / out.sum(), long_only=True)
