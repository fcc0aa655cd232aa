"""Market-weight generators: ergodic Markov kernels in discrete time and
Ito diffusions on the open simplex in continuous time.

Diffusions have the drift form c(x) lambda(x) (the structure condition),
with c(x) positive semidefinite, c(x) 1 = 0 and 1' c(x) lambda(x) = 0 so the
process stays on the simplex.  The concrete ergodic workhorse is the
Wright-Fisher model

    c_ij(x) = sigma2 * x_i (delta_ij - x_j),   lambda_i(x) = (kappa/sigma2) theta_i / x_i,

whose stationary law is Dirichlet(2 kappa theta / sigma2), giving closed-form
moment oracles for every growth-rate estimator in this package.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numba import njit

from .errors import KernelProducedInvalidPoint, NonFiniteState, NonPositiveEntry
from .rng import stream
from .simplex import MarketPath, SimplexPoint

CLIP_FLOOR = 1e-10


@dataclass(frozen=True)
class MarkovKernel:
    """One-step transition sampler on the open simplex.

    ``sampler(state, rng)`` draws one successor; ``batch(state, n, rng)``
    draws n successors as an (n, d) array.  Both are pure functions of the
    state and the generator's stream position.
    """

    dim: int
    sampler: Callable
    batch: Callable
    descriptor: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DiffusionSpec:
    """Simplex diffusion with diffusion matrix ``c`` and price of risk ``lam``.

    ``c(x)`` returns a (d, d) PSD matrix with the all-ones vector in its
    kernel; ``lam(x)`` returns the d-vector multiplying c in the drift.
    Optional vectorized hooks (over (n, d) state arrays): ``drift_batch(X)``,
    ``quadform_batch(X, Q)`` evaluating q' c(x) q row-wise, and
    ``clam_batch(X)`` for c(x) lambda(x).
    """

    dim: int
    c: Callable
    lam: Callable
    descriptor: dict = field(default_factory=dict)
    drift_batch: Callable | None = None
    quadform_batch: Callable | None = None
    clam_batch: Callable | None = None
    lam_batch: Callable | None = None


def wright_fisher(kappa: float, theta, sigma2: float) -> DiffusionSpec:
    """Wright-Fisher mean-reverting diffusion toward target weights theta.

    Drift is kappa (theta - x); both simplex-preservation identities hold
    exactly.  Stationary measure: Dirichlet(2 kappa theta / sigma2).
    """
    th = np.asarray(theta, dtype=float)
    if kappa <= 0 or sigma2 <= 0:
        raise NonPositiveEntry("kappa and sigma2 must be positive")
    th = th / th.sum()
    d = th.size

    def c(x):
        x = np.asarray(x, dtype=float)
        return sigma2 * (np.diag(x) - np.outer(x, x))

    def lam(x):
        x = np.asarray(x, dtype=float)
        return (kappa / sigma2) * th / x

    def drift_batch(X):
        return kappa * (th[None, :] - X)

    def quadform_batch(X, Q):
        # q' c(x) q = sigma2 * (sum_i q_i^2 x_i - (q.x)^2), row-wise
        qx = np.einsum("ij,ij->i", Q, X)
        return sigma2 * (np.einsum("ij,ij->i", Q * Q, X) - qx * qx)

    def clam_batch(X):
        return kappa * (th[None, :] - X)

    def lam_batch(X):
        return (kappa / sigma2) * th[None, :] / X

    return DiffusionSpec(
        dim=d,
        c=c,
        lam=lam,
        descriptor={
            "model": "wright_fisher",
            "d": d,
            "kappa": float(kappa),
            "sigma2": float(sigma2),
            "theta": [float(v) for v in th],
        },
        drift_batch=drift_batch,
        quadform_batch=quadform_batch,
        clam_batch=clam_batch,
        lam_batch=lam_batch,
    )


def zero_dynamics(d: int) -> DiffusionSpec:
    """Degenerate diffusion with c = 0 and lambda = 0 (frozen market)."""

    def c(x):
        return np.zeros((d, d))

    def lam(x):
        return np.zeros(d)

    return DiffusionSpec(
        dim=d,
        c=c,
        lam=lam,
        descriptor={"model": "zero", "d": d},
        drift_batch=lambda X: np.zeros_like(X),
        quadform_batch=lambda X, Q: np.zeros(X.shape[0]),
        clam_batch=lambda X: np.zeros_like(X),
        lam_batch=lambda X: np.zeros_like(X),
    )


def _sqrt_psd(mat):
    """Symmetric PSD square root by eigendecomposition, clamping negatives."""
    d = mat.shape[0]
    if d == 2:
        # on the simplex c = gamma * [[1,-1],[-1,1]] whose exact symmetric
        # root is sqrt(gamma/2) * [[1,-1],[-1,1]]
        gamma = max(mat[0, 0], 0.0)
        r = np.sqrt(gamma / 2.0)
        return np.array([[r, -r], [-r, r]])
    vals, vecs = np.linalg.eigh(mat)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def _euler_step(x, spec, dt, noise):
    c = spec.c(x)
    drift = c @ spec.lam(x)
    y = x + drift * dt + _sqrt_psd(c) @ noise * np.sqrt(dt)
    if not np.all(np.isfinite(y)):
        raise NonFiniteState("diffusion state became non-finite; reduce dt")
    hit = np.any(y < CLIP_FLOOR)
    if hit:
        # reflect boundary overshoots (clipping to the bare floor would create
        # states the true process never visits, and one-step weight ratios of
        # order floor^-1 that poison every growth-rate estimate downstream)
        y = np.maximum(np.abs(y), CLIP_FLOOR)
    return y / y.sum(), hit


@njit(cache=True)
def _wf_euler_loop(x0, kappa, theta, sigma2, dt, noise, out):
    """Euler scheme for Wright-Fisher, d=2 closed-form matrix square root."""
    n = noise.shape[0]
    d = x0.size
    sdt = np.sqrt(dt)
    x = x0.copy()
    out[0] = x
    clips = 0
    for t in range(n):
        gamma = sigma2 * x[0] * (1.0 - x[0])
        r = np.sqrt(max(gamma, 0.0) / 2.0)
        dw0 = r * (noise[t, 0] - noise[t, 1]) * sdt
        y0 = x[0] + kappa * (theta[0] - x[0]) * dt + dw0
        y1 = x[1] + kappa * (theta[1] - x[1]) * dt - dw0
        if not (np.isfinite(y0) and np.isfinite(y1)):
            return -1
        if y0 < CLIP_FLOOR or y1 < CLIP_FLOOR:
            clips += 1
            y0 = max(abs(y0), CLIP_FLOOR)
            y1 = max(abs(y1), CLIP_FLOOR)
        s = y0 + y1
        x[0] = y0 / s
        x[1] = y1 / s
        out[t + 1] = x
    return clips


@njit(cache=True)
def _wf_euler_loop_nd(x0, kappa, theta, sigma2, dt, noise, out):
    """Euler scheme for Wright-Fisher in general dimension (eigh square root)."""
    n = noise.shape[0]
    d = x0.size
    sdt = np.sqrt(dt)
    x = x0.copy()
    out[0] = x
    clips = 0
    for t in range(n):
        c = np.empty((d, d))
        for i in range(d):
            for j in range(d):
                c[i, j] = sigma2 * (x[i] * (1.0 if i == j else 0.0) - x[i] * x[j])
        vals, vecs = np.linalg.eigh(c)
        for k in range(d):
            if vals[k] < 0.0:
                vals[k] = 0.0
        root = vecs @ np.diag(np.sqrt(vals)) @ vecs.T
        y = x + kappa * (theta - x) * dt + root @ noise[t] * sdt
        bad = False
        hit = False
        for i in range(d):
            if not np.isfinite(y[i]):
                bad = True
            if y[i] < CLIP_FLOOR:
                hit = True
                y[i] = max(abs(y[i]), CLIP_FLOOR)
        if bad:
            return -1
        if hit:
            clips += 1
        x = y / y.sum()
        out[t + 1] = x
    return clips


def simulate_diffusion(spec: DiffusionSpec, T: float, dt: float, mu0: SimplexPoint, seed) -> MarketPath:
    """Euler-Maruyama path of a simplex diffusion on the grid {0, dt, 2dt, ...}.

    After every step coordinates are clipped to >= 1e-10 and the row is
    renormalized; the clip frequency is recorded in ``path.meta``.  Identical
    (spec, T, dt, mu0, seed) give a bitwise-identical path.
    """
    if dt <= 0 or T < dt:
        raise NonPositiveEntry("need dt > 0 and T >= dt")
    n = int(round(T / dt))
    d = spec.dim
    if mu0.dim != d:
        raise NonPositiveEntry("mu0 dimension does not match spec")
    rng = stream(seed, 0)
    noise = rng.standard_normal((n, d))
    out = np.empty((n + 1, d))
    desc = spec.descriptor.get("model")
    if desc == "wright_fisher":
        kappa = spec.descriptor["kappa"]
        sigma2 = spec.descriptor["sigma2"]
        theta = np.asarray(spec.descriptor["theta"], dtype=float)
        loop = _wf_euler_loop if d == 2 else _wf_euler_loop_nd
        clips = loop(mu0.coords.copy(), kappa, theta, sigma2, dt, noise, out)
        if clips < 0:
            raise NonFiniteState("diffusion state became non-finite; reduce dt")
    else:
        x = mu0.coords.copy()
        out[0] = x
        clips = 0
        for t in range(n):
            x, hit = _euler_step(x, spec, dt, noise[t])
            clips += hit
            out[t + 1] = x
    times = np.arange(n + 1) * dt
    return MarketPath(
        "sampled-continuous",
        times,
        out,
        meta={
            "model": dict(spec.descriptor),
            "dt": float(dt),
            "seed": int(seed),
            "clip_fraction": clips / n,
        },
    )


def euler_kernel(spec: DiffusionSpec, dt: float) -> MarkovKernel:
    """Discrete-time chain whose one-step law is one Euler step of ``spec``."""
    if dt <= 0:
        raise NonPositiveEntry("dt must be positive")
    d = spec.dim
    is_wf = spec.descriptor.get("model") == "wright_fisher"
    if is_wf:
        kappa = spec.descriptor["kappa"]
        sigma2 = spec.descriptor["sigma2"]
        theta = np.asarray(spec.descriptor["theta"], dtype=float)

    def batch(state, n, rng):
        x = np.asarray(state, dtype=float)
        noise = rng.standard_normal((n, d))
        if is_wf:
            drift = kappa * (theta - x)
            c = sigma2 * (np.diag(x) - np.outer(x, x))
        else:
            c = spec.c(x)
            drift = c @ spec.lam(x)
        root = _sqrt_psd(c)
        y = x[None, :] + drift[None, :] * dt + noise @ root.T * np.sqrt(dt)
        if not np.all(np.isfinite(y)):
            raise NonFiniteState("kernel draw became non-finite; reduce dt")
        low = y < CLIP_FLOOR
        if low.any():
            y[low] = np.abs(y[low])
            y = np.maximum(y, CLIP_FLOOR)
        return y / y.sum(axis=1, keepdims=True)

    def sampler(state, rng):
        return SimplexPoint(batch(state, 1, rng)[0])

    return MarkovKernel(
        dim=d,
        sampler=sampler,
        batch=batch,
        descriptor={"kind": "euler", "dt": float(dt), **spec.descriptor},
    )


def identity_kernel(d: int) -> MarkovKernel:
    """Kernel with y = x almost surely."""

    def batch(state, n, rng):
        x = np.asarray(state, dtype=float)
        return np.repeat(x[None, :], n, axis=0)

    def sampler(state, rng):
        return SimplexPoint(np.asarray(state, dtype=float))

    return MarkovKernel(d, sampler, batch, {"kind": "identity", "d": d})


def two_point_kernel(x_from, y_up, y_down, p_up: float) -> MarkovKernel:
    """Exact two-outcome kernel used as a closed-form optimization oracle.

    From the anchor state the chain moves to ``y_up`` with probability
    ``p_up`` and to ``y_down`` otherwise.  ``batch`` returns the exact
    mixture (round(n*p_up) copies of y_up, the rest y_down) so sample
    averages over a batch reproduce the true expectation when n*p_up is an
    integer; ``sampler`` draws randomly.
    """
    xf = np.asarray(x_from, dtype=float)
    yu = np.asarray(y_up, dtype=float)
    yd = np.asarray(y_down, dtype=float)

    def batch(state, n, rng):
        k = int(round(n * p_up))
        return np.concatenate(
            [np.repeat(yu[None, :], k, axis=0), np.repeat(yd[None, :], n - k, axis=0)]
        )

    def sampler(state, rng):
        return SimplexPoint(yu if rng.random() < p_up else yd)

    return MarkovKernel(
        xf.size, sampler, batch, {"kind": "two_point", "p_up": float(p_up)}
    )


def cycle_kernel(a, b) -> MarkovKernel:
    """Deterministic 2-cycle kernel alternating between states a and b."""
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)

    def nxt(state):
        s = np.asarray(state, dtype=float)
        return bv if np.allclose(s, av, atol=1e-12) else av

    def batch(state, n, rng):
        return np.repeat(nxt(state)[None, :], n, axis=0)

    def sampler(state, rng):
        return SimplexPoint(nxt(state))

    return MarkovKernel(av.size, sampler, batch, {"kind": "two_cycle"})


def simulate_discrete(kernel: MarkovKernel, T: int, mu0: SimplexPoint, seed) -> MarketPath:
    """Simulate T steps of a Markov kernel; path[0] = mu0, times 0..T."""
    if T < 1:
        raise NonPositiveEntry("T must be >= 1")
    d = kernel.dim
    rng = stream(seed, 0)
    out = np.empty((T + 1, d))
    out[0] = mu0.coords
    x = mu0.coords
    for t in range(T):
        y = np.asarray(kernel.sampler(x, rng).coords, dtype=float)
        if y.size != d or np.any(y <= 0.0) or abs(y.sum() - 1.0) > 1e-9:
            raise KernelProducedInvalidPoint(f"kernel left the open simplex at step {t}")
        out[t + 1] = y
        x = y
    return MarketPath(
        "discrete",
        np.arange(T + 1, dtype=float),
        out,
        meta={"model": dict(kernel.descriptor), "seed": int(seed)},
    )


@dataclass(frozen=True)
class InvariantSample:
    """Thinned trajectory points approximating the stationary measure."""

    samples: np.ndarray  # (n, d)
    burn_in: int
    thinning: int
    seed: int

    @property
    def n(self):
        return self.samples.shape[0]


def invariant_sample(model, n: int, burn_in: int, thinning: int, seed, mu0=None, dt=1e-3) -> InvariantSample:
    """Collect n states from one long trajectory after burn-in, one per
    thinning interval.

    ``model`` is a MarkovKernel, or a DiffusionSpec that is wrapped in its
    Euler kernel at mesh ``dt``.
    """
    if n < 1:
        raise NonPositiveEntry("n must be >= 1")
    if isinstance(model, DiffusionSpec):
        kernel = euler_kernel(model, dt)
    else:
        kernel = model
    d = kernel.dim
    if mu0 is None:
        mu0 = SimplexPoint(np.full(d, 1.0 / d))
    total = burn_in + n * thinning
    # fast path: one long simulated trajectory, thinned
    wf = kernel.descriptor.get("model") == "wright_fisher" and kernel.descriptor.get("kind") == "euler"
    if wf:
        spec = wright_fisher(
            kernel.descriptor["kappa"],
            kernel.descriptor["theta"],
            kernel.descriptor["sigma2"],
        )
        step = kernel.descriptor["dt"]
        path = simulate_diffusion(spec, total * step, step, mu0, seed)
        states = path.weights
    else:
        path = simulate_discrete(kernel, total, mu0, seed)
        states = path.weights
    idx = burn_in + thinning * np.arange(1, n + 1)
    idx = np.minimum(idx, states.shape[0] - 1)
    return InvariantSample(states[idx], burn_in, thinning, int(seed))


def audit_structure(spec: DiffusionSpec, n_grid: int = 100, seed=7, tol=1e-10):
    """Check c(x) 1 = 0 and 1' c(x) lambda(x) = 0 on random interior states.

    Returns the worst absolute violations (max |c(x) 1|, max |1' c lambda|).
    """
    rng = stream(seed, 0)
    worst_c1 = 0.0
    worst_drift = 0.0
    for _ in range(n_grid):
        x = rng.dirichlet(np.ones(spec.dim)) * 0.98 + 0.01 / spec.dim
        x = x / x.sum()
        c = spec.c(x)
        lamv = spec.lam(x)
        worst_c1 = max(worst_c1, float(np.abs(c @ np.ones(spec.dim)).max()))
        worst_drift = max(worst_drift, float(abs(np.ones(spec.dim) @ (c @ lamv))))
    return {"max_c_ones": worst_c1, "max_ones_c_lambda": worst_drift, "pass": worst_c1 <= tol and worst_drift <= tol}
