"""Concave portfolio optimizers.

Three retrospective programs (best constant vector, best Lipschitz grid map,
best generated map), the per-state long-only log-optimal program solved by
exponentiated gradient on the simplex, its tabulation into a portfolio map,
and the closed-form numeraire weights of a simplex diffusion.

All discrete objectives are concave in their decision variables (returns
enter linearly inside the log), so first-order ascent with projection finds
the global optimum; solver traces record iterations and final stationarity.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CertificationFailed,
    DegenerateSamples,
    NonFiniteLambda,
    NonPositiveEntry,
    RejectionBudgetExceeded,
)
from .markets import DiffusionSpec, MarkovKernel
from .portfolios import (
    FAMILIES,
    GeneratorFunction,
    LipschitzGridMap,
    PortfolioMapSpec,
    _pair_cap_sweeps,
    _SimplexInterp,
    admissible_box,
    certify_generator,
    certify_lipschitz,
    constant_map,
    fg_map,
    grid_adjacency,
    lipschitz_map,
    simplex_grid,
    table_map,
)
from .rng import parallel_map, stream
from .simplex import MarketPath, PortfolioWeights, SimplexPoint, _frozen
from .wealth import wealth_discrete, wealth_master_equation

GRAD_TOL = 1e-10
MAX_ITER = 10_000


# ---------------------------------------------------------------------------
# simplex projections and stationarity
# ---------------------------------------------------------------------------

def project_simplex(v):
    """Euclidean projection onto the probability simplex (see the row-wise
    variant for the clipping rationale)."""
    v = np.clip(np.asarray(v, dtype=float), -1e6, 1e6)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u + (1.0 - css) / k > 0)[0][-1]
    tau = (1.0 - css[rho]) / (rho + 1.0)
    out = np.maximum(v + tau, 0.0)
    s = out.sum()
    return out / s if s > 0 else np.full(v.size, 1.0 / v.size)


def project_floor_simplex(v, floor):
    """Projection onto {x : x_i >= floor, sum x = 1}."""
    d = v.size
    mass = 1.0 - d * floor
    if mass <= 1e-15:
        return np.full(d, 1.0 / d)
    return floor + mass * project_simplex((v - floor) / mass)


def project_simplex_rows(V):
    """Row-wise euclidean projection onto the probability simplex.

    Inputs are clipped to a bounded box first: at magnitudes ~1e16 the
    shift-and-threshold arithmetic cancels catastrophically and the result
    stops summing to one.  Clipping does not move the projection for any
    point whose projection is in the simplex.
    """
    V = np.clip(np.asarray(V, dtype=float), -1e6, 1e6)
    K, d = V.shape
    u = -np.sort(-V, axis=1)
    css = np.cumsum(u, axis=1)
    k = np.arange(1, d + 1)
    cond = u + (1.0 - css) / k > 0
    rho = d - 1 - np.argmax(cond[:, ::-1], axis=1)
    tau = (1.0 - css[np.arange(K), rho]) / (rho + 1.0)
    out = np.maximum(V + tau[:, None], 0.0)
    s = out.sum(axis=1, keepdims=True)
    return np.where(s > 0, out / s, np.full_like(out, 1.0 / d))


def project_floor_simplex_rows(V, floor):
    """Row-wise projection onto {x : x_i >= floor, sum x = 1}."""
    d = V.shape[1]
    mass = 1.0 - d * floor
    if mass <= 1e-15:
        return np.full_like(V, 1.0 / d)
    return floor + mass * project_simplex_rows((V - floor) / mass)


def gradient_mapping_norm(p, g, floor=0.0):
    """Stationarity measure: sup-norm of p - proj(p + g)."""
    proj = project_floor_simplex(p + g, floor) if floor > 0 else project_simplex(p + g)
    return float(np.abs(p - proj).max())


# ---------------------------------------------------------------------------
# projected gradient over the simplex (constant maps, per-state programs)
# ---------------------------------------------------------------------------

def _ascend_simplex(R, start, tol=GRAD_TOL, max_iter=MAX_ITER, multiplicative=False):
    """Maximize mean_t log(R @ p) over the simplex from ``start``.

    With ``multiplicative=True`` uses exponentiated-gradient steps (natural
    positivity preservation on the simplex); otherwise euclidean projected
    gradient.  Both use a doubling/halving line search on the objective and
    stop at gradient-mapping sup-norm <= tol.
    """
    p = np.asarray(start, dtype=float).copy()
    step = 1.0
    it = 0
    f0 = float(np.mean(np.log(R @ p)))
    while it < max_iter:
        it += 1
        v = R @ p
        g = (R / v[:, None]).mean(axis=0)
        m = gradient_mapping_norm(p, g)
        if m <= tol:
            break
        accepted = False
        for _ in range(80):
            if multiplicative:
                z = step * (g - g.max())
                cand = p * np.exp(z)
                s = cand.sum()
                if s <= 0 or not np.all(np.isfinite(cand)):
                    step *= 0.5
                    continue
                cand = cand / s
            else:
                cand = project_simplex(p + step * g)
            fv = R @ cand
            if np.any(fv <= 0):
                step *= 0.5
                continue
            f1 = float(np.mean(np.log(fv)))
            if f1 > f0:
                p = cand
                f0 = f1
                step = min(step * 1.5, 1e6)
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
    v = R @ p
    g = (R / v[:, None]).mean(axis=0)
    return p, f0, {"iterations": it, "grad_mapping": gradient_mapping_norm(p, g)}


def kkt_certificate(R, p, tol=1e-8):
    """First-order optimality record at p for mean_t log(R @ p).

    On the support the gradient must be constant (its spread is the
    tangential stationarity residual); off the support it must not exceed
    that common value.
    """
    v = R @ p
    g = (R / v[:, None]).mean(axis=0)
    support = p > 1e-10
    lam = g[support].mean()
    spread = float(np.abs(g[support] - lam).max()) if support.any() else 0.0
    off = float((g[~support] - lam).max()) if (~support).any() else -np.inf
    return {
        "support_spread": spread,
        "off_support_excess": off,
        "interior": bool(support.all()),
        "pass": spread <= tol and (off <= tol),
    }


# ---------------------------------------------------------------------------
# retrospective programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RetroResult:
    """Best map found with hindsight: the map, its log wealth, solver trace."""

    map: PortfolioMapSpec
    log_v: float
    trace: dict = field(default_factory=dict)


def best_constant(path: MarketPath, extra_starts=()) -> RetroResult:
    """Best constant rebalanced vector on a realized path.

    Maximizes the concave function b -> sum_t log <b, mu_{t+1}/mu_t> over the
    closed simplex by projected gradient ascent from the uniform start
    (global optimum by concavity).  Degenerate flat objectives return the
    uniform vector.
    """
    if path.times.size < 2:
        raise NonPositiveEntry("need at least one step")
    R = path.ratios()
    d = path.d
    starts = [np.full(d, 1.0 / d)]
    for s in extra_starts:
        w = s.coords if isinstance(s, PortfolioWeights) else np.asarray(s, dtype=float)
        starts.append(np.maximum(w, 0) / np.maximum(w, 0).sum())
    best = None
    for s in starts:
        p, _, tr = _ascend_simplex(R, s)
        lv = wealth_discrete(path, constant_map(p)).final
        if best is None or lv > best[1]:
            best = (p, lv, tr)
    p, lv, tr = best
    return RetroResult(constant_map(p), lv, {"starts": len(starts), **tr})


def _bary_structure(states, X):
    """Sparse barycentric interpolation matrix (rows: path states, cols: nodes)."""
    from scipy.sparse import csr_matrix

    X = np.atleast_2d(X)
    n, d = X.shape
    K = states.shape[0]
    if d == 2:
        order = np.argsort(states[:, 0])
        gx = states[order, 0]
        x = np.clip(X[:, 0], gx[0], gx[-1])
        idx = np.clip(np.searchsorted(gx, x, side="right") - 1, 0, gx.size - 2)
        frac = (x - gx[idx]) / (gx[idx + 1] - gx[idx])
        rows = np.repeat(np.arange(n), 2)
        cols = np.stack([order[idx], order[idx + 1]], axis=1).ravel()
        vals = np.stack([1.0 - frac, frac], axis=1).ravel()
        return csr_matrix((vals, (rows, cols)), shape=(n, K))
    from scipy.spatial import Delaunay

    tri = Delaunay(states[:, :-1])
    pts = X[:, :-1]
    s = tri.find_simplex(pts)
    rows, cols, vals = [], [], []
    for i, si in enumerate(s):
        if si < 0:
            j = int(np.argmin(np.abs(states - X[i]).sum(axis=1)))
            rows.append(i)
            cols.append(j)
            vals.append(1.0)
            continue
        b = tri.transform[si, : d - 1] @ (pts[i] - tri.transform[si, d - 1])
        bary = np.append(b, 1.0 - b.sum())
        for j, w in zip(tri.simplices[si], bary):
            rows.append(i)
            cols.append(int(j))
            vals.append(float(w))
    return csr_matrix((vals, (rows, cols)), shape=(n, K))


def best_lipschitz(path: MarketPath, M: float, resolution: float,
                   extra_starts=(), margin=None, seed=0, n_starts=5,
                   max_iter=400) -> RetroResult:
    """Best grid-interpolated Lipschitz map on a realized path.

    Node values are optimized by projected gradient ascent on the concave
    objective (linear in node values inside each log), alternating the
    feasibility projections: per-node margin simplex, then cyclic
    adjacent-pair cap sweeps.  Multi-start hedges projection non-idealities;
    the returned map is re-certified.
    """
    if M < 0:
        raise NonPositiveEntry("M must be >= 0")
    d = path.d
    n_grid = int(round(1.0 / resolution))
    states = simplex_grid(d, n_grid)
    K = states.shape[0]
    pairs = grid_adjacency(n_grid, d)
    eps = margin if margin is not None else (min(1.0 / M, 1.0) if M > 0 else 1.0)
    floor = eps / d
    W = _bary_structure(states, path.weights[:-1])
    R = path.ratios()
    T = R.shape[0]

    def project(V):
        out = project_floor_simplex_rows(V, floor)
        if pairs:
            out = _pair_cap_sweeps(states, out, max(M, 0.0) * (1 - 1e-12), pairs, sweeps=50)
        return out

    def objective(V):
        f = np.einsum("ij,ij->i", W @ V, R)
        if np.any(f <= 0):
            return -np.inf, None
        return float(np.mean(np.log(f))), f

    def ascend(V0):
        V = project(V0)
        f0, f = objective(V)
        step = 1.0
        it = 0
        while it < max_iter:
            it += 1
            grad = (W.T @ (R / f[:, None])) / T
            accepted = False
            for _ in range(60):
                cand = project(V + step * grad)
                f1, fc = objective(cand)
                if f1 > f0 + 1e-15:
                    V, f0, f = cand, f1, fc
                    step = min(step * 1.5, 1e6)
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
        return V, f0, it

    if M * 2.0 * resolution < 1e-8:
        # degenerate cap: the class collapses to a single shared node value;
        # solve the pooled concave program over the floored simplex directly
        p = np.full(d, 1.0 / d)
        stepsize = 1.0
        f0 = float(np.mean(np.log(R @ p)))
        for it in range(MAX_ITER):
            v = R @ p
            g = (R / v[:, None]).mean(axis=0)
            if gradient_mapping_norm(p, g, floor=floor * d) <= GRAD_TOL:
                break
            moved = False
            for _ in range(80):
                cand = project_floor_simplex(p + stepsize * g, floor)
                f1 = float(np.mean(np.log(np.maximum(R @ cand, 1e-300))))
                if f1 > f0:
                    p, f0 = cand, f1
                    stepsize = min(stepsize * 1.5, 1e6)
                    moved = True
                    break
                stepsize *= 0.5
            if not moved:
                break
        V = np.tile(p, (K, 1))
        pmap = lipschitz_map(LipschitzGridMap(resolution, states, V, max(M, 1e-12),
                                              margin=eps), recertify=False)
        lv = wealth_discrete(path, pmap).final
        return RetroResult(pmap, lv, {"starts": 1, "iterations": it,
                                      "certified": 0.0, "margin": eps})

    rng = stream(seed, 3)
    starts = [np.full((K, d), 1.0 / d)]
    for _ in range(max(0, n_starts - 1)):
        u = rng.dirichlet(np.ones(d), size=K)
        starts.append(floor + (1.0 - d * floor) * u)
    for s in extra_starts:
        starts.append(project(np.atleast_2d(s.evaluate_path(states))))

    candidates = []
    for V0 in starts:
        V, f0, it = ascend(V0)
        candidates.append((V, it))
    best = None
    for V, it in candidates:
        # finishing pass: contract any residual pair-cap violation, re-floor
        if pairs:
            V = _pair_cap_sweeps(states, V, max(M, 0.0) * (1 - 1e-12), pairs,
                                 sweeps=5000)
        cert = certify_lipschitz(LipschitzGridMap(resolution, states, V, max(M, 1e-12), margin=eps))
        if M > 0 and cert > M * (1.0 + 1e-9) + 1e-12:
            raise CertificationFailed(f"solution certifies at {cert} > M={M}")
        pmap = lipschitz_map(LipschitzGridMap(resolution, states, V, max(M, cert), margin=eps),
                             recertify=False)
        lv = wealth_discrete(path, pmap).final
        if best is None or lv > best[1]:
            best = (pmap, lv, it, cert)
    pmap, lv, it, cert = best
    return RetroResult(pmap, lv, {"starts": len(starts), "iterations": it,
                                  "certified": cert, "margin": eps})


def best_generator(path: MarketPath, M: float = 10.0, alpha: float = 0.0,
                   families=FAMILIES, seed=0, n_starts=16, extra_starts=()) -> RetroResult:
    """Best functionally generated map on a path with quadratic variation.

    Maximizes the master-equation log wealth over family parameters inside
    each family's admissible box (quasi-Newton with box projection,
    multi-start); candidates failing class certification are discarded.
    """
    from scipy.optimize import minimize

    d = path.d
    rng = stream(seed, 4)
    evals = {"count": 0}

    def log_v(family, params):
        evals["count"] += 1
        G = GeneratorFunction(family, params, d, M, alpha)
        try:
            return wealth_master_equation(path, G).final
        except FloatingPointError:
            return -np.inf

    candidates = []
    per_family = max(1, n_starts // len(list(families)))
    for fam in families:
        box = admissible_box(fam, d, M)
        lo = np.array([b[0] for b in box])
        hi = np.array([b[1] for b in box])
        starts = [lo + (hi - lo) * rng.random(lo.size) for _ in range(per_family)]
        starts.append(0.5 * (lo + hi))
        for p0 in starts:
            res = minimize(
                lambda q: -log_v(fam, q),
                p0,
                method="L-BFGS-B",
                bounds=box,
                options={"maxiter": 200, "ftol": 1e-14, "gtol": 1e-12},
            )
            candidates.append((fam, np.clip(res.x, lo, hi)))
            candidates.append((fam, p0))
    for G0 in extra_starts:
        candidates.append((G0.family, np.asarray(G0.params, dtype=float)))

    best = None
    n_certified = 0
    for fam, params in candidates:
        G = GeneratorFunction(fam, params, d, M, alpha)
        rec = certify_generator(G, 16)
        if not rec["pass"] or rec["M_value"] > M + 1e-9:
            continue
        n_certified += 1
        lv = wealth_master_equation(path, G).final
        if best is None or lv > best[1]:
            best = (G, lv)
    if best is None:
        raise RejectionBudgetExceeded("no candidate generator passed certification")
    G, lv = best
    return RetroResult(fg_map(G), lv, {"evaluations": evals["count"],
                                       "certified_candidates": n_certified})


# ---------------------------------------------------------------------------
# long-only log-optimal program
# ---------------------------------------------------------------------------

def _logopt_from_ratios(x, ratios, eps):
    """Solve max_p mean_s log <p, ratios_s> on the simplex, then blend.

    Returns ((1-eps) p_hat + eps uniform, objective at the blended point).
    A flat objective (all ratios equal to one) ties to the market weights.
    """
    d = x.size
    if np.abs(ratios - 1.0).max() <= 1e-14:
        p = (1.0 - eps) * x + eps / d
        return PortfolioWeights(p / p.sum(), long_only=True, margin=eps), 0.0
    p0 = np.full(d, 1.0 / d)
    p, _, trace = _ascend_simplex(ratios, p0, multiplicative=True)
    p = (1.0 - eps) * p + eps / d
    p = np.maximum(p, eps / d)
    p = p / p.sum()
    L = float(np.mean(np.log(ratios @ p)))
    return PortfolioWeights(p, long_only=True, margin=eps), L


def log_optimal_state(x, kernel: MarkovKernel, n: int, eps: float, seed):
    """Long-only log-optimal weights and value at one state.

    Draws n successors from the kernel, maximizes the sample average of
    log <p, y/x> by exponentiated gradient from the uniform start, then
    blends toward uniform with weight eps so every coordinate is >= eps/d
    and one-step factors are bounded below by eps/d.
    """
    if n < 1:
        raise NonPositiveEntry("n must be >= 1")
    if not 0.0 <= eps < 1.0:
        raise NonPositiveEntry("eps must be in [0, 1)")
    xv = x.coords if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    Y = kernel.batch(xv, n, stream(seed, 0))
    if np.any(Y <= 0.0):
        raise DegenerateSamples("kernel produced a nonpositive coordinate")
    return _logopt_from_ratios(xv, Y / xv[None, :], eps)


@dataclass(frozen=True)
class LogOptimalTable:
    """Per-state log-optimal weights and values on a simplex grid."""

    states: np.ndarray
    p_hat: np.ndarray
    L: np.ndarray
    n: int
    eps: float
    solver: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "states", _frozen(self.states))
        object.__setattr__(self, "p_hat", _frozen(self.p_hat))
        object.__setattr__(self, "L", _frozen(self.L))

    def as_map(self) -> PortfolioMapSpec:
        return table_map(self.states, self.p_hat, margin=self.eps, label="logopt")

    def interp_L(self, X):
        """Barycentric interpolation of the per-state values L(x)."""
        interp = _SimplexInterp(self.states, np.asarray(self.L)[:, None])
        return interp(X)[:, 0]


def log_optimal_map(kernel: MarkovKernel, resolution: float, n: int, eps: float,
                    seed) -> LogOptimalTable:
    """Tabulate the per-state program on interior grid states.

    States are solved independently (parallelizable, one RNG substream per
    state) and merged by grid index; the tabulated map interpolates
    barycentrically between states and clamps beyond the interior hull.
    """
    if resolution <= 0:
        raise NonPositiveEntry("resolution must be positive")
    d = kernel.dim
    n_grid = int(round(1.0 / resolution))
    nodes = simplex_grid(d, n_grid)
    interior = nodes[np.all(nodes > 1e-12, axis=1)]

    def state_seed(i):
        # distinct deterministic substream per grid state
        return (int(seed) * 1_000_003 + i) % (2**63)

    def solve(i):
        w, L = log_optimal_state(interior[i], kernel, n, eps, state_seed(i))
        return w.coords, L

    results = parallel_map(solve, range(interior.shape[0]))
    p_hat = np.stack([r[0] for r in results])
    L = np.array([r[1] for r in results])
    return LogOptimalTable(interior, p_hat, L, int(n), float(eps),
                           solver={"seed": int(seed), "resolution": resolution})


def bootstrap_p_hat_se(x, kernel: MarkovKernel, n: int, eps: float, seed,
                       n_boot: int = 30):
    """Bootstrap standard error of the per-state solution over kernel samples."""
    xv = x.coords if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    Y = kernel.batch(xv, n, stream(seed, 0))
    R = Y / xv[None, :]
    rng = stream(seed, 1)
    sols = []
    for _ in range(n_boot):
        idx = rng.integers(0, n, size=n)
        w, _ = _logopt_from_ratios(xv, R[idx], eps)
        sols.append(w.coords)
    return np.std(np.stack(sols), axis=0, ddof=1)


# ---------------------------------------------------------------------------
# numeraire weights of a diffusion
# ---------------------------------------------------------------------------

def numeraire_weights(spec: DiffusionSpec, x) -> PortfolioWeights:
    """Growth-optimal weights pi_i = x_i (lambda_i + 1 - sum_j x_j lambda_j).

    Values lie on the sum-one hyperplane; the long-only flag is set when all
    coordinates happen to be nonnegative.  With lambda = grad G / G for a
    differentiable G these coincide with the weights generated by G.
    """
    xv = x.coords if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    lam = np.asarray(spec.lam(xv), dtype=float)
    if not np.all(np.isfinite(lam)):
        raise NonFiniteLambda(f"lambda is not finite at {xv}")
    w = xv * (lam + 1.0 - xv @ lam)
    w = w / w.sum()
    return PortfolioWeights(w, long_only=bool(np.all(w >= 0.0)))


def numeraire_map(spec: DiffusionSpec) -> PortfolioMapSpec:
    """The numeraire weights as a (non-serializable) pointwise portfolio map."""
    from .portfolios import pointwise_map

    def fn(X):
        X = np.atleast_2d(X)
        if spec.lam_batch is not None:
            lam = spec.lam_batch(X)
        else:
            lam = np.stack([np.asarray(spec.lam(x), dtype=float) for x in X])
        if not np.all(np.isfinite(lam)):
            raise NonFiniteLambda("lambda is not finite along the path")
        inner = np.einsum("ij,ij->i", X, lam)
        w = X * (lam + 1.0 - inner[:, None])
        return w / w.sum(axis=1, keepdims=True)

    return pointwise_map(fn, label="numeraire")
