"""Portfolio-map families: constant rebalanced vectors, Lipschitz grid maps,
functionally generated maps from concave generators, tabulated maps, and
finite mixture measures over these classes.

A portfolio map sends the current market weights x to long-only portfolio
weights.  Functionally generated maps follow the classical construction

    pi_i(x) = x_i * (D_i G(x)/G(x) + 1 - sum_j x_j D_j G(x)/G(x))

for a concave generator G; concavity plus a positive floor on G keep the
weights long-only, and the weights sum to one by algebraic cancellation.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CertificationFailed,
    DimensionMismatch,
    NegativeWeight,
    NonPositiveEntry,
    RejectionBudgetExceeded,
)
from .rng import stream
from .simplex import PortfolioWeights, SimplexPoint, _frozen

FAMILIES = ("power_product", "quadratic", "entropy", "affine_mixture")


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorFunction:
    """Concave C2 generator with closed-form value/gradient/Hessian.

    Families (params):
      power_product  (a_1..a_d >= 0, optional shift): G = prod_i x_i**a_i + shift
      quadratic      (c0, c1 >= 0):          G = c0 - 0.5*c1*|x|^2
      entropy        (c0, c1 >= 0):          G = c0 - c1 * sum_i x_i log x_i
      affine_mixture (c0, c1 >= 0):          G = c0 + c1 * sum_{i<j} x_i x_j

    ``M`` bounds both the floor (G >= 1/M) and the sup norms of value,
    gradient and Hessian entries on the audit grid; ``alpha`` is the Holder
    exponent carried for class bookkeeping only.
    """

    family: str
    params: np.ndarray
    dim: int
    M: float = 10.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise NonPositiveEntry(f"unknown generator family {self.family!r}")
        object.__setattr__(self, "params", _frozen(self.params))

    def _pp_split(self):
        # exponents, plus an optional trailing additive shift
        p = self.params
        if p.size == self.dim + 1:
            return p[: self.dim], float(p[-1])
        return p, 0.0

    # all evaluators take (n, d) arrays and return batch results
    def value(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        p = self.params
        if self.family == "power_product":
            a, shift = self._pp_split()
            return np.exp(np.log(X) @ a) + shift
        if self.family == "quadratic":
            return p[0] - 0.5 * p[1] * np.einsum("ij,ij->i", X, X)
        if self.family == "entropy":
            return p[0] - p[1] * np.einsum("ij,ij->i", X, np.log(X))
        s = X.sum(axis=1)
        return p[0] + 0.5 * p[1] * (s * s - np.einsum("ij,ij->i", X, X))

    def grad(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        p = self.params
        if self.family == "power_product":
            a, shift = self._pp_split()
            core = np.exp(np.log(X) @ a)
            return core[:, None] * a[None, :] / X
        if self.family == "quadratic":
            return -p[1] * X
        if self.family == "entropy":
            return -p[1] * (np.log(X) + 1.0)
        return p[1] * (X.sum(axis=1)[:, None] - X)

    def hess(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        n, d = X.shape
        p = self.params
        if self.family == "power_product":
            a, shift = self._pp_split()
            g = np.exp(np.log(X) @ a)
            ax = a[None, :] / X  # a_i / x_i
            H = g[:, None, None] * (ax[:, :, None] * ax[:, None, :])
            idx = np.arange(d)
            H[:, idx, idx] -= g[:, None] * a[None, :] / (X * X)
            return H
        if self.family == "quadratic":
            return np.broadcast_to(-p[1] * np.eye(d), (n, d, d)).copy()
        if self.family == "entropy":
            H = np.zeros((n, d, d))
            idx = np.arange(d)
            H[:, idx, idx] = -p[1] / X
            return H
        return np.broadcast_to(p[1] * (np.ones((d, d)) - np.eye(d)), (n, d, d)).copy()


def audit_grid(d: int, grid_n: int):
    """Interior barycentric grid nodes (all integer parts >= 1)."""
    nodes = [k for k in _compositions(grid_n, d) if min(k) >= 1]
    return np.array(nodes, dtype=float) / grid_n


def tangent_basis(d: int):
    """Orthonormal basis of the simplex tangent space {v : sum v = 0}."""
    A = np.eye(d)[:, : d - 1] - np.ones((d, d - 1)) / d
    Q, _ = np.linalg.qr(A)
    return Q


def _compositions(n, d):
    if d == 1:
        yield (n,)
        return
    for k in range(n + 1):
        for rest in _compositions(n - k, d - 1):
            yield (k,) + rest


def certify_generator(G: GeneratorFunction, grid_n: int = 16) -> dict:
    """Audit class membership of a generator on an interior grid.

    Reports the sup norm over the grid of value/gradient/Hessian entries
    (``M_value``), the largest tangent-space Hessian eigenvalue
    (``concavity_margin``, along unit directions orthogonal to the all-ones
    vector) and the minimum value (``floor``).  Passes iff the margin is
    <= 1e-8 and the floor >= 1/M.
    """
    if grid_n < 10:
        raise NonPositiveEntry("grid_n must be >= 10")
    X = audit_grid(G.dim, grid_n)
    vals = G.value(X)
    grads = G.grad(X)
    hesses = G.hess(X)
    d = G.dim
    B = tangent_basis(d)
    BH = np.einsum("ij,njk,kl->nil", B.T, hesses, B)
    eig = np.linalg.eigvalsh(BH)
    concavity_margin = float(eig[:, -1].max())
    M_value = float(
        max(np.abs(vals).max(), np.abs(grads).max(), np.abs(hesses).max())
    )
    floor = float(vals.min())
    return {
        "M_value": M_value,
        "concavity_margin": concavity_margin,
        "floor": floor,
        "pass": concavity_margin <= 1e-8 and floor >= 1.0 / G.M,
    }


def generator(family, params, dim=None, M=10.0, alpha=0.0, grid_n=16, validate=True) -> GeneratorFunction:
    """Build a generator, rejecting out-of-class candidates at construction."""
    params = np.asarray(params, dtype=float)
    if dim is None:
        dim = params.size if family == "power_product" else 2
    G = GeneratorFunction(family, params, int(dim), float(M), float(alpha))
    if validate:
        rec = certify_generator(G, grid_n)
        if not rec["pass"] or rec["M_value"] > M + 1e-9:
            raise CertificationFailed(
                f"{family}{list(params)} outside class (floor {rec['floor']:.4g}, "
                f"concavity {rec['concavity_margin']:.3g}, M_value {rec['M_value']:.4g})"
            )
    return G


def fg_weights_batch(G: GeneratorFunction, X):
    """Functionally generated weights at every row of X, shape (n, d)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    gv = G.value(X)
    dg = G.grad(X) / gv[:, None]
    inner = np.einsum("ij,ij->i", X, dg)
    w = X * (dg + 1.0 - inner[:, None])
    bad = w.min(axis=1)
    if np.any(bad < -1e-10):
        raise NegativeWeight(
            f"generated weights dip to {bad.min():.3g}; generator is not in class"
        )
    w = np.maximum(w, 0.0)
    return w / w.sum(axis=1, keepdims=True)


def fg_weights(G: GeneratorFunction, x) -> PortfolioWeights:
    """Weights generated by G at a single state (long-only, sum one)."""
    x = x.coords if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    return PortfolioWeights(fg_weights_batch(G, x[None, :])[0], long_only=True)


# ---------------------------------------------------------------------------
# grids and interpolation
# ---------------------------------------------------------------------------

def simplex_grid(d: int, n: int):
    """All barycentric nodes k/n of the closed simplex, shape (K, d)."""
    return np.array(list(_compositions(n, d)), dtype=float)[::-1] / n


def grid_adjacency(n: int, d: int):
    """Index pairs of grid nodes that differ by one unit transfer e_i - e_j."""
    nodes = [tuple(k) for k in _compositions(n, d)][::-1]
    index = {k: i for i, k in enumerate(nodes)}
    pairs = []
    for k, i in index.items():
        for a in range(d):
            for b in range(d):
                if a == b or k[a] == 0:
                    continue
                k2 = list(k)
                k2[a] -= 1
                k2[b] += 1
                j = index[tuple(k2)]
                if i < j:
                    pairs.append((i, j))
    return pairs


class _SimplexInterp:
    """Piecewise-linear (barycentric) interpolation of vector node values."""

    def __init__(self, states, values):
        self.states = np.asarray(states, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.d = self.states.shape[1]
        if self.d == 2:
            order = np.argsort(self.states[:, 0])
            self._x = self.states[order, 0]
            self._v = self.values[order]
        else:
            from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator

            pts = self.states[:, :-1]
            self._lin = LinearNDInterpolator(pts, self.values)
            self._near = NearestNDInterpolator(pts, self.values)

    def __call__(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.d == 2:
            x = np.clip(X[:, 0], self._x[0], self._x[-1])
            out = np.empty((X.shape[0], self.values.shape[1]))
            for j in range(self.values.shape[1]):
                out[:, j] = np.interp(x, self._x, self._v[:, j])
            return out
        out = self._lin(X[:, :-1])
        hole = np.any(np.isnan(out), axis=1)
        if np.any(hole):
            out[hole] = self._near(X[hole, :-1])
        return out


@dataclass(frozen=True)
class LipschitzGridMap:
    """Grid-interpolated portfolio map with a certified l1->l1 Lipschitz bound.

    Node values lie in the margin simplex (coordinates >= margin/d, where the
    margin defaults to min(1/M, 1)); the certified constant is the maximum
    value-to-state l1 ratio over adjacent node pairs, which bounds the
    interpolant's Lipschitz constant cell by cell.
    """

    resolution: float
    node_states: np.ndarray
    node_values: np.ndarray
    M: float
    margin: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "node_states", _frozen(self.node_states))
        object.__setattr__(self, "node_values", _frozen(self.node_values))
        m = self.margin if self.margin is not None else min(1.0 / self.M, 1.0) if self.M > 0 else 1.0
        object.__setattr__(self, "margin", float(m))

    @property
    def dim(self):
        return self.node_states.shape[1]


def certify_lipschitz(gmap: LipschitzGridMap) -> float:
    """Max l1(value difference)/l1(state difference) over adjacent node pairs."""
    states = gmap.node_states
    values = gmap.node_values
    d = states.shape[1]
    n = int(round(1.0 / gmap.resolution))
    pairs = grid_adjacency(n, d)
    if not pairs:
        return 0.0
    ii = np.array([p[0] for p in pairs])
    jj = np.array([p[1] for p in pairs])
    num = np.abs(values[ii] - values[jj]).sum(axis=1)
    den = np.abs(states[ii] - states[jj]).sum(axis=1)
    return float((num / den).max())


def _contract_pairs(states, v, cap, idx):
    """Contract the disjoint pairs (i, i+1), i in idx, onto the cap."""
    a, b = idx, idx + 1
    diff = v[a] - v[b]
    norm = np.abs(diff).sum(axis=1)
    den = np.abs(states[a] - states[b]).sum(axis=1)
    viol = norm > cap * den
    if not viol.any():
        return False
    t = np.ones_like(norm)
    t[viol] = (cap * den[viol]) / norm[viol]
    mid = 0.5 * (v[a] + v[b])
    half = 0.5 * t[:, None] * diff
    v[a] = np.where(viol[:, None], mid + half, v[a])
    v[b] = np.where(viol[:, None], mid - half, v[b])
    return True


def _pair_cap_sweeps(states, values, cap, pairs, sweeps):
    """Contract adjacent node-value pairs toward their midpoint until every
    pair ratio is within ``cap`` (cyclic sweeps; preserves sums and floors)."""
    v = values.copy()
    chain = all(j == i + 1 for i, j in pairs) if pairs else False
    if chain:
        # disjoint red-black halves of the 1-d adjacency chain, vectorized
        even = np.arange(0, len(pairs), 2)
        odd = np.arange(1, len(pairs), 2)
        for _ in range(sweeps):
            dirty = _contract_pairs(states, v, cap, even)
            dirty = _contract_pairs(states, v, cap, odd) or dirty
            if not dirty:
                break
        return v
    for _ in range(sweeps):
        dirty = False
        for i, j in pairs:
            den = np.abs(states[i] - states[j]).sum()
            diff = v[i] - v[j]
            norm = np.abs(diff).sum()
            if norm > cap * den:
                dirty = True
                t = (cap * den) / norm
                mid = 0.5 * (v[i] + v[j])
                v[i] = mid + 0.5 * t * diff
                v[j] = mid - 0.5 * t * diff
        if not dirty:
            break
    return v


# ---------------------------------------------------------------------------
# portfolio map specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PortfolioMapSpec:
    """A portfolio map in one of the supported families.

    variant: "constant" (fixed weights), "lipschitz" (grid interpolant),
    "fg" (functionally generated), "table" (tabulated states/values with an
    interiority margin), or "pointwise" (arbitrary callable, not
    serializable).
    """

    variant: str
    weights: np.ndarray | None = None
    grid: LipschitzGridMap | None = None
    G: GeneratorFunction | None = None
    table_states: np.ndarray | None = None
    table_values: np.ndarray | None = None
    table_margin: float = 0.0
    fn: object = None
    label: str = ""
    _interp: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.variant == "lipschitz":
            object.__setattr__(
                self, "_interp", _SimplexInterp(self.grid.node_states, self.grid.node_values)
            )
        elif self.variant == "table":
            object.__setattr__(
                self, "_interp", _SimplexInterp(self.table_states, self.table_values)
            )

    @property
    def dim(self):
        if self.variant == "constant":
            return self.weights.size
        if self.variant == "lipschitz":
            return self.grid.dim
        if self.variant == "fg":
            return self.G.dim
        if self.variant == "table":
            return self.table_states.shape[1]
        return None  # pointwise: dimension from the state

    def evaluate_path(self, X):
        """Weights at every row of an (n, d) state array; returns (n, d)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.dim is not None and X.shape[1] != self.dim:
            raise DimensionMismatch(
                f"map dimension {self.dim} does not match state dimension {X.shape[1]}"
            )
        if self.variant == "constant":
            return np.repeat(self.weights[None, :], X.shape[0], axis=0)
        if self.variant in ("lipschitz", "table"):
            return self._interp(X)
        if self.variant == "fg":
            return fg_weights_batch(self.G, X)
        return np.atleast_2d(self.fn(X))


def constant_map(weights) -> PortfolioMapSpec:
    w = weights.coords if isinstance(weights, PortfolioWeights) else np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
        raise NonPositiveEntry("constant map needs long-only weights summing to 1")
    return PortfolioMapSpec("constant", weights=_frozen(w), label="constant")


def market_map(d: int) -> PortfolioMapSpec:
    """The market portfolio pi(x) = x (generated by G identically 1)."""
    G = generator("power_product", np.zeros(d), dim=d, M=1.0, validate=False)
    return PortfolioMapSpec("fg", G=G, label="market")


def fg_map(G: GeneratorFunction) -> PortfolioMapSpec:
    return PortfolioMapSpec("fg", G=G, label=f"fg:{G.family}")


def lipschitz_map(grid: LipschitzGridMap, recertify=True) -> PortfolioMapSpec:
    if recertify:
        cert = certify_lipschitz(grid)
        if cert > grid.M * (1.0 + 1e-9) + 1e-12:
            raise CertificationFailed(
                f"grid map certifies at {cert:.6g} > declared M {grid.M}"
            )
    return PortfolioMapSpec("lipschitz", grid=grid, label=f"lipschitz:M={grid.M}")


def table_map(states, values, margin=0.0, label="table") -> PortfolioMapSpec:
    return PortfolioMapSpec(
        "table",
        table_states=_frozen(states),
        table_values=_frozen(values),
        table_margin=float(margin),
        label=label,
    )


def pointwise_map(fn, label="pointwise") -> PortfolioMapSpec:
    return PortfolioMapSpec("pointwise", fn=fn, label=label)


def evaluate(pmap: PortfolioMapSpec, x) -> PortfolioWeights:
    """Evaluate a portfolio map at one state."""
    x = x.coords if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    w = pmap.evaluate_path(x[None, :])[0]
    w = np.maximum(w, 0.0)
    return PortfolioWeights(w / w.sum(), long_only=True)


# ---------------------------------------------------------------------------
# mixtures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixtureMeasure:
    """Finitely supported measure over portfolio maps (atoms + weights)."""

    atoms: tuple
    weights: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        w = _frozen(self.weights)
        if len(self.atoms) < 1 or w.size != len(self.atoms):
            raise NonPositiveEntry("mixture needs >= 1 atom with matching weights")
        if abs(w.sum() - 1.0) > 1e-12 or np.any(w <= 0):
            raise NonPositiveEntry("mixture weights must be positive and sum to 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def n_atoms(self):
        return len(self.atoms)


def _draw_margin_simplex(rng, d, floor):
    """Uniform (flat Dirichlet) draw on the simplex with coordinate floor."""
    u = rng.dirichlet(np.ones(d))
    return floor + (1.0 - d * floor) * u


def _contract_pairs_batch(states, v, cap, idx):
    """Contract disjoint chain pairs for a whole (A, K, d) stack of atoms."""
    a, b = idx, idx + 1
    diff = v[:, a] - v[:, b]
    norm = np.abs(diff).sum(axis=2)
    den = np.abs(states[a] - states[b]).sum(axis=1)[None, :]
    viol = norm > cap * den
    if not viol.any():
        return False
    t = np.where(viol, (cap * den) / np.maximum(norm, 1e-300), 1.0)
    mid = 0.5 * (v[:, a] + v[:, b])
    half = 0.5 * t[:, :, None] * diff
    mask = viol[:, :, None]
    v[:, a] = np.where(mask, mid + half, v[:, a])
    v[:, b] = np.where(mask, mid - half, v[:, b])
    return True


def _sample_lipschitz_atoms(seed, rung_key, count, d, M, h, states, pairs):
    """Draw ``count`` certified grid maps (per-atom streams, batched sweeps)."""
    K = states.shape[0]
    floor = min(1.0 / M, 1.0) / d
    raw = np.empty((count, K, d))
    for k in range(count):
        rng = stream(seed, 1, rung_key, k)
        raw[k] = rng.dirichlet(np.ones(d), size=K)
    values = floor + (1.0 - d * floor) * raw
    cap = M * (1 - 1e-12)
    chain = all(j == i + 1 for i, j in pairs) if pairs else False
    if chain:
        even = np.arange(0, len(pairs), 2)
        odd = np.arange(1, len(pairs), 2)
        for _ in range(2000):
            dirty = _contract_pairs_batch(states, values, cap, even)
            dirty = _contract_pairs_batch(states, values, cap, odd) or dirty
            if not dirty:
                break
    else:
        values = np.stack(
            [_pair_cap_sweeps(states, v, cap, pairs, sweeps=2000) for v in values]
        )
    # certify the whole batch at once
    ii = np.array([p[0] for p in pairs])
    jj = np.array([p[1] for p in pairs])
    num = np.abs(values[:, ii] - values[:, jj]).sum(axis=2)
    den = np.abs(states[ii] - states[jj]).sum(axis=1)[None, :]
    certs = (num / den).max(axis=1)
    if np.any(certs > M * (1.0 + 1e-9) + 1e-12):
        raise CertificationFailed("sampled grid map failed its class certification")
    return [
        lipschitz_map(LipschitzGridMap(h, states, v, M), recertify=False)
        for v in values
    ]


def admissible_box(family: str, d: int, M: float = 10.0, grid_n: int = 16):
    """Per-parameter sampling bounds inside which family members certify.

    Bounds are conservative for the default M=10 audited at grid_n=16; they
    shrink with smaller M so that floor, concavity and sup-norm constraints
    hold across the box.
    """
    scale = min(1.0, M / 10.0)
    if family == "power_product":
        return [(0.0, 0.75 * scale)] * d
    if family == "quadratic":
        return [(1.0 / M + 0.65, 2.0), (0.0, 1.2 * scale)]
    if family == "entropy":
        return [(1.0 / M + 0.1, 2.0), (0.0, 0.55 * scale * 16.0 / grid_n)]
    if family == "affine_mixture":
        return [(1.0 / M + 0.1, 2.0), (0.0, 2.0 * scale)]
    raise NonPositiveEntry(f"unknown family {family!r}")


def _sample_fg_atom(rng, d, M, alpha, families, grid_n=16, budget=500):
    tried = 0
    while tried < budget:
        fam = families[rng.integers(len(families))]
        box = admissible_box(fam, d, M, grid_n)
        tried += 1
        if any(lo >= hi for lo, hi in box):
            continue
        params = np.array([rng.uniform(lo, hi) for lo, hi in box])
        try:
            G = generator(fam, params, dim=d, M=M, alpha=alpha, grid_n=grid_n)
        except CertificationFailed:
            continue
        return fg_map(G)
    raise RejectionBudgetExceeded(
        f"fg rejection rate above 99% over {budget} attempts (M={M})"
    )


def sample_mixture(cls: str, n_atoms: int, seed, d: int = 2, M: float = 5.0,
                   h: float = 1 / 32, alpha: float = 0.0, families=FAMILIES,
                   M_ladder=None) -> MixtureMeasure:
    """Draw a finite mixture over a portfolio class with uniform atom weights.

    cls: "constant" (flat Dirichlet atoms on the closed simplex),
    "lipschitz" (node values uniform on the margin simplex, then contracted
    onto the adjacent-pair caps until certified), or "fg" (params uniform in
    the family's admissible box, rejection on certification).

    With ``M_ladder`` (e.g. [1, 2, 4, 8]) the atom count per rung is
    proportional to 2**(-M), mirroring a geometrically weighted union of
    classes of growing complexity.
    """
    if n_atoms < 1:
        raise NonPositiveEntry("n_atoms must be >= 1")
    atoms = []
    if M_ladder is None:
        rungs = [(M, n_atoms)]
    else:
        w = np.array([2.0 ** (-m) for m in M_ladder])
        counts = np.maximum(1, np.round(n_atoms * w / w.sum()).astype(int))
        rungs = list(zip(M_ladder, counts))
    n_grid = int(round(1.0 / h))
    grid_states = simplex_grid(d, n_grid) if cls == "lipschitz" else None
    pairs = grid_adjacency(n_grid, d) if cls == "lipschitz" else None
    for m_val, count in rungs:
        rung_key = int(m_val * 1000)
        if cls == "lipschitz":
            atoms.extend(
                _sample_lipschitz_atoms(seed, rung_key, count, d, m_val, h,
                                        grid_states, pairs))
            continue
        for k in range(count):
            rng = stream(seed, 1, rung_key, k)
            if cls == "constant":
                atoms.append(constant_map(rng.dirichlet(np.ones(d))))
            elif cls == "fg":
                atoms.append(_sample_fg_atom(rng, d, m_val, alpha, list(families)))
            else:
                raise NonPositiveEntry(f"unknown mixture class {cls!r}")
    n = len(atoms)
    return MixtureMeasure(
        tuple(atoms),
        np.full(n, 1.0 / n),
        provenance={
            "class": cls,
            "M": M if M_ladder is None else list(M_ladder),
            "h": h,
            "alpha": alpha,
            "seed": int(seed),
            "n_atoms": n,
        },
    )


# ---------------------------------------------------------------------------
# serialization (lossless; floats via repr round-trip)
# ---------------------------------------------------------------------------

def map_to_dict(pmap: PortfolioMapSpec) -> dict:
    # plain JSON numbers: json round-trips doubles exactly (repr-based)
    if pmap.variant == "constant":
        return {"variant": "constant", "weights": [float(v) for v in pmap.weights]}
    if pmap.variant == "fg":
        G = pmap.G
        return {
            "variant": "fg",
            "family": G.family,
            "params": [float(v) for v in G.params],
            "d": G.dim,
            "M": G.M,
            "alpha": G.alpha,
        }
    if pmap.variant == "lipschitz":
        g = pmap.grid
        return {
            "variant": "lipschitz",
            "resolution": g.resolution,
            "M": g.M,
            "margin": g.margin,
            "node_states": [[float(v) for v in row] for row in g.node_states],
            "node_values": [[float(v) for v in row] for row in g.node_values],
        }
    if pmap.variant == "table":
        return {
            "variant": "table",
            "margin": pmap.table_margin,
            "states": [[float(v) for v in row] for row in pmap.table_states],
            "values": [[float(v) for v in row] for row in pmap.table_values],
        }
    raise NonPositiveEntry(f"{pmap.variant!r} maps are not serializable")


def map_from_dict(dd: dict) -> PortfolioMapSpec:
    v = dd["variant"]
    if v == "constant":
        return constant_map(np.asarray(dd["weights"], dtype=float))
    if v == "fg":
        G = generator(
            dd["family"],
            np.asarray(dd["params"], dtype=float),
            dim=dd["d"],
            M=dd["M"],
            alpha=dd["alpha"],
            validate=False,
        )
        return fg_map(G)
    if v == "lipschitz":
        states = np.asarray(dd["node_states"], dtype=float)
        values = np.asarray(dd["node_values"], dtype=float)
        grid = LipschitzGridMap(dd["resolution"], states, values, dd["M"], dd["margin"])
        return lipschitz_map(grid, recertify=False)
    if v == "table":
        states = np.asarray(dd["states"], dtype=float)
        values = np.asarray(dd["values"], dtype=float)
        return table_map(states, values, dd["margin"])
    raise NonPositiveEntry(f"unknown map variant {v!r}")


def mixture_to_json(mix: MixtureMeasure) -> str:
    return json.dumps(
        {
            "atoms": [map_to_dict(a) for a in mix.atoms],
            "weights": [float(w) for w in mix.weights],
            "provenance": mix.provenance,
        },
        sort_keys=True,
    )


def mixture_from_json(text: str) -> MixtureMeasure:
    dd = json.loads(text)
    return MixtureMeasure(
        tuple(map_from_dict(a) for a in dd["atoms"]),
        np.asarray(dd["weights"], dtype=float),
        dd.get("provenance", {}),
    )
