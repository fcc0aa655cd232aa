"""Simplex points, portfolio weight vectors, market-weight paths and
pathwise quadratic variation along refining partitions.

Market states live in the open simplex (all coordinates strictly positive,
summing to one); portfolio weights live in the closed simplex, optionally
with an interiority margin, or on the sum-one hyperplane when shorting is
allowed.  All types are immutable after construction and all operations are
pure.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionTooSmall,
    NonPositiveEntry,
    PartitionCoarserThanPath,
)

SUM_TOL = 1e-9


def _frozen(a, dtype=float):
    out = np.ascontiguousarray(np.asarray(a, dtype=dtype))
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SimplexPoint:
    """A point of the open simplex: strictly positive coordinates, sum one."""

    coords: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coords)
        if c.ndim != 1 or c.size < 2:
            raise DimensionTooSmall(f"need at least 2 coordinates, got shape {c.shape}")
        if np.any(c <= 0.0):
            raise NonPositiveEntry("simplex point coordinates must be strictly positive")
        if abs(c.sum() - 1.0) > SUM_TOL:
            raise NonPositiveEntry(f"coordinates sum to {c.sum()}, not 1")
        object.__setattr__(self, "coords", c)

    @property
    def dim(self):
        return self.coords.size


@dataclass(frozen=True)
class PortfolioWeights:
    """Fully invested weights: coordinates sum to one.

    ``long_only`` weights are nonnegative; ``margin`` eps > 0 additionally
    guarantees every coordinate >= eps/dim.  With ``long_only=False`` the
    vector may have negative entries (shorting on the sum-one hyperplane).
    """

    coords: np.ndarray
    long_only: bool = True
    margin: float = 0.0

    def __post_init__(self):
        c = _frozen(self.coords)
        if c.ndim != 1 or c.size < 2:
            raise DimensionTooSmall(f"need at least 2 coordinates, got shape {c.shape}")
        if abs(c.sum() - 1.0) > SUM_TOL:
            raise NonPositiveEntry(f"weights sum to {c.sum()}, not 1")
        if self.long_only and np.any(c < -1e-12):
            raise NonPositiveEntry("long-only weights must be nonnegative")
        if self.margin > 0.0 and np.any(c < self.margin / c.size - 1e-12):
            raise NonPositiveEntry(
                f"weights violate margin {self.margin}: min {c.min()}"
            )
        object.__setattr__(self, "coords", c)

    @property
    def dim(self):
        return self.coords.size


def make_simplex_point(raw) -> SimplexPoint:
    """Normalize a vector of positive masses to a simplex point (s -> s/sum s)."""
    r = np.asarray(raw, dtype=float)
    if r.ndim != 1 or r.size < 2:
        raise DimensionTooSmall(f"need at least 2 entries, got shape {r.shape}")
    if np.any(r <= 0.0) or not np.all(np.isfinite(r)):
        raise NonPositiveEntry("all entries must be strictly positive and finite")
    return SimplexPoint(r / r.sum())


def project_to_margin(w: PortfolioWeights, eps: float) -> PortfolioWeights:
    """Blend toward the uniform vector: (1-eps) w + eps (1/d, ..., 1/d).

    The result is long-only with every coordinate >= eps/d.
    """
    if not w.long_only:
        raise NonPositiveEntry("margin projection requires long-only weights")
    if not 0.0 <= eps <= 1.0:
        raise NonPositiveEntry(f"eps must be in [0, 1], got {eps}")
    d = w.dim
    out = (1.0 - eps) * w.coords + eps / d
    # guard fp dust so the margin invariant min_i >= eps/d holds exactly
    out = np.maximum(out, eps / d)
    out = out / out.sum()
    return PortfolioWeights(out, long_only=True, margin=eps)


def normalize_rows(w):
    w = np.asarray(w, dtype=float)
    return w / w.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class MarketPath:
    """A trajectory of market weights, discrete or sampled-continuous.

    ``weights`` is a (len(times), d) matrix of open-simplex rows.  ``qv``,
    when present, is the cumulative pathwise quadratic variation: a
    (len(times), d, d) array of symmetric PSD matrices starting at zero whose
    increments annihilate the all-ones vector (weight increments sum to 0).
    """

    kind: str  # "discrete" | "sampled-continuous"
    times: np.ndarray
    weights: np.ndarray
    qv: np.ndarray | None = None
    partition_level: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = _frozen(self.times)
        raw = np.asarray(self.weights, dtype=float)
        if raw.ndim == 2 and np.any(np.abs(raw.sum(axis=1) - 1.0) > 1e-6):
            raise NonPositiveEntry("weight rows must sum to 1 (within 1e-6)")
        w = _frozen(normalize_rows(raw))
        if self.kind not in ("discrete", "sampled-continuous"):
            raise ValueError(f"unknown path kind {self.kind!r}")
        if t.ndim != 1 or w.ndim != 2 or w.shape[0] != t.size:
            raise ValueError("times and weights shapes disagree")
        if t.size < 1 or w.shape[1] < 2:
            raise DimensionTooSmall("path needs >= 1 rows and >= 2 assets")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if np.any(w <= 0.0):
            raise NonPositiveEntry("all market weights must be strictly positive")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "weights", w)
        if self.qv is not None:
            q = _frozen(self.qv)
            if q.shape != (t.size, w.shape[1], w.shape[1]):
                raise ValueError("qv shape must be (len(times), d, d)")
            object.__setattr__(self, "qv", q)

    @property
    def d(self):
        return self.weights.shape[1]

    @property
    def n_steps(self):
        return self.times.size - 1

    def point(self, i) -> SimplexPoint:
        return SimplexPoint(self.weights[i])

    def ratios(self):
        """Per-step weight ratios w_{t+1}/w_t, shape (n_steps, d)."""
        return self.weights[1:] / self.weights[:-1]

    def subsample(self, stride: int) -> "MarketPath":
        """Keep every ``stride``-th point (the endpoint grid of a coarser mesh)."""
        idx = np.arange(0, self.times.size, stride)
        if idx[-1] != self.times.size - 1:
            idx = np.append(idx, self.times.size - 1)
        return MarketPath(self.kind, self.times[idx], self.weights[idx])


@dataclass(frozen=True)
class RefiningPartition:
    """Dyadic refining time partition: mesh = base_mesh * 2**(-level).

    Levels nest (every level-n point is a level-(n+1) point) and the mesh
    vanishes as the level grows.
    """

    base_mesh: float
    level: int = 0

    def __post_init__(self):
        if self.base_mesh <= 0:
            raise ValueError("base_mesh must be positive")
        if self.level < 0:
            raise ValueError("level must be >= 0")

    @property
    def mesh(self):
        return self.base_mesh * 2.0 ** (-self.level)

    def refine(self) -> "RefiningPartition":
        return RefiningPartition(self.base_mesh, self.level + 1)

    def times(self, t_end: float):
        n = int(np.floor(t_end / self.mesh + 1e-9))
        return np.arange(n + 1) * self.mesh


def quadratic_variation(path: MarketPath, partition: RefiningPartition) -> MarketPath:
    """Fill the cumulative quadratic variation of a path along a partition.

    qv[t] is the running sum, over partition points s <= t, of the outer
    products of the weight increments between consecutive partition points.
    Partition points must coincide (within 1e-9) with path sample times.
    """
    if path.qv is not None:
        raise ValueError("path already carries a quadratic variation")
    t = path.times
    pts = partition.times(t[-1])
    idx = np.searchsorted(t, pts - 1e-9)
    idx = np.minimum(idx, t.size - 1)
    if np.any(np.abs(t[idx] - pts) > 1e-9):
        raise PartitionCoarserThanPath(
            "partition points are not a subset of path sample times"
        )
    w = path.weights[idx]
    inc = np.diff(w, axis=0)  # (m, d)
    outer = inc[:, :, None] * inc[:, None, :]  # (m, d, d)
    cum = np.concatenate(
        [np.zeros((1, path.d, path.d)), np.cumsum(outer, axis=0)], axis=0
    )
    # spread partition-level cumulative sums onto every path time (cadlag fill)
    pos = np.searchsorted(pts, t + 1e-9) - 1
    pos = np.clip(pos, 0, cum.shape[0] - 1)
    qv = cum[pos]
    return MarketPath(
        path.kind,
        path.times,
        path.weights,
        qv=qv,
        partition_level=partition.level,
        meta=dict(path.meta),
    )


def path_to_csv(path: MarketPath, filename):
    """Write a weights path as CSV with header ``t,w1,...,wd``."""
    d = path.d
    with open(filename, "w") as fh:
        fh.write("t," + ",".join(f"w{i + 1}" for i in range(d)) + "\n")
        for t, row in zip(path.times, path.weights):
            fh.write(",".join([repr(float(t))] + [repr(float(x)) for x in row]) + "\n")


def path_from_csv(filename, kind="discrete") -> MarketPath:
    """Read a weights path from CSV with header ``t,w1,...,wd``."""
    data = np.genfromtxt(filename, delimiter=",", skip_header=1, dtype=float)
    data = np.atleast_2d(data)
    return MarketPath(kind, data[:, 0], data[:, 1:])
