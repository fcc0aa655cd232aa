"""Small deterministic benchmark paths used by demos, checks and tests."""

import numpy as np

from .rng import stream
from .simplex import MarketPath


def alternating_path(T: int) -> MarketPath:
    """The half/double market in weight form.

    Two assets: one price constant, the other alternately halving and
    doubling, so the weights alternate (1/2, 1/2) <-> (2/3, 1/3).  The best
    constant vector is (1/2, 1/2) with two-step wealth factor 9/8.
    """
    a = np.array([0.5, 0.5])
    b = np.array([2.0 / 3.0, 1.0 / 3.0])
    w = np.array([a, b] * (T // 2 + 1))[: T + 1]
    return MarketPath("discrete", np.arange(T + 1, dtype=float), w)


def bounded_ratio_path(T: int, d: int, seed, shock: float = 0.3) -> MarketPath:
    """Random weights path with certified per-step ratio bounds.

    Each step multiplies the weights by exp(u) with u uniform in
    [-shock, shock] per asset and renormalizes, so every one-step weight
    ratio lies within [exp(-2 shock), exp(2 shock)].
    """
    rng = stream(seed, 0)
    u = rng.uniform(-shock, shock, size=(T, d))
    logw = np.concatenate([np.zeros((1, d)), np.cumsum(u, axis=0)])
    logw -= logw.max(axis=1, keepdims=True)
    w = np.exp(logw)
    w /= w.sum(axis=1, keepdims=True)
    return MarketPath("discrete", np.arange(T + 1, dtype=float), w)
