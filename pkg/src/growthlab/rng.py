"""Splittable counter-based random streams and deterministic parallel mapping.

Every stochastic routine takes a ``seed`` and derives independent substreams
with :func:`stream`.  Substreams are keyed by integer tuples, so work split
across threads draws from disjoint streams and results do not depend on
scheduling.  The thread count is capped by the ``GROWTHLAB_THREADS``
environment variable (default 1).
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

__all__ = ["stream", "parallel_map", "thread_count"]


def stream(seed, *key):
    """Return a Generator for the substream of ``seed`` identified by ``key``.

    Uses the Philox counter-based bit generator; distinct ``(seed, key)``
    pairs give statistically independent streams and the same pair always
    reproduces the same draws.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def thread_count():
    raw = os.environ.get("GROWTHLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def parallel_map(fn, items):
    """Map ``fn`` over ``items`` preserving order.

    Runs on a thread pool of ``GROWTHLAB_THREADS`` workers.  Each item must be
    independent (own RNG substream); the returned list is index-ordered, so
    the result is identical for any thread count.
    """
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
