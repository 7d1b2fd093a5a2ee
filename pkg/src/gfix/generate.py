"""Random test instances: metrics by shortest-path repair, and self-maps."""

from __future__ import annotations

import numpy as np

from gfix.core import DEFAULT_EPSILON, FiniteMetricSpace, SelfMap


def shortest_path_closure(w: np.ndarray) -> np.ndarray:
    """All-pairs shortest paths (Floyd-Warshall) on a dense weight matrix."""
    d = np.array(w, dtype=float)
    for k in range(len(d)):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def random_metric(
    n: int,
    rng: np.random.Generator,
    epsilon: float = DEFAULT_EPSILON,
    low: float = 0.05,
    high: float = 1.0,
    max_tries: int = 100,
) -> FiniteMetricSpace:
    """Symmetric random weights repaired into a metric by shortest paths.

    Instances whose repair brings two distinct points within ``epsilon``
    are rejected and redrawn.
    """
    labels = [f"p{i}" for i in range(n)]
    for _ in range(max_tries):
        w = rng.uniform(low, high, size=(n, n))
        w = np.triu(w, 1)
        w = w + w.T
        d = shortest_path_closure(w)
        np.fill_diagonal(d, 0.0)
        off = d[~np.eye(n, dtype=bool)]
        if n < 2 or off.min() > epsilon:
            return FiniteMetricSpace(labels, d, epsilon)
    raise RuntimeError("could not draw a separated metric")


def random_map(n: int, rng: np.random.Generator) -> SelfMap:
    return SelfMap(tuple(int(i) for i in rng.integers(0, n, size=n)))


def random_funnel_map(n: int, rng: np.random.Generator, n_fixed: int | None = None) -> SelfMap:
    """A map with one or two fixed points whose orbits funnel into them.

    Each non-fixed point is sent either to a fixed point or to a point
    ranked earlier in a random order, so no cycles of length >= 2 appear.
    """
    if n_fixed is None:
        n_fixed = int(rng.integers(1, 3))
    order = [int(i) for i in rng.permutation(n)]
    image = [0] * n
    for rank, x in enumerate(order):
        if rank < n_fixed:
            image[x] = x
        else:
            image[x] = order[int(rng.integers(0, rank))]
    return SelfMap(tuple(image))
