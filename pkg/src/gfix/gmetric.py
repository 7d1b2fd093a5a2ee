"""G-metric axioms, the sum/max constructions from a metric, the induced
delta-metric, and tail diagnostics for finite Picard orbits."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Mapping, Sequence

import numpy as np

from gfix.core import (
    DEFAULT_EPSILON,
    FiniteGSpace,
    FiniteMetricSpace,
    IterationTrace,
    SchemaError,
    MetricViolation,
)

AXIOMS = ("P1", "P2", "P3", "P4", "P5")


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    holds: bool
    witness: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.holds != (self.witness is None):
            raise ValueError("a witness is present exactly when the axiom fails")


def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(i) for i in hits[0])


def _verdict(axiom: str, labels: Sequence[str], hit: tuple[int, ...] | None) -> AxiomVerdict:
    if hit is None:
        return AxiomVerdict(axiom, True)
    return AxiomVerdict(axiom, False, tuple(labels[i] for i in hit))


def verify_axioms(space: FiniteGSpace, epsilon: float = DEFAULT_EPSILON) -> list[AxiomVerdict]:
    """Check (P1)-(P5) exhaustively; one verdict per axiom, in order.

    Each failing verdict carries the lexicographically smallest offending
    tuple of labels: ``(x, y, z)`` for P1/P3/P4, ``(x, x, y)`` for P2 and
    ``(x, y, z, w)`` for P5 (``G(x,y,z) > G(x,w,w) + G(w,y,z)``).
    """
    g = space.g
    n = len(space)
    eps = epsilon
    labels = space.labels
    idx = np.arange(n)

    # P1: zero exactly on the diagonal
    diag = np.zeros((n, n, n), dtype=bool)
    diag[idx, idx, idx] = True
    p1 = np.where(diag, np.abs(g) > eps, g <= eps)

    # P2: G(x,x,y) > 0 for x != y; witness reported as (x, x, y)
    gxxy = g[idx[:, None], idx[:, None], idx[None, :]]
    p2_hit = _first((gxxy <= eps) & ~np.eye(n, dtype=bool))
    if p2_hit is not None:
        x, y = p2_hit
        p2_hit = (x, x, y)

    p3 = np.zeros((n, n, n), dtype=bool)
    for perm in permutations(range(3)):
        p3 |= np.abs(g.transpose(perm) - g) > eps

    # P4: G(x,x,y) <= G(x,y,z) whenever y != z, mask indexed (x, y, z)
    ne = ~np.eye(n, dtype=bool)[None, :, :]
    p4 = ne & (gxxy[:, :, None] > g + eps)

    p5_hit = None
    gxww = g[idx[:, None], idx[None, :], idx[None, :]]  # [x, w] -> G(x,w,w)
    for x in range(n):
        # mask[y, z, w]: G(x,y,z) > G(x,w,w) + G(w,y,z)
        rhs = gxww[x][None, None, :] + g.transpose(1, 2, 0)
        mask = g[x][:, :, None] > rhs + eps
        hit = _first(mask)
        if hit is not None:
            p5_hit = (x,) + hit
            break

    return [
        _verdict("P1", labels, _first(p1)),
        _verdict("P2", labels, p2_hit),
        _verdict("P3", labels, _first(p3)),
        _verdict("P4", labels, _first(p4)),
        _verdict("P5", labels, p5_hit),
    ]


def g_from_metric_sum(m: FiniteMetricSpace) -> FiniteGSpace:
    """G(x,y,z) = d(x,y) + d(y,z) + d(x,z); satisfies G(x,y,y) = 2 d(x,y)."""
    d = m.d
    g = d[:, :, None] + d[None, :, :] + d[:, None, :]
    return FiniteGSpace(m.labels, g, "sum-from-metric", validated=True)


def g_from_metric_max(m: FiniteMetricSpace) -> FiniteGSpace:
    """G(x,y,z) = max{d(x,y), d(y,z), d(x,z)}; satisfies G(x,y,y) = d(x,y)."""
    d = m.d
    g = np.maximum(np.maximum(d[:, :, None], d[None, :, :]), d[:, None, :])
    return FiniteGSpace(m.labels, g, "max-from-metric", validated=True)


def delta_metric(space: FiniteGSpace, epsilon: float = DEFAULT_EPSILON) -> FiniteMetricSpace:
    """The metric delta(x,y) = max{G(x,y,y), G(y,x,x)} induced by a G-metric."""
    n = len(space)
    idx = np.arange(n)
    gxyy = space.g[idx[:, None], idx[None, :], idx[None, :]]
    return FiniteMetricSpace(space.labels, np.maximum(gxyy, gxyy.T), epsilon)


def euclidean_metric(
    points: Mapping[str, Sequence[float]] | Sequence[tuple[str, Sequence[float]]],
    epsilon: float = DEFAULT_EPSILON,
) -> FiniteMetricSpace:
    """Pairwise Euclidean distances between labelled coordinate vectors."""
    items = list(points.items()) if isinstance(points, Mapping) else list(points)
    labels = [label for label, _ in items]
    try:
        coords = np.array([np.atleast_1d(np.asarray(c, dtype=float)) for _, c in items])
    except ValueError:
        raise SchemaError("coordinate vectors must all share one dimension") from None
    if coords.ndim != 2:
        raise SchemaError("coordinate vectors must all share one dimension")
    diff = coords[:, None, :] - coords[None, :, :]
    d = np.sqrt(np.sum(diff * diff, axis=-1))
    n = len(labels)
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] <= epsilon:
                raise MetricViolation("separation", (labels[i], labels[j]))
    return FiniteMetricSpace(labels, d, epsilon)


def _tail(trace: IterationTrace, window: int) -> list[int]:
    """The last ``window`` terms of the orbit's eventual behaviour.

    A fixed point repeats forever and a cycle keeps cycling, so both are
    unrolled before the window is cut; a step-limited orbit is used as is.
    """
    seq = [p.index for p in trace.orbit]
    if trace.status == "fixed-point-reached":
        seq += [seq[-1]] * window
    elif trace.status == "cycle-detected" and trace.cycle:
        cyc = [p.index for p in trace.cycle]
        seq += [cyc[k % len(cyc)] for k in range(window * len(cyc))]
    return seq[-window:]


def is_g_cauchy_tail(
    space: FiniteGSpace, trace: IterationTrace, tol: float = DEFAULT_EPSILON, window: int = 3
) -> bool:
    """True iff G(u_n, u_m, u_m) < tol for every pair in the final window."""
    tail = _tail(trace, window)
    return all(space.g[a, b, b] < tol for a in tail for b in tail)


def is_g_convergent_tail(
    space: FiniteGSpace, trace: IterationTrace, limit, tol: float = DEFAULT_EPSILON, window: int = 3
) -> bool:
    """True iff G(u_n, u_n, limit) < tol over the final window."""
    x = space.index(limit)
    return all(space.g[a, a, x] < tol for a in _tail(trace, window))
