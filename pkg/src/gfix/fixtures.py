"""Worked instances built from raw coordinates.

Every builder returns the metric, the max-form G-metric and the named
self-maps, computed from coordinates only; nothing precomputed is stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gfix.core import DEFAULT_EPSILON, FiniteGSpace, FiniteMetricSpace, InvalidCoefficients, SelfMap
from gfix.gmetric import euclidean_metric, g_from_metric_max

REICH_DEFAULT_LAMBDA = 0.125


@dataclass(frozen=True)
class Instance:
    name: str
    coords: dict[str, tuple[float, ...]]
    metric: FiniteMetricSpace
    space: FiniteGSpace
    maps: dict[str, SelfMap]


def _build(name, coords, maps, epsilon):
    m = euclidean_metric(coords, epsilon)
    labels = list(coords)
    return Instance(
        name,
        coords,
        m,
        g_from_metric_max(m),
        {k: SelfMap.from_labels(labels, v) for k, v in maps.items()},
    )


def triangle_instance(epsilon: float = DEFAULT_EPSILON) -> Instance:
    """Three points in the plane: A = (7/8, sqrt(15)/8), B = (1, 0), C = (0, 0).

    T1 fixes A and B and sends C to A; T2 swaps A and B and sends C to A.
    """
    coords = {
        "A": (7 / 8, math.sqrt(15) / 8),
        "B": (1.0, 0.0),
        "C": (0.0, 0.0),
    }
    maps = {
        "T1": {"A": "A", "B": "B", "C": "A"},
        "T2": {"A": "B", "B": "A", "C": "A"},
    }
    return _build("3.3", coords, maps, epsilon)


def line_instance(epsilon: float = DEFAULT_EPSILON) -> Instance:
    """a = 0, b = 1/5, c = 1 on the real line, same map pattern as above."""
    coords = {"a": (0.0,), "b": (1 / 5,), "c": (1.0,)}
    maps = {
        "T1": {"a": "a", "b": "b", "c": "a"},
        "T2": {"a": "b", "b": "a", "c": "a"},
    }
    return _build("3.5", coords, maps, epsilon)


def reich_instance(lam: float = REICH_DEFAULT_LAMBDA, epsilon: float = DEFAULT_EPSILON) -> Instance:
    """Four points a = 0, b = 2l/(2l - 1), c = 1, d = 2 for l in (0, 1/4).

    T fixes a and b and sends c and d to b; with the max-form G-metric the
    uniform Reich inequality at l is tight on the triple (a, b, c).
    """
    if not 0 < lam < 0.25:
        raise InvalidCoefficients(f"reich example parameter must lie in (0, 1/4), got {lam}")
    b = 2 * lam / (2 * lam - 1)
    coords = {"a": (0.0,), "b": (b,), "c": (1.0,), "d": (2.0,)}
    maps = {"T": {"a": "a", "b": "b", "c": "b", "d": "b"}}
    return _build("reich", coords, maps, epsilon)
