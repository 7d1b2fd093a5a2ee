"""Contraction conditions stated directly on a metric space.

These are written against the distance table alone, without building a
G-metric, so that their agreement with the G-metric checkers on the
sum-form and max-form spaces is a genuine cross-check.

==================  =============================================  ==========
kind                inequality on distinct x, y, z                 constants
==================  =============================================  ==========
perimeter           per(Tx,Ty,Tz) <= l per(x,y,z)                  l in (0,1)
max-banach          mx(Tx,Ty,Tz) <= l mx(x,y,z)                    l in (0,1)
perimeter-kannan    per(Tx,Ty,Tz) <= l [d(x,Tx)+d(y,Ty)+d(z,Tz)]   l in (0,1/3)
perimeter-reich     per(T..) <= a1 d(x,Tx)+...+a4 per(x,y,z)       sum in (0,1)
max-reich           mx(T..) <= a1 d(x,Tx)+...+a4 mx(x,y,z)         sum in (0,1)
==================  =============================================  ==========

``per`` is the triangle perimeter, ``mx`` the longest side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gfix.conditions import (
    InequalityCheck,
    TightConstant,
    check_condition_one,
    inequality_check,
    ordered_triples,
    tight_ratio,
    unordered_triples,
    validate_coefficients,
)
from gfix.core import (
    DEFAULT_EPSILON,
    FiniteMetricSpace,
    InvalidCoefficients,
    SelfMap,
    check_map,
    require_points,
)

CONSTANT_BOUNDS = {
    "perimeter": 1.0,
    "max-banach": 1.0,
    "perimeter-kannan": 1.0 / 3.0,
}
REICH_KINDS = ("perimeter-reich", "max-reich")


@dataclass(frozen=True)
class CorollaryKind:
    kind: str
    constants: float | tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if self.kind in CONSTANT_BOUNDS:
            lam = float(self.constants)
            if not 0 < lam < CONSTANT_BOUNDS[self.kind]:
                raise InvalidCoefficients(
                    f"{self.kind} constant must lie in (0, {CONSTANT_BOUNDS[self.kind]:g})"
                )
            object.__setattr__(self, "constants", lam)
        elif self.kind in REICH_KINDS:
            object.__setattr__(self, "constants", validate_coefficients(self.constants))
        else:
            raise ValueError(f"unknown corollary kind {self.kind!r}")


class _MetricTerms:
    def __init__(self, m: FiniteMetricSpace, T: SelfMap, ordered: bool) -> None:
        require_points(m)
        check_map(m, T)
        d = m.d
        t = T.as_array()
        n = len(m)
        self.triples = ordered_triples(n) if ordered else unordered_triples(n)
        I, J, K = self.triples
        self.disp = d[np.arange(n), t]
        tI, tJ, tK = t[I], t[J], t[K]
        self.img_sides = (d[tI, tJ], d[tJ, tK], d[tI, tK])
        self.sides = (d[I, J], d[J, K], d[I, K])
        self.I, self.J, self.K = I, J, K

    @staticmethod
    def perimeter(sides) -> np.ndarray:
        return sides[0] + sides[1] + sides[2]

    @staticmethod
    def longest(sides) -> np.ndarray:
        return np.maximum(np.maximum(sides[0], sides[1]), sides[2])

    def displacement_sum(self) -> np.ndarray:
        return self.disp[self.I] + self.disp[self.J] + self.disp[self.K]


def check_perimeter_contraction(
    m: FiniteMetricSpace, T: SelfMap, epsilon: float = DEFAULT_EPSILON
) -> TightConstant:
    """Tight constant for mappings contracting perimeters of triangles."""
    tm = _MetricTerms(m, T, ordered=False)
    return tight_ratio(
        "perimeter", 1.0, m.labels, tm.triples,
        tm.perimeter(tm.img_sides), tm.perimeter(tm.sides), epsilon,
    )


def check_max_banach(
    m: FiniteMetricSpace, T: SelfMap, epsilon: float = DEFAULT_EPSILON
) -> TightConstant:
    tm = _MetricTerms(m, T, ordered=False)
    return tight_ratio(
        "max-banach", 1.0, m.labels, tm.triples,
        tm.longest(tm.img_sides), tm.longest(tm.sides), epsilon,
    )


def check_perimeter_kannan(
    m: FiniteMetricSpace, T: SelfMap, epsilon: float = DEFAULT_EPSILON
) -> TightConstant:
    tm = _MetricTerms(m, T, ordered=False)
    return tight_ratio(
        "perimeter-kannan", 1.0 / 3.0, m.labels, tm.triples,
        tm.perimeter(tm.img_sides), tm.displacement_sum(), epsilon,
    )


def _reich(m, T, coeffs, aggregate, epsilon) -> InequalityCheck:
    a1, a2, a3, a4 = validate_coefficients(coeffs)
    tm = _MetricTerms(m, T, ordered=True)
    rhs = (
        a1 * tm.disp[tm.I] + a2 * tm.disp[tm.J] + a3 * tm.disp[tm.K]
        + a4 * aggregate(tm.sides)
    )
    return inequality_check(m.labels, tm.triples, aggregate(tm.img_sides), rhs, epsilon)


def check_perimeter_reich(
    m: FiniteMetricSpace, T: SelfMap, coeffs: Sequence[float], epsilon: float = DEFAULT_EPSILON
) -> InequalityCheck:
    return _reich(m, T, coeffs, _MetricTerms.perimeter, epsilon)


def check_max_reich(
    m: FiniteMetricSpace, T: SelfMap, coeffs: Sequence[float], epsilon: float = DEFAULT_EPSILON
) -> InequalityCheck:
    return _reich(m, T, coeffs, _MetricTerms.longest, epsilon)


def _holds_at(m, T, lhs_of, rhs_of, lam, epsilon) -> InequalityCheck:
    tm = _MetricTerms(m, T, ordered=False)
    return inequality_check(m.labels, tm.triples, lhs_of(tm), lam * rhs_of(tm), epsilon)


def corollary_holds(
    m: FiniteMetricSpace,
    T: SelfMap,
    kind: CorollaryKind,
    epsilon: float = DEFAULT_EPSILON,
) -> InequalityCheck:
    """Evaluate the corollary inequality at the constants carried by ``kind``."""
    c = kind.constants
    if kind.kind == "perimeter":
        return _holds_at(m, T, lambda t: t.perimeter(t.img_sides), lambda t: t.perimeter(t.sides), c, epsilon)
    if kind.kind == "max-banach":
        return _holds_at(m, T, lambda t: t.longest(t.img_sides), lambda t: t.longest(t.sides), c, epsilon)
    if kind.kind == "perimeter-kannan":
        return _holds_at(m, T, lambda t: t.perimeter(t.img_sides), _MetricTerms.displacement_sum, c, epsilon)
    if kind.kind == "perimeter-reich":
        return check_perimeter_reich(m, T, c, epsilon)
    return check_max_reich(m, T, c, epsilon)


def corollary_conclusion(
    m: FiniteMetricSpace, T: SelfMap, kind: CorollaryKind, epsilon: float = DEFAULT_EPSILON
) -> tuple[bool, bool]:
    """(hypotheses hold, 1 <= |Fix(T)| <= 2)."""
    hyp = check_condition_one(m, T).holds and corollary_holds(m, T, kind, epsilon).holds
    nfix = sum(1 for i in range(len(T)) if T(i) == i)
    return hyp, 1 <= nfix <= 2
