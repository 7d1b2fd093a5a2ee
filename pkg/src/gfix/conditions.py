"""Condition (I) and the Banach, Kannan and Reich forms of condition (II).

Every condition-(II) check is a family of inequalities ``lhs <= c * rhs``
over pairwise-distinct triples.  Banach and Kannan sides are symmetric in
the triple so unordered triples suffice; the Reich right-hand side is not
symmetric for unequal coefficients, so ordered triples are enumerated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from gfix.core import (
    DEFAULT_EPSILON,
    ConditionReport,
    FiniteGSpace,
    InvalidCoefficients,
    SelfMap,
    check_map,
    require_points,
)

BOUNDS = {"banach": 1.0, "kannan": 1.0 / 3.0, "reich": 0.25}


@lru_cache(maxsize=None)
def unordered_triples(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t = np.array(list(combinations(range(n), 3)), dtype=np.intp).reshape(-1, 3)
    return t[:, 0], t[:, 1], t[:, 2]


@lru_cache(maxsize=None)
def ordered_triples(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t = np.array(list(permutations(range(n), 3)), dtype=np.intp).reshape(-1, 3)
    return t[:, 0], t[:, 1], t[:, 2]


def validate_coefficients(coeffs: Sequence[float]) -> tuple[float, float, float, float]:
    """Reich coefficients: four nonnegative reals with 0 < sum < 1."""
    coeffs = tuple(float(a) for a in coeffs)
    if len(coeffs) != 4:
        raise InvalidCoefficients(f"expected 4 coefficients, got {len(coeffs)}")
    if any(not math.isfinite(a) or a < 0 for a in coeffs):
        raise InvalidCoefficients(f"coefficients must be nonnegative, got {coeffs}")
    if not 0 < sum(coeffs) < 1:
        raise InvalidCoefficients(f"coefficients must sum into (0, 1), got sum {sum(coeffs)}")
    return coeffs


@dataclass(frozen=True)
class ContractionKind:
    kind: str
    coefficients: tuple[float, float, float, float] | None = None

    def __post_init__(self) -> None:
        if self.kind not in BOUNDS:
            raise ValueError(f"unknown contraction kind {self.kind!r}")
        if self.coefficients is not None:
            if self.kind != "reich":
                raise ValueError("coefficients only apply to the reich kind")
            object.__setattr__(self, "coefficients", validate_coefficients(self.coefficients))

    @property
    def bound(self) -> float:
        return BOUNDS[self.kind]


@dataclass(frozen=True)
class TightConstant:
    """Smallest constant c with ``lhs <= c * rhs`` on every distinct triple.

    ``witness`` is the lexicographically smallest triple attaining the
    maximum ratio, or the first triple whose right-hand side vanishes
    while its left-hand side does not (``infeasible``; value is inf).
    """

    kind: str
    value: float
    bound: float
    witness: tuple[str, str, str] | None
    witness_lhs: float | None
    witness_rhs: float | None
    epsilon: float = DEFAULT_EPSILON

    @property
    def infeasible(self) -> bool:
        return math.isinf(self.value)

    @property
    def satisfiable(self) -> bool:
        return not self.infeasible and self.value < self.bound - self.epsilon

    @property
    def admissible_interval(self) -> tuple[float, float] | None:
        """``[value, bound)`` when satisfiable (open at 0 when value is 0)."""
        if not self.satisfiable:
            return None
        return (max(self.value, 0.0), self.bound)


@dataclass(frozen=True)
class InequalityCheck:
    """Verdict of ``lhs <= rhs + eps`` on every triple at fixed constants.

    ``witness`` is the triple maximising ``lhs - rhs`` (the worst case,
    reported whether or not it violates), ``excess`` that maximum.
    """

    holds: bool
    witness: tuple[str, str, str] | None
    excess: float
    lhs: float | None
    rhs: float | None


@dataclass(frozen=True)
class ConditionOne:
    holds: bool
    witness: str | None = None


def _labels(labels: Sequence[str], i, j, k) -> tuple[str, str, str]:
    return (labels[int(i)], labels[int(j)], labels[int(k)])


def tight_ratio(
    kind: str,
    bound: float,
    labels: Sequence[str],
    triples: tuple[np.ndarray, np.ndarray, np.ndarray],
    lhs: np.ndarray,
    rhs: np.ndarray,
    epsilon: float,
) -> TightConstant:
    """Shared sup-ratio computation; also used by the corollary checkers."""
    I, J, K = triples
    if len(lhs) == 0:
        return TightConstant(kind, 0.0, bound, None, None, None, epsilon)
    degenerate = (rhs <= epsilon) & (lhs > epsilon)
    if degenerate.any():
        t = int(np.argmax(degenerate))
        return TightConstant(
            kind, math.inf, bound, _labels(labels, I[t], J[t], K[t]),
            float(lhs[t]), float(rhs[t]), epsilon,
        )
    ratio = np.where(rhs > epsilon, lhs / np.where(rhs > epsilon, rhs, 1.0), 0.0)
    t = int(np.argmax(ratio))
    return TightConstant(
        kind, float(ratio[t]), bound, _labels(labels, I[t], J[t], K[t]),
        float(lhs[t]), float(rhs[t]), epsilon,
    )


def inequality_check(
    labels: Sequence[str],
    triples: tuple[np.ndarray, np.ndarray, np.ndarray],
    lhs: np.ndarray,
    rhs: np.ndarray,
    epsilon: float,
) -> InequalityCheck:
    I, J, K = triples
    if len(lhs) == 0:
        return InequalityCheck(True, None, -math.inf, None, None)
    excess = lhs - rhs
    t = int(np.argmax(excess))
    return InequalityCheck(
        bool(np.all(lhs <= rhs + epsilon)),
        _labels(labels, I[t], J[t], K[t]),
        float(excess[t]),
        float(lhs[t]),
        float(rhs[t]),
    )


def _prepare(space: FiniteGSpace, T: SelfMap):
    require_points(space)
    check_map(space, T)
    t = T.as_array()
    idx = np.arange(len(space))
    displacement = space.g[idx, t, t]  # G(x, Tx, Tx)
    return space.g, t, displacement


class _GTerms:
    """Per-triple terms of the G-metric inequalities for one (space, map)."""

    def __init__(self, space: FiniteGSpace, T: SelfMap, ordered: bool) -> None:
        g, t, disp = _prepare(space, T)
        n = len(space)
        self.triples = ordered_triples(n) if ordered else unordered_triples(n)
        I, J, K = self.triples
        self.lhs = g[t[I], t[J], t[K]]
        self.r1, self.r2, self.r3 = disp[I], disp[J], disp[K]
        self.r4 = g[I, J, K]


def check_condition_one(space, T: SelfMap) -> ConditionOne:
    """T(Tx) != x whenever Tx != x, i.e. the map has no 2-cycle.

    The witness is the first point (in declaration order) on a 2-cycle.
    """
    check_map(space, T)
    for x in range(len(T)):
        tx = T(x)
        if tx != x and T(tx) == x:
            return ConditionOne(False, space.labels[x])
    return ConditionOne(True)


def banach_terms(space: FiniteGSpace, T: SelfMap, ordered: bool = False) -> tuple:
    terms = _GTerms(space, T, ordered)
    return terms.triples, terms.lhs, terms.r4


def kannan_terms(space: FiniteGSpace, T: SelfMap, ordered: bool = False) -> tuple:
    terms = _GTerms(space, T, ordered)
    return terms.triples, terms.lhs, terms.r1 + terms.r2 + terms.r3


def reich_uniform_terms(space: FiniteGSpace, T: SelfMap) -> tuple:
    terms = _GTerms(space, T, ordered=True)
    return terms.triples, terms.lhs, terms.r1 + terms.r2 + terms.r3 + terms.r4


def banach_tight_lambda(
    space: FiniteGSpace, T: SelfMap, epsilon: float = DEFAULT_EPSILON, ordered: bool = False
) -> TightConstant:
    """sup of G(Tx,Ty,Tz) / G(x,y,z) over distinct triples; satisfiable iff < 1."""
    triples, lhs, rhs = banach_terms(space, T, ordered)
    return tight_ratio("banach", BOUNDS["banach"], space.labels, triples, lhs, rhs, epsilon)


def kannan_tight_lambda(
    space: FiniteGSpace, T: SelfMap, epsilon: float = DEFAULT_EPSILON, ordered: bool = False
) -> TightConstant:
    """sup of G(Tx,Ty,Tz) / [G(x,Tx,Tx) + G(y,Ty,Ty) + G(z,Tz,Tz)]; bound 1/3."""
    triples, lhs, rhs = kannan_terms(space, T, ordered)
    return tight_ratio("kannan", BOUNDS["kannan"], space.labels, triples, lhs, rhs, epsilon)


def reich_uniform_tight_lambda(
    space: FiniteGSpace, T: SelfMap, epsilon: float = DEFAULT_EPSILON
) -> TightConstant:
    """Reich condition with a1 = a2 = a3 = a4 = lambda; bound 1/4."""
    triples, lhs, rhs = reich_uniform_terms(space, T)
    return tight_ratio("reich", BOUNDS["reich"], space.labels, triples, lhs, rhs, epsilon)


def banach_holds(
    space: FiniteGSpace, T: SelfMap, lam: float, epsilon: float = DEFAULT_EPSILON
) -> InequalityCheck:
    triples, lhs, rhs = banach_terms(space, T)
    return inequality_check(space.labels, triples, lhs, lam * rhs, epsilon)


def kannan_holds(
    space: FiniteGSpace, T: SelfMap, lam: float, epsilon: float = DEFAULT_EPSILON
) -> InequalityCheck:
    triples, lhs, rhs = kannan_terms(space, T)
    return inequality_check(space.labels, triples, lhs, lam * rhs, epsilon)


def reich_check(
    space: FiniteGSpace,
    T: SelfMap,
    coeffs: Sequence[float],
    epsilon: float = DEFAULT_EPSILON,
) -> InequalityCheck:
    """G(Tx,Ty,Tz) <= a1 G(x,Tx,Tx) + a2 G(y,Ty,Ty) + a3 G(z,Tz,Tz) + a4 G(x,y,z)
    on every ordered pairwise-distinct triple."""
    a1, a2, a3, a4 = validate_coefficients(coeffs)
    terms = _GTerms(space, T, ordered=True)
    rhs = a1 * terms.r1 + a2 * terms.r2 + a3 * terms.r3 + a4 * terms.r4
    return inequality_check(space.labels, terms.triples, terms.lhs, rhs, epsilon)


def reich_decay_rate(coeffs: Sequence[float]) -> float:
    a1, a2, a3, a4 = coeffs
    return (a1 + a2 + a4) / (1.0 - a3)


def decay_rate(kind: str, constant) -> float:
    """Contraction factor of consecutive orbit triples under each condition.

    Banach: lambda.  Kannan: lambda / (1 - 2 lambda).  Reich:
    (a1 + a2 + a4) / (1 - a3), so 3 lambda / (1 - lambda) for uniform
    coefficients.
    """
    if kind == "banach":
        return constant
    if kind == "kannan":
        return constant / (1.0 - 2.0 * constant)
    if kind == "reich":
        if isinstance(constant, tuple):
            return reich_decay_rate(constant)
        return reich_decay_rate((constant,) * 4)
    raise ValueError(f"unknown contraction kind {kind!r}")


def condition_report(
    space: FiniteGSpace,
    T: SelfMap,
    kind: ContractionKind | str,
    constant: float | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> ConditionReport:
    """Evaluate condition (I) and condition (II) of the given kind.

    With ``constant=None`` condition (II) is judged by its tight constant;
    with an explicit ``constant`` (or fixed Reich coefficients) the
    inequality is evaluated at that value, which must lie in the
    theorem's open interval.
    """
    if isinstance(kind, str):
        kind = ContractionKind(kind)
    one = check_condition_one(space, T)
    if kind.kind == "reich" and kind.coefficients is not None:
        res = reich_check(space, T, kind.coefficients, epsilon)
        return ConditionReport(
            "reich", one.holds, one.witness, res.holds,
            None if res.holds else res.witness, None, None, kind.coefficients,
        )

    tight = {
        "banach": banach_tight_lambda,
        "kannan": kannan_tight_lambda,
        "reich": reich_uniform_tight_lambda,
    }[kind.kind](space, T, epsilon)
    if constant is None:
        holds = tight.satisfiable
        witness = None if holds else tight.witness
    else:
        if not 0 < constant < kind.bound:
            raise InvalidCoefficients(
                f"{kind.kind} constant must lie in (0, {kind.bound:g}), got {constant}"
            )
        if kind.kind == "banach":
            res = banach_holds(space, T, constant, epsilon)
        elif kind.kind == "kannan":
            res = kannan_holds(space, T, constant, epsilon)
        else:
            res = reich_check(space, T, (constant,) * 4, epsilon)
        holds = res.holds
        witness = None if holds else res.witness
    return ConditionReport(
        kind.kind, one.holds, one.witness, holds, witness,
        tight.value, tight.admissible_interval, constant,
    )


def reich_sides(
    space: FiniteGSpace, T: SelfMap, coeffs: Sequence[float], triple: Sequence
) -> tuple[float, float]:
    """Both sides of the Reich inequality at one ordered triple of points."""
    a1, a2, a3, a4 = coeffs
    x, y, z = (space.index(p) for p in triple)
    G = space.g
    lhs = G[T(x), T(y), T(z)]
    rhs = (
        a1 * G[x, T(x), T(x)]
        + a2 * G[y, T(y), T(y)]
        + a3 * G[z, T(z), T(z)]
        + a4 * G[x, y, z]
    )
    return float(lhs), float(rhs)
