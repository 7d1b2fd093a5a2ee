"""Shared data model: point sets, G-value tables, self-maps and result records."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

DEFAULT_EPSILON = 1e-9

PROVENANCES = ("raw-tensor", "sum-from-metric", "max-from-metric")


class GFixError(Exception):
    """Base class for every error raised by this package."""


class InputError(GFixError):
    """Malformed or invalid input (CLI exit code 2)."""


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class EmptySpace(InputError):
    def __init__(self) -> None:
        super().__init__("a space needs at least one point")


class TooFewPoints(InputError):
    def __init__(self, n: int, required: int = 3) -> None:
        super().__init__(f"operation requires at least {required} points, got {n}")
        self.n = n
        self.required = required


class UnknownPoint(InputError):
    def __init__(self, label: str) -> None:
        super().__init__(f"unknown point label {label!r}")
        self.label = label


class InvalidCoefficients(InputError):
    pass


class AxiomViolation(InputError):
    """A G-metric axiom fails; ``witness`` is the offending tuple of labels."""

    def __init__(self, axiom: str, witness: tuple[str, ...]) -> None:
        super().__init__(f"axiom {axiom} violated at {witness}")
        self.axiom = axiom
        self.witness = witness


class MetricViolation(InputError):
    """A metric axiom fails on a distance table."""

    def __init__(self, rule: str, witness: tuple[str, ...]) -> None:
        super().__init__(f"metric axiom '{rule}' violated at {witness}")
        self.rule = rule
        self.witness = witness


@dataclass(frozen=True)
class PointId:
    index: int
    label: str

    def __str__(self) -> str:
        return self.label


def _check_labels(labels: Sequence[str]) -> tuple[str, ...]:
    labels = tuple(str(label) for label in labels)
    if not labels:
        raise EmptySpace()
    seen = set()
    for label in labels:
        if label in seen:
            raise SchemaError(f"duplicate point label {label!r}")
        seen.add(label)
    return labels


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class _Labelled:
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def points(self) -> list[PointId]:
        return [PointId(i, label) for i, label in enumerate(self.labels)]

    def index(self, point: str | int | PointId) -> int:
        if isinstance(point, PointId):
            return point.index
        if isinstance(point, (int, np.integer)):
            if not 0 <= point < len(self.labels):
                raise UnknownPoint(str(point))
            return int(point)
        try:
            return self.labels.index(point)
        except ValueError:
            raise UnknownPoint(point) from None

    def point(self, point: str | int | PointId) -> PointId:
        i = self.index(point)
        return PointId(i, self.labels[i])


@dataclass(frozen=True, eq=False)
class FiniteGSpace(_Labelled):
    """A labelled point set with a full ordered ternary table ``g[x, y, z]``.

    Instances built directly are *unvalidated*; use
    :func:`validate_space` (or one of the constructions in
    :mod:`gfix.gmetric`) to obtain a validated one.
    """

    labels: tuple[str, ...]
    g: np.ndarray
    provenance: str = "raw-tensor"
    validated: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", _check_labels(self.labels))
        g = _frozen(self.g)
        n = len(self.labels)
        if g.shape != (n, n, n):
            raise SchemaError(f"G table must have shape {(n, n, n)}, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise SchemaError("G table contains non-finite values")
        if self.provenance not in PROVENANCES:
            raise SchemaError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "g", g)

    def G(self, x, y, z) -> float:
        return float(self.g[self.index(x), self.index(y), self.index(z)])


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace(_Labelled):
    """A labelled point set with a square distance table.

    The metric axioms are checked on construction unless ``check=False``.
    """

    labels: tuple[str, ...]
    d: np.ndarray
    epsilon: float = DEFAULT_EPSILON
    check: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", _check_labels(self.labels))
        d = _frozen(self.d)
        n = len(self.labels)
        if d.shape != (n, n):
            raise SchemaError(f"distance table must have shape {(n, n)}, got {d.shape}")
        if not np.all(np.isfinite(d)):
            raise SchemaError("distance table contains non-finite values")
        object.__setattr__(self, "d", d)
        if self.check:
            violation = first_metric_violation(self.labels, d, self.epsilon)
            if violation is not None:
                raise MetricViolation(*violation)

    def dist(self, x, y) -> float:
        return float(self.d[self.index(x), self.index(y)])


def first_metric_violation(
    labels: Sequence[str], d: np.ndarray, eps: float = DEFAULT_EPSILON
) -> tuple[str, tuple[str, ...]] | None:
    """Return ``(rule, witness)`` for the lexicographically first metric failure."""
    n = len(labels)
    checks = []
    diag = np.abs(np.diag(d)) > eps
    checks.append(("identity", np.argwhere(diag)))
    off = (d <= eps) & ~np.eye(n, dtype=bool)
    checks.append(("separation", np.argwhere(off)))
    checks.append(("symmetry", np.argwhere(np.abs(d - d.T) > eps)))
    # d[x,z] > d[x,y] + d[y,z]  indexed as (x, y, z)
    tri = d[:, None, :] > d[:, :, None] + d[None, :, :] + eps
    checks.append(("triangle", np.argwhere(tri)))
    for rule, hits in checks:
        if len(hits):
            if rule == "identity":
                i = int(hits[0][0])
                return rule, (labels[i], labels[i])
            return rule, tuple(labels[int(i)] for i in hits[0])
    return None


@dataclass(frozen=True)
class SelfMap:
    """A total map on point indices; ``image[i]`` is the index of T(point i)."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(i) for i in self.image)
        n = len(image)
        for i in image:
            if not 0 <= i < n:
                raise SchemaError(f"map image index {i} outside a space of {n} points")
        object.__setattr__(self, "image", image)

    @classmethod
    def from_labels(cls, labels: Sequence[str], table: Mapping[str, str]) -> "SelfMap":
        labels = list(labels)
        missing = [x for x in labels if x not in table]
        if missing:
            raise SchemaError(f"map is not total: no image for {missing}")
        extra = [x for x in table if x not in labels]
        if extra:
            raise SchemaError(f"map mentions undeclared points {extra}")
        image = []
        for x in labels:
            if table[x] not in labels:
                raise SchemaError(f"map sends {x!r} to undeclared point {table[x]!r}")
            image.append(labels.index(table[x]))
        return cls(tuple(image))

    @classmethod
    def identity(cls, n: int) -> "SelfMap":
        return cls(tuple(range(n)))

    @classmethod
    def constant(cls, n: int, c: int) -> "SelfMap":
        return cls((c,) * n)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __len__(self) -> int:
        return len(self.image)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.intp)

    def to_labels(self, labels: Sequence[str]) -> dict[str, str]:
        return {labels[i]: labels[j] for i, j in enumerate(self.image)}


def check_map(space: _Labelled, T: SelfMap) -> None:
    if len(T) != len(space):
        raise SchemaError(f"map covers {len(T)} points but the space has {len(space)}")


@dataclass(frozen=True)
class ConditionReport:
    """Verdicts for condition (I) and one condition-(II) variant.

    ``tight_constant`` is ``math.inf`` when the inequality is infeasible
    for every admissible constant, and ``None`` for fixed-coefficient
    checks that do not optimise a constant.
    """

    kind: str
    condition_i_holds: bool
    condition_i_witness: str | None
    condition_ii_holds: bool
    condition_ii_witness: tuple[str, str, str] | None
    tight_constant: float | None
    admissible_interval: tuple[float, float] | None
    constant: float | tuple[float, ...] | None = None

    @property
    def infeasible(self) -> bool:
        return self.tight_constant == float("inf")

    @property
    def hypotheses_hold(self) -> bool:
        return self.condition_i_holds and self.condition_ii_holds


ORBIT_STATUSES = ("fixed-point-reached", "cycle-detected", "step-limit")


@dataclass(frozen=True)
class IterationTrace:
    """A Picard orbit ``u0, u1 = T u0, ...`` and how it ended.

    The orbit never repeats a point: a fixed point ends it without being
    appended twice, and for a detected cycle ``cycle`` lists the periodic
    part (the next iterate would be ``cycle[0]``).
    """

    orbit: tuple[PointId, ...]
    status: str
    triple_values: tuple[float, ...] = ()
    cycle: tuple[PointId, ...] = ()

    def __post_init__(self) -> None:
        if self.status not in ORBIT_STATUSES:
            raise ValueError(f"unknown orbit status {self.status!r}")
        if not self.orbit:
            raise ValueError("an orbit has at least its starting point")

    @property
    def terminal(self) -> PointId:
        return self.orbit[-1]

    @property
    def steps(self) -> int:
        return len(self.orbit) - 1


def validate_space(raw: FiniteGSpace, epsilon: float = DEFAULT_EPSILON) -> FiniteGSpace:
    """Run the exhaustive axiom check and return a validated copy of ``raw``.

    Raises :class:`AxiomViolation` carrying the first failing axiom (in
    P1..P5 order) and its lexicographically smallest witness.
    """
    from gfix.gmetric import verify_axioms

    if len(raw) == 0:
        raise EmptySpace()
    for verdict in verify_axioms(raw, epsilon):
        if not verdict.holds:
            raise AxiomViolation(verdict.axiom, verdict.witness)
    return FiniteGSpace(raw.labels, raw.g, raw.provenance, validated=True)


def require_points(space: _Labelled, required: int = 3) -> None:
    if len(space) < required:
        raise TooFewPoints(len(space), required)
