"""Picard iteration, fixed-point enumeration and checks of the theorem
conclusions (Fix(T) nonempty with at most two elements)."""

from __future__ import annotations

from dataclasses import dataclass, field

from gfix.conditions import (
    ContractionKind,
    condition_report,
    decay_rate,
)
from gfix.core import (
    DEFAULT_EPSILON,
    ConditionReport,
    FiniteGSpace,
    IterationTrace,
    PointId,
    SelfMap,
    check_map,
    require_points,
)


def enumerate_fixed_points(space: FiniteGSpace, T: SelfMap) -> list[PointId]:
    check_map(space, T)
    return [p for p in space.points if T(p.index) == p.index]


def picard_iterate(
    space: FiniteGSpace, T: SelfMap, start, max_steps: int | None = None
) -> IterationTrace:
    """Iterate u_{n+1} = T u_n from ``start``.

    Stops when an iterate is fixed, when a point is revisited (cycle of
    period >= 2) or after ``max_steps`` applications of T (default
    ``len(space) + 1``, which a finite orbit never reaches).
    """
    check_map(space, T)
    if max_steps is None:
        max_steps = len(space) + 1
    u = space.index(start)
    orbit = [u]
    seen = {u: 0}
    status = "step-limit"
    cycle: list[int] = []
    for _ in range(max_steps):
        nxt = T(u)
        if nxt == u:
            status = "fixed-point-reached"
            break
        if nxt in seen:
            status = "cycle-detected"
            cycle = orbit[seen[nxt]:]
            break
        seen[nxt] = len(orbit)
        orbit.append(nxt)
        u = nxt
    g = space.g
    triples = tuple(float(g[orbit[n], orbit[n + 1], orbit[n + 2]]) for n in range(len(orbit) - 2))
    pts = space.points
    return IterationTrace(
        tuple(pts[i] for i in orbit), status, triples, tuple(pts[i] for i in cycle)
    )


def orbit_decay_ok(trace: IterationTrace, rate: float, epsilon: float = DEFAULT_EPSILON) -> bool:
    """G(u_n, u_{n+1}, u_{n+2}) <= tau0 * rate**n + eps along the recorded orbit.

    Every recorded triple is pairwise distinct: the orbit holds no repeats.
    """
    if not trace.triple_values:
        return True
    tau0 = trace.triple_values[0]
    return all(v <= tau0 * rate**n + epsilon for n, v in enumerate(trace.triple_values))


@dataclass(frozen=True)
class TheoremVerdict:
    """Evidence bundle for one theorem applied to one (space, map).

    ``conclusion_holds`` is ``None`` when a hypothesis fails: nothing is
    claimed about Fix(T) in that case, although the observed fixed points
    are still reported.
    """

    kind: ContractionKind
    report: ConditionReport
    fixed_points: list[PointId]
    orbits: dict[str, IterationTrace] = field(default_factory=dict)
    conclusion_holds: bool | None = None
    failed_hypothesis: str | None = None
    decay_rate: float | None = None
    decay_holds: bool | None = None

    @property
    def hypotheses_hold(self) -> bool:
        return self.failed_hypothesis is None


def verify_theorem_conclusion(
    space: FiniteGSpace,
    T: SelfMap,
    kind: ContractionKind | str,
    constant: float | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> TheoremVerdict:
    if isinstance(kind, str):
        kind = ContractionKind(kind)
    require_points(space)
    report = condition_report(space, T, kind, constant, epsilon)
    fixed = enumerate_fixed_points(space, T)
    orbits = {p.label: picard_iterate(space, T, p) for p in space.points}

    if not report.condition_i_holds:
        failed = "I"
    elif not report.condition_ii_holds:
        failed = "II"
    else:
        failed = None
    if failed is not None:
        return TheoremVerdict(kind, report, fixed, orbits, None, failed)

    if kind.coefficients is not None:
        rate = decay_rate("reich", kind.coefficients)
    else:
        c = constant if constant is not None else report.tight_constant
        rate = decay_rate(kind.kind, c)
    decay = all(orbit_decay_ok(tr, rate, epsilon) for tr in orbits.values())
    reached = all(tr.status == "fixed-point-reached" for tr in orbits.values())
    conclusion = 1 <= len(fixed) <= 2 and reached
    return TheoremVerdict(kind, report, fixed, orbits, conclusion, None, rate, decay)
