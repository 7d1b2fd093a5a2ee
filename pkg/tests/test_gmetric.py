import math
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings

from gfix.core import (
    AxiomViolation,
    FiniteGSpace,
    FiniteMetricSpace,
    IterationTrace,
    MetricViolation,
    PointId,
    SchemaError,
    first_metric_violation,
    validate_space,
)
from gfix.gmetric import (
    AxiomVerdict,
    delta_metric,
    euclidean_metric,
    g_from_metric_max,
    g_from_metric_sum,
    is_g_cauchy_tail,
    is_g_convergent_tail,
    verify_axioms,
)

from conftest import metric_spaces

EPS = 1e-9


def brute_force_axioms(space, eps=EPS):
    """Loop-by-loop reference for verify_axioms: {axiom: first witness or None}."""
    n = len(space)
    G = lambda *t: float(space.g[t])  # noqa: E731
    L = space.labels
    out = dict.fromkeys(("P1", "P2", "P3", "P4", "P5"))
    for x, y, z in product(range(n), repeat=3):
        v = G(x, y, z)
        bad = abs(v) > eps if x == y == z else v <= eps
        if bad and out["P1"] is None:
            out["P1"] = (L[x], L[y], L[z])
    for x, y in product(range(n), repeat=2):
        if x != y and G(x, x, y) <= eps and out["P2"] is None:
            out["P2"] = (L[x], L[x], L[y])
    for x, y, z in product(range(n), repeat=3):
        if out["P3"] is None and any(abs(G(*p) - G(x, y, z)) > eps for p in permutations((x, y, z))):
            out["P3"] = (L[x], L[y], L[z])
        if out["P4"] is None and y != z and G(x, x, y) > G(x, y, z) + eps:
            out["P4"] = (L[x], L[y], L[z])
    for x, y, z, w in product(range(n), repeat=4):
        if G(x, y, z) > G(x, w, w) + G(w, y, z) + eps:
            out["P5"] = (L[x], L[y], L[z], L[w])
            break
    return out


def as_dict(verdicts):
    return {v.axiom: v.witness for v in verdicts}


# --- constructions -------------------------------------------------------


def test_sum_construction_value_on_line(line):
    sp = g_from_metric_sum(line.metric)
    # |a-b| + |b-c| + |a-c| = 1/5 + 4/5 + 1
    assert sp.G("a", "b", "c") == pytest.approx(2.0, abs=EPS)
    assert sp.G("a", "c", "c") == pytest.approx(2.0, abs=EPS)
    for x in sp.labels:
        assert sp.G(x, x, x) == 0.0
    assert sp.provenance == "sum-from-metric" and sp.validated


def test_max_construction_triangle(triangle):
    sp = triangle.space
    assert sp.G("A", "B", "C") == pytest.approx(1.0, abs=EPS)
    assert sp.G("A", "B", "A") == pytest.approx(0.5, abs=EPS)
    for x in sp.labels:
        assert sp.G(x, x, x) == 0.0
    assert sp.provenance == "max-from-metric"


def test_euclidean_distances(triangle):
    m = triangle.metric
    assert m.dist("A", "B") == pytest.approx(0.5, abs=EPS)
    assert m.dist("B", "C") == pytest.approx(1.0, abs=EPS)
    assert m.dist("A", "C") == pytest.approx(1.0, abs=EPS)
    assert m.dist("A", "A") == 0.0


def test_euclidean_rejects_coincident_and_ragged():
    with pytest.raises(MetricViolation) as exc:
        euclidean_metric({"p": (1.0, 2.0), "q": (1.0, 2.0)})
    assert exc.value.witness == ("p", "q")
    with pytest.raises(SchemaError):
        euclidean_metric({"p": (1.0, 2.0), "q": (1.0,)})


def test_metric_violation_witnesses():
    labels = ["x", "y", "z"]
    d = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
    assert first_metric_violation(labels, d) == ("triangle", ("x", "y", "z"))
    d2 = np.array([[0, 1], [2, 0]], dtype=float)
    assert first_metric_violation(["x", "y"], d2) == ("symmetry", ("x", "y"))
    with pytest.raises(MetricViolation):
        FiniteMetricSpace(["x", "y"], np.zeros((2, 2)))


def test_delta_metric_examples(triangle, line):
    assert delta_metric(triangle.space).dist("A", "B") == pytest.approx(0.5, abs=EPS)
    d = line.metric.d
    assert np.allclose(delta_metric(g_from_metric_sum(line.metric)).d, 2 * d, atol=EPS)
    assert np.allclose(delta_metric(g_from_metric_max(line.metric)).d, d, atol=EPS)


# --- axiom verification --------------------------------------------------


def test_axioms_hold_on_worked_spaces(triangle, line, reich):
    for sp in (triangle.space, line.space, reich.space, g_from_metric_sum(reich.metric)):
        assert all(v.holds for v in verify_axioms(sp))
        assert validate_space(FiniteGSpace(sp.labels, sp.g)).validated


def test_zero_table_fails_p2():
    sp = FiniteGSpace(["x", "y"], np.zeros((2, 2, 2)))
    verdicts = as_dict(verify_axioms(sp))
    assert verdicts["P2"] == ("x", "x", "y")
    assert verdicts["P1"] == ("x", "x", "y")


def test_validate_space_reports_p1_first():
    g = np.array(g_from_metric_max(euclidean_metric({"x": 0, "y": 1, "z": 3})).g)
    g[1, 1, 1] = 1.0
    with pytest.raises(AxiomViolation) as exc:
        validate_space(FiniteGSpace(["x", "y", "z"], g))
    assert exc.value.axiom == "P1"
    assert exc.value.witness == ("y", "y", "y")


def test_asymmetric_tensor_fails_p3():
    g = np.array(g_from_metric_sum(euclidean_metric({"x": 0, "y": 1, "z": 3})).g)
    g[0, 1, 2] += 0.5
    verdicts = as_dict(verify_axioms(FiniteGSpace(["x", "y", "z"], g)))
    assert verdicts["P3"] == ("x", "y", "z")


def test_axiom_verdict_witness_invariant():
    with pytest.raises(ValueError):
        AxiomVerdict("P1", True, ("x",))
    with pytest.raises(ValueError):
        AxiomVerdict("P1", False)


@settings(max_examples=60, deadline=None)
@given(metric_spaces(3, 6))
def test_constructions_pass_all_axioms(m):
    for build in (g_from_metric_sum, g_from_metric_max):
        sp = build(m)
        assert all(v.holds for v in verify_axioms(sp))
        assert all(v is None for v in brute_force_axioms(sp).values())


@settings(max_examples=60, deadline=None)
@given(metric_spaces(2, 6))
def test_construction_identities(m):
    n = len(m)
    s, x = g_from_metric_sum(m), g_from_metric_max(m)
    for i, j in product(range(n), repeat=2):
        assert abs(s.g[i, j, j] - 2 * m.d[i, j]) <= EPS
        assert abs(x.g[i, j, j] - m.d[i, j]) <= EPS
    # P3 assertable directly on every triple
    for t in product(range(n), repeat=3):
        for p in permutations(t):
            assert abs(s.g[p] - s.g[t]) <= EPS and abs(x.g[p] - x.g[t]) <= EPS


@settings(max_examples=60, deadline=None)
@given(metric_spaces(2, 6))
def test_delta_metric_is_a_metric(m):
    for build in (g_from_metric_sum, g_from_metric_max):
        delta = delta_metric(build(m))
        assert first_metric_violation(delta.labels, delta.d) is None


@settings(max_examples=80, deadline=None)
@given(metric_spaces(3, 5))
def test_vectorised_witnesses_match_brute_force_on_perturbed_tables(m):
    # random corruption of one entry; both checkers must pick the same witness
    rng = np.random.default_rng(int(m.d.sum() * 1e6) % 2**32)
    g = np.array(g_from_metric_sum(m).g)
    n = len(m)
    idx = tuple(int(i) for i in rng.integers(0, n, size=3))
    g[idx] = g[idx] * rng.choice([0.0, 0.3, 3.0])
    sp = FiniteGSpace(m.labels, g)
    assert as_dict(verify_axioms(sp)) == brute_force_axioms(sp)


# --- orbit diagnostics ---------------------------------------------------


def _trace(space, labels, status="step-limit", cycle=()):
    pts = [space.point(x) for x in labels]
    return IterationTrace(tuple(pts), status, (), tuple(space.point(x) for x in cycle))


def test_cauchy_tail_examples(triangle):
    sp = triangle.space
    assert is_g_cauchy_tail(sp, _trace(sp, ["A", "A", "A", "A"]), 1e-9)
    assert not is_g_cauchy_tail(sp, _trace(sp, ["A", "B", "A", "B"]), 1e-9)
    assert is_g_cauchy_tail(sp, _trace(sp, ["C", "A"], "fixed-point-reached"), 1e-9)
    assert not is_g_cauchy_tail(sp, _trace(sp, ["C", "A", "B"], "cycle-detected", ("A", "B")), 1e-9)


def test_limit_is_unique(triangle):
    sp = triangle.space
    tr = _trace(sp, ["C", "A"], "fixed-point-reached")
    hits = [x for x in sp.labels if is_g_convergent_tail(sp, tr, x, 1e-9)]
    assert hits == ["A"]


@settings(max_examples=40, deadline=None)
@given(metric_spaces(3, 6))
def test_no_two_distinct_constant_limits(m):
    sp = g_from_metric_max(m)
    tol = 0.5 * float(np.min(m.d[~np.eye(len(m), dtype=bool)]))
    for p in sp.labels:
        tr = _trace(sp, [p] * 4)
        limits = [x for x in sp.labels if is_g_convergent_tail(sp, tr, x, tol)]
        assert limits == [p]
