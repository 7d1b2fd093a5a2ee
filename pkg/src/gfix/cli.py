"""Command-line front end.

Exit codes: 0 success, 1 a verdict came out negative, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Sequence

from gfix import __version__
from gfix.conditions import (
    ContractionKind,
    banach_tight_lambda,
    check_condition_one,
    condition_report,
    kannan_tight_lambda,
    reich_sides,
    reich_uniform_tight_lambda,
)
from gfix.core import DEFAULT_EPSILON, InputError, SchemaError
from gfix.fixtures import REICH_DEFAULT_LAMBDA, line_instance, reich_instance, triangle_instance
from gfix.gmetric import delta_metric, g_from_metric_max, g_from_metric_sum, verify_axioms
from gfix.io import dumps, ingest, metric_document, space_document
from gfix.solver import enumerate_fixed_points, picard_iterate, verify_theorem_conclusion

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2

TIGHT = {
    "banach": banach_tight_lambda,
    "kannan": kannan_tight_lambda,
    "reich": reich_uniform_tight_lambda,
}


def _num(x: float | None) -> Any:
    if x is None:
        return None
    if math.isinf(x):
        return "infeasible"
    return x


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return "infeasible" if math.isinf(x) else repr(x)
    if isinstance(x, (list, tuple)):
        return "(" + ", ".join(_fmt(v) for v in x) + ")"
    return str(x)


def _coeffs(text: str | None) -> tuple[float, ...] | None:
    if text is None:
        return None
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise SchemaError(f"--coeffs expects a1,a2,a3,a4, got {text!r}") from None


def _need_map(ing):
    if ing.map is None:
        raise SchemaError("this command needs a document with a 'map'")
    return ing.map


def _kind(args) -> ContractionKind:
    coeffs = _coeffs(getattr(args, "coeffs", None))
    if coeffs is not None and args.theorem != "reich":
        raise SchemaError("--coeffs only applies to --theorem reich")
    return ContractionKind(args.theorem, coeffs)


def _tight_dict(tc) -> dict:
    return {
        "theorem": tc.kind,
        "tight_lambda": _num(tc.value),
        "bound": tc.bound,
        "satisfiable": tc.satisfiable,
        "infeasible": tc.infeasible,
        "admissible_interval": list(tc.admissible_interval) if tc.admissible_interval else None,
        "witness": list(tc.witness) if tc.witness else None,
        "witness_lhs": tc.witness_lhs,
        "witness_rhs": tc.witness_rhs,
    }


def _report_dict(r) -> dict:
    return {
        "theorem": r.kind,
        "condition_i_holds": r.condition_i_holds,
        "condition_i_witness": r.condition_i_witness,
        "condition_ii_holds": r.condition_ii_holds,
        "condition_ii_witness": list(r.condition_ii_witness) if r.condition_ii_witness else None,
        "constant": list(r.constant) if isinstance(r.constant, tuple) else r.constant,
        "tight_lambda": _num(r.tight_constant),
        "admissible_interval": list(r.admissible_interval) if r.admissible_interval else None,
    }


def _trace_dict(tr) -> dict:
    return {
        "orbit": [p.label for p in tr.orbit],
        "status": tr.status,
        "cycle": [p.label for p in tr.cycle],
        "triple_values": list(tr.triple_values),
    }


# --- commands: each returns (exit code, JSON-able payload, text lines) ---


def cmd_check_axioms(args):
    ing = ingest(args.file, args.epsilon, validate=False)
    verdicts = verify_axioms(ing.space, args.epsilon)
    ok = all(v.holds for v in verdicts)
    payload = {
        "axioms": [
            {"axiom": v.axiom, "holds": v.holds, "witness": list(v.witness) if v.witness else None}
            for v in verdicts
        ],
        "all_hold": ok,
    }
    lines = [
        f"{v.axiom}: {'holds' if v.holds else 'FAILS at ' + _fmt(v.witness)}" for v in verdicts
    ]
    return (OK if ok else NEGATIVE), payload, lines


def cmd_check(args):
    ing = ingest(args.file, args.epsilon)
    T = _need_map(ing)
    r = condition_report(ing.space, T, _kind(args), args.lam, args.epsilon)
    payload = _report_dict(r)
    lines = [
        f"theorem: {r.kind}",
        f"condition (I): {'holds' if r.condition_i_holds else 'fails at ' + _fmt(r.condition_i_witness)}",
        f"condition (II): {'holds' if r.condition_ii_holds else 'fails at ' + _fmt(r.condition_ii_witness)}",
    ]
    if r.tight_constant is not None:
        lines.append(f"tight lambda: {_fmt(r.tight_constant)}")
    return (OK if r.hypotheses_hold else NEGATIVE), payload, lines


def cmd_tight_lambda(args):
    ing = ingest(args.file, args.epsilon)
    T = _need_map(ing)
    tc = TIGHT[args.theorem](ing.space, T, args.epsilon)
    payload = _tight_dict(tc)
    interval = tc.admissible_interval
    lines = [
        f"theorem: {tc.kind}",
        f"tight lambda: {_fmt(tc.value)}",
        f"bound: {_fmt(tc.bound)}",
        f"witness: {_fmt(tc.witness)} (lhs {_fmt(tc.witness_lhs)}, rhs {_fmt(tc.witness_rhs)})",
        f"admissible interval: {'[' + _fmt(interval[0]) + ', ' + _fmt(interval[1]) + ')' if interval else 'empty'}",
    ]
    return (OK if tc.satisfiable else NEGATIVE), payload, lines


def cmd_iterate(args):
    ing = ingest(args.file, args.epsilon)
    T = _need_map(ing)
    starts = [args.start] if args.start else list(ing.space.labels)
    traces = {s: picard_iterate(ing.space, T, s, args.max_steps) for s in starts}
    payload = {"orbits": {s: _trace_dict(tr) for s, tr in traces.items()}}
    lines = []
    for s, tr in traces.items():
        lines.append(f"{s}: {' -> '.join(p.label for p in tr.orbit)} [{tr.status}]")
        if tr.cycle:
            lines.append(f"  cycle: {_fmt([p.label for p in tr.cycle])}")
        if tr.triple_values:
            lines.append(f"  triple values: {_fmt(list(tr.triple_values))}")
    ok = all(tr.status == "fixed-point-reached" for tr in traces.values())
    return (OK if ok else NEGATIVE), payload, lines


def cmd_fixed_points(args):
    ing = ingest(args.file, args.epsilon)
    fix = [p.label for p in enumerate_fixed_points(ing.space, _need_map(ing))]
    return OK, {"fixed_points": fix}, [f"fixed points: {_fmt(fix) if fix else '(none)'}"]


def cmd_derive(args):
    ing = ingest(args.file, args.epsilon)
    if args.construction == "delta":
        doc = metric_document(delta_metric(ing.space, args.epsilon), "max", ing.map)
    else:
        if ing.metric is None:
            raise SchemaError(f"--construction {args.construction} needs a metric geometry")
        build = g_from_metric_sum if args.construction == "sum" else g_from_metric_max
        doc = space_document(build(ing.metric), ing.map)
    text = dumps(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        return OK, {"written": args.output, "document": doc}, [f"wrote {args.output}"]
    return OK, {"document": doc}, [text.rstrip("\n")]


def cmd_verify(args):
    ing = ingest(args.file, args.epsilon)
    T = _need_map(ing)
    v = verify_theorem_conclusion(ing.space, T, _kind(args), args.lam, args.epsilon)
    fix = [p.label for p in v.fixed_points]
    payload = {
        "report": _report_dict(v.report),
        "hypotheses_hold": v.hypotheses_hold,
        "failed_hypothesis": v.failed_hypothesis,
        "fixed_points": fix,
        "conclusion_holds": v.conclusion_holds,
        "decay_rate": v.decay_rate,
        "decay_holds": v.decay_holds,
        "orbits": {s: _trace_dict(tr) for s, tr in v.orbits.items()},
    }
    lines = [f"theorem: {v.kind.kind}"]
    if v.hypotheses_hold:
        lines += [
            "hypotheses: hold",
            f"fixed points: {_fmt(fix)} (size {len(fix)})",
            f"conclusion 1 <= |Fix(T)| <= 2 and all orbits fixed: {v.conclusion_holds}",
            f"orbit decay at rate {_fmt(v.decay_rate)}: {v.decay_holds}",
        ]
    else:
        lines += [
            f"hypotheses: condition ({v.failed_hypothesis}) fails; no conclusion asserted",
            f"observed fixed points: {_fmt(fix) if fix else '(none)'}",
        ]
    ok = v.hypotheses_hold and v.conclusion_holds and v.decay_holds
    return (OK if ok else NEGATIVE), payload, lines


def _check(name, value, expected, eps=DEFAULT_EPSILON):
    if isinstance(expected, float):
        ok = value is not None and abs(value - expected) <= eps
    else:
        ok = value == expected
    return {"quantity": name, "value": value, "expected": expected, "ok": bool(ok)}


def reproduce_checks(example: str, lam: float | None, eps: float) -> list[dict]:
    """Recompute the worked numbers from raw coordinates."""
    rows = []
    if example == "3.3":
        inst = triangle_instance(eps)
        m, sp, T1, T2 = inst.metric, inst.space, inst.maps["T1"], inst.maps["T2"]
        rows += [
            _check("d(A,B)", m.dist("A", "B"), 0.5, eps),
            _check("d(B,C)", m.dist("B", "C"), 1.0, eps),
            _check("d(A,C)", m.dist("A", "C"), 1.0, eps),
            _check("G(A,B,C)", sp.G("A", "B", "C"), 1.0, eps),
            _check("G(T1A,T1B,T1C)", sp.G(*(sp.labels[T1(i)] for i in range(3))), 0.5, eps),
            _check("G(T2A,T2B,T2C)", sp.G(*(sp.labels[T2(i)] for i in range(3))), 0.5, eps),
            _check("banach lambda* T1", banach_tight_lambda(sp, T1, eps).value, 0.5, eps),
            _check("banach lambda* T2", banach_tight_lambda(sp, T2, eps).value, 0.5, eps),
        ]
        maps = {"T1": (T1, True, None, ["A", "B"]), "T2": (T2, False, "A", [])}
    elif example == "3.5":
        inst = line_instance(eps)
        sp, T1, T2 = inst.space, inst.maps["T1"], inst.maps["T2"]
        k1, k2 = kannan_tight_lambda(sp, T1, eps), kannan_tight_lambda(sp, T2, eps)
        rows += [
            _check("kannan lhs T1", k1.witness_lhs, 0.2, eps),
            _check("kannan rhs T1", k1.witness_rhs, 1.0, eps),
            _check("kannan lambda* T1", k1.value, 0.2, eps),
            _check("kannan lhs T2", k2.witness_lhs, 0.2, eps),
            _check("kannan rhs T2", k2.witness_rhs, 1.4, eps),
            _check("kannan lambda* T2", k2.value, 1 / 7, eps),
        ]
        maps = {"T1": (T1, True, None, ["a", "b"]), "T2": (T2, False, "a", [])}
    elif example == "reich":
        lam = REICH_DEFAULT_LAMBDA if lam is None else lam
        inst = reich_instance(lam, eps)
        sp, T = inst.space, inst.maps["T"]
        b = inst.coords["b"][0]
        coeffs = (lam,) * 4
        # closed forms for each case, in terms of b and lam
        expected = {
            ("a", "b", "c"): (-b, -b),
            ("a", "b", "d"): (-b, -2 * (1 - lam) * b),
            ("a", "c", "d"): (-b, -(5 - 6 * lam) / 2 * b),
            ("b", "c", "d"): (0.0, lam * (1 + 2 * (2 - 2 * lam)) / (1 - 2 * lam)),
        }
        rows.append(_check("b", b, 2 * lam / (2 * lam - 1), eps))
        for triple, (lhs_e, rhs_e) in expected.items():
            lhs, rhs = reich_sides(sp, T, coeffs, triple)
            name = "".join(triple)
            rows.append(_check(f"lhs({name})", lhs, lhs_e, eps))
            rows.append(_check(f"rhs({name})", rhs, rhs_e, eps))
        rows.append(_check("reich-uniform lambda*", reich_uniform_tight_lambda(sp, T, eps).value, lam, eps))
        maps = {"T": (T, True, None, ["a", "b"])}
    else:
        raise SchemaError(f"unknown example {example!r}")
    for name, (T, one, witness, fix) in maps.items():
        c1 = check_condition_one(sp, T)
        rows.append(_check(f"condition (I) {name}", c1.holds, one))
        if witness is not None:
            rows.append(_check(f"condition (I) witness {name}", c1.witness, witness))
        rows.append(
            _check(f"Fix({name})", [p.label for p in enumerate_fixed_points(sp, T)], fix)
        )
    return rows


def cmd_reproduce(args):
    rows = reproduce_checks(args.example, args.lam, args.epsilon)
    ok = all(r["ok"] for r in rows)
    lines = [
        f"{'ok ' if r['ok'] else 'BAD'} {r['quantity']}: {_fmt(r['value'])} (expected {_fmt(r['expected'])})"
        for r in rows
    ]
    return (OK if ok else NEGATIVE), {"example": args.example, "checks": rows, "all_ok": ok}, lines


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)

    parser = argparse.ArgumentParser(
        prog="gfix",
        description="Fixed-point checks on finite G-metric spaces.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, file=True):
        p = sub.add_parser(name, help=help, parents=[common])
        if file:
            p.add_argument("file", help="SpaceDocument JSON (or the name of a bundled fixture)")
        p.set_defaults(func=func)
        return p

    add("check-axioms", cmd_check_axioms, "verify the G-metric axioms P1-P5")

    theorems = ("banach", "kannan", "reich")
    p = add("check", cmd_check, "check conditions (I) and (II)")
    p.add_argument("--theorem", choices=theorems, required=True)
    p.add_argument("--coeffs", help="reich coefficients a1,a2,a3,a4")
    p.add_argument("--lambda", dest="lam", type=float, help="evaluate (II) at this constant")

    p = add("tight-lambda", cmd_tight_lambda, "smallest admissible constant for (II)")
    p.add_argument("--theorem", choices=theorems, required=True)

    p = add("iterate", cmd_iterate, "run Picard iteration")
    p.add_argument("--start", help="start label (default: every point)")
    p.add_argument("--max-steps", type=int, default=None)

    add("fixed-points", cmd_fixed_points, "list the fixed points of the map")

    p = add("derive", cmd_derive, "emit a derived SpaceDocument")
    p.add_argument("--construction", choices=("sum", "max", "delta"), required=True)
    p.add_argument("-o", "--output")

    p = add("verify", cmd_verify, "check hypotheses and the theorem conclusion")
    p.add_argument("--theorem", choices=theorems, required=True)
    p.add_argument("--coeffs")
    p.add_argument("--lambda", dest="lam", type=float)

    p = add("reproduce", cmd_reproduce, "recompute a worked example from coordinates", file=False)
    p.add_argument("--example", choices=("3.3", "3.5", "reich"), required=True)
    p.add_argument("--lambda", dest="lam", type=float)
    return parser


def run_command(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        code, payload, lines = args.func(args)
    except (InputError, ValueError) as exc:
        if args.format == "json":
            err = {"error": type(exc).__name__, "message": str(exc)}
            for attr in ("axiom", "rule", "witness"):
                if hasattr(exc, attr):
                    err[attr] = getattr(exc, attr)
            out.write(json.dumps(err) + "\n")
        else:
            print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if args.format == "json":
        payload = {"command": args.command, "exit_code": code, **payload}
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def main() -> None:
    sys.exit(run_command())
