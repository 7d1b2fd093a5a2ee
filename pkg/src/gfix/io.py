"""SpaceDocument JSON ingestion and serialisation.

A document declares ordered point labels, a geometry and optionally a
self-map::

    {
      "points": ["A", "B", "C"],
      "geometry": {"kind": "euclidean", "coords": {"A": [0.875, 0.484...], ...}},
      "g_construction": "max",
      "map": {"A": "A", "B": "B", "C": "A"}
    }

``geometry.kind`` is ``euclidean`` (``coords``: label -> vector),
``metric-matrix`` (``matrix``: square, point order) or ``g-tensor``
(``tensor``: cubic, point order).  ``g_construction`` (``sum`` or ``max``)
is required for the first two kinds and forbidden for ``g-tensor``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from gfix.core import (
    DEFAULT_EPSILON,
    FiniteGSpace,
    FiniteMetricSpace,
    ParseError,
    SchemaError,
    SelfMap,
    validate_space,
)
from gfix.gmetric import euclidean_metric, g_from_metric_max, g_from_metric_sum

_number_array = {"type": "array", "items": {"type": "number"}}

SPACE_DOCUMENT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["points", "geometry"],
    "additionalProperties": False,
    "properties": {
        "points": {
            "type": "array",
            "items": {"type": "string"},
            "minItems": 1,
            "uniqueItems": True,
        },
        "geometry": {
            "type": "object",
            "required": ["kind"],
            "oneOf": [
                {
                    "properties": {
                        "kind": {"const": "euclidean"},
                        "coords": {
                            "type": "object",
                            "additionalProperties": {"anyOf": [{"type": "number"}, _number_array]},
                        },
                    },
                    "required": ["kind", "coords"],
                    "additionalProperties": False,
                },
                {
                    "properties": {
                        "kind": {"const": "metric-matrix"},
                        "matrix": {"type": "array", "items": _number_array},
                    },
                    "required": ["kind", "matrix"],
                    "additionalProperties": False,
                },
                {
                    "properties": {
                        "kind": {"const": "g-tensor"},
                        "tensor": {"type": "array", "items": {"type": "array", "items": _number_array}},
                    },
                    "required": ["kind", "tensor"],
                    "additionalProperties": False,
                },
            ],
        },
        "g_construction": {"enum": ["sum", "max"]},
        "map": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}

BUNDLED = "data"


@dataclass(frozen=True)
class Ingested:
    """Result of reading a SpaceDocument.

    ``metric`` is set for euclidean and metric-matrix geometries.
    """

    space: FiniteGSpace
    map: SelfMap | None
    metric: FiniteMetricSpace | None
    construction: str | None


def bundled_fixtures() -> list[str]:
    root = resources.files("gfix") / BUNDLED
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def resolve_path(path: str | Path) -> Path | Any:
    """``path`` itself, or the bundled fixture of that file name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("gfix") / BUNDLED / p.name
    if bundled.is_file():
        return bundled
    raise ParseError(f"no such file: {path}")


def load_document(path: str | Path) -> dict:
    target = resolve_path(path)
    try:
        return json.loads(target.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from None


def _shape_check(doc: dict) -> None:
    try:
        jsonschema.validate(doc, SPACE_DOCUMENT_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"schema error at {where}: {exc.message}") from None
    n = len(doc["points"])
    geometry = doc["geometry"]
    kind = geometry["kind"]
    if kind == "g-tensor":
        if "g_construction" in doc:
            raise SchemaError("g_construction is forbidden for a g-tensor geometry")
        if np.shape(geometry["tensor"]) != (n, n, n):
            raise SchemaError(f"tensor must be {n}x{n}x{n} in point order")
    else:
        if "g_construction" not in doc:
            raise SchemaError(f"g_construction is required for a {kind} geometry")
        if kind == "metric-matrix" and np.shape(geometry["matrix"]) != (n, n):
            raise SchemaError(f"matrix must be {n}x{n} in point order")
        if kind == "euclidean" and set(geometry["coords"]) != set(doc["points"]):
            raise SchemaError("coords must give exactly one vector per declared point")


def parse_document(
    doc: dict, epsilon: float = DEFAULT_EPSILON, validate: bool = True
) -> Ingested:
    """Build the (validated) space and optional map described by ``doc``.

    With ``validate=False`` a g-tensor document yields an unvalidated
    space, for callers that want to report axiom verdicts themselves.
    """
    _shape_check(doc)
    labels = doc["points"]
    geometry = doc["geometry"]
    kind = geometry["kind"]
    metric = None
    construction = doc.get("g_construction")
    if kind == "g-tensor":
        space = FiniteGSpace(labels, np.array(geometry["tensor"], dtype=float), "raw-tensor")
        if validate:
            space = validate_space(space, epsilon)
    else:
        if kind == "euclidean":
            metric = euclidean_metric([(x, geometry["coords"][x]) for x in labels], epsilon)
        else:
            metric = FiniteMetricSpace(labels, np.array(geometry["matrix"], dtype=float), epsilon)
        build = g_from_metric_sum if construction == "sum" else g_from_metric_max
        space = build(metric)
    T = SelfMap.from_labels(labels, doc["map"]) if "map" in doc else None
    return Ingested(space, T, metric, construction)


def ingest(path: str | Path, epsilon: float = DEFAULT_EPSILON, validate: bool = True) -> Ingested:
    return parse_document(load_document(path), epsilon, validate)


def _with_map(doc: dict, labels, T: SelfMap | None) -> dict:
    if T is not None:
        doc["map"] = T.to_labels(labels)
    return doc


def space_document(space: FiniteGSpace, T: SelfMap | None = None) -> dict:
    """A g-tensor document holding the full ordered table."""
    doc = {
        "points": list(space.labels),
        "geometry": {"kind": "g-tensor", "tensor": space.g.tolist()},
    }
    return _with_map(doc, space.labels, T)


def metric_document(m: FiniteMetricSpace, construction: str, T: SelfMap | None = None) -> dict:
    doc = {
        "points": list(m.labels),
        "geometry": {"kind": "metric-matrix", "matrix": m.d.tolist()},
        "g_construction": construction,
    }
    return _with_map(doc, m.labels, T)


def euclidean_document(
    coords: dict[str, tuple[float, ...]], construction: str, T: SelfMap | None = None
) -> dict:
    labels = list(coords)
    doc = {
        "points": labels,
        "geometry": {"kind": "euclidean", "coords": {k: list(v) for k, v in coords.items()}},
        "g_construction": construction,
    }
    return _with_map(doc, labels, T)


def dumps(doc: dict) -> str:
    # json emits floats via repr(): the shortest string that round-trips
    return json.dumps(doc, indent=2) + "\n"
