import io
import json
from importlib import resources

import numpy as np
import pytest

from gfix.cli import run_command
from gfix.fixtures import line_instance, reich_instance, triangle_instance
from gfix.gmetric import g_from_metric_sum
from gfix.io import bundled_fixtures, dumps, euclidean_document, ingest, space_document


def run(*argv):
    buf = io.StringIO()
    code = run_command(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    return code, json.loads(text)


def test_bundled_fixtures_match_regenerated():
    regenerated = {
        "example-3.3.json": (triangle_instance(), "T1"),
        "example-3.3-t2.json": (triangle_instance(), "T2"),
        "example-3.5.json": (line_instance(), "T1"),
        "example-3.5-t2.json": (line_instance(), "T2"),
        "reich-example.json": (reich_instance(), "T"),
    }
    assert bundled_fixtures() == sorted(regenerated)
    for name, (inst, map_name) in regenerated.items():
        stored = json.loads((resources.files("gfix") / "data" / name).read_text())
        assert stored == euclidean_document(inst.coords, "max", inst.maps[map_name])


@pytest.mark.parametrize(
    "argv, code",
    [
        (["check-axioms", "example-3.3.json"], 0),
        (["check", "example-3.3.json", "--theorem", "banach"], 0),
        (["check", "example-3.3-t2.json", "--theorem", "banach"], 1),
        (["tight-lambda", "example-3.5.json", "--theorem", "kannan"], 0),
        (["iterate", "example-3.3.json"], 0),
        (["iterate", "example-3.3-t2.json", "--start", "C"], 1),
        (["fixed-points", "example-3.3-t2.json"], 0),
        (["verify", "reich-example.json", "--theorem", "reich", "--coeffs", "0.125,0.125,0.125,0.125"], 0),
        (["verify", "example-3.5-t2.json", "--theorem", "kannan"], 1),
        (["reproduce", "--example", "3.3"], 0),
        (["reproduce", "--example", "3.5"], 0),
        (["reproduce", "--example", "reich", "--lambda", "0.2"], 0),
        (["check", "no-such-file.json", "--theorem", "banach"], 2),
        (["check", "example-3.3.json", "--theorem", "banach", "--coeffs", "0.1,0.1,0.1,0.1"], 2),
        (["check", "example-3.3.json", "--theorem", "kannan", "--lambda", "0.5"], 2),
        (["reproduce", "--example", "reich", "--lambda", "0.3"], 2),
        (["bogus-command"], 2),
    ],
)
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


@pytest.mark.parametrize(
    "argv",
    [
        ["tight-lambda", "example-3.3.json", "--theorem", "banach"],
        ["verify", "example-3.3-t2.json", "--theorem", "banach"],
        ["iterate", "example-3.3-t2.json"],
        ["reproduce", "--example", "3.5"],
    ],
)
def test_json_and_text_agree(argv):
    code_t, text = run(*argv)
    code_j, payload = run_json(*argv)
    assert code_t == code_j == payload["exit_code"]
    assert payload["command"] == argv[0]
    assert text.strip()


def test_tight_lambda_payload():
    code, p = run_json("tight-lambda", "example-3.3.json", "--theorem", "banach")
    assert code == 0
    assert p["tight_lambda"] == pytest.approx(0.5)
    assert p["admissible_interval"] == pytest.approx([0.5, 1.0])
    assert p["witness"] == ["A", "B", "C"]


def test_verify_negative_control_payload():
    code, p = run_json("verify", "example-3.3-t2.json", "--theorem", "kannan")
    assert code == 1
    assert p["failed_hypothesis"] == "I"
    assert p["conclusion_holds"] is None and p["fixed_points"] == []
    assert p["report"]["condition_ii_holds"] is True


def test_asymmetric_tensor_reports_p3_witness(tmp_path):
    sp = g_from_metric_sum(triangle_instance().metric)
    doc = space_document(sp)
    doc["geometry"]["tensor"][0][1][2] += 0.5
    path = tmp_path / "bad.json"
    path.write_text(dumps(doc))
    code, p = run_json("check", str(path), "--theorem", "banach")
    assert code == 2
    assert p["axiom"] == "P3" and p["witness"] == ["A", "B", "C"]
    code, p = run_json("check-axioms", str(path))
    assert code == 1
    verdicts = {a["axiom"]: a for a in p["axioms"]}
    assert not verdicts["P3"]["holds"] and verdicts["P1"]["holds"]


@pytest.mark.parametrize(
    "doc, message",
    [
        ({"points": ["A"]}, "geometry"),
        ({"points": ["A", "B"], "geometry": {"kind": "metric-matrix", "matrix": [[0, 1], [1, 0]]}}, "g_construction"),
        ({"points": ["A", "B"], "geometry": {"kind": "metric-matrix", "matrix": [[0, 1]]}, "g_construction": "sum"}, "2x2"),
    ],
)
def test_schema_errors(tmp_path, doc, message):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, p = run_json("fixed-points", str(path))
    assert code == 2 and message in p["message"]


def test_malformed_json(tmp_path):
    path = tmp_path / "doc.json"
    path.write_text("{not json")
    code, p = run_json("check-axioms", str(path))
    assert code == 2 and p["error"] == "ParseError"


@pytest.mark.parametrize("construction", ["sum", "max", "delta"])
def test_derive_round_trip(tmp_path, construction):
    out = tmp_path / "derived.json"
    code, _ = run("derive", "example-3.3.json", "--construction", construction, "-o", str(out))
    assert code == 0
    derived = ingest(out)
    source = ingest("example-3.3.json")
    assert derived.map == source.map
    if construction == "max":
        assert np.allclose(derived.space.g, source.space.g, atol=1e-12)
    elif construction == "sum":
        assert np.allclose(derived.space.g, g_from_metric_sum(source.metric).g, atol=1e-12)
    else:
        # delta of a max-form space is the original metric
        assert np.allclose(derived.metric.d, source.metric.d, atol=1e-12)


def test_derive_stdout_is_a_document():
    code, text = run("derive", "example-3.5.json", "--construction", "sum")
    assert code == 0 and json.loads(text)["geometry"]["kind"] == "g-tensor"
    code, p = run_json("derive", "example-3.5.json", "--construction", "sum")
    assert p["document"]["geometry"]["kind"] == "g-tensor"


def test_text_output_mentions_witness():
    _, text = run("check", "example-3.5-t2.json", "--theorem", "kannan")
    assert "condition (I): fails at a" in text
