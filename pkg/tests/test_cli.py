import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from toricbary.cli import run
from toricbary.documents import (
    FIXTURES,
    fixture,
    parse_fixture_spec,
    parse_polytope,
    to_jsonable,
)
from toricbary.errors import DocumentError

F = Fraction
SQUARE_JSON = '{"dimension":2,"conormals":[[-1,0],[1,0],[0,-1],[0,1]],"supports":["0","1","0","1"]}'
ALL_FIXTURES = ["simplex:2,1", "simplex:3,5/3", "cube:2,1", "cube:3,2", "trapezoid:3,1,1", "trapezoid:5,3/2,2", "delpezzo1"]


def cli(*argv, stdin=None):
    out = io.StringIO()
    if stdin is not None:
        old, sys.stdin = sys.stdin, io.StringIO(stdin)
    try:
        code = run(list(argv), out=out)
    except SystemExit as e:
        code = e.code
    finally:
        if stdin is not None:
            sys.stdin = old
    text = out.getvalue()
    return code, (json.loads(text) if text else None), text


def test_parse_unit_square():
    doc = parse_polytope(SQUARE_JSON)
    assert doc.dimension == 2 and doc.supports == (0, 1, 0, 1)
    assert doc.build().vertices == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_parse_rational_support():
    doc = parse_polytope('{"dimension":1,"conormals":[[-1],[1]],"supports":["0","1/3"]}')
    assert doc.supports[1] == F(1, 3)


@pytest.mark.parametrize(
    "text, message",
    [
        ('{"dimension":2,"conormals":[[2,4]],"supports":["1"]}', "non-primitive conormal"),
        ('{"dimension":2,\n "conormals": [[1,0],', r"parse error at line 2 column \d+"),
        ('{"dimension":1,"conormals":[[-1],[1]],"supports":["0","0.5"]}', "bad rational '0.5'"),
        ('{"dimension":1,"conormals":[[-1],[1]],"supports":["0",0.5]}', "bad rational '0.5'"),
        ('{"dimension":1,"conormals":[[-1],[1]],"supports":["0","1/0"]}', "bad rational '1/0'"),
        ('{"dimension":2,"conormals":[[-1,0],[1]],"supports":["0","1"]}', "dimension mismatch"),
        ('{"dimension":1,"conormals":[[-1],[1]],"supports":["0"]}', "dimension mismatch"),
        ('{"dimension":1,"conormals":[[1],[1],[-1]],"supports":["0","1","0"]}', "duplicate conormal"),
        ('[1, 2]', "JSON object"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(DocumentError, match=message):
        parse_polytope(text)


def test_fixtures():
    s = fixture("simplex", [2, 1])
    assert s.conormals == ((-1, 0), (0, -1), (1, 1)) and s.supports == (0, 0, 1)
    t = parse_fixture_spec("trapezoid:3,1,1").build()
    assert set(t.vertices) == {(0, 0), (3, 0), (2, 1), (0, 1)}
    d = fixture("delpezzo1")
    assert d.conormals == ((1, 0), (0, 1), (-1, -1), (1, 1)) and d.supports == (1, 1, 1, 1)
    assert len(d.build().vertices) == 4
    assert set(FIXTURES) == {"simplex", "cube", "trapezoid", "delpezzo1"}


@pytest.mark.parametrize("spec", ["nope:1", "trapezoid:1,1,1", "trapezoid:3,1", "simplex:0,1", "cube:2,-1", "simplex:2,x"])
def test_fixture_errors(spec):
    with pytest.raises(DocumentError):
        parse_fixture_spec(spec)


@pytest.mark.parametrize("spec", ALL_FIXTURES)
def test_round_trip(spec):
    doc = parse_fixture_spec(spec)
    assert parse_polytope(doc.serialize()) == doc


def test_to_jsonable_rejects_floats():
    with pytest.raises(TypeError):
        to_jsonable({"x": 0.5})


def test_cli_invariant_example():
    code, rep, _ = cli("invariant", "--fixture", "trapezoid:3,1,1", "--L", "1", "--loop", "0,1")
    assert code == 0
    assert rep["results"]["value"] == "8/15"
    assert rep["command"] == "invariant" and rep["input_digest"].startswith("sha256:")


def test_cli_cpn_example():
    code, rep, _ = cli("cpn", "--n", "2", "--weights", "1,1,1")
    r = rep["results"]
    assert code == 0
    assert (r["maslov"], r["cw_over_volume"], r["equal"], r["torsion"]) == (6, "1", True, 0)


def test_cli_cpn_scale():
    code, rep, _ = cli("cpn", "--n", "1", "--weights", "2,1", "--scale", "7/3")
    assert code == 0 and rep["results"]["cw_over_volume"] == "3/2" and rep["results"]["equal"]


def test_cli_validate_delpezzo():
    code, rep, _ = cli("validate", "--fixture", "delpezzo1")
    r = rep["results"]
    assert code == 0 and r["delzant"]
    assert r["monotone"]["kappa"] == "1" and r["face_counts"] == [4, 4, 1]


def test_cli_validate_non_delzant(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dimension":2,"conormals":[[-1,0],[0,-1],[1,2]],"supports":["0","0","2"]}')
    code, rep, _ = cli("validate", str(path))
    assert code == 2
    assert rep["results"]["delzant"] is False
    assert rep["results"]["offending"][0]["determinant"] in (2, -2)


def test_cli_reads_stdin():
    code, rep, _ = cli("barycenters", "-", "--k", "2", stdin=SQUARE_JSON)
    assert code == 0 and rep["results"]["bary"] == ["1/2", "1/2"]


def test_cli_barycenters_full():
    code, rep, _ = cli("barycenters", "--fixture", "trapezoid:3,1,1")
    r = rep["results"]
    assert r["vol"] == ["4", "7", "5/2"]
    assert r["bary"][2] == ["19/15", "7/15"]
    assert len(r["faces"]) == 9


def test_cli_invariants_and_collinear():
    code, rep, _ = cli("invariants", "--fixture", "delpezzo1", "--loop", "1,1")
    r = rep["results"]
    assert code == 0
    assert [v["value"] for v in r["values"]][0] == "0"
    assert r["monotone"]["futaki"] == "4/3"
    assert r["euler_identity"]["holds"] and r["euler_identity"]["lhs"] == "-2/3"
    code, rep, _ = cli("collinear", "--fixture", "delpezzo1")
    assert rep["results"]["c_delta"] == "2" and rep["results"]["monotone_identity"]


def test_cli_masslinear_and_obstruct():
    code, rep, _ = cli("masslinear", "--fixture", "trapezoid:3,1,1", "--loop", "1,0", "--seed", "4", "--samples", "5")
    assert code == 0 and rep["results"]["verdict"] == "nonlinear" and rep["seed"] == 4
    code, rep, _ = cli("masslinear", "--fixture", "simplex:2,1", "--loop", "1,1", "--threads", "2")
    assert rep["results"]["verdict"] == "linear"
    code, rep, _ = cli("obstruct", "--fixture", "trapezoid:3,1,1", "--loop", "0,1")
    assert rep["results"]["verdict"] == "obstruction"
    assert rep["results"]["reference_pairings"][1]["value"] == "-4/105"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["invariant", "--fixture", "simplex:2,1", "--L", "1"], 1),
        (["invariant", "--fixture", "simplex:2,1", "--L", "1", "--loop", "1,2,3"], 1),
        (["invariant", "--fixture", "simplex:2,1", "--L", "7", "--loop", "1,2"], 1),
        (["bogus"], 1),
        (["collinear"], 1),
        (["collinear", "--fixture", "trapezoid:1,1,1"], 2),
        (["collinear", "/nonexistent/file.json"], 2),
        (["collinear", "--fixture", "nope"], 2),
    ],
)
def test_cli_exit_codes(argv, code):
    assert cli(*argv)[0] == code


def test_cli_precondition_exit_code(monkeypatch):
    import toricbary.cli as mod
    from toricbary.errors import NotMonotoneError

    def boom(*a, **k):
        raise NotMonotoneError()

    monkeypatch.setattr(mod, "collinearity_report", boom)
    assert cli("collinear", "--fixture", "delpezzo1")[0] == 3


def test_cli_invariant_violation_exit_code(monkeypatch):
    import toricbary.cli as mod
    from toricbary.invariants import EulerCheck

    monkeypatch.setattr(mod, "euler_identity_check", lambda p, l: EulerCheck(F(1), F(2), 4))
    assert cli("invariants", "--fixture", "delpezzo1", "--loop", "1,1")[0] == 4


def _floats(x):
    if isinstance(x, float):
        yield x
    elif isinstance(x, dict):
        for v in x.values():
            yield from _floats(v)
    elif isinstance(x, list):
        for v in x:
            yield from _floats(v)


@pytest.mark.parametrize("spec", ALL_FIXTURES)
def test_reports_never_contain_floats(spec):
    doc = parse_fixture_spec(spec)
    loop = ",".join("1" for _ in range(doc.dimension))
    for argv in (
        ["validate"], ["barycenters"], ["collinear"],
        ["invariants", "--loop", loop], ["obstruct", "--loop", loop, "--samples", "2"],
    ):
        code, rep, text = cli(argv[0], "--fixture", spec, *argv[1:])
        assert code == 0
        assert not list(_floats(json.loads(text, parse_float=float)))


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "toricbary", "invariant", "--fixture", "trapezoid:3,1,1", "--L", "1", "--loop", "0,1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["value"] == "8/15"
