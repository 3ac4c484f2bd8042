import io
import json
import shlex
from fractions import Fraction
from pathlib import Path

import pytest

from lefkit import arakelov as ara
from lefkit import cli
from lefkit import local as loc
from lefkit import serialize as ser
from lefkit import splitting as spl
from lefkit.errors import ContractError
from lefkit.models import (
    arithmetic_surface_toy,
    bgs_assemble,
    cyc2_graph,
    graph_cycles,
    random_filtered_instance,
    random_lefschetz_module,
    reduction_graph_model,
    toy_cycles,
    two_curve_strata,
)

from conftest import FIXTURES, load_fixture

SNAP = Path(__file__).parent / "snapshots"
CASES = json.loads((SNAP / "cases.json").read_text())


def run(line):
    buf = io.StringIO()
    code = cli.run(shlex.split(line), buf)
    return code, buf.getvalue()


def payload(line):
    code, text = run(line)
    assert code == 0, text
    return json.loads(text)["payload"]


# -- serialization


def roundtrip(doc):
    kind, obj = ser.load(json.loads(ser.dumps(doc)))
    return kind, obj


def test_rationals_as_strings():
    assert ser.vec_to_json((Fraction(3, 2), 0, -1)) == ["3/2", "0", "-1"]
    assert ser.q("3/2") == Fraction(3, 2)
    assert ser.q(4) == 4
    for bad in (0.5, True, "x", "1/0", None):
        with pytest.raises(ContractError):
            ser.q(bad)


def test_dumps_stable():
    assert ser.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


@pytest.mark.parametrize("seed", range(5))
def test_roundtrip_lefschetz(seed):
    M = random_lefschetz_module(seed)
    kind, (N, P) = roundtrip(ser.lefschetz_doc(M))
    assert kind == "lefschetz" and P is None
    assert ser.module_to_json(N) == ser.module_to_json(M)


@pytest.mark.parametrize("seed", range(5))
def test_roundtrip_filtered(seed):
    inst = random_filtered_instance(seed)
    doc = ser.filtered_to_json(inst.filtered, inst.pairing, inst.eps)
    kind, (F, P, eps) = roundtrip(doc)
    assert kind == "filtered"
    assert ser.filtered_to_json(F, P, eps) == doc


def test_roundtrip_local_model():
    g = cyc2_graph()
    _, m = reduction_graph_model(g)
    doc = ser.local_model_to_json(m, graph_cycles(g))
    kind, (m2, cycles) = roundtrip(doc)
    assert kind == "local_model"
    assert ser.local_model_to_json(m2, cycles) == doc


def test_roundtrip_arakelov():
    d = arithmetic_surface_toy(2, 6, [[-1]], fibers=[cyc2_graph()])
    doc = ser.arakelov_to_json(d, toy_cycles(d))
    kind, (d2, cycles) = roundtrip(doc)
    assert kind == "arakelov" and len(d2.places) == 1
    assert ser.arakelov_to_json(d2, cycles) == doc


def test_roundtrip_strata():
    s = two_curve_strata()
    doc = ser.strata_to_json(s)
    kind, t = roundtrip(doc)
    assert kind == "strata" and ser.strata_to_json(t) == doc


@pytest.mark.parametrize("doc, msg", [
    ([], "top level"),
    ({}, "lefkit_schema"),
    ({"lefkit_schema": 2}, "lefkit_schema"),
    ({"lefkit_schema": 1, "kind": "nope"}, "unknown kind"),
    ({"lefkit_schema": 1, "kind": "lefschetz"}, "missing field"),
    ({"lefkit_schema": 1, "kind": "lefschetz", "n": 0, "dims": {"0": 1}, "L": {"0": [["1"]]}}, "expected 0 rows"),
])
def test_load_rejects(doc, msg):
    with pytest.raises(ContractError, match=msg):
        ser.load(doc)


def test_load_rejects_float_entry():
    doc = ser.lefschetz_doc(random_lefschetz_module(1))
    doc["L"] = {k: [[0.5 for _ in row] for row in v] for k, v in doc["L"].items()}
    if doc["L"]:
        with pytest.raises(ContractError):
            ser.load(doc)


# -- CLI


def test_documented_cli_examples():
    assert payload("local height fixtures/cyc2.json --z comp1 --w comp2") == {"value": "-1/8"}
    p = payload("global decompose fixtures/toy.json")
    assert p["h_L"] == "3/2" and p["beta_XK"] == "3/2·X_eps" and p["c1_L0_top"] == "0"
    code, text = run("validate fixtures/empty.json")
    assert code == 0 and json.loads(text)["diagnostics"] == []


def test_exit_codes(tmp_path):
    assert run("validate empty.json")[0] == 0
    assert run("gen toy --nt [[1]]")[0] == 2
    assert run("gen toy --dK 0")[0] == 3
    assert run("nonsense")[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"lefkit_schema": 1,')
    code, text = run(f"validate {bad}")
    res = json.loads(text)
    assert code == 3 and res["status"] == "contract_error" and "payload" not in res
    assert "malformed JSON at line 1" in res["diagnostics"][0]


def test_hypothesis_violation_has_diagnostics():
    code, text = run("gen toy --dK 2 --Lsq 6 --nt [[1]]")
    res = json.loads(text)
    assert code == 2 and res["status"] == "hypothesis_violation"
    assert res["diagnostics"] and "IndexViolation" in res["diagnostics"][0]


def test_out_writes_payload(tmp_path):
    out = tmp_path / "toy.json"
    code, text = run(f"gen toy --out {out}")
    assert code == 0
    assert out.read_text() == ser.dumps(json.loads(text)["payload"])
    assert payload(f"global decompose {out}")["h_L"] == "3/2"


def test_fixture_env(tmp_path, monkeypatch):
    doc = json.loads((FIXTURES / "cyc2.json").read_text())
    (tmp_path / "mine.json").write_text(ser.dumps(doc))
    assert run("validate mine.json")[0] == 3
    monkeypatch.setenv("LEFKIT_FIXTURES", str(tmp_path))
    assert payload("validate mine.json") == {"kind": "local_model"}


def test_cycle_syntax():
    assert payload("local height cyc2.json --z 1:1,0,0,0 --w 1:0,1,0,0") == {"value": "-1/8"}
    assert run("local height cyc2.json --z nope --w comp1")[0] == 3
    assert run("local height cyc2.json --z x:1 --w comp1")[0] == 3
    assert run("local height cyc2.json --z 1:a --w comp1")[0] == 3


# the CLI is an adapter: compare with direct API calls


def test_adapter_local():
    _, (m, cycles) = load_fixture("cyc2.json")
    z = m.cycle(*cycles["comp1"])
    w = m.cycle(*cycles["comp2"])
    assert payload("local height cyc2.json --z comp1 --w comp2")["value"] == ser.vec_to_json(
        (loc.local_height(m, z, w),))[0]
    lift = loc.arakelov_lift(m, m.cycle(*cycles["vert1"]))
    assert payload("local lift cyc2.json --cycle vert1")["lift"] == ser.vec_to_json(lift.coords)


def test_adapter_split():
    _, (F, _, _) = load_fixture("random1.json")
    S = spl.three_step_split(F)
    p = payload("split three-step random1.json")
    for name in ("alpha0", "alpha1", "alpha2", "beta"):
        assert p[name] == ser.map_to_json(getattr(S, name))


def test_adapter_global():
    _, (d, _) = load_fixture("toy.json")
    S = ara.decompose(d)
    p = payload("global decompose toy.json")
    assert p["L0"] == ser.map_to_json(S.L0)
    assert payload("global equiv toy.json") == json.loads(json.dumps(ara.gs_beilinson_equivalence(d).to_json()))


def test_adapter_strata():
    f = bgs_assemble(two_curve_strata()).fiber
    p = payload("local report bgs_two_points.json")
    r = loc.conjecture_report(f)
    assert p == dict(r.to_json(), all_hold=r.all_hold)


# snapshots


@pytest.mark.parametrize("name, line", CASES, ids=[c[0] for c in CASES])
def test_snapshot(name, line, monkeypatch):
    monkeypatch.delenv("LEFKIT_FIXTURES", raising=False)
    monkeypatch.chdir(SNAP)
    code, text = run(line)
    assert f"exit {code}\n" + text == (SNAP / f"{name}.out").read_text()
