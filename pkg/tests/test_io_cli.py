import csv
import io as stdio
import json
import math

import numpy as np
import pytest

from cqdp import cli
from cqdp.dp import ClassicalTuple, DensityTuple, cq_dp_check
from cqdp.errors import InvalidInput, ParseError, ValidationError
from cqdp.io import SWEEP_COLUMNS, emit_sweep, emit_tuple, load_tuple, parse_tuple
from cqdp.witness import canonical_witness

from conftest import LN2, random_dp_tuple


def test_parse_classical():
    t = parse_tuple(json.dumps({"kind": "classical", "payload": [[2 / 3, 1 / 3], [1 / 3, 2 / 3]]}))
    assert isinstance(t, ClassicalTuple) and t.n == 2 and t.dim == 2


def test_parse_density():
    half = [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]
    t = parse_tuple(json.dumps({"kind": "density", "payload": [half, half]}))
    assert isinstance(t, DensityTuple) and t.n == 2
    np.testing.assert_array_equal(t[0], np.eye(2) / 2)


def test_parse_errors():
    with pytest.raises(ValidationError, match="probability normalization") as exc:
        parse_tuple(json.dumps({"kind": "classical", "payload": [[0.5, 0.5], [0.6, 0.3]]}))
    assert exc.value.location == "$.payload[1]"
    with pytest.raises(ParseError, match=r"payload\[1\]"):
        parse_tuple(json.dumps({"kind": "classical", "payload": [[0.5, 0.5], [1.0]]}))
    with pytest.raises(ParseError, match="kind"):
        parse_tuple(json.dumps({"kind": "nope", "payload": []}))
    with pytest.raises(ParseError):
        parse_tuple("{not json")
    with pytest.raises(ParseError, match=r"payload\[0\]\[0\]\[1\]"):
        parse_tuple(json.dumps({"kind": "density", "payload": [[[1, [0, 0, 0]], [0, 0]], [[1, 0], [0, 0]]]}))
    with pytest.raises(ValidationError, match="tuple size"):
        parse_tuple(json.dumps({"kind": "classical", "payload": []}))
    with pytest.raises(ValidationError, match="unit trace"):
        parse_tuple(json.dumps({"kind": "density", "payload": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]}))


def test_round_trip_classical_is_exact(rng):
    for _ in range(10):
        t = random_dp_tuple(4, 6, 1.3, rng)
        text = emit_tuple(t, 1.3)
        back, doc = load_tuple(text)
        np.testing.assert_array_equal(back.vectors, t.vectors)
        assert emit_tuple(back, 1.3) == text
        assert doc["eps_hint"] == 1.3


def test_round_trip_witness():
    w = canonical_witness(LN2, 0.7, d=3)
    text = emit_tuple(w, LN2, {"note": "x"})
    back, doc = load_tuple(text)
    for a, b in zip(w.states, back.states):
        np.testing.assert_array_equal(a, b)
    assert cq_dp_check(back, LN2) == cq_dp_check(w, LN2)
    assert doc["metadata"] == {"note": "x"}


def test_emit_refuses_non_tuples():
    with pytest.raises(InvalidInput):
        emit_tuple([])


def test_emit_sweep_columns():
    text = emit_sweep([{"eps": 0.5, "kind": "m2", "value": 0.25}])
    rows = list(csv.reader(stdio.StringIO(text)))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert rows[1] == ["0.5", "", "", "", "", "", "m2", "0.25"]


def test_real_literals():
    assert cli.real("ln2") == math.log(2)
    assert cli.real("ln(3)") == math.log(3)
    assert cli.real("0.25") == 0.25
    assert cli.int_list("0,2..4") == [0, 2, 3, 4]


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_certify_canonical(tmp_path, capsys):
    f = tmp_path / "w.json"
    assert run(["construct-witness", "--d", "2", "--eps", "ln2", "--c", "0.5", "--t-max", "--out", str(f)], capsys)[0] == 0
    code, out, _ = run(["certify", "--eps", "ln2", "--input", str(f)], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "NOT_IN_EC"
    i = rep["theta_grid"].index(0.5)
    assert rep["margins"][i] == pytest.approx(1 / 9, abs=1e-9)
    assert rep["margin_tol"] == 1e-7 and rep["dp_tol"] == 1e-9


def test_cli_certify_classical_is_negative(tmp_path, capsys):
    f = tmp_path / "c.json"
    run(["construct-classical", "--n", "3", "--eps", "ln2", "--out", str(f)], capsys)
    code, out, _ = run(["certify", "--input", str(f), "--theta-points", "5"], capsys)
    assert code == 1 and json.loads(out)["verdict"] == "INCONCLUSIVE"


def test_cli_certify_not_dp_is_error(tmp_path, capsys):
    f = tmp_path / "w.json"
    run(["construct-witness", "--d", "2", "--eps", "1", "--c", "0.5", "--out", str(f)], capsys)
    code, _, err = run(["certify", "--eps", "0.5", "--input", str(f)], capsys)
    assert code == 2 and "not CQ eps-DP" in err


def test_cli_subset(tmp_path, capsys):
    w = canonical_witness(LN2, 0.5)
    f = tmp_path / "big.json"
    f.write_text(emit_tuple(DensityTuple(list(w.states) + [np.eye(2) / 2]), LN2))
    code, out, _ = run(["certify", "--input", str(f), "--subset", "0,1,2"], capsys)
    assert code == 0 and json.loads(out)["subset"] == [0, 1, 2]


def test_cli_classical_max_methods(capsys):
    vals = {}
    for m in ("closed", "lp", "grouped"):
        code, out, _ = run(["classical-max", "--n", "3", "--eps", "ln2", "--theta", "0.5", "--method", m], capsys)
        assert code == 0
        vals[m] = json.loads(out)["value"]
    assert vals["lp"] == pytest.approx(1 / 3, abs=1e-12)
    assert max(vals.values()) - min(vals.values()) < 1e-9


def test_cli_verify(tmp_path, capsys):
    f = tmp_path / "c.json"
    run(["construct-classical", "--n", "2", "--k", "1", "--eps", "ln2", "--out", str(f)], capsys)
    code, out, _ = run(["verify", "--eps", "0.5", "--input", str(f)], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["is_dp"] is False and len(rep["worst_pair"]) == 2
    assert rep["min_epsilon"] == pytest.approx(LN2, abs=1e-12)
    code, out, _ = run(["verify", "--eps", "ln2", "--input", str(f)], capsys)
    assert code == 0 and json.loads(out)["is_dp"]


def test_cli_verify_infeasible(tmp_path, capsys):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"kind": "classical", "payload": [[1, 0], [0, 1]]}))
    code, out, _ = run(["verify", "--eps", "1", "--input", str(f)], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["infeasible"] and rep["min_epsilon"] is None


def test_cli_fisher(tmp_path, capsys):
    f = tmp_path / "c.json"
    run(["construct-classical", "--n", "2", "--k", "1", "--eps", "ln2", "--out", str(f)], capsys)
    code, out, _ = run(["fisher", "--theta", "0.5", "--input", str(f)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["J"][0][1] == pytest.approx(4 / 9, abs=1e-14)


def test_cli_sweep(tmp_path, capsys):
    f = tmp_path / "s.csv"
    code, _, _ = run(["sweep", "--quantity", "mnc", "--n", "2..4", "--eps", "ln2,1", "--theta", "0.5", "--out", str(f)], capsys)
    assert code == 0
    rows = list(csv.DictReader(f.open()))
    assert len(rows) == 6
    assert float(rows[2]["value"]) == pytest.approx(1 / 3)
    for q in ("m2", "gap-ratio", "thm1-margin", "cq-limit"):
        code, out, _ = run(["sweep", "--quantity", q], capsys)
        assert code == 0 and out.startswith("eps,theta")


def test_cli_deterministic(tmp_path, capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(["construct-witness", "--d", "3", "--eps", "1", "--c", "0.6"], capsys)
        outs.append(out)
    assert outs[0] == outs[1]


def test_cli_usage_errors(capsys):
    assert run(["certify"], capsys)[0] == 2
    assert run(["verify", "--eps", "1", "--input", "/nonexistent.json"], capsys)[0] == 2
