import json
import math
import subprocess
import sys
from fractions import Fraction as F

import pytest

from bellforge import io as bio
from bellforge.acceptance import hardy_behavior
from bellforge.behaviors import CHSH, ConditionalBehavior, InputDistribution, joint_from_conditional
from bellforge.cli import run


def run_cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_behavior(tmp_path, table, name="b.json"):
    path = tmp_path / name
    path.write_text(bio.dumps(bio.behavior_to_json(table)))
    return str(path)


# ---------------------------------------------------------------- io


def test_roundtrip_exact_and_float():
    exact = ConditionalBehavior(CHSH, (F(1, 4),) * 16)
    back = bio.behavior_from_json(json.loads(bio.dumps(bio.behavior_to_json(exact))))
    assert back == exact and back.policy == "exact"
    fl = hardy_behavior()
    back = bio.behavior_from_json(json.loads(bio.dumps(bio.behavior_to_json(fl))))
    assert back.values == fl.values


def test_value_forms_accepted():
    obj = {"scenario": {"nA": 2, "nB": 2, "nX": 2, "nY": 2}, "kind": "input",
           "values": [{"num": 1, "den": 4}, "1/4", {"num": 2, "den": 8}, 0]}
    with pytest.raises(ValueError):
        bio.behavior_from_json(obj)  # sums to 3/4
    obj["values"][3] = "1/4"
    assert bio.behavior_from_json(obj).values == (F(1, 4),) * 4
    obj["values"] = ["0.25"] * 4
    assert bio.behavior_from_json(obj).policy == "float"


def test_malformed_json_objects():
    with pytest.raises(ValueError):
        bio.behavior_from_json({"kind": "joint", "values": []})
    with pytest.raises(ValueError):
        bio.behavior_from_json({"scenario": {"nA": 2, "nB": 2, "nX": 2, "nY": 2}, "kind": "weird", "values": []})
    with pytest.raises(ValueError):
        bio.scalar_from_json({"num": 1})


def test_dumps_format():
    text = bio.dumps({"b": 0.1, "a": [F(1, 3), 2.0, True, None]})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text and "2.0" in text
    assert '"num": 1' in text and text.endswith("\n")
    assert json.loads(text)["b"] == 0.1
    with pytest.raises(ValueError):
        bio.dumps({"x": math.nan})


def test_csv_format():
    text = bio.csv_text(["beta", "kappa"], [(2.0, 1 / 3), (F(1, 2), True)])
    assert text == "beta,kappa\n2,0.333333333333\n1/2,true\n"


# ---------------------------------------------------------------- cli


def test_facet_command(capsys):
    code, out, _ = run_cli(capsys, "facet", "--eps", "1/4")
    rec = json.loads(out)
    assert code == 0
    assert rec["saturating_count"] == 56 and rec["class_counts"] == [28, 16, 4, 4, 4]
    assert rec["facet"] is True and rec["det"] == {"num": 5103, "den": 4194304}


def test_vertices_command(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "vertices", "--kind", "conditional", "--epsA", "1/4", "--epsB", "1/4")
    assert code == 0 and len(json.loads(out)) == 1296
    target = tmp_path / "v.csv"
    code, _, _ = run_cli(capsys, "vertices", "--kind", "input", "--l", "1/8", "--h", "1/2",
                         "--format", "csv", "--out", str(target))
    lines = target.read_bytes().split(b"\n")
    assert code == 0 and lines[0] == b"index,v0,v1,v2,v3" and len(lines) == 14 and b"\r" not in lines[1]


def test_vertices_deterministic_across_jobs(capsys, monkeypatch):
    _, a, _ = run_cli(capsys, "vertices", "--kind", "joint", "--epsA", "1/4", "--epsB", "1/4", "--jobs", "1")
    _, b, _ = run_cli(capsys, "vertices", "--kind", "joint", "--epsA", "1/4", "--epsB", "1/4", "--jobs", "3")
    monkeypatch.setenv("BELLFORGE_JOBS", "2")
    _, c, _ = run_cli(capsys, "vertices", "--kind", "joint", "--epsA", "1/4", "--epsB", "1/4")
    assert a == b == c


def test_decimal_warning(capsys):
    code, out, err = run_cli(capsys, "vertices", "--kind", "input", "--l", "0.25", "--h", "0.25")
    assert code == 0 and "warning" in err
    assert json.loads(out)[0]["values"] == [0.25] * 4


def test_pg_commands(capsys):
    code, out, _ = run_cli(capsys, "pg", "--kappa", "0", "--beta", "2.8284271247")
    assert code == 0 and json.loads(out)["pg"] == pytest.approx(0.5, abs=1e-5)
    code, out, _ = run_cli(capsys, "pg", "--kappa", "1/4", "--curve", "5", "--format", "csv")
    rows = out.split("\n")
    assert rows[0] == "beta,kappa,pg,hmin" and len(rows) == 7 and rows[-1] == ""
    assert rows[1].startswith("2.5,0.25,1,0")
    code, _, err = run_cli(capsys, "pg", "--kappa", "1/4")
    assert code == 2


def test_quantum_then_check(capsys, tmp_path):
    out_path = tmp_path / "q.json"
    code, _, _ = run_cli(capsys, "quantum", "--strategy", "chsh-leak", "--kappa", "1/2", "--out", str(out_path))
    assert code == 0
    code, out, _ = run_cli(capsys, "check", "--ineq", "chsh_leak", "--kappa", "1/2", "--behavior", str(out_path))
    rec = json.loads(out)
    assert rec["value"] == pytest.approx(2 * math.sqrt(2) * (0.5 + math.sqrt(3) / 2), abs=1e-9)
    assert rec["bound"] == 3.0 and rec["violated"] is True


def test_check_mdl_on_hardy(capsys, tmp_path):
    joint = joint_from_conditional(hardy_behavior(), InputDistribution.uniform().as_float())
    path = write_behavior(tmp_path, joint)
    code, out, _ = run_cli(capsys, "check", "--ineq", "mdl", "--l", "1/4", "--h", "1/4", "--behavior", path)
    rec = json.loads(out)
    assert code == 0 and rec["violated"] is True
    assert rec["margin"] == pytest.approx((5 * math.sqrt(5) - 11) / 32, abs=1e-12)


def test_check_kind_mismatch(capsys, tmp_path):
    path = write_behavior(tmp_path, hardy_behavior())
    code, _, err = run_cli(capsys, "check", "--ineq", "mdl", "--behavior", path)
    assert code == 2 and "joint" in err


def test_decompose_command(capsys, tmp_path):
    path = write_behavior(tmp_path, hardy_behavior())
    code, out, _ = run_cli(capsys, "decompose", "--eps", "1/4", "--behavior", path)
    rec = json.loads(out)
    assert code == 0 and rec["status"] == "inside" and rec["residual"] < 1e-10
    assert abs(sum(w["weight"] for w in rec["weights"]) - 1) < 1e-10
    code, out, _ = run_cli(capsys, "decompose", "--eps", "0", "--behavior", path)
    rec = json.loads(out)
    assert rec["status"] == "outside" and len(rec["separator"]["coeffs"]) == 16


def test_malformed_behavior_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli(capsys, "check", "--ineq", "chsh", "--behavior", str(bad))
    assert code == 2 and "malformed" in err
    code, _, _ = run_cli(capsys, "check", "--ineq", "chsh", "--behavior", str(tmp_path / "missing.json"))
    assert code == 2


def test_validation_exit_codes(capsys):
    assert run_cli(capsys, "vertices", "--kind", "input", "--l", "1/2", "--h", "1/2")[0] == 2
    assert run_cli(capsys, "facet", "--eps", "3/2")[0] == 2
    assert run_cli(capsys, "facet", "--eps", "x/y")[0] == 2
    assert run_cli(capsys, "bogus")[0] == 2
    assert run_cli(capsys, "vertices", "--kind", "input", "--jobs", "0")[0] == 2


def test_numeric_breakdown_exit_code(capsys, monkeypatch):
    from bellforge import cli
    from bellforge.numerics import NumericBreakdown

    def boom(*a, **k):
        raise NumericBreakdown("forced")

    monkeypatch.setattr(cli, "point", boom)
    assert run_cli(capsys, "pg", "--kappa", "0.5", "--beta", "3.5")[0] == 3


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "bellforge.cli", "pg", "--kappa", "3/4", "--beta", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["pg"] == 0.5
