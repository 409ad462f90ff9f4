import json
import os
from pathlib import Path

import pytest

from conftest import TABLE1_CSV, TABLE1_SCHEMA
from roughimpute.cli import execute, main, parse_command, write_atomic
from roughimpute.errors import UsageError

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def files(tmp_path):
    t = tmp_path / "t.csv"
    s = tmp_path / "s.json"
    t.write_text(TABLE1_CSV)
    s.write_text(TABLE1_SCHEMA)
    return tmp_path, str(t), str(s)


def test_parse_impute_defaults(files):
    _, t, s = files
    cmd = parse_command(["impute", "--input", t, "--schema", s, "--out", "f.csv"])
    assert cmd.subcommand == "impute"
    a = cmd.args
    assert (a.mode, a.method, a.selection, a.passes) == ("probabilistic", "subset", "max_weight", 3)
    assert a.out == "f.csv"


def test_parse_approx():
    cmd = parse_command(["approx", "--attrs", "x1,x3", "--concept", "D=A", "--method", "subset"])
    assert cmd.subcommand == "approx"
    assert cmd.args.attrs == ["x1", "x3"] and cmd.args.concept == [("D", "A")]
    assert cmd.args.method == "subset"


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["impute", "--mode", "bogus"], "--mode"),
        (["impute", "--wat"], "--wat"),
        (["approx", "--concept", "D=A"], "--attrs"),
        (["approx", "--attrs", "x1", "--concept", "noequals"], "--concept"),
        (["eval", "--fraction", "1.5"], "--fraction"),
        (["impute", "--input", "/no/such/file.csv"], "--input"),
    ],
)
def test_usage_errors(argv, flag):
    with pytest.raises(UsageError, match=flag):
        parse_command(argv)


def test_no_subcommand():
    with pytest.raises(UsageError):
        parse_command([])
    assert main(["impute", "--mode", "bogus"]) == 2


def test_impute_writes_completed_csv(files):
    d, t, s = files
    out, log = d / "f.csv", d / "log.jsonl"
    assert main(["impute", "--input", t, "--schema", s, "--out", str(out), "--log", str(log)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,D"
    assert lines[4] == "1,2,0.3,A"
    assert lines[7].split(",")[2] == "0.3"
    assert [json.loads(l)["attribute"] for l in log.read_text().splitlines()] == ["x1", "x2", "x3"]


def test_impute_to_stdout(files, capsys):
    _, t, s = files
    assert main(["impute", "--input", t, "--schema", s]) == 0
    assert "1,2,0.3,A" in capsys.readouterr().out.splitlines()


def test_data_error_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,D\n1,x\n2\n")
    assert main(["impute", "--input", str(bad)]) == 1
    assert "error" in capsys.readouterr().err
    nodec = tmp_path / "nodec.csv"
    nodec.write_text("a,D\n1,?\n")
    assert main(["impute", "--input", str(nodec)]) == 1


def test_execute(files):
    d, t, s = files
    assert execute(parse_command(["approx", "--input", t, "--schema", s, "--attrs", "x1", "--out", str(d / "a.json")])) == 0
    assert execute(parse_command(["approx", "--input", t, "--schema", s, "--attrs", "nope"])) == 1


def test_threads_env_is_validated(files, monkeypatch):
    _, t, s = files
    monkeypatch.setenv("ROUGHIMPUTE_THREADS", "many")
    assert main(["impute", "--input", t, "--schema", s]) == 2


def test_approx_dump(files):
    d, t, s = files
    out = d / "a.json"
    argv = ["approx", "--input", t, "--schema", s, "--attrs", "x1", "--concept", "D=A", "--method", "singleton", "--out", str(out)]
    assert main(argv) == 0
    (doc,) = json.loads(out.read_text())["approximations"]
    assert doc["lower"] == [] and doc["upper"] == list(range(7))
    assert doc["selector"] == {"attribute": "D", "value": "A"}


def test_approx_all_concepts(files, capsys):
    _, t, s = files
    assert main(["approx", "--input", t, "--schema", s, "--attrs", "x1,x3"]) == 0
    docs = json.loads(capsys.readouterr().out)["approximations"]
    assert [d["selector"]["value"] for d in docs] == ["A", "B"]


def test_partitions_dump(files, capsys):
    _, t, s = files
    capsys.readouterr()
    assert main(["partitions", "--input", t, "--schema", s, "--attrs", "x1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [c["rows"] for c in doc["family"]] == [[2, 3, 4, 5], [0, 1, 3, 6]]
    assert len(doc["pairs"]) == 19
    fam = doc["weighted_family"]
    assert fam[0]["member_weights"]["3"] == 0.5


def test_eval_p1_synthetic(tmp_path, capsys):
    csv = tmp_path / "syn.csv"
    schema = tmp_path / "syn.json"
    assert main(["synth", "--rows", "400", "--seed", "3", "--out", str(csv), "--schema-out", str(schema)]) == 0
    report = tmp_path / "r.json"
    assert main(["eval", "--input", str(csv), "--schema", str(schema), "--out", str(report)]) == 0
    grid = capsys.readouterr().out
    assert grid.splitlines()[2].startswith("Original")
    (rep,) = json.loads(report.read_text())["reports"]
    assert rep["overall"]["accuracy"] == 100.0
    assert all(a["accuracy"] == 100.0 for a in rep["attributes"].values())


def test_eval_with_bins(tmp_path, capsys):
    report = tmp_path / "r.json"
    argv = ["eval", "--input", str(DATA / "table2.csv"), "--decision", "hiv", "--targets", "age,education",
            "--fraction", "0.3", "--bins", str(DATA / "hiv_bins.json"), "--out", str(report)]
    assert main(argv) == 0
    labels = [r["label"] for r in json.loads(report.read_text())["reports"]]
    assert labels == ["Original", "Generalised"]


def test_discretize_and_filter(tmp_path, capsys):
    t2 = str(DATA / "table2.csv")
    out = tmp_path / "b.csv"
    assert main(["discretize", "--input", t2, "--decision", "hiv", "--out", str(out)]) == 0
    first = out.read_text().splitlines()[1].split(",")
    assert first[5] == "[30-39]"
    rep = tmp_path / "rep.json"
    assert main(["filter", "--input", t2, "--decision", "hiv", "--rule", "parity-le-gravidity", "--report", str(rep)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 1 + 9
    assert json.loads(rep.read_text())["rejected"][0]["row"] == 0


def test_dump_default_bins(capsys):
    assert main(["discretize", "--dump-default-bins"]) == 0
    assert json.loads(capsys.readouterr().out) == json.loads((DATA / "hiv_bins.json").read_text())


def _snapshot(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir()) if p.is_file()}


def test_pipeline_is_deterministic_and_read_only(files):
    d, t, s = files
    before = _snapshot(d)
    outs = []
    for run in range(2):
        o = d / f"run{run}"
        o.mkdir()
        main(["impute", "--input", t, "--schema", s, "--out", str(o / "f.csv"), "--log", str(o / "l.jsonl"), "--threads", str(1 + 3 * run)])
        main(["approx", "--input", t, "--schema", s, "--attrs", "x1,x2", "--out", str(o / "a.json")])
        main(["partitions", "--input", t, "--schema", s, "--attrs", "x1,x3", "--out", str(o / "p.json")])
        main(["eval", "--input", t, "--schema", s, "--fraction", "0.3", "--trials", "2", "--out", str(o / "e.json")])
        outs.append(_snapshot(o))
    assert outs[0] == outs[1]
    assert _snapshot(d) == before


def test_write_atomic_leaves_no_temp(tmp_path):
    target = tmp_path / "x.txt"
    target.write_text("old")
    write_atomic(str(target), "new")
    assert target.read_text() == "new"
    assert os.listdir(tmp_path) == ["x.txt"]
    with pytest.raises(OSError):
        write_atomic(str(tmp_path / "missing" / "y.txt"), "z")
