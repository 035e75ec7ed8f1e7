import json
import subprocess
import sys

import pytest

from locograph.cli import main
from locograph.formats import read_csv, read_jsonl


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_census(tmp_path, capsys):
    code, out, _ = run(["census", "--d", "2", "--r", "2", "--max-index", "40", "--out", str(tmp_path)], capsys)
    assert code == 0 and json.loads(out)["total_orbits"] == 116
    cfg, recs = read_jsonl(tmp_path / "census.jsonl")
    assert cfg["max_index"] == 40 and "out" not in cfg
    assert recs[17]["gamma"] == 2 and len(recs) == 40
    header, rows = read_csv(tmp_path / "gamma.csv")
    assert header == ["n", "gamma"] and rows[17] == ["18", "2"]


def test_census_resume_is_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["census", "--d", "2", "--r", "2", "--max-index", "620", "--out", str(a)], capsys)
    run(["census", "--d", "2", "--r", "2", "--max-index", "620", "--out", str(b), "--resume", "--threads", "2"], capsys)
    run(["census", "--d", "2", "--r", "2", "--max-index", "620", "--out", str(b), "--resume"], capsys)
    assert (b / "shards").is_dir()
    assert (a / "gamma.csv").read_bytes() == (b / "gamma.csv").read_bytes()


def test_count_stdout_and_file(tmp_path, capsys):
    code, out, _ = run(["count", "--d", "1", "--r", "1", "--n-max", "10"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config") and lines[1] == "n,b,log_b"
    assert lines[2 + 10].startswith("10,3,")
    run(["count", "--d", "2", "--r", "2", "--n-max", "36", "--out", str(tmp_path)], capsys)
    _, rows = read_csv(tmp_path / "counts.csv")
    assert rows[36][1] == "17"


def test_sample_json_and_byte_identical(tmp_path, capsys):
    outs = []
    for name in ("a.json", "b.json"):
        p = tmp_path / name
        assert run(["sample", "--d", "2", "--r", "2", "--n", "120", "--seed", "5", "--out", str(p)], capsys)[0] == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    rec = json.loads(outs[0])
    assert rec["config"]["seed"] == 5 and sum(rec["report"]["component_orders"]) == 120


def test_sample_edges_then_verify(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert run(["sample", "--d", "2", "--r", "2", "--n", "100", "--format", "edges", "--out", str(g)], capsys)[0] == 0
    report = json.loads((tmp_path / "g.txt.report.json").read_text())
    assert report["config"]["version"] and report["report"]["n"] == 100
    code, out, _ = run(["verify", "--graph", str(g), "--r", "2"], capsys)
    res = json.loads(out)
    assert code == 0 and res["ok"] and res["d"] == 2 and res["vertices"] == 100


def test_sample_many(tmp_path, capsys):
    p = tmp_path / "s.jsonl"
    run(["sample", "--d", "1", "--r", "1", "--n", "30", "--samples", "5", "--out", str(p)], capsys)
    cfg, recs = read_jsonl(p)
    assert cfg["samples"] == 5 and len(recs) == 6 and recs[-1]["aggregate"]["samples"] == 5


def test_verify_failure_is_reported_not_fatal(tmp_path, capsys):
    g = tmp_path / "c.txt"
    g.write_text("# locograph v1 n=5 d=1\n0 1\n0 4\n1 2\n2 3\n3 4\n")
    code, out, _ = run(["verify", "--graph", str(g), "--r", "2"], capsys)
    res = json.loads(out)
    assert code == 0 and not res["ok"] and res["num_failing"] == 5
    assert json.loads(run(["verify", "--graph", str(g), "--r", "1"], capsys)[1])["ok"]


def test_verify_parse_error(tmp_path, capsys):
    g = tmp_path / "bad.txt"
    g.write_text("# locograph v1 n=3 d=1\n0 1\n1 0\n")
    code, _, err = run(["verify", "--graph", str(g), "--r", "1"], capsys)
    assert code == 2 and "line 3" in err
    assert run(["verify", "--graph", str(tmp_path / "missing"), "--r", "1"], capsys)[0] == 2


def test_exit_codes(capsys):
    assert run(["sample", "--d", "2", "--r", "2", "--n", "17"], capsys)[0] == 3
    code, _, err = run(["count", "--d", "2", "--r", "1", "--n-max", "10"], capsys)
    assert code == 2 and "r*(2) = 2" in err
    with pytest.raises(SystemExit) as exc:
        main(["count", "--d", "2", "--r", "2", "--n-max", "-1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["count", "--d", "2", "--r", "2", "--n-m", "5"])


def test_asymptotics(tmp_path, capsys):
    run(["asymptotics", "--d", "2", "--r", "2", "--n-max", "400", "--points", "100", "200", "400", "--out", str(tmp_path)], capsys)
    header, rows = read_csv(tmp_path / "asymptotics.csv")
    assert header[0] == "n" and [r[0] for r in rows] == ["100", "200", "400"]
    for row in rows:
        assert float(row[2]) <= float(row[3])
    _, out, _ = run(["asymptotics", "--d", "1", "--r", "1", "--n-max", "300", "--step", "100"], capsys)
    assert len(out.splitlines()) == 2 + 3


def test_experiment(tmp_path, capsys):
    p = tmp_path / "e.jsonl"
    code, out, _ = run(["experiment", "--d", "2", "--r", "2", "--n", "200", "--samples", "20", "--out", str(p)], capsys)
    assert code == 0 and json.loads(out)["samples"] == 20
    _, recs = read_jsonl(p)
    assert len(recs) == 21 and recs[0]["index"] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "locograph", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("locograph ")
