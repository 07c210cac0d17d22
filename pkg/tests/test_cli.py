import csv
import json
import subprocess
import sys

import pytest

from hypermis.cli import main
from hypermis.hypergraph import Hypergraph, load, save


def run(*argv):
    return main([str(a) for a in argv])


def records(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_gen_writes_loadable_file(tmp_path):
    out = tmp_path / "h.txt"
    assert run("gen", "--n", 30, "--r", 4, "--delta-max", 3, "--seed", 2, "--out", out) == 0
    H = load(out)
    assert H.n == 30 and H.rank == 4 and H.max_degree <= 3


def test_gen_to_stdout(capsys):
    assert run("gen", "--n", 6, "--r", 3, "--delta-max", 1, "--seed", 0) == 0
    assert capsys.readouterr().out.startswith("6 3 1\n")


def test_gen_infeasible_is_usage_error(capsys):
    assert run("gen", "--n", 3, "--r", 5, "--delta-max", 1) == 2
    assert "error" in capsys.readouterr().err


def test_missing_grid_is_usage_error(tmp_path):
    assert run("run", "--algo", "matching", "--out", tmp_path / "x") == 2


def test_bad_int_list_rejected():
    with pytest.raises(SystemExit) as info:
        run("run", "--algo", "matching", "--n", "a,b")
    assert info.value.code == 2


@pytest.mark.parametrize("algo,extra", [
    ("zero-round", ["--alpha", 1, "--beta", 3]),
    ("moser-tardos", ["--alpha", 1, "--beta", 3]),
    ("high-rank", ["--k", 2]),
    ("edge-partition", ["--alpha", "1,2", "--beta", 4]),
    ("ruling-set", ["--k", "1,2"]),
    ("k-weak-large-k", ["--k", 3]),
    ("matching", []),
])
def test_run_then_verify(tmp_path, algo, extra, capsys):
    out = tmp_path / "rec.jsonl"
    code = run("run", "--algo", algo, "--n", 40, "--r", 4, "--delta-max", 3,
               "--trials", 2, "--seed", 5, *extra, "--out", out)
    assert code == 0
    recs = records(out)
    assert recs and all("error" not in r for r in recs)
    assert [r["trial"] for r in recs[:2]] == [0, 1]
    assert run("verify", "--records", out) == 0
    summary = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert summary["failures"] == 0


def test_verify_flags_tampered_record(tmp_path, capsys):
    out = tmp_path / "rec.jsonl"
    run("run", "--algo", "edge-partition", "--n", 30, "--r", 4, "--delta-max", 2,
        "--alpha", 1, "--beta", 1, "--out", out)
    rec = records(out)[0]
    rec["set"] = list(range(30))
    out.write_text(json.dumps(rec) + "\n")
    assert run("verify", "--records", out) == 1
    assert '"failures":1' in capsys.readouterr().out


def test_verify_single_set(tmp_path, capsys):
    H = Hypergraph.from_edges(4, [(0, 1, 2, 3)])
    save(H, tmp_path / "h.txt")
    (tmp_path / "ok.json").write_text("[0, 2]")
    (tmp_path / "bad.json").write_text('{"set": [0, 1, 2]}')
    base = ["verify", "--input", tmp_path / "h.txt", "--predicate", "alpha-beta", "--alpha", 1, "--beta", 2]
    assert run(*base, "--set", tmp_path / "ok.json") == 0
    assert run(*base, "--set", tmp_path / "bad.json") == 1
    assert not json.loads(capsys.readouterr().out.splitlines()[-1])["pass"]


def test_verify_coloring(tmp_path):
    save(Hypergraph.from_edges(3, [(0, 1, 2)]), tmp_path / "h.txt")
    (tmp_path / "c.json").write_text(json.dumps({"coloring": {"0": 1, "1": 1, "2": 2}, "palette": 2}))
    base = ["verify", "--input", tmp_path / "h.txt", "--set", tmp_path / "c.json"]
    assert run(*base, "--predicate", "proper-coloring") == 1
    assert run(*base, "--predicate", "defective-coloring", "--defect", 2) == 0


def test_verify_missing_arguments():
    assert run("verify") == 2


def test_run_on_input_file(tmp_path):
    save(Hypergraph.from_edges(6, [(0, 1, 2), (3, 4, 5)]), tmp_path / "h.txt")
    out = tmp_path / "rec.jsonl"
    assert run("run", "--algo", "matching", "--input", tmp_path / "h.txt", "--out", out) == 0
    (rec,) = records(out)
    assert rec["matching"] == [0, 1] and rec["valid"]


def test_invalid_parameters_recorded_per_cell(tmp_path):
    out = tmp_path / "rec.jsonl"
    run("run", "--algo", "k-weak-large-k", "--n", 20, "--r", 4, "--delta-max", 2, "--k", "3,4", "--out", out)
    recs = records(out)
    assert "error" not in recs[0] and "InvalidInput" in recs[1]["error"]


def test_trace_file(tmp_path):
    out, tr = tmp_path / "rec.jsonl", tmp_path / "trace.jsonl"
    run("run", "--algo", "moser-tardos", "--n", 30, "--r", 6, "--delta-max", 2,
        "--alpha", 1, "--beta", 4, "--out", out, "--trace", tr)
    rows = records(tr)
    (rec,) = records(out)
    assert len(rows) == rec["rounds"] + 1
    assert all(r["cell_index"] == 0 for r in rows)


def test_bench_and_plot_data(tmp_path):
    csv_path, dat = tmp_path / "b.csv", tmp_path / "b.dat"
    assert run("bench", "--algo", "edge-partition", "--n", 60, "--r", "4,8", "--delta-max", 2,
               "--alpha", 1, "--beta", "1,2", "--trials", 2, "--out", csv_path) == 0
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4 and all(float(r["success_rate"]) == 1.0 for r in rows)
    assert run("plot-data", "--csv", csv_path, "--out", dat) == 0
    lines = dat.read_text().splitlines()
    assert lines[0].startswith("#") and len(lines) == 5
    xs = sorted(float(l.split()[0]) for l in lines[1:])
    assert xs == [4.0, 8.0, 8.0, 16.0]


def test_run_is_byte_deterministic_across_jobs(tmp_path):
    args = ["run", "--algo", "moser-tardos", "--n", "30,40", "--r", 6, "--delta-max", 2,
            "--alpha", 1, "--beta", 4, "--trials", 3, "--seed", 11]
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    run(*args, "--out", a)
    run(*args, "--out", b)
    run(*args, "--jobs", 2, "--out", c)
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "hypermis.cli", "gen", "--n", "5", "--r", "2", "--delta-max", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("5 2 1")
