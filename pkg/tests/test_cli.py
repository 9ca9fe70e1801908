import csv
import io
import json
import subprocess
import sys


from lnnmap.cli import CSV_COLUMNS, SCHEMA_VERSION, main
from lnnmap.qasm import parse_program
from lnnmap.router import DEFAULT_PAIRS


def _gen(tmp_path, kind, m, n, seed=0, name=None):
    path = tmp_path / (name or f"{kind}_{m}_{n}_{seed}.qasm")
    assert main(["gen", kind, "-M", str(m), "-N", str(n), "--seed", str(seed), "-o", str(path)]) == 0
    return path


def test_route_meta_end_to_end(tmp_path):
    src = _gen(tmp_path, "random", 6, 40, seed=3)
    out, rep = tmp_path / "out.qasm", tmp_path / "rep.json"
    code = main(["route", str(src), "-o", str(out), "--meta", "--verify", "both", "--report", str(rep)])
    assert code == 0
    routed = parse_program(out.read_text())
    assert routed.num_qubits == 6
    assert all(abs(c - t) == 1 for c, t in routed.cnot_indices)
    record = json.loads(rep.read_text())
    assert record["schema"] == SCHEMA_VERSION
    for key in ("name", "M", "N", "config", "swap_count", "cpu_time_ms", "verified"):
        assert key in record
    assert record["verified"] is True
    assert record["N"] == 40
    assert len(record["meta"]["entries"]) == len(DEFAULT_PAIRS)
    assert record["swap_count"] == min(e["swap_count"] for e in record["meta"]["entries"])


def test_route_deterministic(tmp_path):
    src = _gen(tmp_path, "random", 7, 60, seed=1)
    outs = []
    for i in range(2):
        out = tmp_path / f"o{i}.qasm"
        assert main(["route", str(src), "--alpha", "0.5", "--beta", "0.6", "--seed", "7", "-o", str(out)]) == 0
        outs.append(out.read_text())
    assert outs[0] == outs[1]


def test_route_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.qasm"
    bad.write_text("OPENQASM 2.0;\nqreg q[2];\ncx q[0] q[1];\n")
    assert main(["route", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "SyntaxError" in err and "line 3" in err


def test_route_missing_file(tmp_path):
    assert main(["route", str(tmp_path / "nope.qasm")]) == 2


def test_route_bad_parameter(tmp_path):
    src = _gen(tmp_path, "random", 4, 5)
    assert main(["route", str(src), "--alpha", "3"]) == 2


def test_route_to_stdout_and_decompose(tmp_path, capsys):
    src = _gen(tmp_path, "triangle", 3, 3)
    assert main(["route", str(src), "--decompose-swaps"]) == 0
    text = capsys.readouterr().out
    assert "swap" not in text
    assert parse_program(text).num_cnots == 3 + 3


def test_route_dump_weights(tmp_path):
    src = _gen(tmp_path, "random", 5, 20)
    dump = tmp_path / "w"
    assert main(["route", str(src), "-o", str(tmp_path / "o.qasm"), "--dump-weights", str(dump)]) == 0
    files = sorted(dump.iterdir())
    assert files
    assert files[0].read_text().startswith(",0,1,2,3,4")


def test_route_verification_failure_exit_code(tmp_path, monkeypatch):
    import lnnmap.cli as cli

    monkeypatch.setattr(cli, "check_equivalence_permutation", lambda p, r: False)
    src = _gen(tmp_path, "random", 4, 10)
    assert cli.main(["route", str(src), "-o", str(tmp_path / "o.qasm"), "--verify", "perm"]) == 1


def test_route_all_flags(tmp_path):
    src = _gen(tmp_path, "random", 5, 25, seed=4)
    out = tmp_path / "o.qasm"
    args = ["route", str(src), "-o", str(out), "--tau-regular", "3", "--tau-forced", "9",
            "--direction", "bidi", "--forced", "standalone", "--verify", "unitary"]
    assert main(args) == 0


def test_bench_empty_directory(tmp_path, capsys):
    assert main(["bench", str(tmp_path)]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows == [list(CSV_COLUMNS) + ["error"]]


def test_bench_five_fixtures(tmp_path):
    d = tmp_path / "suite"
    d.mkdir()
    for i, kind in enumerate(["random", "linear", "chain", "triangle", "random"]):
        _gen(d, kind, 6, 30, seed=i, name=f"f{i}.qasm")
    out, js = tmp_path / "t.csv", tmp_path / "t.json"
    assert main(["bench", str(d), "--csv", str(out), "--json", str(js)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 5
    assert all(r["verified"] == "true" for r in rows)
    assert rows[1]["swaps"] == "0"
    doc = json.loads(js.read_text())
    assert doc["schema"] == SCHEMA_VERSION
    assert doc["summary"]["files"] == 5
    assert doc["summary"]["total_swaps"] == sum(int(r["swaps"]) for r in rows)


def test_bench_meta_columns_and_parallel(tmp_path):
    for i in range(3):
        _gen(tmp_path, "random", 5, 15, seed=i)
    out = tmp_path / "t.csv"
    assert main(["bench", str(tmp_path), "--meta", "-j", "2", "--csv", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    per_config = [k for k in rows[0] if k.startswith("swaps_a")]
    assert len(per_config) == 10
    for r in rows:
        assert int(r["swaps"]) == min(int(r[k]) for k in per_config)


def test_bench_records_errors_and_continues(tmp_path):
    _gen(tmp_path, "random", 4, 10, name="a.qasm")
    (tmp_path / "b.qasm").write_text("qreg q[2]; cz q[0],q[1];")
    out = tmp_path / "t.csv"
    assert main(["bench", str(tmp_path), "--csv", str(out)]) == 2
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert [r["name"] for r in rows] == ["a.qasm", "b.qasm"]
    assert rows[0]["error"] == ""
    assert "UnsupportedGate" in rows[1]["error"]


def test_gen_to_stdout(capsys):
    assert main(["gen", "chain", "-M", "7", "-N", "31"]) == 0
    assert parse_program(capsys.readouterr().out).num_cnots == 31


def test_module_entry_point(tmp_path):
    src = _gen(tmp_path, "linear", 6, 20)
    res = subprocess.run(
        [sys.executable, "-m", "lnnmap", "route", str(src), "--verify", "perm"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    routed = parse_program(res.stdout)
    assert "swap" not in res.stdout
    assert "swaps=0" in res.stderr
    assert routed.num_cnots == 20
