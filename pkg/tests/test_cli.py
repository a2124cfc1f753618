import csv
import subprocess
import sys
from pathlib import Path

import pytest

from regret_forge.cli import aggregate_table, gap_percent, main
from regret_forge.instances import parse_native


def run_cli(*argv):
    return main(list(argv))


def test_gap_percent_formula():
    assert gap_percent(10, 5) == pytest.approx(50.0)
    assert gap_percent(0, 0) == 0.0
    assert gap_percent(7, 7) == 0.0
    assert gap_percent(None, 3) is None


def test_gen_run_table_round_trip(tmp_path, capsys):
    inst_path = tmp_path / "toy.mmr"
    store = tmp_path / "results.csv"
    assert run_cli("gen", "random", "--direction", "max", "--seed", "5",
                   "--delta", "0.1", "--out", str(inst_path)) == 0
    inst = parse_native(inst_path.read_text())
    assert inst.num_vars >= 4

    for alg in ("fix", "ds", "ids-b", "ids-h", "bc", "oracle"):
        code = run_cli("run", "--alg", alg, "--instance", str(inst_path),
                       "--time-limit", "60", "--seed", "7", "--out", str(store))
        assert code == 0
    out = capsys.readouterr().out
    assert "status=optimal" in out

    with store.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    objs = {r["algorithm"]: int(r["obj"]) for r in rows}
    # exact algorithms agree with the oracle
    assert objs["bc"] == objs["oracle"] == objs["ids-b"] == objs["ids-h"]
    assert objs["fix"] >= objs["oracle"]

    assert run_cli("table", "--out", str(store)) == 0
    text = capsys.readouterr().out
    assert "bc" in text and "#best" in text


def test_run_exit_codes(tmp_path):
    bad = tmp_path / "bad.mmr"
    bad.write_text("NOT A HEADER\n")
    store = tmp_path / "r.csv"
    assert run_cli("run", "--alg", "fix", "--instance", str(bad),
                   "--out", str(store)) == 1

    # infeasible instance: GE row that no 0/1 vector satisfies
    from regret_forge.core import Direction, LinearConstraint, Sense
    from regret_forge.instances import serialize_native
    from regret_forge.mmr import BipInstance

    inst = BipInstance(
        num_vars=2, direction=Direction.MAX, c_lo=(1, 1), c_hi=(2, 2),
        constraints=(LinearConstraint(((0, 1.0), (1, 1.0)), Sense.GE, 3.0),),
        name="void",
    )
    p = tmp_path / "void.mmr"
    p.write_text(serialize_native(inst))
    assert run_cli("run", "--alg", "fix", "--instance", str(p), "--out", str(store)) == 2

    missing = tmp_path / "missing.mmr"
    assert run_cli("run", "--alg", "fix", "--instance", str(missing),
                   "--out", str(store)) == 1


def test_table_empty_store_exits_one(tmp_path, capsys):
    assert run_cli("table", "--out", str(tmp_path / "none.csv")) == 1


def test_table_permutation_invariant(tmp_path, capsys):
    inst_a = tmp_path / "a.mmr"
    inst_b = tmp_path / "b.mmr"
    run_cli("gen", "random", "--direction", "min", "--seed", "11", "--out", str(inst_a))
    run_cli("gen", "random", "--direction", "min", "--seed", "12", "--out", str(inst_b))
    store1 = tmp_path / "s1.csv"
    store2 = tmp_path / "s2.csv"
    for alg in ("fix", "bc"):
        run_cli("run", "--alg", alg, "--instance", str(inst_a), "--out", str(store1))
        run_cli("run", "--alg", alg, "--instance", str(inst_b), "--out", str(store1))
    for alg in ("bc", "fix"):
        run_cli("run", "--alg", alg, "--instance", str(inst_b), "--out", str(store2))
        run_cli("run", "--alg", alg, "--instance", str(inst_a), "--out", str(store2))
    capsys.readouterr()
    assert run_cli("table", "--out", str(store1), "--format", "csv") == 0
    first = capsys.readouterr().out
    assert run_cli("table", "--out", str(store2), "--format", "csv") == 0
    second = capsys.readouterr().out
    assert first == second


def test_tie_counts_both_algorithms_as_best():
    rows = [
        {"schema_version": "1", "instance": "x-01", "algorithm": "ds", "obj": "5",
         "time_s": "0.1", "iterations": "1", "lower_bound": "0", "gap_percent": "",
         "status": "feasible", "seed": "0"},
        {"schema_version": "1", "instance": "x-01", "algorithm": "fix", "obj": "5",
         "time_s": "0.1", "iterations": "1", "lower_bound": "3", "gap_percent": "",
         "status": "feasible", "seed": "0"},
    ]
    table = aggregate_table(rows)
    assert all(row["num_best"] == 1 for row in table)
    # gap uses the best lower bound across runs (3), for both algorithms
    for row in table:
        assert row["avg_gap_percent"] == pytest.approx(40.0)


def test_single_fix_record_gap():
    rows = [
        {"schema_version": "1", "instance": "y-01", "algorithm": "fix", "obj": "10",
         "time_s": "0.1", "iterations": "1", "lower_bound": "5", "gap_percent": "",
         "status": "feasible", "seed": "0"},
    ]
    table = aggregate_table(rows)
    assert table[0]["avg_gap_percent"] == pytest.approx(50.0)


def test_gen_kp_and_gap_files(tmp_path):
    kp = tmp_path / "kp.mmr"
    assert run_cli("gen", "kp", "--type", "6", "--n", "12", "--rbar", "1000",
                   "--gamma", "0.5", "--delta", "0.2", "--seed", "3",
                   "--out", str(kp)) == 0
    inst = parse_native(kp.read_text())
    assert inst.num_vars == 12

    gap = tmp_path / "gap.mmr"
    assert run_cli("gen", "gap", "--type", "C", "--m", "2", "--n", "5",
                   "--delta", "0.25", "--seed", "4", "--out", str(gap)) == 0
    inst2 = parse_native(gap.read_text())
    assert inst2.num_vars == 10
    assert len(inst2.constraints) == 7  # 2 capacity rows + 5 assignment rows


def test_gen_deterministic(tmp_path):
    one = tmp_path / "one.mmr"
    two = tmp_path / "two.mmr"
    for out in (one, two):
        run_cli("gen", "kp", "--type", "1", "--n", "9", "--seed", "99",
                "--out", str(out), "--name", "same")
    assert one.read_text() == two.read_text()


def test_verify_passes(capsys):
    assert run_cli("verify", "--count", "3", "--seed", "321") == 0
    out = capsys.readouterr().out
    assert "checks passed" in out


def test_cli_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "regret_forge.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "gen" in proc.stdout and "verify" in proc.stdout
