import csv
import io
import json
import subprocess
import sys

import pytest

from permclass import cli, harness
from permclass.patterns import ReplacementSet


def run(*args, env=None):
    return subprocess.run([sys.executable, "-m", "permclass", *args],
                          capture_output=True, text=True, env=env, timeout=600)


def run_json(*args):
    proc = run(*args, "--format", "json", "--no-timing")
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_classes_examples():
    assert run_json("classes", "--n", "7", "--patterns", "1234,3421")["nontrivial_classes"] == 35
    assert run_json("classes", "--n", "6", "--patterns", "adj:1324,3241,2413,4132")["nontrivial_classes"] == 2
    doc = run_json("classes", "--n", "4", "--patterns", "123")
    assert doc["nontrivial_classes"] == 0 and doc["singleton_count"] == 24


def test_json_provenance_and_no_timing():
    doc = run_json("classes", "--n", "5", "--patterns", "123,321", "--seed", "9")
    prov = doc["provenance"]
    assert prov["command"] == "classes" and prov["seed"] == 9
    assert prov["engine_version"] == harness.ENGINE_VERSION
    assert "threads" not in json.dumps(prov) and "wall_ms" not in doc


def test_table_header_carries_config():
    proc = run("classes", "--n", "5", "--patterns", "123,321", "--threads", "2", "--seed", "4")
    assert proc.returncode == 0
    head = proc.stdout.splitlines()[:3]
    assert head[0].startswith("# permclass")
    assert "threads=2" in head[2] and "seed=4" in head[2] and "memory_budget=" in head[2]


def test_csv_output_to_file(tmp_path):
    out = tmp_path / "classes.csv"
    proc = run("classes", "--n", "5", "--patterns", "123,321", "--format", "csv", "--output", str(out))
    assert proc.returncode == 0 and proc.stdout == ""
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 3
    assert sum(int(r["size"]) for r in rows) == 120


def test_rotational_examples():
    doc = run_json("rotational", "--m", "1324", "--n-max", "7")
    assert doc["t"] == 7 and doc["f"]["6"] == 2 and doc["f"]["7"] == 1
    doc = run_json("rotational", "--m", "12", "--n-max", "5")
    assert doc["t"] is not None and all(doc["f"][str(n)] == 1 for n in range(doc["t"], 6))
    doc = run_json("rotational", "--m", "132", "--n-max", "6")
    assert set(doc["f"].values()) == {2} and "note" in doc


def test_pseudo_examples():
    assert run_json("pseudo", "--m", "1324", "--n", "5")["class_count"] == 2
    doc = run_json("pseudo", "--m", "1324", "--n", "8")
    assert doc["class_count"] == 2 and doc["parity_pure"]
    a = run_json("pseudo", "--m", "1324", "--n", "5")
    b = run_json("pseudo", "--m", "3241", "--n", "5")
    assert a["classes"] == b["classes"] and b["m"] == "1324"


def test_erdos_example():
    doc = run_json("erdos", "--k", "3", "--n", "5")
    assert doc["classes_total"] == 3 and doc["regime"] == "below thresholds" and doc["pass"]


def test_oeis_all_matches():
    doc = run_json("oeis", "--suite", "all", "--n-max", "9")
    for exp in doc["experiments"]:
        assert [r["n"] for r in exp["rows"]] == [7, 8, 9]
        assert all(r["verdict"] == "match" for r in exp["rows"])
    assert len(doc["experiments"]) == 3


def test_oeis_uses_cache_dir_from_env(tmp_path):
    import os
    env = dict(os.environ, PERMCLASS_CACHE_DIR=str(tmp_path))
    proc = run("oeis", "--suite", "linear", "--n-max", "7", env=env)
    assert proc.returncode == 0
    assert (tmp_path / "classes.jsonl").exists()


def test_verify_suite():
    proc = run("verify", "--suite", "pseudo-parity", "--seed", "7", "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["pass"] and doc["provenance"]["seed"] == 7


def test_json_is_reproducible():
    args = ("classes", "--n", "7", "--patterns", "1243,3421", "--format", "json", "--no-timing")
    assert run(*args).stdout == run(*args).stdout


@pytest.mark.parametrize("args,needle", [
    (("classes", "--n", "7", "--patterns", "1234,34x1"), "34x1"),
    (("classes", "--n", "7"), "--patterns"),
    (("classes", "--n", "7", "--patterns", "1234,3421", "--threads", "0"), "--threads"),
    (("classes", "--n", "7", "--patterns", "1234,3421", "--memory-budget", "1M"), "memory-budget"),
    (("verify", "--suite", "nope"), "nope"),
    (("frobnicate",), "invalid choice"),
])
def test_usage_errors_exit_1(args, needle):
    proc = run(*args)
    assert proc.returncode == 1
    assert needle in proc.stderr


def test_resource_error_exits_2():
    proc = run("pseudo", "--m", "1324", "--n", "12", "--memory-budget", "64M")
    assert proc.returncode == 2
    assert str(64 * 1024 ** 2) in proc.stderr


def test_mismatch_exits_3(monkeypatch, capsys):
    # pair a pattern set with a formula it does not satisfy
    wrong = dict(harness.SUITES, linear=(ReplacementSet.of("1243", "3421"), harness.FormulaId.LINEAR_PLUS_28))
    monkeypatch.setattr(harness, "SUITES", wrong)
    assert cli.main(["oeis", "--suite", "linear", "--n-max", "7", "--no-timing"]) == 3
    assert "mismatch" in capsys.readouterr().out


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("memory_budget = 128M\nformat = csv\nseed = 3\n")
    assert cli.main(["classes", "--n", "5", "--patterns", "123,321", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.startswith("n,patterns")
    assert cli.main(["classes", "--n", "5", "--patterns", "123,321", "--config", str(cfg),
                     "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["provenance"]["seed"] == 3


def test_config_file_errors(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("colour = blue\n")
    assert cli.main(["classes", "--n", "5", "--patterns", "123,321", "--config", str(cfg)]) == 1
    assert cli.main(["classes", "--n", "5", "--patterns", "123,321",
                     "--config", str(tmp_path / "missing.ini")]) == 1


@pytest.mark.parametrize("text,value", [("64M", 64 * 2 ** 20), ("2GiB", 2 * 2 ** 30), ("1000", 1000),
                                        ("1.5k", 1536)])
def test_parse_bytes(text, value):
    assert cli.parse_bytes(text) == value
