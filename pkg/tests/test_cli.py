import json
import os
import subprocess
import sys

import pytest

from famlab.cli import main
from famlab.constructors import build_mk, example_family, fano_plane
from famlab.family import SetFamily, read_family, write_family


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, fam in {
        "m4.fam": build_mk(4),
        "m3.fam": build_mk(3),
        "fano.fam": fano_plane(),
        "example.fam": example_family(),
        "first5.json": example_family().subfamily(range(5)),
        "m4perm.fam": build_mk(4).relabel(lambda v: 11 - v),
        "empty.fam": SetFamily(3),
    }.items():
        write_family(tmp_path / name, fam)
        paths[name] = str(tmp_path / name)
    return paths


def test_construct_mk(tmp_path, capsys):
    out = tmp_path / "m4.fam"
    assert main(["construct", "mk", "--k", "4", "--out", str(out)]) == 0
    assert "k=4 blocks=5 vertices=10" in capsys.readouterr().out
    assert read_family(out) == build_mk(4)


def test_construct_to_stdout_stays_parseable(capsys):
    assert main(["construct", "example", "--format", "json"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["blocks"][0] == [1, 2, 3, 4]
    assert "k=4 blocks=9 vertices=11" in captured.err


@pytest.mark.parametrize(
    "argv, summary",
    [
        (["construct", "factorization", "--k", "5"], "k=3 blocks=5 vertices=15"),
        (["construct", "degree3", "--m", "3"], "k=7 blocks=15 vertices=35"),
        (["construct", "example"], "k=4 blocks=9 vertices=11"),
    ],
)
def test_construct_kinds(tmp_path, capsys, argv, summary):
    out = tmp_path / "f.json"
    assert main(argv + ["--out", str(out)]) == 0
    assert summary in capsys.readouterr().out
    read_family(out)


@pytest.mark.parametrize("argv", [["construct", "mk", "--k", "1"], ["construct", "mk"], ["construct", "factorization", "--k", "4"]])
def test_construct_bad_params(argv):
    assert main(argv) == 2


def test_tau_example(files, capsys):
    assert main(["tau", files["example.fam"]]) == 0
    out = capsys.readouterr().out
    assert "tau=4" in out and "witness=1 2 3 4" in out


def test_tau_enumerate_m4(files, capsys, tmp_path):
    export = tmp_path / "covers.fam"
    assert main(["tau", files["m4.fam"], "--enumerate", "--export", str(export)]) == 0
    out = capsys.readouterr().out
    assert "transversals=30" in out
    assert sum(line.startswith("T ") for line in out.splitlines()) == 30
    assert len(read_family(export)) == 30


def test_tau_empty(files, capsys):
    assert main(["tau", files["empty.fam"]]) == 0
    assert "tau=0" in capsys.readouterr().out


def test_tau_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.fam"
    bad.write_text("k 2\nb 1 2 3\n")
    assert main(["tau", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_tau_missing_file(tmp_path):
    assert main(["tau", str(tmp_path / "nope.fam")]) == 2


def test_tau_budget(files):
    assert main(["tau", files["example.fam"], "--node-budget", "2"]) == 3


def test_iso(files, capsys):
    assert main(["iso", files["m4.fam"], files["first5.json"]]) == 0
    assert capsys.readouterr().out.startswith("isomorphic")
    assert main(["iso", files["m3.fam"], files["fano.fam"]]) == 1
    assert main(["iso", files["m4.fam"], files["m4perm.fam"]]) == 0


def test_verify_single_claim(tmp_path, capsys):
    report = tmp_path / "r.json"
    assert main(["verify", "--suite", "q4-upper", "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["claims"][0]["measured"]["tau"] == 4
    assert "PASS  q4-upper" in capsys.readouterr().out


def test_verify_unknown_claim():
    assert main(["verify", "--suite", "nonexistent-id"]) == 2


def test_verify_custom_q3_witness(files):
    assert main(["verify", "--suite", "q3-lower", "--q3-witness", files["m3.fam"]]) == 1


@pytest.mark.parametrize(
    "argv, classes",
    [
        (["--k", "4", "--max-blocks", "4", "--intersecting", "--min-tau", "3"], 0),
        (["--k", "2", "--blocks", "3", "--intersecting"], 2),
        (["--k", "3", "--blocks", "1"], 1),
    ],
)
def test_enumerate(tmp_path, capsys, argv, classes):
    out = tmp_path / "rep.json"
    assert main(["enumerate", *argv, "--out", str(out)]) == 0
    assert f"classes={classes}" in capsys.readouterr().out
    assert json.loads(out.read_text())["class_count"] == classes


def test_enumerate_bad_flags():
    assert main(["enumerate", "--k", "3"]) == 2
    assert main(["enumerate", "--k", "3", "--max-blocks", "2", "--max-vertices", "1"]) == 2


def test_enumerate_budget():
    assert main(["enumerate", "--k", "3", "--max-blocks", "5", "--intersecting", "--node-budget", "10"]) == 3


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as err:
        main(["construct", "bogus"])
    assert err.value.code == 2


def test_console_entry_point(tmp_path):
    env = dict(os.environ, FAMLAB_THREADS="2")
    proc = subprocess.run(
        [sys.executable, "-m", "famlab.cli", "verify", "--suite", "disjoint-transversals"],
        capture_output=True, text=True, env=env, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.count("PASS") == 5
