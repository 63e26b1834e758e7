import csv
import json
import subprocess
import sys

import pytest

from gendirichlet.cli import VERBS, run

ORD = ["--gen", "ordinary", "--count", "16"]
SER = ORD + ["--coeffs", "power:2"]

INVOCATIONS = {
    ("freq", "gen"): ORD,
    ("freq", "gap"): ["--gen", "example_nc", "--count", "16", "--n", "8", "--m", "9"],
    ("freq", "check"): ["--gen", "integers", "--count", "40", "--cond", "nc", "--horizon", "4"],
    ("freq", "densify"): ["--gen", "example_nc", "--count", "6"],
    ("freq", "stats"): ["--gen", "geometric", "--count", "256"],
    ("freq", "basis"): ["--gen", "bc", "--count", "12"],
    ("kernel", "eval"): ["--kernel", "trapezoid:a=1,b=2"],
    ("kernel", "l1"): ["--sinc", "a=3,h=1"],
    ("kernel", "decay"): ["--kernel", "riesz:alpha=0.5"],
    ("kernel", "fourier"): ["--kernel", "fejer"],
    ("sum", "eval"): SER + ["--s", "1", "--N", "10"],
    ("sum", "riesz"): SER + ["--x", "2.0", "--k", "1"],
    ("sum", "mollify"): SER + ["--x", "2.0", "--kernel", "trapezoid:a=1,b=2"],
    ("sum", "abscissa"): ORD + ["--coeffs", "ones", "--kind", "a"],
    ("sum", "projbound"): ORD + ["--N", "10", "--M", "16"],
    ("sum", "tail"): SER + ["--N-list", "2,4,8"],
    ("sum", "convcheck"): SER + ["--kernel", "fejer", "--s", "1"],
    ("sum", "translate"): SER + ["--sigma", "0.3"],
    ("hardy", "norm"): ["--gen", "ordinary", "--count", "2", "--coeffs", "ones", "--p", "4"],
    ("hardy", "vlimit"): SER,
    ("hardy", "helson"): SER + ["--n-chars", "10", "--N-grid", "1,2,4,8,16"],
    ("hardy", "lambda"): ["--gen", "integers", "--count", "4", "--N", "4", "--budget", "20",
                          "--samples", "2000"],
    ("spectrum", "conv"): ["--gen", "integers", "--count", "3", "--k", "2"],
    ("spectrum", "alk"): ["--gen", "bc", "--count", "120", "--k", "2"],
    ("spectrum", "combi1"): ["--k", "2", "--n", "8"],
    ("spectrum", "combi2"): ["--gen", "bc", "--count", "35", "--k", "2"],
    ("spectrum", "tsigma-scan"): ["--gen", "bc", "--count", "440", "--k", "2",
                                  "--m-grid", "5:20:5", "--sigma-grid", "0:0.5:6"],
    ("spectrum", "divisors"): ["--n", "360", "--k", "2"],
    ("spectrum", "aprep"): ["--n", "2", "--k", "2", "--ell", "3"],
    ("spectrum", "suff"): ["--gen", "integers", "--count", "50", "--k", "2", "--sigma", "0.1"],
}


def test_every_verb_has_an_invocation():
    listed = {(c, v) for c, verbs in VERBS.items() for v in verbs}
    assert listed == set(INVOCATIONS)


@pytest.mark.parametrize("command,verb", sorted(INVOCATIONS))
def test_verb_runs_and_writes_manifest(tmp_path, command, verb):
    out = tmp_path / "o"
    code = run([command, verb, "--out", str(out)] + INVOCATIONS[(command, verb)])
    assert code == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["exit_code"] == 0 and man["command"][:2] == [command, verb]
    assert man["outputs"], "every verb writes at least one file"
    for name in man["outputs"]:
        assert (out / name).exists()


def test_csv_numbers_are_plain_floats(tmp_path):
    run(["sum", "eval", "--out", str(tmp_path)] + ORD + ["--coeffs", "ones", "--s", "1", "--N", "10"])
    rows = list(csv.reader(open(next(tmp_path.glob("*.csv")))))
    assert rows[1][2] == "2.9289682539682538"


def test_exit_codes(tmp_path):
    assert run(["freq", "gen", "--gen", "nope", "--out", str(tmp_path / "a")]) == 2
    assert run(["freq", "gen", "--bogus", "--out", str(tmp_path / "b")]) == 2
    assert run(["repro", "empty", "--out", str(tmp_path / "c")]) == 2
    assert run(["repro", "divisors", "--prefix", "2000", "--out", str(tmp_path / "d")]) == 3
    assert run([]) == 2


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "gendirichlet.cli", "spectrum", "divisors",
                          "--n", "12", "--out", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[common]\nseed = 7\n\n[spectrum]\nk = 3\nn = 12\n")
    out = tmp_path / "o"
    assert run(["spectrum", "divisors", "--config", str(cfg), "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["seed"] == 7 and man["config"]["k"] == 3
    assert run(["spectrum", "divisors", "--config", str(cfg), "--k", "2", "--out", str(out)]) == 0
    assert json.loads((out / "manifest.json").read_text())["config"]["k"] == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[spectrum]\nwhatever = 1\n")
    assert run(["spectrum", "divisors", "--config", str(bad), "--out", str(out)]) == 2


def test_manifest_replay_reproduces_digests(tmp_path):
    first = tmp_path / "first"
    assert run(["hardy", "norm", "--method", "torus", "--samples", "5000", "--seed", "3",
                "--out", str(first)] + SER) == 0
    man = json.loads((first / "manifest.json").read_text())
    second = tmp_path / "second"
    assert run(["repro", "--from-manifest", str(first / "manifest.json"), "--out", str(second)]) == 0
    again = json.loads((second / "manifest.json").read_text())
    assert again["outputs"] == man["outputs"]
