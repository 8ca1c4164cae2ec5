import json
import os
import subprocess
import sys

import pytest

from selberg_e2.cli import main

RUNS = {
    "admissible": ["--tuple", "n,n+2,n+6"],
    "singular-series": ["--tuple", "n,n+2", "--cutoff", "10000"],
    "weights": ["--tuple", "n,n+2", "--R", "20", "--poly", "1,6", "--check-identities"],
    "sums": ["--tuple", "n,n+2,n+6", "--N", "10000", "--R", "20", "--poly", "1,6", "--kind", "S"],
    "jint": ["--k", "3", "--B", "4", "--eta", "1/144", "--nu", "1", "--poly", "1,6"],
    "bounds": ["--nu", "2", "--B", "4"],
    "min-k": ["--nu", "1", "--B", "4", "--eta", "1/144", "--poly", "1,6"],
    "e2": ["--limit", "40", "--gaps"],
    "bv": ["--x", "5000", "--Q-expr", "sqrt(x)/log(x)^2"],
    "wirsing": ["--spec", "unit", "--z", "1000"],
}


@pytest.fixture(autouse=True)
def _empty_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    yield
    assert os.listdir(tmp_path) == [] or os.environ.get("KEEP_CLI_OUT")


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("cmd", sorted(RUNS))
def test_subcommand_json_roundtrip(cmd, capsys):
    code, text, _ = _run(capsys, [cmd, *RUNS[cmd]])
    assert code == 0
    data = json.loads(text)
    assert data["schema"] == "v1"
    assert json.dumps(data, indent=2, sort_keys=True) + "\n" == text


def test_jint_values(capsys):
    _, text, _ = _run(capsys, ["jint", *RUNS["jint"]])
    data = json.loads(text)
    assert abs(float(data["J"]["numeric"]) - 0.00016493) < 1e-8
    assert data["J"]["rational"] == "852438101/5598720" and "65609/40*log(3)" in data["J"]["text"]


def test_e2_sequence(capsys):
    _, text, _ = _run(capsys, ["e2", *RUNS["e2"]])
    assert json.loads(text)["first"][:4] == [6, 10, 14, 15]


def test_exit_codes(capsys):
    code, _, err = _run(capsys, ["jint", "--k", "3", "--B", "2", "--poly", "1"])
    assert code == 2 and "precondition" in err
    code, _, err = _run(capsys, ["e2", "--limit", "1e12"])
    assert code == 3 and "resource guard" in err
    with pytest.raises(SystemExit) as exc:
        main(["jint", "--bogus"])
    assert exc.value.code == 2


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    assert "min-k" in capsys.readouterr().out


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "sub"
    target.mkdir()
    path = target / "j.json"
    assert main(["jint", *RUNS["jint"], "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["k"] == 3
    path.unlink()
    target.rmdir()


def test_csv_outputs(capsys):
    _, text, _ = _run(capsys, ["bv", "--x", "2000", "--csv"])
    assert text.startswith("q,delta_star\n")
    _, text, _ = _run(capsys, ["sums", *RUNS["sums"], "--csv"])
    assert text.startswith("n,source_n,which_forms,factorizations")


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "selberg_e2.cli", "bounds", "--nu", "1", "--B", "4"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["constant"] > 0
