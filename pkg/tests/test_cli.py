import json
import subprocess
import sys

import pytest

from iwasawa_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_run_json(capsys):
    code, out = run(capsys, "run", "prop-imag2", "--precision", "64")
    data = json.loads(out)
    assert code == 0 and data["quantities"]["r"]["value"] == 2


def test_run_text(capsys):
    code, out = run(capsys, "run", "ex-q", "--format", "text", "--precision", "64")
    assert code == 0 and "hypothesis ledger" in out and "rank_XS" in out


@pytest.mark.parametrize("argv,code", [
    (["run", "ex-mo"], 3),
    (["run", "ex-mo", "--assert-mo", "true"], 0),
    (["run", "ex-s-ram-c", "--q", "5"], 2),
    (["run", "ex-gc", "--no-gc"], 3),
    (["class-group", "--D", "12"], 1),
    (["class-group", "--D", "-1463"], 0),
    (["lambda", "--D", "-1463"], 0),
    (["split", "--ell", "31"], 0),
    (["split", "--ell", "9"], 1),
    (["xs-rank", "--scenario", "prop_q", "--primes", "31,7"], 2),
    (["residue-units", "--q", "3", "--level", "2", "--base", "-1463"], 0),
    (["verify-growth", "--count", "3", "--precision", "9"], 4),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_queries(capsys):
    _, out = run(capsys, "class-group", "--D", "-1463")
    qs = json.loads(out)["quantities"]
    assert qs["invariants"]["value"] == [2, 16] and qs["two_rank"]["value"] == 2
    _, out = run(capsys, "xs-rank", "--scenario", "prop_imag", "--m", "1463", "--q", "3")
    assert json.loads(out)["quantities"]["rank"]["value"] == 4
    _, out = run(capsys, "split", "--ell", "223")
    assert json.loads(out)["quantities"]["r_inf"]["value"] == 8


def test_module_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"p": 3, "N": 64, "mu_components": [1], "lambda_components": [["3", "1"]]}))
    code, out = run(capsys, "verify-growth", "--module", str(path), "--n-max", "5")
    qs = json.loads(out)["quantities"]
    assert code == 0 and (qs["lambda"]["value"], qs["mu"]["value"]) == (1, 1)
    assert run(capsys, "verify-growth", "--module", str(tmp_path / "missing.json"))[0] == 1


def test_out_file_and_seed(tmp_path, capsys):
    out = tmp_path / "sim.json"
    code, printed = run(capsys, "simulate", "--count", "3", "--seed", "5", "--precision", "64", "--out", str(out))
    assert code == 0 and printed == ""
    first = out.read_bytes()
    run(capsys, "simulate", "--count", "3", "--seed", "5", "--precision", "64", "--out", str(out))
    assert out.read_bytes() == first and json.loads(first)["seed"] == 5


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "iwasawa_lab.cli", "run", "ex-mo"], capture_output=True, text=True)
    assert proc.returncode == 3 and json.loads(proc.stdout)["status"] == "unverified"


def test_bad_arguments_exit_via_argparse(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "not-a-scenario"])
    assert info.value.code == 2
