import json
import subprocess
import sys

import pytest

from svpattern.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {
        "paw": "1100\n0100\n0111\n0001\n",
        "deg4": "1111\n0100\n0010\n0001\n",
        "empty": "000\n000\n000\n",
        "defect": "100\n100\n111\n",
        "bad": "12\n01\n",
        "claw_R": "3 4\n1 0 0 1\n0 1 0 1\n0 0 1 1\n",
        "badmat": "2 2\n1 2\n3\n",
    }
    out = {}
    for name, text in paths.items():
        p = tmp_path / (name + (".mat" if name in ("claw_R", "badmat") else ".pat"))
        p.write_text(text)
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_classify_exit_codes(capsys, files):
    code, out, _ = run(capsys, "classify", files["paw"])
    assert code == 0 and out.startswith("verdict: RequiresDistinct") and "designated:" in out
    assert run(capsys, "classify", files["deg4"])[0] == 10
    code, out, _ = run(capsys, "classify", files["empty"])
    assert code == 11 and "ZeroMultiple" in out
    assert run(capsys, "classify", files["defect"])[0] == 12


def test_svd_command(capsys, files):
    code, out, _ = run(capsys, "svd", files["claw_R"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "singular_values: 2 1 1"
    assert lines[1] == "min_gap: 0"
    assert "m(1)=2" in lines[2]


def test_other_commands(capsys, files):
    code, out, _ = run(capsys, "termrank", files["defect"])
    assert code == 0 and "term_rank: 2" in out
    code, out, _ = run(capsys, "fiedler", files["paw"])
    assert "fiedler: true" in out
    code, out, _ = run(capsys, "fiedler", files["deg4"])
    assert "fiedler: false" in out
    code, out, _ = run(capsys, "ssvp", files["claw_R"])
    assert "holds: true" in out
    code, out, _ = run(capsys, "verify", files["paw"], "--trials", "100")
    assert "any_multiple: false" in out and "trials: 100" in out
    code, out, _ = run(capsys, "enumerate", "--rows", "2", "--cols", "2", "--full-term-rank")
    assert "total: 7" in out


def test_witness_command(capsys, files):
    code, out, _ = run(capsys, "witness", files["deg4"])
    assert code == 0 and "multiplicity_ok: true" in out
    code, _, err = run(capsys, "witness", files["paw"])
    assert code == 1 and "no witness" in err


def test_usage_and_input_errors(capsys, files, tmp_path):
    assert run(capsys, "classify", str(tmp_path / "missing.pat"))[0] == 3
    code, out, err = run(capsys, "classify", files["bad"])
    assert code == 3 and out == "" and "invalid character" in err
    assert run(capsys, "svd", files["badmat"])[0] == 3
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "enumerate", "--rows", "5", "--cols", "6")[0] == 2
    assert run(capsys, "classify", files["paw"], "--tol-sv", "-1")[0] == 2
    assert run(capsys, "verify", files["paw"], "--trials", "0")[0] == 2


def test_env_seed(capsys, files, monkeypatch):
    monkeypatch.setenv("SVPATTERN_SEED", "nope")
    assert run(capsys, "classify", files["deg4"])[0] == 2
    monkeypatch.setenv("SVPATTERN_SEED", "4")
    a = run(capsys, "verify", files["paw"], "--trials", "50")[1]
    b = run(capsys, "verify", files["paw"], "--trials", "50", "--seed", "4")[1]
    assert a == b


@pytest.mark.parametrize("cmd", ["classify", "witness", "termrank", "fiedler", "verify"])
def test_json_text_parity(capsys, files, cmd):
    _, text, _ = run(capsys, cmd, files["deg4"])
    _, js, _ = run(capsys, cmd, files["deg4"], "--format", "json")
    data = json.loads(js)
    top = [ln.split(":")[0] for ln in text.splitlines() if ln and not ln.startswith(" ")]
    assert top == list(data)


def test_byte_identical_output(files):
    cmd = [sys.executable, "-m", "svpattern", "witness", files["deg4"], "--seed", "3", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["verdict"] == "AllowsMultiple"


def test_stdin_input(files, tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "svpattern", "classify", "-"], input="1100\n0100\n0111\n0001\n",
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and "RequiresDistinct" in res.stdout
