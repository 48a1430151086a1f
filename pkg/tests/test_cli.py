import json
import subprocess
import sys

import pytest

from gridfloer.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_theta_trefoil(capsys):
    code, out, _ = run(capsys, "theta", "2: 1 1 1")
    d = json.loads(out)
    assert code == 0
    assert (d["sl"], d["A"], d["M"], d["hat_vanishes"]) == (1, 1, 2, False)


def test_theta_negative_stabilization(capsys):
    code, out, _ = run(capsys, "theta", "2: -1")
    assert code == 0 and json.loads(out)["hat_vanishes"] is True


def test_theta_link_is_usage_error(capsys):
    code, _, err = run(capsys, "theta", "3: 1 1")
    assert code == 1 and "MultiComponentClosure" in err


def test_axis(capsys):
    code, out, _ = run(capsys, "axis", "1:")
    d = json.loads(out)
    assert code == 0 and d["top_rank"] == 1 and d["top_M"] == -2
    code, out, _ = run(capsys, "axis", "2: 1 1 1")
    d = json.loads(out)
    assert code == 0 and d["top_rank"] == 1 and d["bridge"] is True
    code, _, _ = run(capsys, "axis", "2: 1 q")
    assert code == 1


def test_homology_file(capsys, tmp_path):
    f = tmp_path / "u.grid"
    f.write_text("2\n0 1\n1 0\n")
    code, out, _ = run(capsys, "homology", str(f), "--flavor", "tilde")
    assert code == 0 and len(json.loads(out)["ranks"]) == 2
    code, out, _ = run(capsys, "homology", str(f), "--format", "text")
    assert out.splitlines() == ["A=-1 M=-1 rank=1", "A=0 M=0 rank=1"]


def test_homology_window_and_bad_file(capsys, tmp_path):
    f = tmp_path / "u.grid"
    f.write_text("2\n0 1\n1 0\n")
    code, out, _ = run(capsys, "homology", str(f), "--flavor", "minus", "--window=-1:0,-2:0")
    assert code == 0 and json.loads(out)["flavor"] == "minus"
    bad = tmp_path / "bad.grid"
    bad.write_text("2\n0 0\n1 1\n")
    assert run(capsys, "homology", str(bad))[0] == 1


def test_batch(capsys, tmp_path):
    f = tmp_path / "words.txt"
    f.write_text("2: 1 1 1\n2: nope\n1:\n")
    code, out, _ = run(capsys, "batch", str(f))
    lines = [json.loads(ln) for ln in out.splitlines()]
    assert code == 0 and len(lines) == 3
    assert [("error" in d) for d in lines] == [False, True, False]


def test_batch_oversized(capsys, tmp_path):
    f = tmp_path / "words.txt"
    f.write_text("3: 1 1 1 1 1 1 1 1 1\n")
    code, out, _ = run(capsys, "batch", str(f), "--max-grid", "8")
    assert code == 0 and json.loads(out)["error"] == "SizeLimitExceeded"


@pytest.mark.parametrize("argv", [[], ["theta"], ["bogus"], ["theta", "1:", "--workers", "0"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as e:
        code = main(argv)
        raise SystemExit(code)
    assert e.value.code == 1


def test_deterministic_output():
    cmd = [sys.executable, "-m", "gridfloer.cli", "theta", "3: 1 -2 1 -2"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and b"hat_vanishes" in a
