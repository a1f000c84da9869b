import json

import pytest

from fernjac import section5
from fernjac.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_inverse_example(capsys):
    code, out, _ = call(capsys, "inverse", "--n", "1", "--d", "2", "--max-degree", "3", "--component", "1")
    assert code == 0
    assert out.strip() == "x[1] + a[1,1]^2*x[1]^2 + 2*a[1,1]^4*x[1]^3"


def test_inverse_json_all_components(capsys):
    code, out, _ = call(capsys, "inverse", "--n", "2", "--d", "2", "--max-degree", "2", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["constructions_agree"]
    assert set(data["components"]) == {"1", "2"}
    assert data["components"]["1"].startswith("x[1] + ")


def test_ch_verify(capsys):
    code, out, _ = call(capsys, "ch-verify", "--n", "2")
    assert code == 0 and out.count("pass") == 4
    code, out, _ = call(capsys, "ch-verify", "--n", "2", "--output", "json")
    assert len(json.loads(out)) == 4


def test_ch_verify_cap(capsys):
    assert call(capsys, "ch-verify", "--n", "6")[0] == 1


def test_jac_ideal(capsys):
    code, out, _ = call(capsys, "jac-ideal", "--n", "2", "--d", "2", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["ideal"] == "J(2,2)" and len(data["generators"]) == 5


def test_zfern(capsys):
    code, out, _ = call(capsys, "zfern", "--n", "2", "--d", "2", "--i", "1", "--j", "1", "--l", "1")
    assert code == 0 and out.strip() == "a[1,1]^4 + a[1,1]*a[1,2]*a[2,1]^2"
    code, out, _ = call(capsys, "zfern", "--n", "2", "--d", "2", "--labeling", "1;(1);(1,1)")
    assert code == 0 and out.strip() == "a[1,1]^4 + a[1,1]*a[1,2]*a[2,1]^2"


def test_member_and_radical(capsys):
    lab = "1;(2);(3);(1,1)"
    code, out, _ = call(capsys, "member", "--n", "3", "--d", "2", "--labeling", lab, "--output", "json")
    assert code == 0 and json.loads(out)["verdict"] == "non-member"
    code, out, _ = call(capsys, "member", "--n", "3", "--d", "2", "--labeling", lab, "--ideal", "J+nil2")
    assert code == 0 and out.strip().endswith(": member")
    code, out, _ = call(capsys, "radical-member", "--n", "3", "--d", "2", "--labeling", lab)
    assert code == 0 and out.strip().endswith(": member")


def test_member_target(capsys):
    code, out, _ = call(capsys, "member", "--n", "2", "--d", "2", "--target", "a[1,1]^2 + a[2,1]*a[2,2]")
    assert code == 0 and out.strip().endswith(": member")


def test_member_timeout(capsys):
    code, out, _ = call(capsys, "member", "--n", "3", "--d", "3", "--target", "a[1,1]",
                        "--timeout-secs", "0")
    assert code == 2 and "timeout" in out


def test_theorem(capsys):
    code, out, _ = call(capsys, "theorem", "--n", "2", "--d", "2", "--output", "json")
    data = json.loads(out)
    assert code == 0 and len(data) == 8 and all(r["equal"] for r in data)
    code, out, _ = call(capsys, "theorem", "--n", "2", "--d", "2", "--i", "1", "--j", "2", "--l", "1")
    assert code == 0 and out.count("\n") == 1


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["zfern", "--n", "3", "--d", "2", "--labeling", "1;(2);(1,1)"],
    ["zfern", "--n", "3"],
    ["member", "--n", "2", "--d", "2", "--target", "a[1,1"],
    ["theorem", "--n", "2", "--d", "2", "--i", "1"],
    ["inverse", "--n", "1", "--d", "1", "--max-degree", "3"],
    ["inverse", "--n", "0", "--d", "2", "--max-degree", "3"],
    ["zfern", "--n", "2", "--d", "2", "--i", "3", "--j", "1", "--l", "1"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(run(argv))
    assert exc.value.code == 1
    assert "error" in capsys.readouterr().err


def test_section5(capsys):
    code, out, _ = call(capsys, "section5")
    assert code == 0
    assert "n3-d2-all" in out and "mismatch" in out


def test_section5_json_is_stable(capsys):
    _, first, _ = call(capsys, "section5", "--output", "json")
    rows = json.loads(first)["rows"]
    assert all(list(r) == sorted(r) for r in rows)


def test_section5_mismatch_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(section5.EXCEPTIONS, 2, ("1;(1);(1);(1,1)", "1;(1);(1);(1,1)"))
    assert call(capsys, "section5")[0] == 3


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "fernjac", "zfern", "--n", "1", "--d", "2",
                           "--labeling", "1;(1,1)"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and proc.stdout.strip() == "a[1,1]^2"
