import json
import os
import subprocess
import sys

import jsonschema
import pytest

from minkcrem.arith import get_budget
from minkcrem.cli import main
from minkcrem.report import load_schema

VALIDATOR = jsonschema.Draft202012Validator(load_schema())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(load_schema())
    assert load_schema()["version"] == "1"


def test_bound_rationals(capsys):
    code, out, _ = run(capsys, "bound", "--field", "Q")
    assert code == 0
    assert "M(k) = 2^7*3^3*5*7 = 120960" in out


def test_characteristic_exit_code(capsys):
    code, out, err = run(capsys, "bound", "--field", "F_2", "--ell", "2")
    assert code == 2
    assert out == "" and "characteristic" in err


def test_attain_row(capsys):
    code, out, _ = run(capsys, "attain", "--q", "2", "--ell", "7")
    assert code == 0 and out == "2 7 3 1 1 1 ok\n"


@pytest.mark.parametrize("argv", [
    ["invariants", "--field", "F_6", "--ell", "3"],
    ["invariants", "--field", "R", "--ell", "3"],
    ["bound", "--field", "ext(Q,2)"],
    ["audit", "--ell", "5", "--t", "3", "--m", "1"],
    ["audit", "--ell", "5"],
    ["torus", "--q", "2", "--ell", "11"],
    ["attain", "--q", "6", "--ell", "5"],
])
def test_domain_errors_exit_two(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_not_small_explicit_field(capsys, tmp_path):
    table = tmp_path / "k.tbl"
    table.write_text("char=0 largeT=1\n5 4 inf\n")
    code, out, _ = run(capsys, "bound", "--field", f"explicit({table})")
    assert code == 0 and "M(k) = not-small" in out
    code, out, _ = run(capsys, "bound", "--field", f"explicit({table})", "--json")
    assert json.loads(out)["global"] == "not-small"
    assert json.loads(out)["perPrime"][0]["M"] == "inf"


def test_resource_limit_exit_code(capsys):
    before = get_budget()
    code, out, err = run(capsys, "--budget", "1", "bound", "--field", "F_1000000007")
    assert code == 3 and out == "" and "resource limit" in err
    assert get_budget() == before


def test_argument_validation():
    with pytest.raises(SystemExit) as info:
        main(["invariants", "--field", "Q", "--ell", "4"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["poly", "--rank", "0"])


JSON_COMMANDS = [
    ["bound", "--field", "Q"],
    ["bound", "--field", "Qp_11"],
    ["bound", "--field", "F_4", "--ell", "3"],
    ["bound", "--field", "ext(Q,3)", "--ell", "3"],
    ["invariants", "--field", "Q", "--ell", "7"],
    ["invariants", "--field", "ext(Q,2)", "--ell", "7"],
    ["attain", "--q", "4", "--ell", "3"],
    ["audit", "--ell", "2", "--t", "1", "--m", "2"],
    ["audit", "--grid", "--max-ell", "20"],
    ["torus", "--q", "3", "--ell", "5"],
    ["torus", "--q", "5", "--ell", "2", "--n", "2"],
    ["poly", "--rank", "4", "--eval", "2"],
    ["poly", "--rank", "1"],
    ["verify", "--suite", "1,9"],
    ["sweep", "--family", "finite", "--stop", "30"],
    ["sweep", "--family", "padic", "--stop", "30"],
    ["sweep", "--family", "attain", "--stop", "9", "--max-ell", "13"],
]


@pytest.mark.parametrize("argv", JSON_COMMANDS, ids=lambda a: " ".join(a))
def test_json_validates(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    lines = out.splitlines()
    assert lines
    for line in lines:
        VALIDATOR.validate(json.loads(line))


def test_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "bound", "--field", "F_7")
    _, js, _ = run(capsys, "bound", "--field", "F_7", "--json")
    body = json.loads(js)
    assert f"M(k) = {body['global']['factored']} = {body['global']['decimal']}" in text
    for entry in body["perPrime"]:
        assert f"l={entry['ell']} t={entry['t']} m={entry['m']} M={entry['M']}" in text


def test_sweep_text_matches_json(capsys):
    _, text, _ = run(capsys, "sweep", "--family", "attain", "--stop", "9", "--max-ell", "13")
    _, js, _ = run(capsys, "sweep", "--family", "attain", "--stop", "9", "--max-ell", "13", "--json")
    for row, line in zip(text.splitlines(), js.splitlines()):
        obj = json.loads(line)
        expected = f"{obj['q']} {obj['ell']} {obj['t']} {obj['m']} {obj['M']} {obj['constructedMax']} ok"
        assert row == expected


def test_sweep_workers_preserve_order(capsys):
    _, serial, _ = run(capsys, "sweep", "--family", "finite", "--stop", "200")
    _, parallel, _ = run(capsys, "sweep", "--family", "finite", "--stop", "200", "--workers", "2")
    assert serial == parallel
    assert serial.splitlines()[0] == "2 3^3*5*7 945 ok"


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "bound", "--field", "Q", "--json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["global"]["decimal"] == "120960"


def test_poly_output(capsys):
    _, out, _ = run(capsys, "poly", "--rank", "2", "--eval", "3")
    assert out.splitlines() == [
        "P_2 = Phi_1^2*Phi_2^2*Phi_3*Phi_4*Phi_6",
        "P_2 = X^10 - X^6 - X^4 + 1",
        "P_2(3) = 2^7*5*7*13 = 58240",
    ]


def test_audit_table(capsys):
    code, out, _ = run(capsys, "audit", "--ell", "7", "--t", "6", "--m", "1", "--sharp")
    assert code == 0
    assert "DP8b" in out and out.rstrip().endswith("PASS (tight)")


def _cli(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "minkcrem.cli", *argv], capture_output=True, text=True, env=env)


@pytest.mark.parametrize("argv", [
    ["bound", "--field", "Qp_7", "--json"],
    ["torus", "--q", "4", "--ell", "3"],
    ["sweep", "--family", "attain", "--stop", "16", "--max-ell", "7"],
    ["verify", "--suite", "1,2,3,7,9"],
])
def test_byte_identical_across_runs(argv):
    first, second = _cli(*argv), _cli(*argv)
    assert first.returncode == 0
    assert first.stdout == second.stdout


def test_budget_env_var():
    env = dict(os.environ, MINKCREM_BUDGET="1")
    res = _cli("bound", "--field", "F_1000000007", env=env)
    assert res.returncode == 3
