import io
import os
import subprocess
import sys
from pathlib import Path

import pytest

from homcat import cli

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

# name -> argv, run from the fixture directory so the echoed command is stable
CASES = {
    "snf": "abelian snf mat.json",
    "homology": "abelian homology complex.json --degree 0",
    "les": "abelian les cone_2.json",
    "derived": "abelian derived z4ab.json --functor tensor:2 --degree 1",
    "ext_tor": "abelian ext z4ab.json --coeff z2ab.json --degree 1",
    "yoneda": "abelian yoneda complex.json --functor tensor:4 --degree 0",
    "abelian_uct": "abelian uct complex.json --coeff z/2 --degree 0",
    "ab": "group ab s3.json",
    "commutator": "group commutator s3.json",
    "group_homology": "group homology v4.json --degree 2",
    "group_cohomology": "group cohomology z2.json --degree 2 --coeff z/2",
    "stallings": "group stallings q8ext.json",
    "check": "ext check s3ext.json",
    "central_no": "ext central s3ext.json",
    "central_yes": "ext central q8ext.json",
    "central2": "ext central2 double_q8.json",
    "congruent_no": "ext congruent z4ext.json v4ext.json",
    "congruent_yes": "ext congruent z4ext.json z4ext.json",
    "enumerate": "ext enumerate --base v4.json --kernel z2.json",
    "acyclicity": "ext acyclicity s3.json --n-max 2",
}


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    cwd = os.getcwd()
    os.chdir(FIXTURES)
    try:
        code = cli.run(argv.split(), out, err)
    finally:
        os.chdir(cwd)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, out, err = run(CASES[name])
    assert code == 0 and err == ""
    assert out == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


@pytest.mark.parametrize("name", ["homology", "enumerate", "yoneda"])
def test_deterministic(name):
    assert run(CASES[name]) == run(CASES[name])


def test_header_lines():
    _, out, _ = run(CASES["homology"])
    lines = out.splitlines()
    assert lines[0] == "command: homcat abelian homology complex.json --degree 0"
    assert lines[1].startswith("inputs: sha256 ") and len(lines[1].split()[-1]) == 64


@pytest.mark.parametrize("argv,code,kind", [
    ("abelian homology malformed.json --degree 0", 2, "ParseError"),
    ("abelian homology missing.json --degree 0", 2, "ParseError"),
    ("group ab bad_table.json", 2, "GroupAxiomError"),
    ("ext uct s3.json --coeff z/2 --degree 1", 3, "PreconditionError"),
    ("--max-tuples 10 group homology s3.json --degree 3", 4, "BudgetError"),
    ("ext uce-verify trivial_a5.json --probes probes", 5, ""),
    ("ext enumerate --base v4.json", 2, "ParseError"),
])
def test_exit_codes(argv, code, kind):
    got, out, err = run(argv)
    assert got == code
    assert kind in err
    assert out.startswith("command: homcat ")


def test_parse_error_position():
    _, _, err = run("abelian homology malformed.json --degree 0")
    assert "(line 3, column 1)" in err


def test_usage_error():
    with pytest.raises(SystemExit) as ex:
        run("abelian frob x")
    assert ex.value.code == 2


def test_budget_reported():
    _, out, err = run("--max-tuples 10 group homology s3.json --degree 3")
    assert "max_tuples = 10" in err and "resources: order 6" in out


def test_config_file():
    code, out, _ = run("--config config.json group homology v4.json --degree 2")
    assert code == 0 and "Z/2" in out


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "homcat.cli", "abelian", "snf", "mat.json"],
                         cwd=FIXTURES, capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "command: homcat abelian snf mat.json"
