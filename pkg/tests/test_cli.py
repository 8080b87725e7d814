import io
import json

import pytest

from stabcoh.cli import main
from conftest import FIXTURES

CHARTS = FIXTURES / "charts"
COBAR = FIXTURES / "cobar"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_ravenel():
    assert run("ravenel", "--p", "7", "--n", "2", "--i", "4") == (0, "14\n")


def test_ravenel_json_has_schema_version():
    code, text = run("ravenel", "--p", "7", "--n", "2", "--i", "3", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["value"] == 7 and data["schema_version"] == 1


def test_verify_chart_pass_and_fail():
    code, text = run("verify-chart", "--chart", str(CHARTS / "K_2_4_corrected.json"), "--p", "7")
    assert code == 0
    assert text.strip().splitlines()[-1] == "PASS chart-4-corrected at p=7: 80 classes, 0 failed checks"
    code, text = run("verify-chart", "--chart", str(CHARTS / "K_2_4.json"), "--p", "7")
    assert code == 1 and "80 classes" in text


def test_every_result_line_names_chart_and_row():
    _, text = run("verify-chart", "--chart", str(CHARTS / "K_2_2.json"), "--p", "7")
    for line in text.strip().splitlines():
        assert line.split()[0] in {"PASS", "FAIL"} and line.split()[1] == "chart-1"


def test_invalid_inputs_exit_2(capsys, tmp_path):
    assert run("verify-chart", "--chart", str(CHARTS / "K_2_4.json"), "--p", "3")[0] == 2
    missing = tmp_path / "absent.json"
    assert run("verify-chart", "--chart", str(missing), "--p", "7")[0] == 2
    assert str(missing) in capsys.readouterr().err
    assert run("poincare", "--p", "8", "--n", "2", "--m", "2")[0] == 2
    assert run("poincare", "--p", "7", "--n", "2", "--m", "2", "--bogus")[0] == 2
    assert run("regrade", "--chart", str(CHARTS / "K_2_4.json"), "--p", "7", "--window", "5:1")[0] == 2
    assert run("poincare", "--p", "7", "--n", "2", "--m", "2", "--e", "2")[0] == 2


def test_verify_cocycle_codes():
    assert run("verify-cocycle", "--fixture", str(COBAR / "zeta4.json"), "--p", "7")[0] == 0
    assert run("verify-cocycle", "--fixture", str(COBAR / "h10eta2.json"), "--p", "7")[0] == 1


def test_poincare_formats():
    code, text = run("poincare", "--p", "7", "--family", "formal-module", "--e", "2", "--n", "2", "--m", "4",
                     "--format", "csv")
    assert code == 0
    assert text.splitlines()[0] == "degree,dimension"
    assert [int(line.split(",")[1]) for line in text.splitlines()[1:]] == [1, 4, 9, 16, 20, 16, 9, 4, 1]


def test_cohomology_block():
    code, text = run("cohomology", "--p", "7", "--n", "2", "--m", "2", "--s", "0", "--t", "0", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["blocks"] == [{"s": 0, "t": 0, "dimension": 1, "representatives": ["1"]}]


def test_lie_check_formal():
    code, text = run("lie-check", "--p", "7", "--family", "formal-module", "--e", "2", "--n", "2", "--m", "3")
    assert code == 0 and "iota-bracket" in text


def test_regrade_reports_period_discrepancy():
    code, text = run("regrade", "--chart", str(CHARTS / "K_2_4.json"), "--p", "7", "--window", "-30:30")
    assert code == 0
    assert "NOTE period of v is 96, printed series period is 94" in text
    assert "PASS chart-4 topological table: 23/23 rows" in text


@pytest.mark.parametrize(
    "argv",
    [
        ("verify-chart", "--chart", str(CHARTS / "K_2_3.json"), "--p", "7", "--format", "json"),
        ("regrade", "--chart", str(CHARTS / "K_2_4.json"), "--p", "7", "--format", "json"),
        ("cohomology", "--p", "5", "--n", "2", "--m", "3"),
    ],
)
def test_output_is_deterministic(argv):
    assert run(*argv) == run(*argv)
