import json

import pytest

from stabcoh.charts import DegreePoly, load_chart, shipped_chart, verify_chart
from stabcoh.exactalg import StructuralError


def test_degree_poly():
    assert DegreePoly("2p^2-2p-5")(7) == 2 * 49 - 14 - 5
    assert DegreePoly("1+p")(7) == 8
    assert DegreePoly("0")(11) == 0
    assert DegreePoly("-p")(5) == -5


@pytest.mark.parametrize("name", ["K_2_2", "K_2_3", "K_2_4_corrected"])
@pytest.mark.parametrize("p", [7, 11])
def test_shipped_charts_pass(name, p):
    report = verify_chart(shipped_chart(name), p)
    assert report.passed, "\n".join(r.line(report.chart) for r in report.failures())


def test_chart1_has_twelve_rows():
    report = verify_chart(shipped_chart("K_2_2"), 7)
    assert report.classes == 12
    assert report.summary().startswith("PASS chart-1")


def test_chart4_counts_eighty_classes():
    report = verify_chart(shipped_chart("K_2_4_corrected"), 7)
    assert report.classes == 80


def test_chart4_transcription_failures_are_the_known_ones():
    report = verify_chart(shipped_chart("K_2_4"), 7)
    bad = {(r.row, r.check) for r in report.failures()}
    assert ("h10 eta4 - eta2 h30", "e") in bad
    assert ("h11 eta4 - eta2 h31", "e") in bad
    assert ("eta4 e40 + 4 eta2 h30 h31", "a") in bad
    # its dual partner fails the pairing check as a consequence
    assert ("eta2 e40", "f") in bad
    assert {row for row, _ in bad} <= {
        "h10 eta4 - eta2 h30", "h11 eta4 - eta2 h31", "eta4 e40 + 4 eta2 h30 h31", "eta2 e40", None,
    }
    assert len(report.failures()) == 7


def test_chart4_nondual_products_do_not_all_vanish():
    report = verify_chart(shipped_chart("K_2_4_corrected"), 7)
    assert len(report.nonvanishing_products) > 0


def _perturbed(chart_dir, tmp_path, name, row, field, value):
    raw = json.loads((chart_dir / f"{name}.json").read_text())
    for r in raw["rows"]:
        if r["name"] == row:
            r[field] = value
    path = tmp_path / f"{name}_perturbed.json"
    path.write_text(json.dumps(raw))
    return load_chart(path)


def test_perturbed_internal_degree_fails_on_that_row(chart_dir, tmp_path):
    fx = _perturbed(chart_dir, tmp_path, "K_2_2", "h11 eta2", "internal_degree", "2p-2")
    report = verify_chart(fx, 7)
    assert not report.passed
    assert {r.row for r in report.failures() if r.check == "b"} == {"h11 eta2"}
    assert any("FAIL chart-1 row h11 eta2 (b)" in line for line in report.lines())


def test_perturbed_ravenel_degree_fails(chart_dir, tmp_path):
    fx = _perturbed(chart_dir, tmp_path, "K_2_2", "h10", "ravenel_degree", "2")
    report = verify_chart(fx, 7)
    assert {r.row for r in report.failures()} >= {"h10"}


def test_prime_guard():
    with pytest.raises(StructuralError):
        verify_chart(shipped_chart("K_2_4"), 3)


def test_report_json_is_versioned():
    out = verify_chart(shipped_chart("K_2_2"), 7).to_json()
    assert out["schema_version"] == 1 and out["passed"] is True
