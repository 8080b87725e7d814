from collections import Counter

import pytest

from stabcoh.charts import shipped_chart
from stabcoh.exactalg import StructuralError
from stabcoh.regrade import (
    LaurentSeriesWindow,
    compare_topological_table,
    compare_v3_series,
    periodic_window,
    regrade,
    v3_series,
)

P = 7


def test_regrade_examples():
    assert regrade(1, 2 * (P - 1), 2 * (P - 1), P).top_degree == 2 * P - 3
    assert regrade(0, 0, 0, P) == regrade(0, 0, 0, P)
    c = regrade(5, 2 * P * (P - 1), 2 * P * (P - 1), P)
    assert (c.top_degree, c.adams_filtration) == (2 * P * P - 2 * P - 5, 5)


def test_regrade_rejects_bad_lift():
    with pytest.raises(StructuralError):
        regrade(1, 12, 13, P)


def test_topological_table_all_rows():
    rows = compare_topological_table(shipped_chart("K_2_4"), P)
    assert len(rows) == 23
    assert all(ok for *_, ok in rows), [r for r in rows if not r[3]]


def test_single_row_indicator():
    win = periodic_window(Counter({0: 1}), 10, (-25, 25))
    assert win.coefficients == {-20: 1, -10: 1, 0: 1, 10: 1, 20: 1}


def test_empty_window_rejected():
    with pytest.raises(StructuralError):
        LaurentSeriesWindow(3, 1)


def _brute_force(fixture, p, window, period):
    # enumerate (row, exterior subset, shift) triples directly
    tops = [r.lift(p) - r.coh_degree for r in fixture.a_rows if r.lift is not None]
    ext = [r.lift(p) - r.coh_degree for r in fixture.exterior_rows]
    lo, hi = window
    out = Counter()
    for a in tops:
        for mask in range(1 << len(ext)):
            deg = a + sum(e for k, e in enumerate(ext) if mask >> k & 1)
            for n in range(-50, 51):
                if lo <= deg + n * period <= hi:
                    out[deg + n * period] += 1
    return dict(out)


@pytest.mark.parametrize("period", ["default", "paper"])
def test_v3_series_against_brute_force(period):
    fx = shipped_chart("K_2_4")
    pv = 96 if period == "default" else 94
    got = v3_series(fx, P, (-30, 30), period)
    assert got.coefficients == _brute_force(fx, P, (-30, 30), pv)


def test_v3_minus_six_coefficient():
    fx = shipped_chart("K_2_4")
    assert v3_series(fx, P, (-10, 10))[-6] >= 1


def test_series_comparison_reports_both_periods():
    rep = compare_v3_series(shipped_chart("K_2_4"), P, (-30, 30))
    assert set(rep["periods"]) == {"default", "paper"}
    assert rep["period_discrepancy"] is True
    assert rep["first_factor_terms"] == {"chart": 20, "printed": 19}
    assert rep["first_factor_difference"] == {str(2 * P * P - 2 * P - 2): 1}
