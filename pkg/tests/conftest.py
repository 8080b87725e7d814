from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "src" / "stabcoh" / "fixtures"


@pytest.fixture
def chart_dir():
    return FIXTURES / "charts"


@pytest.fixture
def cobar_dir():
    return FIXTURES / "cobar"


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(mod.TITLES):
        rows = [r for r in mod.RESULTS if r[0] == c]
        if not rows:
            tr.write_line(f"SKIP criterion {c}: {mod.TITLES[c]} (not run)")
            continue
        ok = all(r[2] for r in rows)
        total = sum(r[3] for r in rows)
        failed = [r[1] for r in rows if not r[2]]
        tail = f"; failing: {', '.join(failed)}" if failed else ""
        tr.write_line(
            f"{'PASS' if ok else 'FAIL'} criterion {c}: {mod.TITLES[c]} "
            f"({len(rows) - len(failed)}/{len(rows)} cases, {total:.2f}s, limit {mod.LIMITS[c]:.0f}s){tail}"
        )
