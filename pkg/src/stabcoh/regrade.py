"""Topological degrees, Adams filtrations and windowed V(3) Poincare series from chart fixtures."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .charts import ChartFixture, DegreePoly
from .exactalg import StructuralError

__all__ = [
    "RegradedClass",
    "LaurentSeriesWindow",
    "regrade",
    "regrade_chart",
    "compare_topological_table",
    "chart_generating_function",
    "display_generating_function",
    "periodic_window",
    "v3_series",
    "display_series",
    "compare_v3_series",
    "period_value",
]


@dataclass(frozen=True)
class RegradedClass:
    name: str
    top_degree: int
    adams_filtration: int


def regrade(s: int, t: int, lift: int, p: int, period: int = 2, name: str = "") -> RegradedClass:
    """top degree = lift - s, Adams filtration = s; ``lift`` must reduce to ``t``."""
    modulus = 2 * (p**period - 1)
    if (lift - t) % modulus:
        raise StructuralError(f"lift {lift} is not congruent to {t} mod {modulus}")
    return RegradedClass(name, lift - s, s)


def regrade_chart(fixture: ChartFixture, p: int) -> list[RegradedClass]:
    """Regrade every row carrying a lift, plus the periodicity class if the fixture has one."""
    period = fixture.params.period
    out = []
    for r in fixture.rows:
        if r.lift is None:
            continue
        out.append(regrade(r.coh_degree, r.internal_degree(p), r.lift(p), p, period, r.name))
    per = fixture.extra.get("periodicity")
    if per:
        out.append(
            regrade(int(per["coh_degree"]), DegreePoly(per["internal_degree"])(p), DegreePoly(per["lift"])(p), p, period, per["name"])
        )
    return out


def compare_topological_table(fixture: ChartFixture, p: int) -> list[tuple[str, tuple[int, int], tuple[int, int] | None, bool]]:
    """(name, stated (top, filt), computed (top, filt), match) for each transcribed table row."""
    table = fixture.extra.get("topological_table")
    if not table:
        raise StructuralError(f"{fixture.chart} has no topological table")
    computed = {c.name: (c.top_degree, c.adams_filtration) for c in regrade_chart(fixture, p)}
    out = []
    for row in table:
        want = (DegreePoly(row["top_degree"])(p), int(row["adams_filtration"]))
        got = computed.get(row["name"])
        out.append((row["name"], want, got, got == want))
    return out


@dataclass
class LaurentSeriesWindow:
    lower: int
    upper: int
    coefficients: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper:
            raise StructuralError("empty window")
        self.coefficients = {
            k: v for k, v in sorted(self.coefficients.items()) if v and self.lower <= k <= self.upper
        }

    def __getitem__(self, k: int) -> int:
        return self.coefficients.get(k, 0)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeriesWindow)
            and (self.lower, self.upper) == (other.lower, other.upper)
            and self.coefficients == other.coefficients
        )

    def dense(self) -> list[int]:
        return [self[k] for k in range(self.lower, self.upper + 1)]

    def difference(self, other: "LaurentSeriesWindow") -> dict[int, int]:
        keys = set(self.coefficients) | set(other.coefficients)
        return {k: self[k] - other[k] for k in sorted(keys) if self[k] != other[k]}

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "coefficients": {str(k): v for k, v in self.coefficients.items()}}


def period_value(choice: str | int, p: int) -> int:
    """'default' is |v| = 2(p^2 - 1); 'paper' is the 2(p^2 - 2) printed with the series."""
    if isinstance(choice, int):
        return choice
    if choice == "default":
        return 2 * (p * p - 1)
    if choice == "paper":
        return 2 * (p * p - 2)
    raise StructuralError(f"unknown period choice {choice!r}")


def chart_generating_function(fixture: ChartFixture, p: int) -> Counter:
    """Top-degree generating function of A (x) Lambda(exterior rows), one period."""
    period = fixture.params.period
    a_rows = [r for r in fixture.a_rows if r.lift is not None]
    ext = [r for r in fixture.exterior_rows if r.lift is not None]
    if not a_rows:
        raise StructuralError(f"{fixture.chart} rows carry no lifts")
    ext_tops = [regrade(r.coh_degree, r.internal_degree(p), r.lift(p), p, period).top_degree for r in ext]
    out: Counter = Counter()
    for r in a_rows:
        top = regrade(r.coh_degree, r.internal_degree(p), r.lift(p), p, period).top_degree
        for k in range(len(ext_tops) + 1):
            for combo in combinations(ext_tops, k):
                out[top + sum(combo)] += 1
    return out


def display_generating_function(fixture: ChartFixture, p: int, include_exterior: bool = True) -> Counter:
    """The printed first factor (times the printed exterior factor), one period."""
    disp = fixture.extra.get("v3_display")
    if not disp:
        raise StructuralError(f"{fixture.chart} has no series display")
    first: Counter = Counter()
    for expo, mult in disp["terms"]:
        first[DegreePoly(expo)(p)] += int(mult)
    if not include_exterior:
        return first
    out: Counter = Counter()
    for expo, mult in disp.get("exterior_factor", [["0", 1]]):
        e = DegreePoly(expo)(p)
        for k, v in first.items():
            out[k + e] += v * int(mult)
    return out


def periodic_window(gen: Counter, period: int, window: tuple[int, int]) -> LaurentSeriesWindow:
    """Coefficients of gen(s) * sum_n s^{period n} inside the window (brute force over shifts)."""
    lo, hi = window
    if lo > hi:
        raise StructuralError("empty window")
    if period <= 0:
        raise StructuralError("period must be positive")
    out: Counter = Counter()
    for deg, mult in gen.items():
        n_lo = -((deg - lo) // period)
        n = n_lo
        while deg + n * period <= hi:
            out[deg + n * period] += mult
            n += 1
    return LaurentSeriesWindow(lo, hi, dict(out))


def v3_series(fixture: ChartFixture, p: int, window: tuple[int, int], period: str | int = "default") -> LaurentSeriesWindow:
    return periodic_window(chart_generating_function(fixture, p), period_value(period, p), window)


def display_series(fixture: ChartFixture, p: int, window: tuple[int, int], period: str | int = "paper") -> LaurentSeriesWindow:
    return periodic_window(display_generating_function(fixture, p), period_value(period, p), window)


def compare_v3_series(fixture: ChartFixture, p: int, window: tuple[int, int]) -> dict:
    """Compare the regraded chart against the printed series under both periods."""
    ours_first = Counter()
    period = fixture.params.period
    for r in fixture.a_rows:
        if r.lift is not None:
            ours_first[regrade(r.coh_degree, r.internal_degree(p), r.lift(p), p, period).top_degree] += 1
    printed_first = display_generating_function(fixture, p, include_exterior=False)
    missing = {k: ours_first[k] - printed_first[k] for k in sorted(set(ours_first) | set(printed_first))
               if ours_first[k] != printed_first[k]}
    report = {
        "p": p,
        "window": [window[0], window[1]],
        "first_factor_terms": {"chart": sum(ours_first.values()), "printed": sum(printed_first.values())},
        "first_factor_difference": {str(k): v for k, v in missing.items()},
        "periods": {},
    }
    for choice in ("default", "paper"):
        pv = period_value(choice, p)
        ours = v3_series(fixture, p, window, pv)
        printed = display_series(fixture, p, window, pv)
        report["periods"][choice] = {
            "period": pv,
            "chart_series": ours.to_json()["coefficients"],
            "printed_series": printed.to_json()["coefficients"],
            "match": ours == printed,
            "difference": {str(k): v for k, v in ours.difference(printed).items()},
        }
    printed_own = display_series(fixture, p, window, "paper")
    report["chart_default_vs_printed_paper_period"] = {
        "match": v3_series(fixture, p, window, "default") == printed_own,
        "difference": {str(k): v for k, v in v3_series(fixture, p, window, "default").difference(printed_own).items()},
    }
    report["period_discrepancy"] = period_value("default", p) != period_value("paper", p)
    return report
