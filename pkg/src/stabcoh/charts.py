"""Chart fixtures (rows of cohomology classes with their degrees) and their verification."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path

import numpy as np

from .cohomology import (
    NotACocycle,
    class_filtration,
    cohomology,
    poincare_polynomial,
    reduce_to_basis,
)
from .dga import DGAPresentation, ExteriorElement, differential, dga_presentation, sigma, wedge
from .exactalg import StructuralError, _rref_array
from .lie import Family, LieParams

__all__ = [
    "SCHEMA_VERSION",
    "DegreePoly",
    "ChartRow",
    "ChartFixture",
    "CheckResult",
    "ChartReport",
    "load_chart",
    "shipped_chart",
    "verify_chart",
]

SCHEMA_VERSION = 1


class DegreePoly:
    """Integer polynomial in p, parsed from strings like ``"2p^2-2p"`` or ``"1+p"``."""

    _TERM = re.compile(r"([+-]?)\s*(\d*)\s*(p(?:\^(\d+))?)?")

    def __init__(self, text: str | int):
        self.text = str(text)
        self.coeffs: dict[int, int] = {}
        src = self.text.replace(" ", "")
        if not src:
            raise StructuralError("empty degree expression")
        pos = 0
        while pos < len(src):
            m = self._TERM.match(src, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise StructuralError(f"bad degree expression {self.text!r}")
            if pos and not m.group(1):
                raise StructuralError(f"missing operator in {self.text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            exp = 0 if not m.group(3) else int(m.group(4) or 1)
            self.coeffs[exp] = self.coeffs.get(exp, 0) + sign * coeff
            pos = m.end()

    def __call__(self, p: int) -> int:
        return sum(c * p**e for e, c in self.coeffs.items())

    def __repr__(self):
        return f"DegreePoly({self.text!r})"


@dataclass(frozen=True)
class ChartRow:
    name: str
    expr: str
    coh_degree: int
    internal_degree: DegreePoly
    ravenel_degree: DegreePoly
    sigma_image: str
    factor: str = "A"  # "A", "exterior" or "listed"
    dual: str | None = None
    lift: DegreePoly | None = None


@dataclass
class ChartFixture:
    chart: str
    title: str
    params: LieParams
    min_prime: int
    rows: list[ChartRow]
    definitions: dict[str, str] = field(default_factory=dict)
    basis_mode: str = "listed"
    top_class: str | None = None
    pairing: str = "explicit"
    products: str = "duality_only"
    series: list[int] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    source: str | None = None

    @property
    def a_rows(self) -> list[ChartRow]:
        return [r for r in self.rows if r.factor == "A"]

    @property
    def exterior_rows(self) -> list[ChartRow]:
        return [r for r in self.rows if r.factor == "exterior"]

    def params_at(self, p: int) -> LieParams:
        q = self.params
        return LieParams(p, q.n, q.m, q.family, q.e, q.f, q.omega_exp)

    def duals(self) -> dict[str, str]:
        a = self.a_rows
        if self.pairing == "reverse_order":
            return {r.name: a[len(a) - 1 - k].name for k, r in enumerate(a)}
        return {r.name: r.dual for r in a if r.dual is not None}


def _params_from_json(d: dict) -> LieParams:
    fam = Family(d.get("family", "plain"))
    p = int(d.get("p", 7))
    if fam is Family.PLAIN:
        return LieParams.plain(p, int(d["n"]), int(d["m"]))
    return LieParams.formal_module(p, int(d["e"]), int(d["f"]), int(d["n"]), int(d["m"]), int(d.get("omega_exp", 0)))


def load_chart(path: str | Path) -> ChartFixture:
    """Read a chart fixture (JSON).  Raises FileNotFoundError or StructuralError."""
    path = Path(path)
    with path.open() as fh:
        raw = json.load(fh)
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise StructuralError(f"{path}: unsupported schema_version {raw.get('schema_version')!r}")
    rows = []
    names = set()
    for r in raw["rows"]:
        if r["name"] in names:
            raise StructuralError(f"{path}: duplicate row name {r['name']!r}")
        names.add(r["name"])
        rows.append(
            ChartRow(
                name=r["name"],
                expr=r.get("expr", r["name"]),
                coh_degree=int(r["coh_degree"]),
                internal_degree=DegreePoly(r["internal_degree"]),
                ravenel_degree=DegreePoly(r["ravenel_degree"]),
                sigma_image=r["sigma_image"],
                factor=r.get("factor", "A"),
                dual=r.get("dual"),
                lift=DegreePoly(r["lift"]) if "lift" in r else None,
            )
        )
    duality = raw.get("duality", {})
    known = {"schema_version", "chart", "title", "params", "min_prime", "rows", "definitions",
             "basis_mode", "duality", "products", "series"}
    return ChartFixture(
        chart=raw["chart"],
        title=raw.get("title", raw["chart"]),
        params=_params_from_json(raw["params"]),
        min_prime=int(raw.get("min_prime", 3)),
        rows=rows,
        definitions=dict(raw.get("definitions", {})),
        basis_mode=raw.get("basis_mode", "listed"),
        top_class=duality.get("top_class"),
        pairing=duality.get("pairing", "explicit"),
        products=raw.get("products", "duality_only"),
        series=list(raw.get("series", [])),
        extra={k: v for k, v in raw.items() if k not in known},
        source=str(path),
    )


def shipped_chart(name: str) -> ChartFixture:
    """Load one of the bundled fixtures, e.g. ``shipped_chart("K_2_4")``."""
    ref = resources.files("stabcoh") / "fixtures" / "charts" / f"{name}.json"
    with resources.as_file(ref) as path:
        return load_chart(path)


# -- verification ---------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    check: str
    row: str | None
    passed: bool
    detail: str = ""

    def line(self, chart: str) -> str:
        where = f"row {self.row}" if self.row is not None else "chart"
        tail = f": {self.detail}" if self.detail else ""
        return f"{'PASS' if self.passed else 'FAIL'} {chart} {where} ({self.check}){tail}"


CHECK_NAMES = {
    "a": "cocycle",
    "b": "degrees",
    "c": "filtration",
    "d": "basis",
    "e": "sigma",
    "f": "duality",
    "g": "poincare",
}


@dataclass
class ChartReport:
    chart: str
    p: int
    results: list[CheckResult]
    classes: int = 0
    sigma_signs: dict[str, int] = field(default_factory=dict)
    nonvanishing_products: list[tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def passed_check(self, check: str) -> bool:
        return all(r.passed for r in self.results if r.check == check)

    def lines(self) -> list[str]:
        return [r.line(self.chart) for r in self.results]

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.chart} at p={self.p}: {self.classes} classes, {len(self.failures())} failed checks"

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "chart": self.chart,
            "p": self.p,
            "passed": self.passed,
            "classes": self.classes,
            "sigma_signs": self.sigma_signs,
            "nonvanishing_non_dual_products": [list(x) for x in self.nonvanishing_products],
            "results": [
                {"check": r.check, "name": CHECK_NAMES[r.check], "row": r.row, "passed": r.passed, "detail": r.detail}
                for r in self.results
            ],
        }


def _class_vector(dga: DGAPresentation, x: ExteriorElement, s: int, t: int) -> list[int] | None:
    try:
        return reduce_to_basis(dga, x, s, t)
    except (NotACocycle, StructuralError):
        return None


def verify_chart(fixture: ChartFixture, p: int, dga: DGAPresentation | None = None) -> ChartReport:
    """Run checks (a)-(g) on every row of ``fixture`` at the prime ``p``."""
    if p < fixture.min_prime:
        raise StructuralError(f"{fixture.chart} requires p >= {fixture.min_prime}")
    dga = dga or dga_presentation(fixture.params_at(p))
    mod = dga.internal_modulus
    res: list[CheckResult] = []
    report = ChartReport(fixture.chart, p, res)
    defs = fixture.definitions

    def parse(text):
        return dga.parse(text, defs)

    elems: dict[str, ExteriorElement] = {}
    good: dict[str, bool] = {}
    for row in fixture.rows:
        x = parse(row.expr)
        elems[row.name] = x
        s_exp, t_exp = row.coh_degree, row.internal_degree(p) % mod
        # (a) cocycle
        dx = differential(dga, x)
        res.append(CheckResult("a", row.name, dx.is_zero(), "" if dx.is_zero() else f"d = {dx}"))
        # (b) degrees
        degs = x.degrees()
        ok_b = degs == {(s_exp, t_exp)}
        res.append(CheckResult("b", row.name, ok_b, "" if ok_b else f"expected {(s_exp, t_exp)}, found {sorted(degs)}"))
        good[row.name] = dx.is_zero() and ok_b and not x.is_zero()
        # (c) filtration of the class
        if dx.is_zero():
            r = class_filtration(dga, x)
            want = row.ravenel_degree(p)
            res.append(CheckResult("c", row.name, r == want, "" if r == want else f"expected {want}, found {r}"))
        else:
            res.append(CheckResult("c", row.name, False, "not a cocycle"))
        # (e) sigma image up to one sign
        img = parse(row.sigma_image)
        sx = sigma(dga, x)
        sign = None
        for eps in (1, -1):
            diff = sx - img.scale(eps)
            if diff.is_zero():
                sign = eps
                break
            if ok_b and dx.is_zero() and differential(dga, diff).is_zero() and diff.degrees() <= {(s_exp, (t_exp * p) % mod)}:
                if not any(reduce_to_basis(dga, diff, s_exp, (t_exp * p) % mod)):
                    sign = eps
                    break
        if sign is not None:
            report.sigma_signs[row.name] = sign
            res.append(CheckResult("e", row.name, True, "exact sign" if sign == 1 else "opposite sign"))
        else:
            res.append(CheckResult("e", row.name, False, f"sigma = {sx}, stated {img}"))

    # (d) the rows span H* (directly, or as A tensor exterior)
    if fixture.basis_mode == "tensor":
        ext = fixture.exterior_rows
        family = []
        for a in fixture.a_rows:
            for k in range(len(ext) + 1):
                for combo in combinations(ext, k):
                    name = a.name + "".join(" " + e.name for e in combo)
                    val = elems[a.name]
                    for e in combo:
                        val = wedge(dga, val, elems[e.name])
                    s = a.coh_degree + sum(e.coh_degree for e in combo)
                    t = (a.internal_degree(p) + sum(e.internal_degree(p) for e in combo)) % mod
                    family.append((name, val, s, t))
    else:
        family = [(r.name, elems[r.name], r.coh_degree, r.internal_degree(p) % mod) for r in fixture.rows]
    report.classes = len(family)
    blocks: dict[tuple[int, int], list] = {}
    bad_members = []
    for name, val, s, t in family:
        vec = _class_vector(dga, val, s, t)
        if vec is None:
            bad_members.append(name)
            continue
        blocks.setdefault((s, t), []).append((name, vec))
    poly = poincare_polynomial(dga)
    total = poly.total
    ok_d = not bad_members and len(family) == total
    detail = []
    if bad_members:
        detail.append(f"not classes: {', '.join(bad_members)}")
    if len(family) != total:
        detail.append(f"{len(family)} listed classes vs dim H* = {total}")
    for (s, t), members in sorted(blocks.items()):
        dim = cohomology(dga, s, t).dimension
        mat = np.array([v for _, v in members], dtype=np.int64).reshape(len(members), dim)
        rk = len(_rref_array(dga.field, mat)[1]) if mat.size else 0
        if rk != len(members) or rk != dim:
            ok_d = False
            detail.append(f"H^{{{s},{t}}}: dim {dim}, {len(members)} listed, rank {rk}")
    for s in range(len(poly.coefficients)):
        have = sum(len(m) for (ss, _), m in blocks.items() if ss == s)
        if have != poly.coefficients[s]:
            ok_d = False
            detail.append(f"degree {s}: {have} listed vs dim {poly.coefficients[s]}")
    res.append(CheckResult("d", None, ok_d, "; ".join(dict.fromkeys(detail)) or f"{len(family)} classes form a basis"))

    # (f) duality pairing on the A factor
    if fixture.top_class is not None:
        _check_duality(fixture, dga, p, elems, good, report)

    # (g) Poincare polynomial
    if fixture.series:
        want = tuple(fixture.series)
        ok_g = poly.coefficients == want
        res.append(CheckResult("g", None, ok_g, f"{list(poly.coefficients)}" + ("" if ok_g else f" vs stated {list(want)}")))
    return report


def _check_duality(fixture, dga, p, elems, good, report):
    res = report.results
    mod = dga.internal_modulus
    top = dga.parse(fixture.top_class, fixture.definitions)
    top_deg = top.bidegree()
    top_space = cohomology(dga, *top_deg)
    top_vec = _class_vector(dga, top, *top_deg)
    if top_space.dimension != 1 or top_vec is None or not any(top_vec):
        res.append(CheckResult("f", None, False, f"top class {fixture.top_class} does not span H^{top_deg}"))
        return
    top_idx = next(k for k, c in enumerate(top_vec) if c)
    fld = dga.field

    def top_coeff(vec):
        # [x] = c [top]  =>  c = vec / top_vec  (H^{top} is one-dimensional)
        return fld.mul(vec[top_idx], fld.inv(top_vec[top_idx]))

    a_rows = [r for r in fixture.a_rows if good.get(r.name)]
    duals = fixture.duals()
    by_name = {r.name: r for r in fixture.a_rows}
    pairing = np.zeros((len(a_rows), len(a_rows)), dtype=np.int64)
    for i, ra in enumerate(a_rows):
        for j, rb in enumerate(a_rows):
            s = ra.coh_degree + rb.coh_degree
            t = (ra.internal_degree(p) + rb.internal_degree(p)) % mod
            prod = wedge(dga, elems[ra.name], elems[rb.name])
            if (s, t) == top_deg:
                vec = _class_vector(dga, prod, s, t)
                pairing[i, j] = top_coeff(vec) if vec is not None else 0
            elif fixture.products == "duality_only" and "1" not in (ra.expr, rb.expr) and i <= j:
                vec = _class_vector(dga, prod, s, t) if not prod.is_zero() else []
                if vec is None or any(vec):
                    report.nonvanishing_products.append((ra.name, rb.name))
            elif "1" not in (ra.expr, rb.expr) and i <= j and not prod.is_zero() and s < top_deg[0]:
                vec = _class_vector(dga, prod, s, t)
                if vec is None or any(vec):
                    report.nonvanishing_products.append((ra.name, rb.name))

    missing = [r.name for r in fixture.a_rows if not good.get(r.name)]
    for i, ra in enumerate(a_rows):
        partner = duals.get(ra.name)
        if partner is None or partner not in by_name:
            res.append(CheckResult("f", ra.name, False, "no dual row"))
            continue
        j = next((k for k, r in enumerate(a_rows) if r.name == partner), None)
        if j is None:
            res.append(CheckResult("f", ra.name, False, f"dual {partner} is not a valid class"))
            continue
        off = [a_rows[k].name for k in range(len(a_rows)) if k != j and pairing[i, k]]
        ok = bool(pairing[i, j]) and not off
        detail = f"pairs with {partner}"
        if not pairing[i, j]:
            detail = f"product with {partner} is not a nonzero multiple of {fixture.top_class}"
        elif off:
            detail = f"also pairs nontrivially with {', '.join(off)}"
        res.append(CheckResult("f", ra.name, ok, detail))
    rk = len(_rref_array(fld, pairing)[1]) if pairing.size else 0
    ok = rk == len(fixture.a_rows) and not missing
    res.append(CheckResult("f", None, ok, f"pairing matrix rank {rk} of {len(fixture.a_rows)}"
                           + (f"; invalid rows {', '.join(missing)}" if missing else "")))
    if fixture.products == "duality_only":
        bad = report.nonvanishing_products
        res.append(CheckResult("f", None, not bad, "all other products vanish" if not bad
                               else "nonvanishing products: " + "; ".join(f"{a}*{b}" for a, b in bad)))
