"""The property suite run across the documented parameter grid."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .cobar import HopfSpec, SparsePoly, TensorCochain, apply_coproduct_in_slot, apply_counit_in_slot, cobar_d, coproduct
from .cohomology import euler_characteristic_failures
from .dga import DGAPresentation, dga_presentation, differential, sigma
from .lie import (
    Family,
    LieBasisElement,
    LieParams,
    adjoint_failures,
    antisymmetry_failures,
    bracket,
    iota_bracket_failures,
    iota_restriction_failures,
    jacobi_failures,
    lie_presentation,
)

__all__ = [
    "SweepRecord",
    "SweepResult",
    "default_grid",
    "dga_failures",
    "ce_duality_failures",
    "hopf_failures",
    "corollary_failures",
    "run_sweep",
]

PRIMES = (5, 7, 11)
FORMAL_TRIPLES = ((2, 1, 2), (1, 2, 1), (2, 1, 1))


@dataclass(frozen=True)
class SweepRecord:
    prop: str
    params: str
    checked: int
    failures: int
    detail: str = ""


@dataclass
class SweepResult:
    records: list[SweepRecord] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.records)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def matrix(self) -> dict[str, dict[str, int]]:
        """{property: {prime: failures}} summary."""
        out: dict[str, dict[str, int]] = {}
        for r in self.records:
            prime = r.params.split(" ")[0]
            row = out.setdefault(r.prop, {})
            row[prime] = row.get(prime, 0) + r.failures
        return out

    def lines(self) -> list[str]:
        return [
            f"{'PASS' if r.failures == 0 else 'FAIL'} sweep {r.prop} [{r.params}]: {r.checked} checked, {r.failures} failures"
            + (f" ({r.detail})" if r.detail else "")
            for r in self.records
        ]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "failures": self.failures,
            "matrix": self.matrix(),
            "records": [r.__dict__ for r in self.records],
        }


def default_grid(primes=PRIMES, max_m: int = 5) -> list[LieParams]:
    grid = []
    for p in primes:
        for n in (1, 2, 3):
            for m in range(1, max_m + 1):
                grid.append(LieParams.plain(p, n, m))
        for e, f, n in FORMAL_TRIPLES:
            for m in range(f, max_m + 1, f):
                grid.append(LieParams.formal_module(p, e, f, n, m))
    return grid


def _tag(params: LieParams) -> str:
    if params.family is Family.PLAIN:
        return f"p={params.p} plain n={params.n} m={params.m}"
    return f"p={params.p} formal e={params.e} f={params.f} n={params.n} m={params.m}"


def dga_failures(dga: DGAPresentation) -> dict[str, list]:
    """d^2 = 0, internal-degree preservation, sigma d = d sigma and filtration checks on generators."""
    out = {"d2": [], "internal_degree": [], "sigma": [], "filtration": []}
    for b, g in enumerate(dga.generators):
        x = dga.element({1 << b: 1})
        dx = dga.element(dga.differential_table[b])
        if not differential(dga, dx).is_zero():
            out["d2"].append(g.name)
        for m in dx.terms:
            if dga.internal_degree(m) != g.internal_degree:
                out["internal_degree"].append(g.name)
                break
        if any(dga.ravenel_degree(m) > g.ravenel_degree for m in dx.terms):
            out["filtration"].append(g.name)
        if differential(dga, sigma(dga, x)) != sigma(dga, dx):
            out["sigma"].append(g.name)
    return out


def ce_duality_failures(params: LieParams) -> list:
    """Coefficient of h_A h_B in d(h_C) against the coefficient of x_C in [x_A, x_B] (omega = 1)."""
    pres = lie_presentation(params)
    dga = dga_presentation(params)
    bad = []
    for c_pos, g in enumerate(dga.generators):
        dc = dga.differential_table[c_pos]
        for a_pos in range(dga.rank):
            for b_pos in range(a_pos + 1, dga.rank):
                ga, gb = dga.generators[a_pos], dga.generators[b_pos]
                coeff_d = dc.get((1 << a_pos) | (1 << b_pos), 0)
                br = bracket(pres, {LieBasisElement(ga.i, ga.j): 1}, {LieBasisElement(gb.i, gb.j): 1})
                coeff_b = br.get(LieBasisElement(g.i, g.j), 0)
                if coeff_d != coeff_b:
                    bad.append((g.name, ga.name, gb.name, coeff_d, coeff_b))
    return bad


def hopf_failures(p: int, period: int = 2, height: int = 4, samples: int = 10, seed: int = 0) -> dict[str, list]:
    """Coassociativity and counit on t_i, and d^2 = 0 on random 1-cochains."""
    spec = HopfSpec(p, period, height)
    out = {"coassociativity": [], "counit": [], "d2": []}
    for i in range(1, height + 1):
        ti = SparsePoly.var(spec, i)
        dt = coproduct(spec, ti)
        if apply_coproduct_in_slot(dt, 0) != apply_coproduct_in_slot(dt, 1):
            out["coassociativity"].append(f"t{i}")
        base = TensorCochain.from_poly(ti)
        if apply_counit_in_slot(dt, 0) != base or apply_counit_in_slot(dt, 1) != base:
            out["counit"].append(f"t{i}")
    rng = random.Random(seed)
    for k in range(samples):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            exps = [0] * height
            for i in rng.sample(range(height), rng.randint(1, 2)):
                exps[i] = rng.choice([1, 2, p, p + 1])
            terms[tuple(exps)] = rng.randrange(1, p)
        x = TensorCochain.from_poly(SparsePoly(spec, terms))
        if x.is_zero():
            continue
        if not cobar_d(spec, cobar_d(spec, x)).is_zero():
            out["d2"].append(repr(x))
    return out


def corollary_failures(p: int, m: int) -> list:
    """Formal e=2, f=1 tables against the plain height-2 tables (same n)."""
    fa = lie_presentation(LieParams.formal_module(p, 2, 1, 2, m))
    pl = lie_presentation(LieParams.plain(p, 2, m))
    bad = []
    if fa.basis != pl.basis:
        return ["basis"]
    for key in set(fa.bracket_table) | set(pl.bracket_table):
        if fa.bracket_table.get(key, {}) != pl.bracket_table.get(key, {}):
            bad.append(("bracket", key))
    for x in fa.basis:
        if fa.restriction_table[x] != pl.restriction_table[x]:
            bad.append(("restriction", x))
    return bad


def run_sweep(primes=PRIMES, max_m: int = 5) -> SweepResult:
    t0 = time.perf_counter()
    res = SweepResult()
    add = res.records.append
    for params in default_grid(primes, max_m):
        tag = _tag(params)
        dga = dga_presentation(params)
        f = dga_failures(dga)
        for key, label in (("d2", "d^2=0"), ("internal_degree", "internal-degree"), ("sigma", "sigma-commutes"),
                           ("filtration", "filtration")):
            add(SweepRecord(label, tag, dga.rank, len(f[key]), ", ".join(f[key][:3])))
        eu = euler_characteristic_failures(dga)
        add(SweepRecord("euler-characteristic", tag, len({t for t in dga.cache.get("blocks", {})}) or 1, len(eu)))
        pres = lie_presentation(params)
        nb = len(pres.basis)
        add(SweepRecord("antisymmetry", tag, nb * nb, len(antisymmetry_failures(pres))))
        add(SweepRecord("jacobi", tag, nb**3, len(jacobi_failures(pres))))
        add(SweepRecord("adjoint", tag, nb * nb, len(adjoint_failures(pres))))
        add(SweepRecord("ce-duality", tag, nb**3, len(ce_duality_failures(params))))
    for p in primes:
        for m in range(1, max_m + 1):
            fa = lie_presentation(LieParams.formal_module(p, 2, 1, 2, m))
            pl = lie_presentation(LieParams.plain(p, 4, m))
            tag = f"p={p} iota e=2 f=1 n=2 m={m}"
            add(SweepRecord("iota-bracket", tag, len(fa.basis) ** 2, len(iota_bracket_failures(fa, pl))))
            add(SweepRecord("iota-restriction", tag, len(fa.basis), len(iota_restriction_failures(fa, pl))))
        for m in (1, 2):
            add(SweepRecord("corollary", f"p={p} L^A(2,{m}) vs L(2,{m})", 1, len(corollary_failures(p, m))))
    for p in primes:
        h = hopf_failures(p)
        for key in ("coassociativity", "counit", "d2"):
            add(SweepRecord(f"hopf-{key}", f"p={p} fn=2 height=4", 4 if key != "d2" else 10, len(h[key])))
    res.seconds = time.perf_counter() - t0
    return res
