"""Truncated-polynomial Hopf algebra F_p[t_1, t_2, ...]/(t_i^{p^{fn}} - t_i) and low-degree cobar differentials.

Only the range i <= height is supported; beyond it the coproduct acquires
correction terms that are not modelled here.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .charts import DegreePoly, SCHEMA_VERSION
from .exactalg import StructuralError, prime_field

__all__ = [
    "UnsupportedRange",
    "HopfSpec",
    "SparsePoly",
    "TensorCochain",
    "CocycleFixture",
    "CocycleReport",
    "coproduct",
    "reduced_coproduct",
    "cobar_d",
    "apply_coproduct_in_slot",
    "apply_counit_in_slot",
    "verify_cocycle",
    "load_cocycle",
    "shipped_cocycle",
    "SHIPPED_COCYCLES",
]

Monomial = tuple[int, ...]
Word = tuple[Monomial, ...]


class UnsupportedRange(ValueError):
    """A variable index lies outside the window where the plain coproduct formula holds."""


@dataclass(frozen=True)
class HopfSpec:
    p: int
    period: int = 2
    height: int = 4

    def __post_init__(self):
        prime_field(self.p)
        if self.period < 1 or self.height < 1:
            raise StructuralError("period and height must be positive")

    @property
    def max_i(self) -> int:
        return self.height

    @property
    def q(self) -> int:
        return self.p**self.period

    @property
    def unit(self) -> Monomial:
        return (0,) * self.max_i

    def reduce_exponent(self, e: int) -> int:
        # t^q = t, so t^e = t^{e - (q - 1)} once e >= q
        if e < self.q:
            return e
        return (e - 1) % (self.q - 1) + 1

    def monomial(self, exps: Mapping[int, int]) -> Monomial:
        out = [0] * self.max_i
        for i, e in exps.items():
            if not 1 <= i <= self.max_i:
                raise UnsupportedRange(f"t_{i} is outside the supported range 1..{self.max_i}")
            if e < 0:
                raise StructuralError("negative exponent")
            out[i - 1] = self.reduce_exponent(out[i - 1] + e)
        return tuple(out)

    def mono_mul(self, a: Monomial, b: Monomial) -> Monomial:
        return tuple(self.reduce_exponent(x + y) for x, y in zip(a, b))

    def mono_str(self, m: Monomial) -> str:
        parts = [f"t{i}" + (f"^{e}" if e != 1 else "") for i, e in enumerate(m, 1) if e]
        return "*".join(parts) or "1"


class SparsePoly:
    """Element of F_p[t_1..t_max]/(t_i^{p^{fn}} - t_i) as {exponent vector: coefficient}."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: HopfSpec, terms: Mapping[Monomial, int] | None = None):
        self.spec = spec
        clean: dict[Monomial, int] = {}
        for m, c in (terms or {}).items():
            m = tuple(spec.reduce_exponent(e) for e in m)
            if len(m) != spec.max_i:
                raise StructuralError("monomial has the wrong number of variables")
            c = (clean.get(m, 0) + int(c)) % spec.p
            if c:
                clean[m] = c
            else:
                clean.pop(m, None)
        self.terms = clean

    @classmethod
    def var(cls, spec: HopfSpec, i: int, e: int = 1) -> "SparsePoly":
        return cls(spec, {spec.monomial({i: e}): 1})

    @classmethod
    def one(cls, spec: HopfSpec) -> "SparsePoly":
        return cls(spec, {spec.unit: 1})

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SparsePoly(self.spec, out)

    def __neg__(self):
        return SparsePoly(self.spec, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SparsePoly):
            out: dict[Monomial, int] = defaultdict(int)
            for a, ca in self.terms.items():
                for b, cb in other.terms.items():
                    out[self.spec.mono_mul(a, b)] += ca * cb
            return SparsePoly(self.spec, out)
        return SparsePoly(self.spec, {m: c * int(other) for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, SparsePoly) and self.spec == other.spec and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{self.spec.mono_str(m)}" for m, c in sorted(self.terms.items()))


class TensorCochain:
    """Formal sum of tensor words m_1 (x) ... (x) m_c with F_p coefficients."""

    __slots__ = ("spec", "degree", "terms")

    def __init__(self, spec: HopfSpec, degree: int, terms: Mapping[Word, int] | None = None):
        self.spec = spec
        self.degree = degree
        clean: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            if len(w) != degree:
                raise StructuralError(f"word of length {len(w)} in a degree-{degree} cochain")
            c = (clean.get(w, 0) + int(c)) % spec.p
            if c:
                clean[w] = c
            else:
                clean.pop(w, None)
        self.terms = clean

    @classmethod
    def from_poly(cls, q: SparsePoly) -> "TensorCochain":
        return cls(q.spec, 1, {(m,): c for m, c in q.terms.items()})

    @classmethod
    def tensor(cls, *polys: SparsePoly) -> "TensorCochain":
        spec = polys[0].spec
        acc = {(): 1}
        for q in polys:
            acc = {w + (m,): c * cq for w, c in acc.items() for m, cq in q.terms.items()}
        return cls(spec, len(polys), acc)

    def is_reduced(self) -> bool:
        return all(m != self.spec.unit for w in self.terms for m in w)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TensorCochain"):
        if other.degree != self.degree:
            raise StructuralError("degree mismatch")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return TensorCochain(self.spec, self.degree, out)

    def __neg__(self):
        return TensorCochain(self.spec, self.degree, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "TensorCochain":
        return TensorCochain(self.spec, self.degree, {w: c * v for w, v in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, TensorCochain)
            and self.spec == other.spec
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        ms = self.spec.mono_str
        return " + ".join(
            f"{c}*" + " (x) ".join(ms(m) for m in w) for w, c in sorted(self.terms.items())
        )


# -- coproduct ------------------------------------------------------------------

def _check_range(spec: HopfSpec, m: Monomial):
    if len(m) != spec.max_i:
        raise UnsupportedRange("monomial uses variables beyond the supported range")


def _delta_var(spec: HopfSpec, i: int, k: int = 0) -> dict[tuple[Monomial, Monomial], int]:
    # Delta(t_i)^{p^k} = sum_j t_j^{p^k} (x) t_{i-j}^{p^{j+k}}, t_0 = 1 (Frobenius is additive)
    out = {}
    for j in range(i + 1):
        left = spec.unit if j == 0 else spec.monomial({j: spec.p**k})
        right = spec.unit if j == i else spec.monomial({i - j: spec.p ** (j + k)})
        out[(left, right)] = 1
    return out


def _tensor_mul(spec: HopfSpec, a: dict, b: dict) -> dict:
    out: dict = defaultdict(int)
    for (a1, a2), ca in a.items():
        for (b1, b2), cb in b.items():
            out[(spec.mono_mul(a1, b1), spec.mono_mul(a2, b2))] += ca * cb
    return {k: v % spec.p for k, v in out.items() if v % spec.p}


def _delta_monomial(spec: HopfSpec, m: Monomial, cache: dict) -> dict[tuple[Monomial, Monomial], int]:
    hit = cache.get(m)
    if hit is not None:
        return hit
    acc = {(spec.unit, spec.unit): 1}
    for i, e in enumerate(m, 1):
        k = 0
        while e:
            e, digit = divmod(e, spec.p)
            if digit:
                dv = _delta_var(spec, i, k)
                for _ in range(digit):
                    acc = _tensor_mul(spec, acc, dv)
            k += 1
    cache[m] = acc
    return acc


def _delta_cache(spec: HopfSpec) -> dict:
    return _CACHES.setdefault(spec, {})


_CACHES: dict[HopfSpec, dict] = {}


def coproduct(spec: HopfSpec, q: SparsePoly) -> TensorCochain:
    """Delta(q) as a 2-tensor (unit factors included)."""
    out: dict[Word, int] = defaultdict(int)
    cache = _delta_cache(spec)
    for m, c in q.terms.items():
        _check_range(spec, m)
        for w, v in _delta_monomial(spec, m, cache).items():
            out[w] += c * v
    return TensorCochain(spec, 2, out)


def reduced_coproduct(spec: HopfSpec, q: SparsePoly) -> TensorCochain:
    """Delta-bar(q) = Delta(q) - q (x) 1 - 1 (x) q, i.e. the part with no unit factor."""
    full = coproduct(spec, q)
    return TensorCochain(spec, 2, {w: c for w, c in full.terms.items() if spec.unit not in w})


def apply_coproduct_in_slot(x: TensorCochain, slot: int, reduced: bool = False) -> TensorCochain:
    spec = x.spec
    if not 0 <= slot < x.degree:
        raise StructuralError("slot out of range")
    cache = _delta_cache(spec)
    out: dict[Word, int] = defaultdict(int)
    for w, c in x.terms.items():
        for (l, r), v in _delta_monomial(spec, w[slot], cache).items():
            if reduced and (l == spec.unit or r == spec.unit):
                continue
            out[w[:slot] + (l, r) + w[slot + 1 :]] += c * v
    return TensorCochain(spec, x.degree + 1, out)


def apply_counit_in_slot(x: TensorCochain, slot: int) -> TensorCochain:
    """Apply the augmentation (t_i -> 0) to one tensor slot."""
    spec = x.spec
    out = {w[:slot] + w[slot + 1 :]: c for w, c in x.terms.items() if w[slot] == spec.unit}
    return TensorCochain(spec, x.degree - 1, out)


def cobar_d(spec: HopfSpec, x: TensorCochain) -> TensorCochain:
    """Reduced cobar differential d(a_1|...|a_c) = sum_i (-1)^i a_1|...|Delta-bar(a_i)|...|a_c.

    So d(t_2) = -t_1 (x) t_1^p.  Degrees above 2 are out of scope.
    """
    if x.spec != spec:
        raise StructuralError("cochain over a different Hopf algebra")
    if x.degree < 1:
        raise StructuralError("cobar cochains have degree >= 1")
    if x.degree > 2:
        raise NotImplementedError("cobar differential is implemented for degrees 1 and 2 only")
    if not x.is_reduced():
        raise StructuralError("reduced cobar cochains have no unit tensor factors")
    for w in x.terms:
        for m in w:
            _check_range(spec, m)
    total = TensorCochain(spec, x.degree + 1)
    for slot in range(x.degree):
        part = apply_coproduct_in_slot(x, slot, reduced=True)
        total = total + (part if slot % 2 else -part)
    return total


# -- fixtures -------------------------------------------------------------------

SHIPPED_COCYCLES = ("t1", "h10eta2", "h10h30", "zeta4", "h10eta2_amended")


@dataclass
class CocycleFixture:
    name: str
    cls: str
    degree: int
    min_prime: int
    terms: list[tuple[str, list[dict[int, str]]]]
    period: int = 2
    height: int = 4
    note: str = ""
    source: str | None = None

    def cochain(self, spec: HopfSpec) -> TensorCochain:
        if spec.p < self.min_prime:
            raise StructuralError(f"fixture {self.name} requires p >= {self.min_prime}")
        fld = prime_field(spec.p)
        out = TensorCochain(spec, self.degree)
        for coeff, word in self.terms:
            fr = Fraction(coeff)
            c = fld.from_fraction(fr.numerator, fr.denominator)
            monos = tuple(spec.monomial({i: DegreePoly(e)(spec.p) for i, e in m.items()}) for m in word)
            out = out + TensorCochain(spec, self.degree, {monos: c})
        return out


def _parse_var(key: str) -> int:
    if not (key.startswith("t") and key[1:].isdigit()):
        raise StructuralError(f"bad variable name {key!r}")
    return int(key[1:])


def load_cocycle(path: str | Path) -> CocycleFixture:
    path = Path(path)
    with path.open() as fh:
        raw = json.load(fh)
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise StructuralError(f"{path}: unsupported schema_version {raw.get('schema_version')!r}")
    degree = int(raw["degree"])
    terms = []
    for t in raw["terms"]:
        word = [{_parse_var(k): str(v) for k, v in m.items()} for m in t["word"]]
        if len(word) != degree:
            raise StructuralError(f"{path}: word length {len(word)} differs from degree {degree}")
        Fraction(t["coefficient"])  # validate early
        terms.append((str(t["coefficient"]), word))
    return CocycleFixture(
        name=raw["name"],
        cls=raw.get("class", raw["name"]),
        degree=degree,
        min_prime=int(raw.get("min_prime", 5)),
        terms=terms,
        period=int(raw.get("period", 2)),
        height=int(raw.get("height", 4)),
        note=raw.get("note", ""),
        source=str(path),
    )


def shipped_cocycle(name: str) -> CocycleFixture:
    ref = resources.files("stabcoh") / "fixtures" / "cobar" / f"{name}.json"
    with resources.as_file(ref) as path:
        return load_cocycle(path)


@dataclass
class CocycleReport:
    name: str
    cls: str
    p: int
    passed: bool
    residue: TensorCochain

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = "" if self.passed else f": d = {self.residue}"
        return f"{status} cobar {self.name} (class {self.cls}) at p={self.p}{tail}"

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "fixture": self.name,
            "class": self.cls,
            "p": self.p,
            "passed": self.passed,
            "residue": repr(self.residue) if not self.passed else "0",
        }


def verify_cocycle(fixture: CocycleFixture, p: int) -> CocycleReport:
    spec = HopfSpec(p, fixture.period, fixture.height)
    x = fixture.cochain(spec)
    dx = cobar_d(spec, x)
    return CocycleReport(fixture.name, fixture.cls, p, dx.is_zero(), dx)
