"""Chevalley-Eilenberg DGAs K(n, m) and K^A_omega(n, m).

Exterior monomials are bitmasks over the generator list, which is sorted by
(i, j); every product is normalised to that order with the Koszul sign.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .exactalg import FieldScalar, FieldSpec, StructuralError
from .lie import Family, LieParams, ravenel_number, twist_exponent

__all__ = [
    "DGAGenerator",
    "DGAPresentation",
    "ExteriorElement",
    "dga_presentation",
    "differential",
    "wedge",
    "sigma",
    "mono_mul",
    "parse_expression",
    "standard_definitions",
]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mono_mul(a: int, b: int) -> tuple[int, int]:
    """Product of two exterior monomials as (sign, mask); sign 0 if they overlap."""
    if a & b:
        return 0, 0
    swaps = 0
    for y in _bits(b):
        swaps += (a >> (y + 1)).bit_count() if hasattr(int, "bit_count") else bin(a >> (y + 1)).count("1")
    return (-1 if swaps & 1 else 1), a | b


@dataclass(frozen=True)
class DGAGenerator:
    i: int
    j: int
    internal_degree: int
    ravenel_degree: int
    coh_degree: int = 1

    @property
    def name(self) -> str:
        if self.i < 10 and self.j < 10:
            return f"h{self.i}{self.j}"
        return f"h_{{{self.i},{self.j}}}"


class DGAPresentation:
    """Exterior algebra on h_{i,j} with its differential, gradings and sigma."""

    def __init__(self, params: LieParams, generators, differential_table, cutoff: bool):
        self.params = params
        self.field: FieldSpec = params.field
        self.generators: tuple[DGAGenerator, ...] = tuple(generators)
        self.index = {(g.i, g.j): k for k, g in enumerate(self.generators)}
        self.differential_table: tuple[dict[int, int], ...] = tuple(differential_table)
        self.cutoff = cutoff
        self._dcache: dict[int, dict[int, int]] = {}
        # scratch space for derived data (graded blocks, ranks) owned by other modules
        self.cache: dict = {}

    def __repr__(self):
        return f"DGAPresentation(K[{self.params.label()}], {len(self.generators)} generators)"

    @property
    def internal_modulus(self) -> int:
        return 2 * (self.params.p**self.params.period - 1)

    @property
    def rank(self) -> int:
        return len(self.generators)

    # -- elements ------------------------------------------------------------
    def element(self, terms: Mapping[int, int] | None = None) -> "ExteriorElement":
        return ExteriorElement(self, terms or {})

    def one(self) -> "ExteriorElement":
        return ExteriorElement(self, {0: 1})

    def zero(self) -> "ExteriorElement":
        return ExteriorElement(self, {})

    def gen(self, i: int, j: int) -> "ExteriorElement":
        key = (i, j % self.params.period)
        if key not in self.index:
            raise StructuralError(f"h_{{{i},{j}}} is not a generator of {self}")
        j0, k = twist_exponent(self.params.p, self.params.period, i, j)
        return ExteriorElement(self, {1 << self.index[(i, j0)]: self.params.omega_power(k)})

    def monomial_name(self, mask: int) -> str:
        if mask == 0:
            return "1"
        return "".join(self.generators[b].name for b in _bits(mask))

    # -- gradings ------------------------------------------------------------
    def coh_degree(self, mask: int) -> int:
        return bin(mask).count("1")

    def internal_degree(self, mask: int) -> int:
        return sum(self.generators[b].internal_degree for b in _bits(mask)) % self.internal_modulus

    def ravenel_degree(self, mask: int) -> int:
        return sum(self.generators[b].ravenel_degree for b in _bits(mask))

    # -- differential on monomials -------------------------------------------
    def d_monomial(self, mask: int) -> dict[int, int]:
        hit = self._dcache.get(mask)
        if hit is not None:
            return hit
        fld = self.field
        out: dict[int, int] = {}
        bits = _bits(mask)
        for pos, b in enumerate(bits):
            prefix = mask & ((1 << b) - 1)
            suffix = mask & ~((1 << (b + 1)) - 1)
            for dm, c in self.differential_table[b].items():
                s1, m1 = mono_mul(prefix, dm)
                if not s1:
                    continue
                s2, m2 = mono_mul(m1, suffix)
                if not s2:
                    continue
                sign = s1 * s2 * (-1 if pos & 1 else 1)
                val = c if sign > 0 else fld.neg(c)
                v = fld.add(out.get(m2, 0), val)
                if v:
                    out[m2] = v
                else:
                    out.pop(m2, None)
        self._dcache[mask] = out
        return out

    def sigma_generator(self, b: int) -> tuple[int, int]:
        """sigma(h_{i,j}) = coeff * h_{i,j'} as (coeff, position)."""
        g = self.generators[b]
        j0, k = twist_exponent(self.params.p, self.params.period, g.i, g.j + 1)
        return self.params.omega_power(k), self.index[(g.i, j0)]

    @cached_property
    def names(self) -> dict[str, "ExteriorElement"]:
        out = {g.name: self.gen(g.i, g.j) for g in self.generators}
        return out

    def parse(self, text: str, definitions: Mapping[str, str] | None = None) -> "ExteriorElement":
        return parse_expression(self, text, definitions)


class ExteriorElement:
    """A sparse linear combination of exterior monomials over a DGAPresentation."""

    __slots__ = ("dga", "terms")

    def __init__(self, dga: DGAPresentation, terms: Mapping[int, int]):
        fld = dga.field
        clean = {}
        full = (1 << dga.rank) - 1
        for mask, c in terms.items():
            if mask & ~full:
                raise StructuralError("monomial uses generators outside the DGA")
            code = c.code if isinstance(c, FieldScalar) else int(c)
            if isinstance(c, FieldScalar) and c.field != fld:
                raise StructuralError("coefficient from a different field")
            if fld.is_prime:
                code %= fld.p
            if code:
                clean[mask] = code
        self.dga = dga
        self.terms = clean

    def _same(self, other: "ExteriorElement"):
        if not isinstance(other, ExteriorElement) or other.dga is not self.dga:
            raise StructuralError("elements belong to different DGAs")

    def __add__(self, other):
        self._same(other)
        fld = self.dga.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = fld.add(out.get(m, 0), c)
        return ExteriorElement(self.dga, out)

    def __neg__(self):
        fld = self.dga.field
        return ExteriorElement(self.dga, {m: fld.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExteriorElement":
        fld = self.dga.field
        code = c.code if isinstance(c, FieldScalar) else fld.from_int(int(c))
        return ExteriorElement(self.dga, {m: fld.mul(code, v) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ExteriorElement):
            return wedge(self.dga, self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return other.dga is self.dga and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        fld = self.dga.field
        parts = []
        for m in sorted(self.terms, key=lambda m: (bin(m).count("1"), m)):
            c = self.terms[m]
            coeff = str(c) if fld.is_prime else repr(FieldScalar(fld, c))
            name = self.dga.monomial_name(m)
            parts.append(name if c == 1 else f"{coeff}*{name}")
        return " + ".join(parts)

    # gradings
    def degrees(self) -> set[tuple[int, int]]:
        return {(self.dga.coh_degree(m), self.dga.internal_degree(m)) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def bidegree(self) -> tuple[int, int]:
        degs = self.degrees()
        if len(degs) != 1:
            raise StructuralError("element is zero or not homogeneous")
        return next(iter(degs))

    def ravenel_degree(self) -> int:
        """Largest Ravenel degree among the monomials (the filtration stage holding the cochain)."""
        if not self.terms:
            return 0
        return max(self.dga.ravenel_degree(m) for m in self.terms)


def dga_presentation(
    params: LieParams,
    *,
    ravenel: Callable[[LieParams, int], int] | None = None,
    cutoff: bool = True,
) -> DGAPresentation:
    """Build K(n, m) / K^A_omega(n, m).

    ``ravenel`` assigns the Ravenel degree of h_{i,j}; the default is d_{n,i}
    with the formal-module height n.  With ``cutoff`` the differential vanishes
    on h_{i,j} for i > p d n / (p - 1), where the bracket is zero.
    """
    if not isinstance(params, LieParams):
        raise StructuralError("expected LieParams")
    p, fn = params.p, params.period
    modulus = 2 * (p**fn - 1)
    rav = ravenel or (lambda prm, i: ravenel_number(prm.p, prm.n, i))
    gens = [
        DGAGenerator(i, j, (2 * p**j * (p**i - 1)) % modulus, rav(params, i))
        for i in params.first_indices()
        for j in range(fn)
    ]
    index = {(g.i, g.j): k for k, g in enumerate(gens)}
    fld = params.field
    table = []
    for g in gens:
        terms: dict[int, int] = {}
        if not (cutoff and g.i > params.bracket_cutoff):
            for k in range(params.f, g.i, params.f):
                a = index[(k, g.j)]
                j0, ex = twist_exponent(p, fn, g.i - k, g.j + k)
                b = index[(g.i - k, j0)]
                sign, mask = mono_mul(1 << a, 1 << b)
                if not sign:
                    continue
                c = params.omega_power(ex)
                if sign < 0:
                    c = fld.neg(c)
                v = fld.add(terms.get(mask, 0), c)
                if v:
                    terms[mask] = v
                else:
                    terms.pop(mask, None)
        table.append(terms)
    return DGAPresentation(params, gens, table, cutoff)


def differential(dga: DGAPresentation, x: ExteriorElement) -> ExteriorElement:
    if x.dga is not dga:
        raise StructuralError("element does not belong to this DGA")
    fld = dga.field
    out: dict[int, int] = {}
    for m, c in x.terms.items():
        for m2, c2 in dga.d_monomial(m).items():
            out[m2] = fld.add(out.get(m2, 0), fld.mul(c, c2))
    return ExteriorElement(dga, out)


def wedge(dga: DGAPresentation, a: ExteriorElement, b: ExteriorElement) -> ExteriorElement:
    if a.dga is not dga or b.dga is not dga:
        raise StructuralError("elements do not belong to this DGA")
    fld = dga.field
    out: dict[int, int] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, m = mono_mul(ma, mb)
            if not sign:
                continue
            c = fld.mul(ca, cb)
            if sign < 0:
                c = fld.neg(c)
            out[m] = fld.add(out.get(m, 0), c)
    return ExteriorElement(dga, out)


def sigma(dga: DGAPresentation, x: ExteriorElement) -> ExteriorElement:
    """The algebra map h_{i,j} -> h_{i,j+1} (twisted on wrap-around).

    It is Frobenius-semilinear, sigma(c x) = c^p sigma(x), because h_{i,j}
    stands for t_i^{p^j}; over the prime field this is plain linearity.
    """
    if x.dga is not dga:
        raise StructuralError("element does not belong to this DGA")
    fld = dga.field
    out: dict[int, int] = {}
    for m, c in x.terms.items():
        coeff, acc, sign = fld.frobenius(c), 0, 1
        for b in _bits(m):
            cb, pos = dga.sigma_generator(b)
            coeff = fld.mul(coeff, cb)
            s, acc = mono_mul(acc, 1 << pos)
            sign *= s
        if sign < 0:
            coeff = fld.neg(coeff)
        out[acc] = fld.add(out.get(acc, 0), coeff)
    return ExteriorElement(dga, out)


# -- expression parsing ---------------------------------------------------------

def standard_definitions(dga: DGAPresentation) -> dict[str, str]:
    """zeta_i = h_{i0} + h_{i1}, eta_i = h_{i0} - h_{i1} (period 2), and e40."""
    defs: dict[str, str] = {}
    if dga.params.period == 2:
        for i in dga.params.first_indices():
            defs[f"zeta{i}"] = f"h_{{{i},0}} + h_{{{i},1}}"
            defs[f"eta{i}"] = f"h_{{{i},0}} - h_{{{i},1}}"
        if (3, 0) in dga.index:
            defs["e40"] = "h10 h31 - h11 h30"
    return defs


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<gen>h_\{\s*\d+\s*,\s*\d+\s*\})|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*()]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise StructuralError(f"cannot parse {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_expression(
    dga: DGAPresentation, text: str, definitions: Mapping[str, str] | None = None
) -> ExteriorElement:
    """Parse sums of (rational) multiples of products, e.g. ``"eta4 e40 + 4 eta2 h30 h31"``.

    Generators are written ``h10`` (single-digit indices) or ``h_{i,j}``; other
    names are looked up in ``definitions`` (defaulting to
    :func:`standard_definitions`).  Juxtaposition and ``*`` both multiply.
    """
    defs = dict(standard_definitions(dga))
    defs.update(definitions or {})
    cache: dict[str, ExteriorElement] = {}
    fld = dga.field

    def resolve(name: str, stack: tuple[str, ...]) -> ExteriorElement:
        if name in cache:
            return cache[name]
        m = re.fullmatch(r"h_\{\s*(\d+)\s*,\s*(\d+)\s*\}|h(\d)(\d)", name)
        if m:
            i, j = (int(g) for g in m.groups() if g is not None)
            val = dga.gen(i, j)
        elif name == "1":
            val = dga.one()
        elif name in defs:
            if name in stack:
                raise StructuralError(f"circular definition of {name}")
            val = parse(defs[name], stack + (name,))
        else:
            raise StructuralError(f"unknown name {name!r}")
        cache[name] = val
        return val

    def parse(src: str, stack: tuple[str, ...]) -> ExteriorElement:
        tokens = _tokenize(src)
        pos = 0

        def peek():
            return tokens[pos] if pos < len(tokens) else (None, None)

        def expr():
            nonlocal pos
            total = dga.zero()
            sign = 1
            first = True
            while True:
                kind, val = peek()
                if kind == "op" and val in "+-":
                    sign = sign if val == "+" else -sign
                    pos += 1
                    continue
                if kind is None or (kind == "op" and val == ")"):
                    if first:
                        raise StructuralError(f"empty expression in {src!r}")
                    return total
                t = term()
                total = total + (t if sign > 0 else -t)
                sign, first = 1, False
                kind, val = peek()
                if kind is None or (kind == "op" and val == ")"):
                    return total
                if not (kind == "op" and val in "+-"):
                    raise StructuralError(f"unexpected {val!r} in {src!r}")

        def term():
            nonlocal pos
            coeff = Fraction(1)
            acc = dga.one()
            seen = False
            while True:
                kind, val = peek()
                if kind == "num":
                    coeff *= Fraction(val)
                    pos += 1
                elif kind in ("gen", "name"):
                    acc = acc * resolve(val, stack)
                    pos += 1
                elif kind == "op" and val == "(":
                    pos += 1
                    inner = expr()
                    if peek() != ("op", ")"):
                        raise StructuralError(f"unbalanced parentheses in {src!r}")
                    pos += 1
                    acc = acc * inner
                elif kind == "op" and val == "*":
                    pos += 1
                    continue
                else:
                    break
                seen = True
            if not seen:
                raise StructuralError(f"empty term in {src!r}")
            return acc.scale(1) if coeff == 1 else ExteriorElement(
                dga, {m: fld.mul(c, fld.from_fraction(coeff.numerator, coeff.denominator)) for m, c in acc.terms.items()}
            )

        result = expr()
        if pos != len(tokens):
            raise StructuralError(f"trailing input in {src!r}")
        return result

    if text.strip() == "0":
        return dga.zero()
    return parse(text, ())
