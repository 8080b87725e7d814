"""Restricted Lie algebras L(n, m) and L^A_omega(n, m).

A basis element x_{i,j} is an :class:`LieBasisElement`; linear combinations
are plain dicts ``{LieBasisElement: code}`` with codes in the presentation's
coefficient field.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, NamedTuple

from .exactalg import FieldSpec, StructuralError, extension_field, prime_field

__all__ = [
    "Family",
    "LieParams",
    "LieBasisElement",
    "LiePresentation",
    "ravenel_number",
    "lie_presentation",
    "bracket",
    "restriction",
    "restrict",
    "iota",
    "iota_coefficient",
    "twist_exponent",
    "jacobi_failures",
    "antisymmetry_failures",
    "adjoint_failures",
    "iota_bracket_failures",
    "iota_restriction_failures",
]

LinComb = dict  # {LieBasisElement: code}


class Family(str, enum.Enum):
    PLAIN = "plain"
    FORMAL_MODULE = "formal-module"


@lru_cache(maxsize=None)
def ravenel_number(p: int, n: int, i: int) -> int:
    """d_{n,i}: zero for i <= 0, else max(i, p * d_{n,i-n})."""
    if n < 1:
        raise StructuralError("n must be positive")
    if i <= 0:
        return 0
    return max(i, p * ravenel_number(p, n, i - n))


def twist_exponent(p: int, period: int, i: int, j: int) -> tuple[int, int]:
    """Reduce the second index of x_{i,j} (or h_{i,j}, t_{i,j}) modulo the period.

    Returns ``(j0, k)`` with ``x_{i,j} = omega**k * x_{i,j0}``, from repeated use
    of ``x_{i,j+period} = omega**(p**j * (p**i - 1)) * x_{i,j}``.  Here ``i`` is
    the index in the ambient (Z_p) numbering, so ``p**i`` is ``q**(i/f)``.
    """
    j1, j0 = divmod(j, period)
    geometric = sum(p ** (a * period) for a in range(j1))
    return j0, p**j0 * (p**i - 1) * geometric


@dataclass(frozen=True)
class LieParams:
    p: int
    n: int
    m: int
    family: Family = Family.PLAIN
    e: int = 1
    f: int = 1
    omega_exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        prime_field(self.p)  # validates p
        if min(self.n, self.m, self.e, self.f) < 1:
            raise StructuralError("n, m, e, f must all be positive")
        if self.family is Family.PLAIN and (self.e, self.f, self.omega_exp) != (1, 1, 0):
            raise StructuralError("the plain family has e = f = 1 and omega = 1")

    @classmethod
    def plain(cls, p: int, n: int, m: int) -> "LieParams":
        return cls(p, n, m)

    @classmethod
    def formal_module(cls, p: int, e: int, f: int, n: int, m: int, omega_exp: int = 0) -> "LieParams":
        return cls(p, n, m, Family.FORMAL_MODULE, e, f, omega_exp)

    @property
    def d(self) -> int:
        return self.e * self.f

    @property
    def period(self) -> int:
        """fn: second indices live in Z/fn."""
        return self.f * self.n

    @property
    def ambient_height(self) -> int:
        return self.d * self.n

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def bracket_cutoff(self) -> Fraction:
        """Brackets [x_i, x_k] vanish once i + k exceeds p d n / (p - 1)."""
        return Fraction(self.p * self.ambient_height, self.p - 1)

    @property
    def omega_order_bound(self) -> int:
        """omega is a root of unity of this order: (q^{en} - 1) / (q^n - 1)."""
        return (self.q ** (self.e * self.n) - 1) // (self.q**self.n - 1)

    @property
    def omega_is_one(self) -> bool:
        return self.omega_exp % self.omega_order_bound == 0

    @cached_property
    def field(self) -> FieldSpec:
        """Smallest F_{p^r} holding omega (the prime field when omega = 1)."""
        if self.omega_is_one:
            return prime_field(self.p)
        big_n = self.omega_order_bound
        r = 1
        while (self.p**r - 1) % big_n:
            r += 1
        return extension_field(self.p, r)

    @cached_property
    def omega(self) -> int:
        """Code of omega = g^{omega_exp (Q-1)/N} in :attr:`field`."""
        if self.omega_is_one:
            return 1
        fld = self.field
        return fld.power_of_generator(self.omega_exp * ((fld.order - 1) // self.omega_order_bound))

    def omega_power(self, k: int) -> int:
        if self.omega_is_one:
            return 1
        return self.field.pow(self.omega, k)

    def first_indices(self) -> list[int]:
        return [i for i in range(self.f, self.m + 1, self.f)]

    def ravenel_degree(self, i: int) -> int:
        return ravenel_number(self.p, self.n, i)

    def label(self) -> str:
        if self.family is Family.PLAIN:
            return f"L({self.n},{self.m}) p={self.p}"
        return f"L^A_w({self.n},{self.m}) p={self.p} e={self.e} f={self.f} w=g^{self.omega_exp}"


class LieBasisElement(NamedTuple):
    i: int
    j: int

    def __repr__(self):
        return f"x_{{{self.i},{self.j}}}"


def _add_into(acc: dict, key, code: int, fld: FieldSpec):
    v = fld.add(acc.get(key, 0), code)
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


@dataclass(frozen=True, eq=False)
class LiePresentation:
    params: LieParams
    basis: tuple[LieBasisElement, ...]
    bracket_table: Mapping[tuple[LieBasisElement, LieBasisElement], LinComb]
    restriction_table: Mapping[LieBasisElement, LinComb]
    field: FieldSpec = field(repr=False)

    def element(self, *terms) -> LinComb:
        """``element((i, j), (i2, j2, coeff), ...)`` as a linear combination."""
        out: dict = {}
        for t in terms:
            i, j, *c = t
            x = LieBasisElement(i, j)
            if x not in self._basis_set:
                raise StructuralError(f"{x!r} is not in the basis")
            _add_into(out, x, self.field.from_int(c[0] if c else 1), self.field)
        return out

    @cached_property
    def _basis_set(self) -> frozenset:
        return frozenset(self.basis)

    def check(self, comb: Mapping) -> None:
        for x in comb:
            if x not in self._basis_set:
                raise StructuralError(f"{x!r} is not in the basis of {self.params.label()}")


def _delta(a: int, b: int, period: int) -> bool:
    return (a - b) % period == 0


def _bracket_basis(params: LieParams, a: LieBasisElement, b: LieBasisElement) -> LinComb:
    i, j = a
    k, l = b
    fn = params.period
    if i + k > params.bracket_cutoff or i + k > params.m:
        return {}
    fld = params.field
    out: dict = {}
    if _delta(l, i + j, fn):
        _add_into(out, LieBasisElement(i + k, j), 1, fld)
    if _delta(j, k + l, fn):
        _add_into(out, LieBasisElement(i + k, l), fld.neg(1), fld)
    return out


def _restriction_basis(params: LieParams, x: LieBasisElement, shift: int | None = None) -> LinComb:
    p, fn = params.p, params.period
    i, j = x
    fld = params.field
    terms: list[LieBasisElement] = []
    if params.family is Family.PLAIN:
        n = params.n
        threshold = Fraction(n, p - 1)
        if p == 2 and i == n:
            terms = [LieBasisElement(2 * n, j), LieBasisElement(2 * n, (j + 1) % n)]
        elif i > threshold or (i == threshold and p > 2):
            terms = [LieBasisElement(i + n, (j + 1) % n)]
    else:
        # shift by the ambient height dn; see decisions on the x_{i+n} display
        shift = params.ambient_height if shift is None else shift
        threshold = Fraction(shift, p - 1)
        up = LieBasisElement(i + shift, (j + 1) % fn)
        power = LieBasisElement(p * i, j)
        divides = i % fn == 0
        if i > threshold:
            terms = [up]
        elif i == threshold:
            terms = [up, power] if divides else [up]
        elif divides:
            terms = [power]
    out: dict = {}
    for t in terms:
        if t.i <= params.m:
            _add_into(out, t, 1, fld)
    return out


def lie_presentation(params: LieParams, *, restriction_shift: int | None = None) -> LiePresentation:
    """Bracket and restriction tables of L(n, m) or L^A_omega(n, m).

    ``restriction_shift`` overrides the first-index shift of the formal-module
    restriction (default dn); it exists so the alternative reading can be tested.
    """
    if not isinstance(params, LieParams):
        raise StructuralError("expected LieParams")
    if params.family is Family.FORMAL_MODULE and not params.omega_is_one:
        raise StructuralError("bracket and restriction formulas are only available for omega = 1")
    basis = tuple(
        LieBasisElement(i, j) for i in params.first_indices() for j in range(params.period)
    )
    table = {}
    for a in basis:
        for b in basis:
            v = _bracket_basis(params, a, b)
            if v:
                table[(a, b)] = v
    restr = {x: _restriction_basis(params, x, restriction_shift) for x in basis}
    return LiePresentation(params, basis, table, restr, params.field)


def bracket(pres: LiePresentation, a: Mapping, b: Mapping) -> LinComb:
    """Bilinear extension of the bracket table."""
    pres.check(a)
    pres.check(b)
    fld = pres.field
    out: dict = {}
    for x, cx in a.items():
        for y, cy in b.items():
            v = pres.bracket_table.get((x, y))
            if v:
                c = fld.mul(cx, cy)
                for z, cz in v.items():
                    _add_into(out, z, fld.mul(c, cz), fld)
    return out


def restriction(pres: LiePresentation, x: LieBasisElement) -> LinComb:
    """xi on a basis element (outputs beyond the truncation are dropped)."""
    x = LieBasisElement(*x)
    if x not in pres._basis_set:
        raise StructuralError(f"{x!r} is not in the basis")
    return dict(pres.restriction_table[x])


def _ad_power(pres: LiePresentation, x: Mapping, y: Mapping, k: int) -> LinComb:
    out = dict(y)
    for _ in range(k):
        out = bracket(pres, x, out)
        if not out:
            break
    return out


def _jacobson_correction(pres: LiePresentation, a: Mapping, b: Mapping) -> LinComb:
    """sum_i s_i(a, b), where i s_i is the lambda^{i-1} coefficient of ad(lambda a + b)^{p-1}(a)."""
    fld, p = pres.field, pres.params.p
    layers: dict[int, LinComb] = {0: dict(a)}
    for _ in range(p - 1):
        new: dict[int, dict] = {}
        for deg, v in layers.items():
            for shift, op in ((1, a), (0, b)):
                w = bracket(pres, op, v)
                if w:
                    tgt = new.setdefault(deg + shift, {})
                    for z, c in w.items():
                        _add_into(tgt, z, c, fld)
        layers = {k: v for k, v in new.items() if v}
        if not layers:
            return {}
    out: dict = {}
    for deg, v in layers.items():
        i = deg + 1
        if 1 <= i <= p - 1:
            scale = fld.inv(fld.from_int(i))
            for z, c in v.items():
                _add_into(out, z, fld.mul(scale, c), fld)
    return out


def restrict(pres: LiePresentation, elem: Mapping) -> LinComb:
    """xi on an arbitrary element, via (c x)^[p] = c^p x^[p] and Jacobson's formula."""
    pres.check(elem)
    fld = pres.field
    acc: dict = {}
    acc_xi: dict = {}
    for x, c in elem.items():
        y = {x: c}
        y_xi = {}
        cp = fld.pow(c, pres.params.p)
        for z, cz in pres.restriction_table[x].items():
            _add_into(y_xi, z, fld.mul(cp, cz), fld)
        new_xi = dict(acc_xi)
        for part in (y_xi, _jacobson_correction(pres, acc, y) if acc else {}):
            for z, cz in part.items():
                _add_into(new_xi, z, cz, fld)
        acc_xi = new_xi
        _add_into(acc, x, c, fld)
    return acc_xi


def iota_coefficient(params: LieParams, i: int, j: int, ell: int) -> int:
    """Coefficient of x_{i, j + ell fn} in iota(x^A_{i,j})."""
    q, n, p = params.q, params.n, params.p
    exponent = p**j * (p**i - 1) * ((q ** (ell * n) - 1) // (q**n - 1))
    return params.omega_power(exponent)


def iota(pres_A: LiePresentation, pres_plain: LiePresentation) -> dict[LieBasisElement, LinComb]:
    """The inclusion L^A_omega(n, m) -> L(dn, m) on basis elements."""
    pa, pp = pres_A.params, pres_plain.params
    if pp.family is not Family.PLAIN:
        raise StructuralError("the target of iota must be a plain presentation")
    if pp.n != pa.ambient_height or pp.p != pa.p:
        raise StructuralError(f"target height {pp.n} must equal dn = {pa.ambient_height} over the same p")
    if pp.m != pa.m:
        raise StructuralError("source and target must share the truncation m")
    out = {}
    fld = pres_plain.field
    for x in pres_A.basis:
        comb: dict = {}
        for ell in range(pa.e):
            y = LieBasisElement(x.i, (x.j + ell * pa.period) % pp.n)
            _add_into(comb, y, iota_coefficient(pa, x.i, x.j, ell), fld)
        out[x] = comb
    return out


def apply_linear(pres_target: LiePresentation, images: Mapping, comb: Mapping) -> LinComb:
    fld = pres_target.field
    out: dict = {}
    for x, c in comb.items():
        for y, cy in images[x].items():
            _add_into(out, y, fld.mul(c, cy), fld)
    return out


# -- axiom checks ----------------------------------------------------------
# Each returns a list of offending inputs; empty means the axiom holds.

def antisymmetry_failures(pres: LiePresentation) -> list:
    fld = pres.field
    bad = []
    for a in pres.basis:
        if bracket(pres, {a: 1}, {a: 1}):
            bad.append((a, a))
        for b in pres.basis:
            ab = bracket(pres, {a: 1}, {b: 1})
            ba = bracket(pres, {b: 1}, {a: 1})
            total = dict(ab)
            for z, c in ba.items():
                _add_into(total, z, c, fld)
            if total:
                bad.append((a, b))
    return bad


def jacobi_failures(pres: LiePresentation) -> list:
    fld = pres.field
    bad = []
    basis = pres.basis
    for ia, a in enumerate(basis):
        for ib in range(ia + 1, len(basis)):
            b = basis[ib]
            for c in basis[ib + 1 :]:
                total: dict = {}
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    inner = bracket(pres, {y: 1}, {z: 1})
                    for w, cw in bracket(pres, {x: 1}, inner).items():
                        _add_into(total, w, cw, fld)
                if total:
                    bad.append((a, b, c))
    return bad


def adjoint_failures(pres: LiePresentation) -> list:
    """Pairs (x, y) with [xi(x), y] != ad_x^p (y)."""
    fld = pres.field
    bad = []
    for x in pres.basis:
        xi = pres.restriction_table[x]
        for y in pres.basis:
            lhs = bracket(pres, xi, {y: 1})
            rhs = _ad_power(pres, {x: 1}, {y: 1}, pres.params.p)
            diff = dict(lhs)
            for z, c in rhs.items():
                _add_into(diff, z, fld.neg(c), fld)
            if diff:
                bad.append((x, y))
    return bad


def iota_bracket_failures(pres_A: LiePresentation, pres_plain: LiePresentation) -> list:
    images = iota(pres_A, pres_plain)
    fld = pres_plain.field
    bad = []
    for a in pres_A.basis:
        for b in pres_A.basis:
            lhs = apply_linear(pres_plain, images, bracket(pres_A, {a: 1}, {b: 1}))
            rhs = bracket(pres_plain, images[a], images[b])
            diff = dict(lhs)
            for z, c in rhs.items():
                _add_into(diff, z, fld.neg(c), fld)
            if diff:
                bad.append((a, b))
    return bad


def iota_restriction_failures(pres_A: LiePresentation, pres_plain: LiePresentation) -> list:
    images = iota(pres_A, pres_plain)
    fld = pres_plain.field
    bad = []
    for a in pres_A.basis:
        lhs = apply_linear(pres_plain, images, pres_A.restriction_table[a])
        rhs = restrict(pres_plain, images[a])
        diff = dict(lhs)
        for z, c in rhs.items():
            _add_into(diff, z, fld.neg(c), fld)
        if diff:
            bad.append(a)
    return bad
