"""Bigraded cohomology of Chevalley-Eilenberg DGAs by exact linear algebra."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from .dga import DGAPresentation, ExteriorElement, differential, wedge
from .exactalg import NotInSpan, StructuralError, _kernel_from_rref, _rref_array, coordinates_in_span

__all__ = [
    "NotACocycle",
    "CohomologySpace",
    "PoincarePolynomial",
    "internal_degrees",
    "cochain_dimension",
    "cohomology",
    "cohomology_dimension",
    "poincare_polynomial",
    "reduce_to_basis",
    "filtration_dimensions",
    "class_filtration",
    "cup",
    "cup_coordinates",
    "is_coboundary",
    "euler_characteristic_failures",
    "ungraded_dimensions",
]


class NotACocycle(ValueError):
    pass


@dataclass(frozen=True)
class PoincarePolynomial:
    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coefficients)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @property
    def total(self) -> int:
        return sum(self.coefficients)

    @property
    def top_degree(self) -> int:
        return len(self.coefficients) - 1

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            terms.append(f"{c}{mono}" if (c != 1 or k == 0) else mono)
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class CohomologySpace:
    s: int
    t: int
    dimension: int
    representatives: tuple[ExteriorElement, ...]
    boundary_space: tuple[ExteriorElement, ...]
    monomials: tuple[int, ...] = dc_field(repr=False)
    cocycle_dimension: int = 0


# -- graded blocks --------------------------------------------------------------

def _blocks(dga: DGAPresentation) -> dict[tuple[int, int], tuple[int, ...]]:
    """Monomial masks of each (s, t) block, in increasing mask order."""
    hit = dga.cache.get("blocks")
    if hit is None:
        acc: dict[tuple[int, int], list[int]] = defaultdict(list)
        for s in range(dga.rank + 1):
            for combo in combinations(range(dga.rank), s):
                mask = sum(1 << b for b in combo)
                acc[(s, dga.internal_degree(mask))].append(mask)
        hit = {k: tuple(sorted(v)) for k, v in acc.items()}
        dga.cache["blocks"] = hit
    return hit


def _block(dga: DGAPresentation, s: int, t: int) -> tuple[int, ...]:
    return _blocks(dga).get((s, t % dga.internal_modulus), ())


def internal_degrees(dga: DGAPresentation) -> list[int]:
    return sorted({t for (_, t) in _blocks(dga)})


def cochain_dimension(dga: DGAPresentation, s: int, t: int) -> int:
    return len(_block(dga, s, t))


def _d_matrix(dga: DGAPresentation, s: int, t: int) -> np.ndarray:
    """Matrix of d: C^{s,t} -> C^{s+1,t} (rows: targets, columns: sources)."""
    t %= dga.internal_modulus
    key = ("dmat", s, t)
    hit = dga.cache.get(key)
    if hit is not None:
        return hit
    src, dst = _block(dga, s, t), _block(dga, s + 1, t)
    where = {m: k for k, m in enumerate(dst)}
    mat = np.zeros((len(dst), len(src)), dtype=np.int64)
    for c, m in enumerate(src):
        for m2, code in dga.d_monomial(m).items():
            if m2 not in where:
                raise StructuralError("differential leaves its internal degree")
            mat[where[m2], c] = code
    dga.cache[key] = mat
    return mat


def _rank(dga: DGAPresentation, s: int, t: int) -> int:
    t %= dga.internal_modulus
    key = ("rank", s, t)
    if key not in dga.cache:
        mat = _d_matrix(dga, s, t)
        dga.cache[key] = len(_rref_array(dga.field, mat)[1]) if mat.size else 0
    return dga.cache[key]


def cohomology_dimension(dga: DGAPresentation, s: int, t: int) -> int:
    dim = cochain_dimension(dga, s, t)
    if not dim:
        return 0
    return dim - _rank(dga, s, t) - (_rank(dga, s - 1, t) if s > 0 else 0)


def _vector(dga: DGAPresentation, x: ExteriorElement, monos: tuple[int, ...]) -> np.ndarray:
    where = {m: k for k, m in enumerate(monos)}
    v = np.zeros(len(monos), dtype=np.int64)
    for m, c in x.terms.items():
        if m not in where:
            raise StructuralError("element is not in the requested bidegree")
        v[where[m]] = c
    return v


def _element(dga: DGAPresentation, vec, monos: tuple[int, ...]) -> ExteriorElement:
    return ExteriorElement(dga, {m: int(c) for m, c in zip(monos, vec) if c})


def _cocycles(dga: DGAPresentation, s: int, t: int) -> np.ndarray:
    mat = _d_matrix(dga, s, t)
    n = len(_block(dga, s, t))
    if mat.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    red, piv = _rref_array(dga.field, mat)
    return _kernel_from_rref(dga.field, red, piv, n)


def _boundaries(dga: DGAPresentation, s: int, t: int) -> np.ndarray:
    """RREF basis of im(d) inside C^{s,t}, as rows."""
    n = len(_block(dga, s, t))
    if s == 0:
        return np.zeros((0, n), dtype=np.int64)
    img = _d_matrix(dga, s - 1, t).T
    if img.size == 0:
        return np.zeros((0, n), dtype=np.int64)
    red, piv = _rref_array(dga.field, img)
    return red[: len(piv)]


def _reduce_rows(fld, rows: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Clear the pivot columns of an RREF ``basis`` from ``rows``."""
    rows = np.array(rows, dtype=np.int64)
    for b in basis:
        pc = int(np.flatnonzero(b)[0])
        coeff = rows[:, pc].copy()
        nz = np.flatnonzero(coeff)
        if nz.size:
            rows[nz] = fld.subv(rows[nz], fld.mulv(coeff[nz, None], b[None, :]))
    return rows


def cohomology(dga: DGAPresentation, s: int, t: int) -> CohomologySpace:
    """H^{s,t} with deterministic representatives.

    The representatives are the nonzero rows of the RREF of the cocycle space
    after clearing the pivot columns of the boundary RREF.
    """
    t %= dga.internal_modulus
    key = ("space", s, t)
    if key in dga.cache:
        return dga.cache[key]
    monos = _block(dga, s, t)
    fld = dga.field
    if not monos:
        space = CohomologySpace(s, t, 0, (), (), (), 0)
    else:
        z = _cocycles(dga, s, t)
        b = _boundaries(dga, s, t)
        zr = _reduce_rows(fld, z, b) if len(b) else z
        if zr.size:
            red, piv = _rref_array(fld, zr)
            reps = red[: len(piv)]
        else:
            reps = np.zeros((0, len(monos)), dtype=np.int64)
        space = CohomologySpace(
            s,
            t,
            len(reps),
            tuple(_element(dga, r, monos) for r in reps),
            tuple(_element(dga, r, monos) for r in b),
            monos,
            len(z),
        )
    dga.cache[key] = space
    return space


def poincare_polynomial(dga: DGAPresentation) -> PoincarePolynomial:
    coeffs = [0] * (dga.rank + 1)
    for (s, t) in _blocks(dga):
        coeffs[s] += cohomology_dimension(dga, s, t)
    return PoincarePolynomial(tuple(coeffs))


def _bidegree_of(dga, z: ExteriorElement, s, t) -> tuple[int, int]:
    if z.terms:
        return z.bidegree()
    if s is None or t is None:
        raise StructuralError("the zero element needs an explicit bidegree")
    return s, t % dga.internal_modulus


def reduce_to_basis(dga: DGAPresentation, z: ExteriorElement, s: int | None = None, t: int | None = None) -> list[int]:
    """Coordinates of [z] in the representative basis of its H^{s,t}."""
    if z.dga is not dga:
        raise StructuralError("element does not belong to this DGA")
    if not differential(dga, z).is_zero():
        raise NotACocycle(f"d({z}) != 0")
    s, t = _bidegree_of(dga, z, s, t)
    space = cohomology(dga, s, t)
    if not space.monomials:
        return []
    v = _vector(dga, z, space.monomials)
    reps = [_vector(dga, r, space.monomials) for r in space.representatives]
    bnd = [_vector(dga, r, space.monomials) for r in space.boundary_space]
    return coordinates_in_span(v, reps, bnd, field=dga.field)


def is_coboundary(dga: DGAPresentation, z: ExteriorElement, s: int | None = None, t: int | None = None) -> bool:
    return not any(reduce_to_basis(dga, z, s, t))


# -- Ravenel filtration ---------------------------------------------------------

def _filtered_cocycles(dga: DGAPresentation, s: int, t: int, r: int) -> np.ndarray:
    """Cocycles supported on monomials of Ravenel degree <= r, in block coordinates."""
    monos = _block(dga, s, t)
    keep = [k for k, m in enumerate(monos) if dga.ravenel_degree(m) <= r]
    out = np.zeros((0, len(monos)), dtype=np.int64)
    if not keep:
        return out
    sub = _d_matrix(dga, s, t)[:, keep]
    if sub.shape[0]:
        red, piv = _rref_array(dga.field, sub)
        ker = _kernel_from_rref(dga.field, red, piv, len(keep))
    else:
        ker = np.eye(len(keep), dtype=np.int64)
    full = np.zeros((len(ker), len(monos)), dtype=np.int64)
    full[:, keep] = ker
    return full


def _stack_rank(fld, *parts: np.ndarray) -> int:
    rows = [p for p in parts if p.size]
    if not rows:
        return 0
    return len(_rref_array(fld, np.vstack(rows))[1])


def filtration_dimensions(dga: DGAPresentation, s: int, t: int) -> dict[int, int]:
    """{r: dim F_r H / F_{r-1} H} for the Ravenel filtration of H^{s,t}."""
    monos = _block(dga, s, t)
    if not monos:
        return {}
    fld = dga.field
    b = _boundaries(dga, s, t)
    base = len(b)
    out, prev = {}, 0
    for r in sorted({dga.ravenel_degree(m) for m in monos}):
        dim = _stack_rank(fld, b, _filtered_cocycles(dga, s, t, r)) - base
        if dim > prev:
            out[r] = dim - prev
        prev = dim
    return out


def class_filtration(dga: DGAPresentation, z: ExteriorElement) -> int | None:
    """Smallest r with [z] in F_r H; None for the zero class."""
    if not differential(dga, z).is_zero():
        raise NotACocycle(f"d({z}) != 0")
    if z.is_zero():
        return None
    s, t = z.bidegree()
    monos = _block(dga, s, t)
    fld = dga.field
    v = _vector(dga, z, monos)[None, :]
    b = _boundaries(dga, s, t)
    if _stack_rank(fld, b, v) == len(b):
        return None
    for r in sorted({dga.ravenel_degree(m) for m in monos}):
        span = [b, _filtered_cocycles(dga, s, t, r)]
        if _stack_rank(fld, *span, v) == _stack_rank(fld, *span):
            return r
    raise AssertionError("unreachable: the top filtration stage is everything")


# -- products -------------------------------------------------------------------

def cup(dga: DGAPresentation, a: ExteriorElement, b: ExteriorElement) -> ExteriorElement:
    """Cup product at cochain level (wedge of representatives)."""
    for x in (a, b):
        if not differential(dga, x).is_zero():
            raise NotACocycle(f"d({x}) != 0")
    return wedge(dga, a, b)


def cup_coordinates(dga: DGAPresentation, a: ExteriorElement, b: ExteriorElement) -> list[int]:
    prod = cup(dga, a, b)
    s = sum(x.bidegree()[0] for x in (a, b))
    t = sum(x.bidegree()[1] for x in (a, b))
    return reduce_to_basis(dga, prod, s, t)


# -- consistency checks ---------------------------------------------------------

def euler_characteristic_failures(dga: DGAPresentation) -> list[tuple[int, int, int]]:
    """Internal degrees where the chain and cohomology Euler characteristics differ."""
    chain, coh = defaultdict(int), defaultdict(int)
    for (s, t), monos in _blocks(dga).items():
        sign = -1 if s & 1 else 1
        chain[t] += sign * len(monos)
        coh[t] += sign * cohomology_dimension(dga, s, t)
    return [(t, chain[t], coh[t]) for t in sorted(chain) if chain[t] != coh[t]]


def ungraded_dimensions(dga: DGAPresentation) -> list[int]:
    """dim H^s of the whole complex, ignoring the internal grading."""
    fld = dga.field
    layers = [
        [sum(1 << b for b in c) for c in combinations(range(dga.rank), s)] for s in range(dga.rank + 1)
    ]
    ranks = []
    for s in range(dga.rank):
        where = {m: k for k, m in enumerate(layers[s + 1])}
        mat = np.zeros((len(layers[s + 1]), len(layers[s])), dtype=np.int64)
        for c, m in enumerate(layers[s]):
            for m2, code in dga.d_monomial(m).items():
                mat[where[m2], c] = code
        ranks.append(len(_rref_array(fld, mat)[1]) if mat.size else 0)
    ranks.append(0)
    return [len(layers[s]) - ranks[s] - (ranks[s - 1] if s else 0) for s in range(dga.rank + 1)]
