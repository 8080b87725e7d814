"""Exact arithmetic over F_p and F_{p^r}, and dense linear algebra on top of it.

Field elements are carried around as integer codes: for the prime field the
code is the residue itself, for an extension field it is ``sum(c_i * p**i)``
where ``c_i`` are the coefficients of the element as a polynomial in the
adjoined root.  Matrices are ``numpy.int64`` arrays of codes, so every field
operation has an array form and row reduction is vectorised for both kinds
of field.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "StructuralError",
    "NotInSpan",
    "FieldSpec",
    "FieldScalar",
    "ExactMatrix",
    "prime_field",
    "extension_field",
    "rref",
    "kernel_basis",
    "rank",
    "coordinates_in_span",
]

# Extension-field arithmetic goes through log/Zech tables of this size at most.
MAX_TABLE_ORDER = 1 << 22


class StructuralError(ValueError):
    """Raised when inputs are malformed or belong to incompatible structures."""


class NotInSpan(ValueError):
    """The vector is not in span(basis) + span(modulo)."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _polymulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> tuple[int, ...]:
    """Multiply coefficient vectors (constant term first) modulo a monic modulus."""
    r = len(modulus) - 1
    prod = [0] * (2 * r - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, r - 1, -1):
        c = prod[k]
        if c:
            for t in range(r + 1):
                prod[k - r + t] = (prod[k - r + t] - c * modulus[t]) % p
    return tuple(prod[:r])


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r over F_p.

    Coefficients are listed constant term first, and the lexicographic order is
    taken on that list.
    """
    from sympy import Poly, symbols

    x = symbols("x")
    for low in itertools.product(range(p), repeat=r):
        if low[0] == 0:
            continue
        coeffs = list(low) + [1]
        if Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible:
            return tuple(coeffs)
    raise StructuralError(f"no irreducible polynomial of degree {r} over F_{p}")


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The finite field F_{p^r}.

    ``modulus`` is the defining polynomial (constant term first) and is only
    present when ``r > 1``.  Build instances with :func:`prime_field` or
    :func:`extension_field`, which cache them so that identical fields compare
    as the same object.
    """

    p: int
    r: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise StructuralError(f"{self.p} is not prime")
        if self.p >= 2**31:
            raise StructuralError("primes must be below 2**31")
        if self.r < 1:
            raise StructuralError("extension degree must be at least 1")
        if self.r == 1 and self.modulus is not None:
            raise StructuralError("the prime field carries no modulus")
        if self.r > 1:
            if self.modulus is None or len(self.modulus) != self.r + 1 or self.modulus[-1] != 1:
                raise StructuralError("extension fields need a monic modulus of degree r")
            if self.p**self.r > MAX_TABLE_ORDER:
                raise StructuralError(f"F_{self.p}^{self.r} is too large for table arithmetic")

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))

    def __repr__(self):
        if self.r == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.r})"

    @property
    def order(self) -> int:
        return self.p**self.r

    @property
    def is_prime(self) -> bool:
        return self.r == 1

    # -- code <-> coefficients -------------------------------------------
    def coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.r):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def encode(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.r:
            raise StructuralError("too many coefficients")
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    # -- tables for extension fields ---------------------------------------
    @cached_property
    def _tables(self):
        """(exp, log, zech) tables relative to the primitive element."""
        q = self.order
        gen = self._primitive_coeffs
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = (1,) + (0,) * (self.r - 1)
        for k in range(q - 1):
            code = self.encode(cur)
            exp[k] = code
            log[code] = k
            cur = _polymulmod(cur, gen, self.modulus, self.p)
        # zech[k] = log(1 + g^k), -1 when 1 + g^k = 0
        c0 = exp % self.p
        one_plus = exp - c0 + (c0 + 1) % self.p
        zech = log[one_plus]
        return exp, log, zech

    @cached_property
    def _primitive_coeffs(self) -> tuple[int, ...]:
        q = self.order
        factors = _prime_factors(q - 1)
        for code in range(2, q):
            c = self.coeffs(code)
            if all(self._polypow(c, (q - 1) // f) != (1,) + (0,) * (self.r - 1) for f in factors):
                return c
        raise StructuralError("no primitive element found")  # pragma: no cover

    def _polypow(self, c, k):
        result = (1,) + (0,) * (self.r - 1)
        base = c
        while k:
            if k & 1:
                result = _polymulmod(result, base, self.modulus, self.p)
            base = _polymulmod(base, base, self.modulus, self.p)
            k >>= 1
        return result

    @cached_property
    def generator(self) -> int:
        """Code of the deterministic primitive element of the multiplicative group."""
        if self.r == 1:
            factors = _prime_factors(self.p - 1)
            for g in range(1, self.p):
                if all(pow(g, (self.p - 1) // f, self.p) != 1 for f in factors):
                    return g
        return self.encode(self._primitive_coeffs)

    # -- scalar operations on codes ------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        return int(self.addv(np.int64(a), np.int64(b)))

    def neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        return self.encode([-c for c in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        exp, log, _ = self._tables
        return int(exp[(log[a] + log[b]) % (self.order - 1)])

    def inv(self, a: int) -> int:
        if a % self.order == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.r == 1:
            return pow(int(a), self.p - 2, self.p)
        exp, log, _ = self._tables
        return int(exp[(-log[a]) % (self.order - 1)])

    def pow(self, a: int, k: int) -> int:
        if self.r == 1:
            if k < 0:
                a, k = self.inv(a), -k
            return pow(int(a), k, self.p)
        if a == 0:
            if k <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return 0
        exp, log, _ = self._tables
        return int(exp[(int(log[a]) * k) % (self.order - 1)])

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p -> F_{p^r}."""
        return n % self.p

    def from_fraction(self, num: int, den: int) -> int:
        if den % self.p == 0:
            raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
        return self.mul(self.from_int(num), self.inv(self.from_int(den)))

    def power_of_generator(self, k: int) -> int:
        """Code of g**k for the deterministic primitive element g."""
        if self.r == 1:
            return pow(self.generator, k % (self.p - 1), self.p)
        exp, _, _ = self._tables
        return int(exp[k % (self.order - 1)])

    # -- array operations (used by row reduction) ------------------------------
    def addv(self, a, b):
        if self.r == 1:
            return (a + b) % self.p
        exp, log, zech = self._tables
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        la, lb = log[a], log[b]
        z = zech[(lb - la) % (self.order - 1)]
        s = np.where(z < 0, 0, exp[(la + np.maximum(z, 0)) % (self.order - 1)])
        return np.where(a == 0, b, np.where(b == 0, a, s))

    def negv(self, a):
        if self.r == 1:
            return (-a) % self.p
        return self.mulv(a, self.neg(1))

    def subv(self, a, b):
        return self.addv(a, self.negv(b))

    def mulv(self, a, b):
        if self.r == 1:
            return (a * b) % self.p
        exp, log, _ = self._tables
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        prod = exp[(log[a] + log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    # -- user-facing scalars ---------------------------------------------------
    def __call__(self, value) -> "FieldScalar":
        if isinstance(value, FieldScalar):
            if value.field != self:
                raise StructuralError("scalar from a different field")
            return value
        return FieldScalar(self, self.from_int(int(value)))

    def element(self, coeffs: Sequence[int]) -> "FieldScalar":
        return FieldScalar(self, self.encode(coeffs))

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)


@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p)


@lru_cache(maxsize=None)
def extension_field(p: int, r: int) -> FieldSpec:
    """F_{p^r} with the lexicographically smallest irreducible modulus."""
    if r == 1:
        return prime_field(p)
    if not _is_prime(p):
        raise StructuralError(f"{p} is not prime")
    return FieldSpec(p, r, smallest_irreducible(p, r))


class FieldScalar:
    """An element of a FieldSpec with the usual operators."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        if not 0 <= code < field.order:
            raise StructuralError(f"code {code} out of range for {field}")
        self.field = field
        self.code = int(code)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise StructuralError("mixed fields in arithmetic")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldScalar(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldScalar(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        return FieldScalar(self.field, self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        return FieldScalar(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(self.field, self.field.neg(self.code))

    def __truediv__(self, other):
        o = self._other(other)
        return FieldScalar(self.field, self.field.mul(self.code, self.field.inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        return FieldScalar(self.field, self.field.mul(o, self.field.inv(self.code)))

    def __pow__(self, k: int):
        return FieldScalar(self.field, self.field.pow(self.code, k))

    def inverse(self) -> "FieldScalar":
        return FieldScalar(self.field, self.field.inv(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        if self.field.is_prime:
            return f"{self.code} (mod {self.field.p})"
        return f"{self.field}{self.coeffs}"


def _as_codes(field: FieldSpec, values) -> np.ndarray:
    arr = np.array(
        [[v.code if isinstance(v, FieldScalar) else int(v) for v in row] for row in values],
        dtype=np.int64,
    ).reshape(len(values), -1) if len(values) else np.zeros((0, 0), dtype=np.int64)
    for row in values:
        for v in row:
            if isinstance(v, FieldScalar) and v.field != field:
                raise StructuralError("mixed fields in matrix entries")
    if field.is_prime:
        return arr % field.p
    if arr.size and (arr.min() < 0 or arr.max() >= field.order):
        raise StructuralError("entry codes out of range")
    return arr


class ExactMatrix:
    """An immutable matrix over a FieldSpec.

    Storage is dense; :meth:`from_sparse` and :meth:`to_sparse` exchange the
    coordinate-list form.
    """

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data, cols: int | None = None):
        if isinstance(data, np.ndarray):
            arr = np.array(data, dtype=np.int64)
            if arr.ndim != 2:
                raise StructuralError("matrix data must be two-dimensional")
            if field.is_prime:
                arr %= field.p
        else:
            rows = list(data)
            if rows and len({len(r) for r in rows}) != 1:
                raise StructuralError("ragged matrix rows")
            arr = _as_codes(field, rows)
            if not rows:
                arr = np.zeros((0, cols or 0), dtype=np.int64)
        if cols is not None and arr.shape[1] != cols:
            raise StructuralError("column count mismatch")
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "ExactMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_sparse(cls, field: FieldSpec, rows: int, cols: int, entries) -> "ExactMatrix":
        """Build from ``{(i, j): value}`` or an iterable of ``(i, j, value)``."""
        items = entries.items() if isinstance(entries, dict) else ((i, j, v) for i, j, v in entries)
        arr = np.zeros((rows, cols), dtype=np.int64)
        for item in items:
            (i, j), v = item if isinstance(entries, dict) else ((item[0], item[1]), item[2])
            if not (0 <= i < rows and 0 <= j < cols):
                raise StructuralError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            code = v.code if isinstance(v, FieldScalar) else field.from_int(int(v))
            arr[i, j] = field.add(int(arr[i, j]), code)
        return cls(field, arr)

    def to_sparse(self) -> dict[tuple[int, int], int]:
        rows, cols = np.nonzero(self.data)
        return {(int(i), int(j)): int(self.data[i, j]) for i, j in zip(rows, cols)}

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def entry(self, i: int, j: int) -> FieldScalar:
        return FieldScalar(self.field, int(self.data[i, j]))

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.data.T)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.field != self.field:
            raise StructuralError("mixed fields in matrix product")
        if self.cols != other.rows:
            raise StructuralError("shape mismatch in matrix product")
        return ExactMatrix(self.field, _matmul(self.field, self.data, other.data))

    def apply(self, vec: Sequence[int]) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64).reshape(-1, 1)
        return _matmul(self.field, self.data, v).ravel()

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.data.tolist()})"


def _matmul(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if field.is_prime:
        p = field.p
        if p < 2**20 and a.shape[1] < 2**20:
            return (a @ b) % p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for k in range(a.shape[1]):
            out = (out + (a[:, k : k + 1] * b[k : k + 1, :]) % p) % p
        return out
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = field.addv(out, field.mulv(a[:, k : k + 1], b[k : k + 1, :]))
    return out


def _rref_array(field: FieldSpec, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.int64)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r] = field.mulv(a[r], field.inv(piv))
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others] = field.subv(a[others], field.mulv(col[others, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row-echelon form and the (strictly increasing) pivot columns."""
    if not isinstance(m, ExactMatrix):
        raise StructuralError("rref expects an ExactMatrix")
    reduced, pivots = _rref_array(m.field, m.data)
    return ExactMatrix(m.field, reduced), pivots


def rank(m: ExactMatrix) -> int:
    return len(rref(m)[1])


def _kernel_from_rref(field: FieldSpec, reduced: np.ndarray, pivots: list[int], ncols: int) -> np.ndarray:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = field.neg(int(reduced[row, f]))
    return basis


def kernel_basis(m: ExactMatrix) -> list[list[int]]:
    """Basis of {v : m v = 0}, one vector per free column, in column order."""
    reduced, pivots = _rref_array(m.field, m.data)
    return _kernel_from_rref(m.field, reduced, pivots, m.cols).tolist()


def coordinates_in_span(
    v: Sequence[int],
    basis: Sequence[Sequence[int]],
    modulo: Sequence[Sequence[int]] = (),
    field: FieldSpec | None = None,
) -> list[int]:
    """Coefficients c with v = sum c_i basis_i  (mod span(modulo)).

    Vectors are sequences of codes (or FieldScalars).  Raises :class:`NotInSpan`
    when no such coefficients exist.
    """
    if field is None:
        sample = [x for x in list(v) + [y for b in list(basis) + list(modulo) for y in b] if isinstance(x, FieldScalar)]
        if not sample:
            raise StructuralError("cannot infer the field; pass field=")
        field = sample[0].field
    n = len(v)
    for w in list(basis) + list(modulo):
        if len(w) != n:
            raise StructuralError("vectors of different lengths")
    cols = [list(b) for b in basis] + [list(w) for w in modulo] + [list(v)]
    aug = _as_codes(field, cols).T if cols else np.zeros((n, 0), dtype=np.int64)
    aug = aug.reshape(n, len(cols))
    reduced, pivots = _rref_array(field, aug)
    last = len(cols) - 1
    if last in pivots:
        raise NotInSpan("vector lies outside the given spans")
    coeffs = [0] * len(basis)
    for row, pc in enumerate(pivots):
        if pc < len(basis):
            coeffs[pc] = int(reduced[row, last])
    return coeffs
