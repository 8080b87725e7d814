import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabcoh.exactalg import (
    ExactMatrix,
    FieldScalar,
    NotInSpan,
    StructuralError,
    coordinates_in_span,
    extension_field,
    kernel_basis,
    prime_field,
    rank,
    rref,
)

F7 = prime_field(7)


def matrices(p=7, max_rows=7, max_cols=7):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_rref_identity():
    red, piv = rref(ExactMatrix.identity(F7, 2))
    assert red.tolist() == [[1, 0], [0, 1]]
    assert piv == [0, 1]


def test_rref_scales_by_inverse():
    red, piv = rref(ExactMatrix(F7, [[2, 4]]))
    assert red.tolist() == [[1, 2]]
    assert piv == [0]


def test_rref_zero():
    red, piv = rref(ExactMatrix.zeros(F7, 3, 3))
    assert red.tolist() == [[0] * 3] * 3
    assert piv == []


def test_kernel_examples():
    assert kernel_basis(ExactMatrix.identity(F7, 3)) == []
    (v,) = kernel_basis(ExactMatrix(F7, [[1, 2]]))
    assert (v[0] + 2 * v[1]) % 7 == 0 and any(v)
    assert v == [5, 1]
    assert sorted(kernel_basis(ExactMatrix.zeros(F7, 2, 2))) == [[0, 1], [1, 0]]


def test_coordinates_in_span():
    basis = [[1, 0, 0], [0, 1, 0]]
    assert coordinates_in_span([1, 0, 0], basis, field=F7) == [1, 0]
    assert coordinates_in_span([0, 0, 3], basis, modulo=[[0, 0, 1]], field=F7) == [0, 0]
    with pytest.raises(NotInSpan):
        coordinates_in_span([0, 0, 1], basis, field=F7)
    assert coordinates_in_span([3, 5, 2], basis, modulo=[[0, 0, 1]], field=F7) == [3, 5]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    m = ExactMatrix(F7, rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.cols
    for v in ker:
        assert not np.any(m.apply(v))


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rref_idempotent_and_row_space(rows):
    m = ExactMatrix(F7, rows)
    red, piv = rref(m)
    again, piv2 = rref(red)
    assert again.tolist() == red.tolist() and piv == piv2
    assert piv == sorted(piv)
    for r, c in enumerate(piv):
        col = [row[c] for row in red.tolist()]
        assert col == [1 if k == r else 0 for k in range(len(col))]
    # row spaces agree: stacking does not raise the rank
    assert rank(ExactMatrix(F7, rows + red.tolist())) == len(piv)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_span_membership_brute_force(rows, data):
    # oracle: v is in the row span iff appending it keeps the rank
    v = data.draw(st.lists(st.integers(0, 6), min_size=len(rows[0]), max_size=len(rows[0])))
    inside = rank(ExactMatrix(F7, rows + [v])) == rank(ExactMatrix(F7, rows))
    try:
        c = coordinates_in_span(v, rows, field=F7)
    except NotInSpan:
        assert not inside
    else:
        assert inside
        combo = [sum(ci * r[k] for ci, r in zip(c, rows)) % 7 for k in range(len(v))]
        assert combo == v


def test_sparse_roundtrip():
    m = ExactMatrix.from_sparse(F7, 3, 4, {(0, 1): 3, (2, 3): 6})
    assert m.to_sparse() == {(0, 1): 3, (2, 3): 6}
    assert ExactMatrix.from_sparse(F7, 3, 4, m.to_sparse()).tolist() == m.tolist()


def test_structural_errors():
    with pytest.raises(StructuralError):
        prime_field(6)
    with pytest.raises(StructuralError):
        ExactMatrix(F7, [[1, 2], [3]])
    with pytest.raises(StructuralError):
        FieldScalar(prime_field(5), 1) + FieldScalar(F7, 1)


@pytest.mark.parametrize("p,r", [(5, 2), (7, 2), (3, 3), (7, 3)])
def test_extension_field_axioms(p, r):
    fld = extension_field(p, r)
    assert fld.order == p**r
    elems = range(fld.order) if fld.order <= 125 else range(0, fld.order, 7)
    g = fld.generator
    # the generator has multiplicative order p^r - 1
    assert fld.pow(g, fld.order - 1) == 1
    for d in range(1, fld.order - 1):
        if (fld.order - 1) % d == 0:
            assert fld.pow(g, d) != 1
    for a in elems:
        assert fld.add(a, fld.neg(a)) == 0
        if a:
            assert fld.mul(a, fld.inv(a)) == 1
        # Frobenius is additive and fixes exactly the prime field
        assert fld.frobenius(a) == fld.pow(a, p)
        assert (fld.frobenius(a) == a) == (a < p)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 48), st.integers(0, 48), st.integers(0, 48))
def test_field_axioms_f49(a, b, c):
    fld = extension_field(7, 2)
    x, y, z = (FieldScalar(fld, v) for v in (a, b, c))
    assert x + y == y + x and x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) ** 7 == x**7 + y**7
    if y:
        assert (x / y) * y == x


def test_from_fraction():
    assert F7.from_fraction(1, 2) == 4
    assert F7.from_fraction(-3, 5) == (-3 * pow(5, -1, 7)) % 7
    with pytest.raises((StructuralError, ZeroDivisionError, ValueError)):
        F7.from_fraction(1, 7)


def test_extension_rank_nullity():
    fld = extension_field(5, 2)
    rng = np.random.default_rng(3)
    for _ in range(20):
        r, c = rng.integers(1, 6, size=2)
        m = ExactMatrix(fld, rng.integers(0, fld.order, size=(r, c)).tolist())
        assert rank(m) + len(kernel_basis(m)) == c
        for v in kernel_basis(m):
            # check with explicit field arithmetic
            for row in m.tolist():
                acc = 0
                for a, b in zip(row, v):
                    acc = fld.add(acc, fld.mul(a, b))
                assert acc == 0


def test_small_field_exhaustive_rank():
    # every 2x2 matrix over F_3: rank 2 iff determinant nonzero
    f3 = prime_field(3)
    for a, b, c, d in itertools.product(range(3), repeat=4):
        det = (a * d - b * c) % 3
        r = rank(ExactMatrix(f3, [[a, b], [c, d]]))
        assert (r == 2) == (det != 0)
