import itertools
import json
import random

import pytest

from stabcoh.cobar import (
    SHIPPED_COCYCLES,
    HopfSpec,
    SparsePoly,
    TensorCochain,
    UnsupportedRange,
    apply_coproduct_in_slot,
    cobar_d,
    coproduct,
    load_cocycle,
    shipped_cocycle,
    verify_cocycle,
)
from stabcoh.exactalg import StructuralError

SPEC7 = HopfSpec(7)


def t(spec, i, e=1):
    return SparsePoly.var(spec, i, e)


def one(spec):
    return SparsePoly.one(spec)


def test_coproduct_examples():
    s = SPEC7
    assert coproduct(s, t(s, 1)) == TensorCochain.tensor(t(s, 1), one(s)) + TensorCochain.tensor(one(s), t(s, 1))
    want = (TensorCochain.tensor(t(s, 2), one(s)) + TensorCochain.tensor(one(s), t(s, 2))
            + TensorCochain.tensor(t(s, 1), t(s, 1, 7)))
    assert coproduct(s, t(s, 2)) == want
    assert coproduct(s, one(s)) == TensorCochain.tensor(one(s), one(s))


def test_cobar_differential_examples():
    s = SPEC7
    assert cobar_d(s, TensorCochain.from_poly(t(s, 1))).is_zero()
    assert cobar_d(s, TensorCochain.from_poly(t(s, 2))) == -TensorCochain.tensor(t(s, 1), t(s, 1, 7))


def _naive_coproduct(spec, mono):
    """Multiply out Delta(t_i)^e term by term, with no digit shortcuts."""
    acc = TensorCochain.tensor(one(spec), one(spec))
    for i, e in enumerate(mono, start=1):
        d = TensorCochain.tensor(one(spec), one(spec)).scale(0)
        for k in range(0, i + 1):
            left = one(spec) if k == 0 else t(spec, k)
            right = one(spec) if k == i else t(spec, i - k, spec.p**k)
            d = d + TensorCochain.tensor(left, right)
        for _ in range(e):
            out = {}
            for (a1, a2), ca in acc.terms.items():
                for (b1, b2), cb in d.terms.items():
                    w = (spec.mono_mul(a1, b1), spec.mono_mul(a2, b2))
                    out[w] = out.get(w, 0) + ca * cb
            acc = TensorCochain(spec, 2, out)
    return acc


@pytest.mark.parametrize("p", [3, 5])
def test_coproduct_matches_naive_expansion(p):
    spec = HopfSpec(p)
    rng = random.Random(p)
    for _ in range(12):
        exps = [0] * spec.max_i
        for i in rng.sample(range(spec.max_i), 2):
            exps[i] = rng.randint(1, p + 2)
        mono = tuple(exps)
        assert coproduct(spec, SparsePoly(spec, {mono: 1})) == _naive_coproduct(spec, mono)


def test_exponent_reduction():
    s = HopfSpec(5)
    assert s.reduce_exponent(25) == 1 and s.reduce_exponent(24) == 24 and s.reduce_exponent(0) == 0
    assert t(s, 1, 25) == t(s, 1)


@pytest.mark.parametrize("p", [5, 7])
def test_coassociativity(p):
    s = HopfSpec(p)
    for i in range(1, s.max_i + 1):
        d = coproduct(s, t(s, i))
        assert apply_coproduct_in_slot(d, 0) == apply_coproduct_in_slot(d, 1)


def test_d_squared_on_two_cochain():
    s = SPEC7
    x = TensorCochain.tensor(t(s, 1), t(s, 2)) + TensorCochain.tensor(t(s, 2, 7), t(s, 1))
    assert cobar_d(s, cobar_d(s, TensorCochain.from_poly(t(s, 3) + t(s, 2, 8)))).is_zero()
    with pytest.raises(NotImplementedError):
        cobar_d(s, cobar_d(s, x))


def test_out_of_range_variable():
    with pytest.raises((UnsupportedRange, StructuralError)):
        t(SPEC7, 5)


@pytest.mark.parametrize("name", ["t1", "h10h30", "zeta4", "h10eta2_amended"])
@pytest.mark.parametrize("p", [7, 11])
def test_cocycles_pass(name, p):
    rep = verify_cocycle(shipped_cocycle(name), p)
    assert rep.passed, rep.line()


@pytest.mark.parametrize("p", [7, 11])
def test_transcribed_h10eta2_has_known_residue(p):
    rep = verify_cocycle(shipped_cocycle("h10eta2"), p)
    s = HopfSpec(p)
    assert not rep.passed
    assert rep.residue == TensorCochain.tensor(t(s, 1), t(s, 1, p), t(s, 1)).scale(-2)


def test_perturbed_zeta4_fails(cobar_dir, tmp_path):
    raw = json.loads((cobar_dir / "zeta4.json").read_text())
    raw["terms"][2]["coefficient"] = "2"
    path = tmp_path / "zeta4_bad.json"
    path.write_text(json.dumps(raw))
    assert not verify_cocycle(load_cocycle(path), 7).passed


def test_min_prime_guard():
    with pytest.raises(StructuralError):
        verify_cocycle(shipped_cocycle("zeta4"), 3)


def test_shipped_list():
    for name in SHIPPED_COCYCLES:
        assert shipped_cocycle(name).name == name
