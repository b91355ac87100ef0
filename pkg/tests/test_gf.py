import random

import pytest

from frobtwist import poly
from frobtwist.errors import NotPrime, SizeBound, ZeroPolynomial
from frobtwist.gf import FiniteField
from frobtwist.poly import factor, make_field


def test_make_field_prime():
    F2 = make_field(2, 1)
    assert (F2.p, F2.q, F2.degree) == (2, 2, 1)


def test_make_field_f4_canonical_modulus():
    # exhaustive scan: u^2+u+1 is the unique degree-2 irreducible over F_2
    F2 = make_field(2, 1)
    irr = [f for f in poly.irreducibles(F2, 2)]
    assert irr == [(1, 1, 1)]
    F4 = make_field(2, 2)
    assert F4.modulus == (1, 1, 1)
    assert F4.render_modulus() == "u^2+u+1"


def test_make_field_not_prime():
    with pytest.raises(NotPrime):
        make_field(4, 1)


def test_make_field_size_bound():
    with pytest.raises(SizeBound):
        make_field(2, 21)


FIELDS = [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (5, 1)]


@pytest.mark.parametrize("p,k", FIELDS)
def test_field_axioms(p, k):
    K = make_field(p, k)
    rng = random.Random(p * 100 + k)
    elems = list(K.elements())
    sample = elems if K.q <= 16 else [rng.randrange(K.q) for _ in range(16)]
    for x in sample:
        assert K.pow_(x, K.q) == x  # Frobenius fixed point over F_q
        if x:
            assert K.mul(x, K.inv(x)) == 1
            assert K.pow_(K.pth_root(x), K.p) == x
        for y in sample[:6]:
            assert K.add(x, y) == K.add(y, x)
            assert K.mul(x, y) == K.mul(y, x)
            for z in sample[:4]:
                assert K.mul(x, K.add(y, z)) == K.add(K.mul(x, y), K.mul(x, z))
                assert K.add(x, K.add(y, z)) == K.add(K.add(x, y), z)


def test_factor_spec_cases():
    F2 = make_field(2, 1)
    F3 = make_field(3, 1)
    assert factor(F2, (0, 1, 1)) == [((0, 1), 1), ((1, 1), 1)]  # t^2+t
    assert factor(F2, (1, 0, 1)) == [((1, 1), 2)]  # t^2+1 = (t+1)^2
    assert factor(F3, (1, 0, 1)) == [((1, 0, 1), 1)]  # irreducible: no root mod 3
    for x in range(3):
        assert poly.evaluate(F3, (1, 0, 1), x) != 0


def test_factor_zero_rejected():
    F2 = make_field(2, 1)
    with pytest.raises(ZeroPolynomial):
        factor(F2, ())


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_factor_product_identity_bulk(p, k):
    K = make_field(p, k)
    rng = random.Random(1000 + p * 10 + k)
    for _ in range(1000):
        f = poly.normalize([rng.randrange(K.q) for _ in range(rng.randrange(1, 14))])
        if poly.deg(f) < 1:
            continue
        facs = factor(K, f)
        prod = (1,)
        for g, mult in facs:
            assert poly.is_irreducible(K, g)
            for _ in range(mult):
                prod = poly.mul(K, prod, g)
        assert poly.scalar_mul(K, f[-1], prod) == f


def test_factor_deterministic():
    K = make_field(2, 2)
    rng = random.Random(9)
    for _ in range(50):
        f = poly.normalize([rng.randrange(K.q) for _ in range(rng.randrange(2, 12))])
        if poly.deg(f) < 1:
            continue
        assert factor(K, f) == factor(K, f)


def test_kronecker_matches_schoolbook():
    rng = random.Random(7)
    for p, k in FIELDS:
        K = make_field(p, k)
        for _ in range(120):
            f = poly.normalize([rng.randrange(K.q) for _ in range(rng.randrange(1, 30))])
            g = poly.normalize([rng.randrange(K.q) for _ in range(rng.randrange(1, 30))])
            if f and g:
                assert poly._schoolbook(K, f, g) == poly.mul(K, f, g)


def test_render_roundtrip_of_elements():
    F4 = make_field(2, 2)
    assert F4.render(0) == "0"
    assert F4.render(1) == "1"
    assert F4.render(2) == "u"
    assert F4.render(3) == "u+1"
