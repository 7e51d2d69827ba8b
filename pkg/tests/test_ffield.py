import random

import pytest

from charquo.ffield import (ElementClass, NotConjugateError, PrimeField,
                            ProjMat2, centralizer_element_of_class,
                            centralizer_pgl, classify, conjugator, is_maximal,
                            mat_det, mat_inv, mat_mul, mat_neg, order,
                            pgl_canon, psl_canon)
from conftest import rand_psl2


def test_field_rejects_bad_modulus():
    for bad in (4, 9, 2, 3, 1):
        with pytest.raises(ValueError):
            PrimeField(bad)


def test_legendre_euler():
    F = PrimeField(19)
    squares = {x * x % 19 for x in range(1, 19)}
    for x in range(1, 19):
        assert F.legendre(x) == (1 if x in squares else -1)
    assert F.legendre(0) == 0


def test_canonical_sign():
    F = PrimeField(31)
    rng = random.Random(5)
    for _ in range(200):
        A = rand_psl2(F, rng)
        assert ProjMat2.of(F, mat_neg(F, A.m)) == A
        first = next(x for x in A.m if x)
        assert 1 <= first <= (F.p - 1) // 2


def test_classify_against_bruteforce():
    F = PrimeField(1009)
    rng = random.Random(7)
    squares = None
    for _ in range(1000):
        M = rand_psl2(F, rng)
        cls = classify(M)
        t = M.trace()
        disc = (t * t - 4) % F.p
        if M.is_one():
            assert cls is ElementClass.IDENTITY
        elif t == 0:
            assert cls is ElementClass.INVOLUTION
        elif disc == 0:
            assert cls is ElementClass.UNIPOTENT
        else:
            if squares is None:
                squares = {x * x % F.p for x in range(1, F.p)}
            want = ElementClass.SPLIT if disc in squares else ElementClass.NONSPLIT
            assert cls is want


def test_classify_spec_examples():
    # trace 3 is split whenever 5 is a quadratic residue (p = +-1 mod 5)
    for p in (19, 31, 29, 41):
        F = PrimeField(p)
        M = ProjMat2.of(F, (0, p - 1, 1, 3))
        want = ElementClass.SPLIT if p % 5 in (1, 4) else ElementClass.NONSPLIT
        assert classify(M) is want
    F = PrimeField(19)
    assert classify(ProjMat2.identity(F)) is ElementClass.IDENTITY
    assert classify(ProjMat2.of(F, (1, 1, 0, 1))) is ElementClass.UNIPOTENT


def test_order_examples():
    F = PrimeField(31)
    assert order(ProjMat2.identity(F)) == 1
    assert order(ProjMat2.of(F, (1, 1, 0, 1))) == 31
    M = ProjMat2.of(F, (0, 30, 1, 3))
    assert order(M) == 15
    assert is_maximal(M)
    # a square of an even-order maximal split element is a proper power
    F2 = PrimeField(29)
    for t in range(3, 29):
        M2 = ProjMat2.of(F2, (0, 28, 1, t))
        if classify(M2) is ElementClass.SPLIT and order(M2) == 14:
            assert not is_maximal(M2 ** 2)
            break
    else:
        pytest.fail("no maximal split element of even order found")


def test_order_divides_centralizer_order():
    F = PrimeField(101)
    rng = random.Random(11)
    for _ in range(300):
        M = rand_psl2(F, rng)
        cls = classify(M)
        k = order(M)
        assert (M ** k).is_one()
        if cls is ElementClass.SPLIT:
            assert (F.p - 1) // 2 % k == 0
        elif cls is ElementClass.NONSPLIT:
            assert (F.p + 1) // 2 % k == 0
        elif cls is ElementClass.UNIPOTENT:
            assert k == F.p
            assert is_maximal(M)


def test_centralizer_sizes_and_classes():
    F = PrimeField(19)
    Msplit = ProjMat2.of(F, (0, 18, 1, 3))
    tor = centralizer_pgl(Msplit)
    assert len(tor) == 18
    assert {c for _, c in tor} == {1, -1}
    for g, c in tor:
        assert pgl_canon(F, mat_mul(F, g, Msplit.m)) == pgl_canon(F, mat_mul(F, Msplit.m, g))
    Mns = ProjMat2.of(F, (0, 18, 1, 5))
    assert classify(Mns) is ElementClass.NONSPLIT
    assert len(centralizer_pgl(Mns)) == 20
    with pytest.raises(ValueError):
        centralizer_pgl(ProjMat2.identity(F))
    z = centralizer_element_of_class(Msplit, -1)
    assert F.legendre(mat_det(F, z)) == -1


def test_conjugator_weyl_and_errors():
    F = PrimeField(31)
    lam = 5
    M = ProjMat2.of(F, (lam, 0, 0, F.inv(lam)))
    g, cls = conjugator(M, M.inv())
    adj = (g[3], (-g[1]) % F.p, (-g[2]) % F.p, g[0])
    assert pgl_canon(F, mat_mul(F, mat_mul(F, g, M.m), adj)) == pgl_canon(F, mat_inv(F, M.m))
    g2, _ = conjugator(M, M)
    assert g2 == (1, 0, 0, 1) or mat_mul(F, g2, M.m) == mat_mul(F, M.m, g2)
    with pytest.raises(NotConjugateError):
        conjugator(ProjMat2.of(F, (0, 30, 1, 3)), ProjMat2.of(F, (0, 30, 1, 5)))


def test_conjugator_random_pairs():
    F = PrimeField(101)
    rng = random.Random(3)
    for _ in range(100):
        M = rand_psl2(F, rng)
        g = rand_psl2(F, rng)
        N = g * M * g.inv()
        h, _ = conjugator(M, N)
        adj = (h[3], (-h[1]) % F.p, (-h[2]) % F.p, h[0])
        assert pgl_canon(F, mat_mul(F, mat_mul(F, h, M.m), adj)) == pgl_canon(F, N.m)


def test_psl_canon_of_negation():
    F = PrimeField(43)
    rng = random.Random(9)
    for _ in range(200):
        A = rand_psl2(F, rng).m
        assert psl_canon(F, mat_neg(F, A)) == psl_canon(F, A)
