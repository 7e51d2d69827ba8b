import random
from math import factorial

import pytest

from charquo import permgrp as pg


def cyc(n, *cycles):
    p = list(range(n))
    for c in cycles:
        for i, j in zip(c, c[1:]):
            p[i] = j
        p[c[-1]] = c[0]
    return p


def test_sign():
    assert pg.sign(list(range(6))) == 1
    assert pg.sign(cyc(5, (0, 1))) == -1
    assert pg.sign(cyc(7, (0, 1, 2, 3, 4, 5, 6))) == 1  # 7-cycle is even


def test_sign_homomorphism():
    rng = random.Random(4)
    for _ in range(200):
        a = list(range(9))
        b = list(range(9))
        rng.shuffle(a)
        rng.shuffle(b)
        assert pg.sign(pg.mult(a, b)) == pg.sign(a) * pg.sign(b)


def test_mult_diagram_order():
    a = cyc(3, (0, 1))
    b = cyc(3, (1, 2))
    assert pg.mult(a, b)[0] == b[a[0]]


def test_cycle_machinery():
    p = cyc(8, (0, 1, 2), (4, 5))
    assert pg.cycle_lengths(p) == [1, 1, 1, 2, 3]
    assert pg.fmt_cycles(p) == "(0 1 2)(4 5)"
    assert pg.inverse(pg.inverse(p)) == p
    assert pg.power(p, 5) == pg.mult(pg.mult(p, p), pg.mult(p, pg.mult(p, p)))
    assert pg.power(p, -1) == pg.inverse(p)
    assert pg.power(p, 6) == pg.mult(pg.power(p, 5), p)


def test_is_transitive():
    assert pg.is_transitive([cyc(5, (0, 1, 2, 3, 4))], 5)
    assert not pg.is_transitive([list(range(5))], 5)
    assert not pg.is_transitive([cyc(5, (0, 1))], 5)


def test_schreier_sims_known_orders():
    assert pg.schreier_sims([cyc(4, (0, 1, 2, 3)), cyc(4, (0, 1))]).order == 24
    assert pg.schreier_sims([cyc(4, (0, 1, 2)), cyc(4, (1, 2, 3))]).order == 12
    assert pg.schreier_sims([cyc(4, (0, 1), (2, 3)), cyc(4, (0, 2), (1, 3))]).order == 4
    assert pg.schreier_sims([], 5).order == 1
    b = pg.schreier_sims([cyc(6, (0, 1, 2, 3, 4, 5))])
    assert b.order == 6
    assert b.contains(cyc(6, (0, 2, 4), (1, 3, 5)))
    assert not b.contains(cyc(6, (0, 1)))


def test_schreier_sims_bound():
    with pytest.raises(pg.OracleBoundExceeded):
        pg.schreier_sims([list(range(1, 6001)) + [0]], 6001)


def test_minimal_block_examples():
    gens = [cyc(4, (0, 1, 2, 3))]
    assert pg.minimal_block(gens, 0, 2, 4) == [(0, 2), (1, 3)]
    assert pg.minimal_block(gens, 0, 1, 4) is None
    sgens = [cyc(5, (0, 1, 2, 3, 4)), cyc(5, (0, 1))]
    for beta in range(1, 5):
        assert pg.minimal_block(sgens, 0, beta, 5) is None


def test_window_primes():
    assert pg.window_primes(7) == []
    assert 53 in pg.window_primes(100)
    assert all(n // 2 < q < n - 2 for n in (50, 100) for q in pg.window_primes(n))


def test_giant_certificate_s100():
    gens = [list(range(1, 100)) + [0], cyc(100, (0, 1))]
    cert = pg.giant_certificate(gens, 100, seed=3)
    assert isinstance(cert, pg.GiantCertificate)
    assert cert.revalidate(gens)
    cls = pg.classify_giant(gens, 100, seed=3)
    assert cls.kind == "Symmetric"


def test_small_window_inconclusive():
    gens = [cyc(7, (0, 1, 2, 3, 4, 5, 6))]
    out = pg.giant_certificate(gens, 7, seed=0)
    assert isinstance(out, pg.Inconclusive)
    assert "schreier" in out.reason


def test_classify_small_fallback():
    cls = pg.classify_giant([cyc(4, (0, 1, 2)), cyc(4, (1, 2, 3))], 4)
    assert cls.kind == "Alternating" and cls.order == 12
    cls = pg.classify_giant([cyc(4, (0, 1, 2, 3)), cyc(4, (0, 1))], 4)
    assert cls.kind == "Symmetric"


def test_imprimitive_wreath_inconclusive():
    # 50 blocks of size 2 inside degree 100: no prime cycle above n/2
    swap = cyc(100, (0, 1))
    rot = list(range(2, 100)) + [0, 1]
    cls = pg.classify_giant([swap, rot], 100, seed=1, budget=120)
    assert cls.kind == "Inconclusive"


def _wreath_s2_s3():
    # S2 wr S3 on 6 points: block swaps and block rotation
    return [cyc(6, (0, 1)), cyc(6, (2, 3)), cyc(6, (4, 5)),
            cyc(6, (0, 2, 4), (1, 3, 5))]


def test_corpus_agreement():
    corpus = []
    for n in range(3, 9):
        corpus.append((f"S{n}", [cyc(n, tuple(range(n))), cyc(n, (0, 1))], n))
        corpus.append((f"A{n}", [cyc(n, (0, 1, 2)),
                                 cyc(n, tuple(range(n))) if n % 2 else
                                 cyc(n, tuple(range(1, n)))], n))
        corpus.append((f"C{n}", [cyc(n, tuple(range(n)))], n))
    corpus.append(("Klein4", [cyc(4, (0, 1), (2, 3)), cyc(4, (0, 2), (1, 3))], 4))
    corpus.append(("S2wrS3", _wreath_s2_s3(), 6))
    corpus.append(("D6", [cyc(6, tuple(range(6))), [(6 - i) % 6 for i in range(6)]], 6))
    corpus.append(("S12", [cyc(12, tuple(range(12))), cyc(12, (0, 1))], 12))
    corpus.append(("A12", [cyc(12, (0, 1, 2)), cyc(12, tuple(range(1, 12)))], 12))
    assert len(corpus) >= 20
    for name, gens, n in corpus:
        order = pg.schreier_sims(gens, n).order
        cls = pg.classify_giant(gens, n, seed=5)
        if cls.kind == "Symmetric":
            assert order == factorial(n), name
        elif cls.kind == "Alternating":
            assert 2 * order == factorial(n), name
        else:
            assert order not in (factorial(n), factorial(n) // 2), name


def test_bsgs_order_divisibility():
    # |G| divides n! and n divides |G| for transitive G
    for gens, n in (([cyc(6, tuple(range(6)))], 6),
                    ([cyc(5, (0, 1, 2, 3, 4)), cyc(5, (0, 1))], 5),
                    (_wreath_s2_s3(), 6)):
        order = pg.schreier_sims(gens, n).order
        assert factorial(n) % order == 0
        if pg.is_transitive(gens, n):
            assert order % n == 0


def test_certificate_revalidation_tamper():
    gens = [list(range(1, 100)) + [0], cyc(100, (0, 1))]
    cert = pg.giant_certificate(gens, 100, seed=9)
    bad = pg.GiantCertificate(cert.word, 4, cert.n)  # 4 is not prime
    assert not bad.revalidate(gens)
