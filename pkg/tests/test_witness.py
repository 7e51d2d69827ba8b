import pytest

from charquo import braidquandle as bq
from charquo import witness as wt
from charquo.ffield import ElementClass, classify, mat_trace, psl_canon


def test_find_prime():
    assert wt.find_prime(2, "strict") == 271
    assert wt.find_prime(2, "relaxed") == 19
    assert wt.find_prime(20, "relaxed") == 31
    with pytest.raises(ValueError):
        wt.find_prime(2, "bogus")


def test_build_traces_and_classes(cfg31):
    assert cfg31.params.tgamma == 3
    assert cfg31.params.tdelta == 11
    assert classify(cfg31.params.gamma) is ElementClass.SPLIT
    assert classify(cfg31.params.delta) is ElementClass.NONSPLIT


def test_build_rejects_degenerate():
    for p in (5, 11, 13):
        with pytest.raises(wt.WitnessError):
            wt.build(p)


def test_sigma_matrices_of_P(cfg19):
    # A B^-1 = u, B C^-1 = v, C D^-1 = w on the canonical lifts
    F = cfg19.F
    A, B, C, D = (X.m for X in cfg19.P)
    from charquo.ffield import mat_inv, mat_mul
    assert psl_canon(F, mat_mul(F, A, mat_inv(F, B))) == psl_canon(F, cfg19.u)
    assert psl_canon(F, mat_mul(F, B, mat_inv(F, C))) == psl_canon(F, cfg19.v)
    assert psl_canon(F, mat_mul(F, C, mat_inv(F, D))) == psl_canon(F, cfg19.w)


def test_assumptions_at_desk_primes(cfg19, cfg31):
    r19 = wt.check_assumptions(cfg19)
    assert r19.nonconjugation_ok and r19.point_ok
    assert (r19.ord_gamma, r19.ord_delta) == (9, 10)
    assert not r19.large_orders_ok
    r31 = wt.check_assumptions(cfg31)
    assert (r31.ord_gamma, r31.ord_delta) == (15, 16)
    assert not r31.large_orders_ok
    assert r31.generation is True


def test_assumptions_at_271():
    rep = wt.check_assumptions(wt.build(271))
    assert rep.nonconjugation_ok and rep.point_ok
    assert rep.large_orders_ok
    assert max(rep.ord_gamma, rep.ord_delta) > 60


def test_generation_detects_reducible():
    F = wt.PrimeField(19)
    a = (1, 1, 0, 1)
    b = (1, 3, 0, 1)
    assert wt.generates_psl2(F, a, b) is not True


def test_proper_decomposition_first(cfg19):
    els, flags = wt.proper_decomposition(cfg19.P, "first")
    assert els[0] == cfg19.u
    assert els[2] == cfg19.w
    assert all(flags)
    with pytest.raises(ValueError):
        wt.proper_decomposition(cfg19.P, "third")


def test_proper_decomposition_products(cfg19, rng):
    letters = [bq.S1, bq.S1i, bq.S2, bq.S2i, bq.S3, bq.S3i]
    Q = cfg19.P
    for _ in range(60):
        Q = bq.apply_letter(rng.choice(letters), Q)
        for which in ("first", "second"):
            wt.proper_decomposition(Q, which)  # asserts x z and w y internally


def test_first_decomposition_invariant_under_s1_s3(cfg19, rng):
    F = cfg19.F
    Q = cfg19.P
    els0, _ = wt.proper_decomposition(Q, "first")
    canon0 = tuple(psl_canon(F, m) for m in els0)
    for _ in range(30):
        w = [rng.choice([bq.S1, bq.S1i, bq.S3, bq.S3i]) for _ in range(5)]
        Q = bq.apply_word(w, Q)
        els, _ = wt.proper_decomposition(Q, "first")
        assert tuple(psl_canon(F, m) for m in els) == canon0


def test_unipotent_enumeration_count():
    F = wt.PrimeField(19)
    unis = wt._trace2_unipotents(F)
    assert len(unis) == 19 * 19 - 1
    assert all(mat_trace(F, m) == 2 for m in unis)


def test_unipotent_decompositions_unique(cfg19):
    classes = wt.unipotent_decompositions(cfg19.params)
    assert len(classes) == 1
    els, _ = wt.proper_decomposition(cfg19.P, "first")
    dec = wt.normalize_unipotent_decomposition(cfg19.F, els)
    assert dec[0] + dec[1] + dec[2] + dec[3] in set(classes[0])


def test_count_x_budget(cfg19):
    with pytest.raises(wt.BudgetError):
        wt.count_x(cfg19.params, max_prime=7)


def test_count_x_bounds_orbit(cfg19, orbit19):
    count = wt.count_x(cfg19.params)
    assert orbit19.n <= count


def test_count_x_rejects_bad_params():
    # both gamma and delta split at p = 101: precondition fails
    cfg = wt.build(101)
    with pytest.raises(wt.WitnessError):
        wt.count_x(cfg.params, max_prime=101)


def test_run_pipeline_report_shape():
    rep = wt.run_pipeline(19, seed=7, include_permutations=True)
    assert rep["p"] == 19
    assert rep["classification"] in ("Alternating", "Symmetric")
    assert rep["f2_x_nontrivial"] and rep["f2_x_sign"] == 1
    assert rep["x_count"] == rep["n"]
    assert rep["exact_dedup_verified"]
    perms = rep["permutations"]
    assert sorted(perms) == ["epsilon", "sigma1", "sigma2", "sigma3", "x", "y"]
    n = rep["n"]
    for arr in perms.values():
        assert sorted(arr) == list(range(n))
    # the certificate and signs revalidate from the serialized permutations
    from charquo.permgrp import GiantCertificate, sign
    cert = rep["certificate"]
    gens = [perms["sigma1"], perms["sigma2"], perms["sigma3"], perms["epsilon"]]
    assert GiantCertificate([tuple(w) for w in cert["word"]], cert["q"], n).revalidate(gens)
    assert {k: sign(v) for k, v in
            zip(("sigma1", "sigma2", "sigma3", "epsilon"), gens)} == rep["generator_signs"]


def test_psl_order_table(cfg19):
    table = wt.psl_order_by_trace(cfg19.F)
    assert table[2] == 19      # unipotent trace
    assert table[0] == 2       # involution
    assert table[3] == 9       # split of full order at p = 19
