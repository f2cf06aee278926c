import random

import pytest

import antembed as ae
from antembed.digraph import Digraph
from antembed.oracle_gen import sample_antitree_heavy

D1 = Digraph(3, [(0, 1), (2, 1)])


def T(n, arcs):
    return ae.validate_antitree(Digraph(n, arcs))


def test_oracle_examples():
    in_star = T(3, [(0, 1), (2, 1)])
    assert ae.oracle_embed(D1, in_star).verdict == "Embeds"
    out_star = T(3, [(1, 0), (1, 2)])
    assert ae.oracle_embed(D1, out_star).verdict == "NotContained"
    for k in (2, 3, 4, 5, 6):
        burr = ae.gen_burr(k)
        star = T(k + 1, [(0, i) for i in range(1, k + 1)])
        st = ae.oracle_embed(burr, star)
        assert st.verdict == "NotContained"


def test_oracle_witness_validates():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(3, 9)
        k = rng.randint(1, min(5, n - 1))
        t = ae.sample_antitree(k, rng)
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.5]
        d = Digraph(n, arcs)
        st = ae.oracle_embed(d, t)
        if st.verdict == "Embeds":
            assert ae.validate_embedding(t, d, st.witness)
        # reversal symmetry of the verdict
        st2 = ae.oracle_embed(ae.reverse(d), ae.reverse_antitree(t))
        assert st.verdict == st2.verdict


def test_oracle_budget():
    host = Digraph(12, [(u, v) for u in range(12) for v in range(12) if u != v])
    t = T(8, [(0, i) for i in range(1, 7)] + [(7, 1)])
    st = ae.oracle_embed(host, t, budget=2)
    assert st.verdict == "Inconclusive" and st.nodes_expanded >= 2


def test_gen_burr():
    for k in range(2, 13):
        d = ae.gen_burr(k)
        assert d.n == 4 * k - 4
        assert d.a() == (k - 1) * d.n == (2 * k - 2) ** 2
        for v in range(d.n):
            assert d.out_deg(v) == k - 1 and d.in_deg(v) == k - 1
    d2 = ae.gen_burr(2)
    assert d2.n == 4 and d2.a() == 4


def test_burr_contains_all_other_small_antitrees():
    # at k <= 4, every class except the out-star fits (sign-degree profile
    # bounded by k-1), confirmed exhaustively by the oracle
    for k in (2, 3, 4):
        burr = ae.gen_burr(k)
        star_key = frozenset([(k, 0)])
        for t in ae.enumerate_antitrees(k):
            st = ae.oracle_embed(burr, t)
            is_out_star = max(t.deg) == k and t.sign[max(range(t.n), key=lambda v: t.deg[v])] > 0
            in_star = max(t.deg) == k and not is_out_star
            if is_out_star or in_star:
                assert st.verdict == "NotContained"
            else:
                assert st.verdict == "Embeds"


def test_gen_incidence_small():
    fano = ae.gen_incidence(2)
    assert fano.n == 14 and fano.a() == 21
    assert ae.is_k2s_free(fano, 2) is True
    assert ae.audit_projective(fano)
    plus, minus = ae.plus_minus_sets(fano)
    assert len(plus) == 7 and len(minus) == 7 and not (plus & minus)
    for q in (3, 4, 5):
        d = ae.gen_incidence(q)
        N = q * q + q + 1
        assert d.n == 2 * N and d.a() == (q + 1) * N
        assert ae.audit_projective(d)
        assert ae.is_k2s_free(d, 2, prune=True) is True
    with pytest.raises(ae.AntembedError):
        ae.gen_incidence(6)


def test_gen_incidence_25_shape():
    d = ae.gen_incidence(25)
    assert d.n == 1302 and d.a() == 16926
    assert d.a() > 12 * d.n


def test_gen_random_dense():
    d1 = ae.gen_random_dense(10, 3, seed=5)
    d2 = ae.gen_random_dense(10, 3, seed=5)
    assert d1 == d2 and d1.a() == 2 * 10 + 1
    assert d1 != ae.gen_random_dense(10, 3, seed=6)
    with pytest.raises(ae.AntembedError):
        ae.gen_random_dense(3, 3, seed=0)


def test_sample_antitree():
    rng = random.Random(0)
    for k in (1, 2, 5, 13):
        t = ae.sample_antitree(k, rng)
        assert t.k == k
    t = sample_antitree_heavy(13, rng, 6)
    assert ae.degree_stats(t).delta2 >= 6


def test_enumerate_digraphs():
    assert sum(1 for _ in ae.enumerate_digraphs(2)) == 4
    assert sum(1 for _ in ae.enumerate_digraphs(2, min_arcs=2)) == 1
    assert sum(1 for _ in ae.enumerate_digraphs(3)) == 64
    assert sum(1 for _ in ae.enumerate_digraphs(4)) == 4096
    with pytest.raises(ae.AntembedError):
        next(ae.enumerate_digraphs(6))
    # dedup mode returns representatives only
    deduped = sum(1 for _ in ae.enumerate_digraphs(2, dedup=True))
    assert deduped == 3  # empty, single arc, both arcs


def test_n3_containment_recount():
    # independent recount for the two 2-arc classes over all 64 digraphs:
    # the out-star sits in a digraph iff some out-degree reaches 2 (27 of
    # 4^3 = 64 row patterns have none), so 37 digraphs; dually for the in-star
    out_star = T(3, [(1, 0), (1, 2)])
    in_star = T(3, [(0, 1), (2, 1)])
    n_out = n_in = 0
    by_degree_out = by_degree_in = 0
    for d in ae.enumerate_digraphs(3):
        if ae.oracle_embed(d, out_star).verdict == "Embeds":
            n_out += 1
        if ae.oracle_embed(d, in_star).verdict == "Embeds":
            n_in += 1
        p = ae.degree_profile(d)
        by_degree_out += p.max_out >= 2
        by_degree_in += p.max_in >= 2
    assert n_out == by_degree_out == 37
    assert n_in == by_degree_in == 37
