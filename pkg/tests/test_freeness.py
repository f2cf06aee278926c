import itertools
import random

import pytest

import antembed as ae
from antembed.digraph import Digraph

TRIANGLE = Digraph(3, [(0, 1), (1, 2), (2, 0)])


def bidirected_complete(n):
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def slow_common(d, a, sa, b, sb):
    na = set(d.out_adj[a]) if sa > 0 else set(d.in_adj[a])
    nb = set(d.out_adj[b]) if sb > 0 else set(d.in_adj[b])
    return (na & nb) - {a, b}


def slow_free(d, s):
    for a, b in itertools.permutations(range(d.n), 2):
        for sa in (1, -1):
            for sb in (1, -1):
                if len(slow_common(d, a, sa, b, sb)) >= s:
                    return False
    return True


def test_common_neighborhood_examples():
    assert ae.common_neighborhood(TRIANGLE, 0, 1, 2, -1) == {1}
    k4 = bidirected_complete(4)
    assert ae.common_neighborhood(k4, 0, 1, 1, 1) == {2, 3}
    assert ae.common_neighborhood(Digraph(4, []), 0, 1, 1, -1) == set()
    with pytest.raises(ae.AntembedError):
        ae.common_neighborhood(TRIANGLE, 0, 1, 0, -1)


def test_is_free_examples():
    # all arcs across a (2, s) bipartition: the all-out forbidden host
    s = 3
    d = Digraph(2 + s, [(a, b) for a in (0, 1) for b in range(2, 2 + s)])
    w = ae.is_k2s_free(d, s)
    assert w is not True and (w.sign_a, w.sign_b) == (1, 1) and len(w.common) == s
    assert w.revalidate(d, s)
    assert ae.is_k2s_free(TRIANGLE, 2) is True
    w1 = ae.is_k2s_free(TRIANGLE, 1)
    assert w1 is not True and w1.revalidate(TRIANGLE, 1)


def test_free_matches_slow_and_prune(seed=9):
    rng = random.Random(seed)
    for _ in range(150):
        n = rng.randint(2, 6)
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.4]
        d = Digraph(n, arcs)
        for s in (1, 2, 3):
            got = ae.is_k2s_free(d, s)
            got_pruned = ae.is_k2s_free(d, s, prune=True)
            want = slow_free(d, s)
            assert (got is True) == want == (got_pruned is True)
            if got is not True:
                assert got.revalidate(d, s)


def test_monotone_in_s(seed=4):
    rng = random.Random(seed)
    for _ in range(80):
        n = rng.randint(2, 7)
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.5]
        d = Digraph(n, arcs)
        free_at = [ae.is_k2s_free(d, s) is True for s in range(1, 6)]
        for lo, hi in zip(free_at, free_at[1:]):
            assert not (lo and not hi)


def test_s1_characterization_exhaustive_n4():
    # free at s=1 iff max out-degree <= 1, max in-degree <= 1, and no directed
    # path of length two; brute forced over every labeled digraph with n <= 4
    for n in (2, 3, 4):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for mask in range(1 << len(pairs)):
            arcs = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
            d = Digraph(n, arcs)
            p = ae.degree_profile(d)
            p2 = any(
                y != x
                for v in range(n)
                for x in d.in_adj[v]
                for y in d.out_adj[v]
            )
            degs_ok = p.max_out <= 1 and p.max_in <= 1
            expected = degs_ok and not p2
            assert (ae.is_k2s_free(d, 1) is True) == expected


def test_k4_bound_check():
    d = Digraph(5, [])
    rep = ae.k4_bound_check(d, 1, range(5), [(0, 1), (1, 1), (2, -1)], k=12)
    assert rep.total == 0 and rep.holds

    # sampled free hosts: the bound must hold against any k-subset
    rng = random.Random(2)
    host = ae.gen_incidence(3)  # K_{2,2}-free, so s=2 covers k in 13..24
    k = 13
    for _ in range(40):
        S = rng.sample(range(host.n), k)
        probes = [(v, rng.choice((1, -1))) for v in rng.sample(range(host.n), 3)]
        rep = ae.k4_bound_check(host, 2, S, probes, k=k)
        assert rep.holds

    # and it genuinely can fail once freeness is dropped: two all-out stars
    # over one shared leaf set
    s = 2
    k = 12 * s
    leaves = list(range(3, 3 + k))
    arcs = [(c, b) for c in (0, 1, 2) for b in leaves]
    bad = Digraph(3 + k, arcs)
    rep = ae.k4_bound_check(bad, s, leaves, [(0, 1), (1, 1), (2, 1)], k=k)
    assert not rep.holds
    with pytest.raises(ae.AntembedError):
        ae.k4_bound_check(bad, s, leaves, [(0, 1), (0, -1), (2, 1)], k=k)
