import random

import pytest

import antembed as ae
from antembed.digraph import Digraph
from antembed.subdigraph import prune_bipartite, split_bipartite


def bidirected_complete(n):
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def test_prune_pseudo_unchanged_cases():
    k = 4
    d = bidirected_complete(k + 1)
    assert ae.prune_pseudo(d, k) == d
    d1 = Digraph(3, [(0, 1), (2, 1)])
    assert ae.prune_pseudo(d1, 2) == d1
    with pytest.raises(ae.HypothesisViolated):
        ae.prune_pseudo(Digraph(3, [(0, 1)]), 3)


def test_prune_pseudo_cascade():
    # dense core plus a pendant path of low-degree vertices: the tail goes
    core = bidirected_complete(6)
    arcs = list(core.arcs) + [(5, 6), (6, 7), (7, 8)]
    d = Digraph(9, arcs)
    k = 4
    sub = ae.prune_pseudo(d, k)
    prof = ae.degree_profile(sub)
    assert sub.a() > 0 and 2 * prof.delta0_bar >= k
    assert not any(u >= 6 or v >= 6 for u, v in sub.arcs)
    # independent recheck of the pseudo-degree condition
    for v in range(9):
        assert prof.out_deg[v] == 0 or 2 * prof.out_deg[v] >= k
        assert prof.in_deg[v] == 0 or 2 * prof.in_deg[v] >= k


def test_split_bipartite():
    d1 = Digraph(3, [(0, 1), (2, 1)])
    h = split_bipartite(d1)
    assert h.edge_count() == d1.a()
    assert h.adj[0] == 1 << 1 and h.adj[2] == 1 << 1 and h.adj[1] == 0
    assert split_bipartite(Digraph(4, [])).edge_count() == 0
    rng = random.Random(0)
    for _ in range(20):
        n = rng.randint(2, 8)
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.4]
        assert split_bipartite(Digraph(n, arcs)).edge_count() == len(arcs)


def test_prune_bipartite_complete_fixpoint():
    # K_{m,m} with m > k-1 survives untouched and lands in case I
    m, k, r = 6, 5, 2
    d = Digraph(m, [])
    h = split_bipartite(d)
    h.adj = [(1 << m) - 1 for _ in range(m)]
    alive_a, alive_b, adj, case, audit = prune_bipartite(h, k, r)
    assert alive_a == set(range(m)) and alive_b == set(range(m))
    assert case == "I" and not audit["loop2"]


def test_prune_bipartite_second_loop():
    # one b-vertex of degree r-1 forces the second loop; conditions of the
    # other regime revalidate, including the original-degree bound
    k, r = 6, 3
    m = 12
    arcs = [(u, m + v) for u in range(m) for v in range(m - 1)]
    arcs += [(0, 2 * m - 1), (1, 2 * m - 1)]  # the weak sink, degree 2 = r - 1
    d = Digraph(2 * m, arcs)
    sel = ae.select_subdigraph(d, k, r)
    assert sel.audit["loop2"]
    prof = ae.degree_profile(sel.sub)
    plus = [v for v in range(d.n) if prof.out_deg[v] > 0]
    for a in plus:
        assert d.out_deg(a) > k - r
    assert 2 * prof.delta0_bar >= k


def test_select_examples():
    k = 4
    d = bidirected_complete(2 * k)
    sel = ae.select_subdigraph(d, k, (k + 1) // 2)
    assert sel.case_tag in ("I", "II")
    prof = ae.degree_profile(sel.sub)
    plus = [v for v in range(d.n) if prof.out_deg[v] > 0]
    minus = [v for v in range(d.n) if prof.in_deg[v] > 0]
    assert 2 * sel.sub.a() > (k - 1) * (len(plus) + len(minus))
    fano = ae.gen_incidence(2)
    sel = ae.select_subdigraph(fano, 2, 1)
    assert sel.sub.a() > 0
    with pytest.raises(ae.HypothesisViolated):
        ae.select_subdigraph(Digraph(3, [(0, 1)]), 2, 1)
    with pytest.raises(ae.HypothesisViolated):
        ae.select_subdigraph(bidirected_complete(3), 4, 1)
    with pytest.raises(ae.AntembedError):
        ae.select_subdigraph(bidirected_complete(8), 4, 5)


def _audit(d, sel, k, r):
    prof = ae.degree_profile(sel.sub)
    plus = [v for v in range(d.n) if prof.out_deg[v] > 0]
    minus = [v for v in range(d.n) if prof.in_deg[v] > 0]
    assert 2 * sel.sub.a() > (k - 1) * (len(plus) + len(minus))
    for a in plus:
        for b in minus:
            assert prof.out_deg[a] + prof.in_deg[b] >= k
    if sel.case_tag == "I":
        assert 2 * prof.delta_plus_bar >= k
        assert prof.delta_minus_bar >= r
        assert any(prof.out_deg[a] >= k for a in plus)
        assert len(plus) <= len(minus)
    else:
        assert 2 * prof.delta0_bar >= k
        assert any(prof.in_deg[b] >= k for b in minus)
        assert all(d.out_deg(a) > k - r for a in plus)


def test_select_random_sweep_and_order_independence():
    rng = random.Random(42)
    for trial in range(120):
        n = rng.randint(5, 14)
        k = rng.randint(1, n - 1)
        r = rng.randint(1, (k + 1) // 2)
        d = ae.gen_random_dense(n, k, seed=trial)
        sel = ae.select_subdigraph(d, k, r)
        _audit(d, sel, k, r)
        # deletion-order fuzz: postconditions hold for any processing order
        sel2 = ae.select_subdigraph(d, k, r, shuffle_seed=trial)
        _audit(d, sel2, k, r)


def test_round_trip_reaudit():
    # push D' back through the bipartite split: the survivors still satisfy
    # the degree-sum condition verbatim
    rng = random.Random(5)
    for trial in range(40):
        n = rng.randint(6, 12)
        k = rng.randint(2, n - 1)
        d = ae.gen_random_dense(n, k, seed=100 + trial)
        sel = ae.select_subdigraph(d, k, (k + 1) // 2)
        h = split_bipartite(sel.sub)
        dega = [h.adj[u].bit_count() for u in range(n)]
        degb = [0] * n
        for u in range(n):
            m = h.adj[u]
            while m:
                low = m & -m
                degb[low.bit_length() - 1] += 1
                m ^= low
        for u in range(n):
            for v in range(n):
                if dega[u] and degb[v]:
                    assert dega[u] + degb[v] >= k
