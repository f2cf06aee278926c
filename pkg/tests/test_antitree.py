import itertools

import networkx as nx
import pytest

import antembed as ae
from antembed.antitree import canonical_form
from antembed.digraph import Digraph


def T(n, arcs):
    return ae.validate_antitree(Digraph(n, arcs))


def out_star(k):
    return T(k + 1, [(0, i) for i in range(1, k + 1)])


DOUBLE_STAR = T(6, [(0, 1), (0, 2), (0, 3), (4, 1), (5, 1)])  # u=0, v=1


def test_validate_examples():
    t = T(3, [(0, 1), (2, 1)])
    assert t.sign == (1, -1, 1)
    with pytest.raises(ae.NotAntidirected) as exc:
        T(3, [(0, 1), (1, 2)])
    assert exc.value.witness == (0, 1, 2)
    s = out_star(4)
    plus, minus = s.plus_minus()
    assert plus == {0} and minus == {1, 2, 3, 4}


def test_validate_rejections():
    with pytest.raises(ae.NotATree):
        T(3, [(0, 1)])  # wrong order for the arc count
    with pytest.raises(ae.NotATree):
        T(2, [(0, 1), (1, 0)])  # multi-edge underneath
    with pytest.raises(ae.NotATree):
        ae.validate_antitree(Digraph(4, [(0, 1), (2, 3), (0, 3), (2, 1)]))  # cycle
    with pytest.raises(ae.NotATree):
        ae.validate_antitree(Digraph(1, []))


def test_degree_stats():
    s = ae.degree_stats(out_star(5))
    assert (s.delta, s.delta2) == (5, 1)
    s = ae.degree_stats(DOUBLE_STAR)
    assert (s.delta, s.delta2) == (3, 3)
    assert s.argmax_u != s.argmax2_v
    path = T(5, [(0, 1), (2, 1), (2, 3), (4, 3)])
    s = ae.degree_stats(path)
    assert (s.delta, s.delta2) == (2, 2)
    assert s.leaves == {0, 4}


def test_spine_path_and_star():
    path = T(5, [(0, 1), (2, 1), (2, 3), (4, 3)])
    dec = ae.caterpillar_decompose(path)
    assert set(dec.spine) == {0, 1, 2, 3, 4} and not any(dec.leaves_at.values())
    star = out_star(4)
    dec = ae.caterpillar_decompose(star)
    assert len(dec.spine) == 3 and dec.leaves_at[0] == (3, 4)


def test_spine_spider_rejected():
    # three legs of length two: the smallest non-caterpillar
    arcs = [(0, 1), (2, 1), (0, 3), (4, 3), (0, 5), (6, 5)]
    spider = T(7, arcs)
    with pytest.raises(ae.NotACaterpillar):
        ae.caterpillar_decompose(spider)
    assert not ae.is_caterpillar(spider)


def test_spine_double_star_frozen():
    # lexicographically least longest path, computed by enumerating all
    # longest paths of this 6-vertex tree
    dec = ae.caterpillar_decompose(DOUBLE_STAR)
    assert dec.spine == (2, 0, 1, 4)
    assert dec.leaves_at[0] == (3,) and dec.leaves_at[1] == (5,)
    assert dec.final_vertex == 4 and dec.final_arc == (4, 1)


def test_caterpillar_leaf_strip_cross_check():
    # classical criterion: stripping all leaves leaves a (possibly empty) path
    for k in range(1, 6):
        for t in ae.enumerate_antitrees(k):
            inner = [v for v in t.vertices() if t.deg[v] > 1]
            g = nx.Graph([(a, b) for a, b in t.tree.arcs if a in inner and b in inner])
            g.add_nodes_from(inner)
            is_path = (
                len(inner) == 0
                or (nx.is_connected(g) and sum(1 for _, dg in g.degree if dg > 2) == 0)
            )
            assert ae.is_caterpillar(t) == is_path


def test_double_broom():
    b = ae.double_broom(DOUBLE_STAR, 0, 1)
    assert b.vertices == frozenset(range(6))
    # adding a far leaf keeps it out of the broom
    t2 = T(7, [(0, 1), (0, 2), (0, 3), (4, 1), (5, 1), (6, 2)])
    b2 = ae.double_broom(t2, 0, 1)
    assert 6 not in b2.vertices and b2.vertices == frozenset(range(6))
    # path with pendant leaves only at the ends
    t3 = T(6, [(0, 1), (2, 1), (2, 3), (4, 3), (4, 5)])
    b3 = ae.double_broom(t3, 0, 5)
    assert b3.vertices == frozenset(range(6))
    with pytest.raises(ae.AntembedError):
        ae.double_broom(DOUBLE_STAR, 0, 0)


def test_rooted_view():
    s = out_star(4)
    rv = ae.rooted_view(s, 0)
    assert all(rv.parent[v] == 0 and rv.depth[v] == 1 for v in range(1, 5))
    p = T(3, [(0, 1), (2, 1)])
    rv = ae.rooted_view(p, 0)
    assert rv.parent[1] == 0 and rv.parent[2] == 1
    k = 6
    arcs = []
    for i in range(k):
        arcs.append((i, i + 1) if i % 2 == 0 else (i + 1, i))
    path = T(k + 1, arcs)
    rv = ae.rooted_view(path, 0)
    assert sum(rv.depth) == k * (k + 1) // 2


def _labeled_classes(k):
    """Independent enumeration: all antidirected orientations of all labeled
    trees on k+1 vertices, grouped by digraph isomorphism via networkx."""
    reps = []
    n = k + 1
    for edges in itertools.combinations(itertools.combinations(range(n), 2), k):
        g = nx.Graph(edges)
        if g.number_of_nodes() != n or not nx.is_connected(g):
            continue
        color = nx.algorithms.bipartite.color(g)
        for src in (0, 1):
            arcs = [(a, b) if color[a] == src else (b, a) for a, b in edges]
            dg = nx.DiGraph(arcs)
            if not any(nx.is_isomorphic(dg, r) for r in reps):
                reps.append(dg)
    return len(reps)


def test_enumerate_counts():
    assert len(ae.enumerate_antitrees(1)) == 1
    assert len(ae.enumerate_antitrees(2)) == 2
    # frozen from the independent labeled enumeration below
    assert len(ae.enumerate_antitrees(3)) == 3
    assert _labeled_classes(3) == 3
    with pytest.raises(ae.AntembedError):
        ae.enumerate_antitrees(9)
    assert len(ae.enumerate_antitrees(9, max_k=9)) > 0


def test_enumerate_validated_and_distinct():
    for k in range(1, 6):
        ts = ae.enumerate_antitrees(k)
        keys = {canonical_form(t) for t in ts}
        assert len(keys) == len(ts)
        for t in ts:
            assert t.k == k
            plus, minus = t.plus_minus()
            assert len(plus) + len(minus) == k + 1
            assert max(t.deg) <= k


def test_reverse_antitree():
    t = out_star(3)
    r = ae.reverse_antitree(t)
    assert r.sign[0] == -1 and all(r.sign[i] == 1 for i in range(1, 4))
