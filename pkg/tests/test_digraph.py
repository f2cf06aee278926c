import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import antembed as ae
from antembed.digraph import from_json_obj, to_json_obj

D1 = ae.Digraph(3, [(0, 1), (2, 1)])


def bidirected_complete(n):
    return ae.Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def test_degree_profile_arcless():
    p = ae.degree_profile(ae.Digraph(3, []))
    assert p.delta_plus_bar == 0 and p.delta_minus_bar == 0 and p.delta0_bar == 0


def test_degree_profile_d1():
    p = ae.degree_profile(D1)
    assert p.out_deg == (1, 0, 1)
    assert p.in_deg == (0, 2, 0)
    assert p.delta_plus_bar == 1
    assert p.delta_minus_bar == 2
    assert p.delta0_bar == 1


def test_degree_profile_bidirected_k4():
    p = ae.degree_profile(bidirected_complete(4))
    assert all(d == 3 for d in p.out_deg) and all(d == 3 for d in p.in_deg)
    assert p.delta0_bar == 3


def test_plus_minus_sets():
    assert ae.plus_minus_sets(D1) == ({0, 2}, {1})
    assert ae.plus_minus_sets(ae.Digraph(2, [])) == (set(), set())


def test_plus_minus_antidirected_partition():
    # an antidirected digraph without isolated vertices splits its vertex set
    t = ae.Digraph(4, [(0, 1), (2, 1), (2, 3)])
    plus, minus = ae.plus_minus_sets(t)
    assert len(plus) + len(minus) == 4 and not (plus & minus)


def test_reverse():
    r = ae.reverse(D1)
    assert r.arc_set == frozenset({(1, 0), (1, 2)})
    assert ae.reverse(r) == D1
    p, rp = ae.degree_profile(D1), ae.degree_profile(r)
    assert p.out_deg == rp.in_deg and p.in_deg == rp.out_deg
    assert p.delta_plus_bar == rp.delta_minus_bar


def test_construction_rejects():
    with pytest.raises(ae.AntembedError):
        ae.Digraph(2, [(0, 0)])
    with pytest.raises(ae.AntembedError):
        ae.Digraph(2, [(0, 1), (0, 1)])
    with pytest.raises(ae.AntembedError):
        ae.Digraph(2, [(0, 2)])


def test_induced_subdigraph():
    same = ae.induced_subdigraph(D1, D1.arcs)
    assert same == D1
    empty = ae.induced_subdigraph(D1, [])
    assert empty.a() == 0 and empty.n == 3
    one = ae.induced_subdigraph(D1, [(0, 1)])
    p = ae.degree_profile(one)
    assert p.out_deg == (1, 0, 0) and p.in_deg == (0, 1, 0)
    with pytest.raises(ae.AntembedError):
        ae.induced_subdigraph(D1, [(1, 0)])
    sub, remap = ae.induced_subdigraph(D1, [(0, 1)], drop_isolated=True)
    assert sub.n == 2 and remap == {0: 0, 1: 1}


arc_lists = st.integers(1, 6).flatmap(
    lambda n: st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1]),
        max_size=n * (n - 1),
        unique=True,
    ).map(lambda arcs: ae.Digraph(n, arcs))
)


@settings(max_examples=120, deadline=None)
@given(arc_lists)
def test_degree_sum_and_reverse_properties(d):
    p = ae.degree_profile(d)
    assert sum(p.out_deg) == sum(p.in_deg) == d.a()
    assert not any(0 < o < p.delta_plus_bar for o in p.out_deg)
    r = ae.reverse(d)
    assert ae.reverse(r) == d and r.a() == d.a()


@settings(max_examples=60, deadline=None)
@given(arc_lists)
def test_format_round_trips(d):
    parsed, root = ae.parse_arclist(ae.to_arclist(d))
    assert parsed == d and root is None
    parsed2, root2 = ae.parse_arclist(ae.to_arclist(d, root=0))
    assert parsed2 == d and root2 == 0
    assert from_json_obj(to_json_obj(d)) == d


def test_arclist_comments_and_errors():
    d, root = ae.parse_arclist("# hi\n3 2 root 1\n0 1\n# mid\n2 1\n")
    assert d == D1 and root == 1
    with pytest.raises(ae.AntembedError):
        ae.parse_arclist("3\n")


def test_dot_export():
    dot = ae.to_dot(ae.Digraph(3, [(0, 1)]))
    assert "0 -> 1;" in dot and "2;" in dot
