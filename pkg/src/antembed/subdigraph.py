"""Degree pruning and the two-regime subdigraph selector.

``prune_pseudo`` deletes all out-arcs (in-arcs) of any vertex whose positive
out-degree (in-degree) is below k/2 until none remains, yielding a nonempty
subdigraph of minimum pseudo-semidegree at least k/2.

``select_subdigraph`` routes through a bipartite double cover: split each
vertex v into v+ and v-, find a dense subgraph whose degree sums stay above k
while one of two witness regimes holds, and translate back.  All guaranteed
conditions are re-audited from scratch before returning.

Thresholds compare exactly in integers: deg < k/2 iff 2 deg < k.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .digraph import Digraph, degree_profile
from .errors import AntembedError, HypothesisViolated, InternalAssertion


def _bit_list(mask: int):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def prune_pseudo(d: Digraph, k: int) -> Digraph:
    """Subdigraph with pseudo-semidegree >= k/2.

    More than (k-1)|V| arcs guarantee a nonempty result; the fixpoint runs
    either way and only an empty outcome raises (so a digraph already above
    the threshold passes through whatever its density)."""
    if k < 1:
        raise AntembedError("k must be positive")
    dense = d.a() > (k - 1) * d.n
    out_deg = [len(a) for a in d.out_adj]
    in_deg = [len(a) for a in d.in_adj]
    alive = {arc: True for arc in d.arcs}
    out_arcs = [list(d.out_adj[v]) for v in range(d.n)]
    in_arcs = [list(d.in_adj[v]) for v in range(d.n)]
    deleted = 0
    triggers = 0
    while True:
        victim = None
        for v in range(d.n):
            if 0 < 2 * out_deg[v] < k:
                victim = (v, +1)
                break
            if 0 < 2 * in_deg[v] < k:
                victim = (v, -1)
                break
        if victim is None:
            break
        v, side = victim
        triggers += 1
        if side > 0:
            removed = 2 * out_deg[v]  # < k, so at most ceil(k/2)-1 arcs go
            assert removed < k
            for w in out_arcs[v]:
                if alive[(v, w)]:
                    alive[(v, w)] = False
                    in_deg[w] -= 1
                    deleted += 1
            out_deg[v] = 0
        else:
            assert 2 * in_deg[v] < k
            for w in in_arcs[v]:
                if alive[(w, v)]:
                    alive[(w, v)] = False
                    out_deg[w] -= 1
                    deleted += 1
            in_deg[v] = 0
    if triggers > 2 * d.n or deleted > (k - 1) * d.n:
        raise InternalAssertion("prune-budget", triggers=triggers, deleted=deleted)
    kept = [arc for arc in d.arcs if alive[arc]]
    if not kept:
        if not dense:
            raise HypothesisViolated("density", arcs=d.a(), need=(k - 1) * d.n + 1)
        raise InternalAssertion("prune-empty")
    sub = Digraph(d.n, kept)
    if 2 * degree_profile(sub).delta0_bar < k:
        raise InternalAssertion("prune-postcondition")
    return sub


@dataclass
class BipartiteGraph:
    """Bipartite split of a digraph: a-side vertex u is u+, b-side vertex v is v-.

    ``adj[u]`` is the bitmask of b-side neighbors of u+ (i.e. heads of arcs
    from u).  Both sides are indexed by the original vertex ids 0..n-1.
    """

    n: int
    adj: list[int] = field(default_factory=list)

    def deg_a(self, u: int) -> int:
        return self.adj[u].bit_count()

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj)


def split_bipartite(d: Digraph) -> BipartiteGraph:
    return BipartiteGraph(n=d.n, adj=list(d.out_bits))


def _obs_density(e: int, order: int, k: int) -> bool:
    # e(H) > (k-1)|H|/2, exact in integers
    return 2 * e > (k - 1) * order


def prune_bipartite(h: BipartiteGraph, k: int, r: int, shuffle_seed: int | None = None):
    """The two-loop deletion protocol.

    Returns (alive_a, alive_b, adj, case_tag, audit) where alive_* are vertex
    id sets and adj the surviving bitmask adjacency.  Density is asserted
    after every deletion event.  Case I keeps an a-side vertex of degree >= k
    with all a-degrees >= k/2 and all b-degrees >= r; case II keeps a b-side
    vertex of degree >= k with all degrees >= k/2 and every surviving a-side
    vertex of original degree > k - r.

    ``shuffle_seed`` replaces the least-id processing order with a seeded
    random priority; the guaranteed postconditions must not depend on it.
    """
    if not (1 <= r and 2 * r <= k + 1):
        raise AntembedError(f"need 1 <= r <= ceil(k/2), got r={r}, k={k}")
    n = h.n
    if shuffle_seed is None:
        prio = list(range(n))
    else:
        import random as _random

        prio = list(range(n))
        _random.Random(shuffle_seed).shuffle(prio)
    adj = list(h.adj)
    radj = [0] * n
    for u in range(n):
        m = adj[u]
        while m:
            low = m & -m
            radj[low.bit_length() - 1] |= 1 << u
            m ^= low
    alive_a = set(range(n))
    alive_b = set(range(n))
    e = sum(m.bit_count() for m in adj)
    if not _obs_density(e, 2 * n, k):
        raise HypothesisViolated("density", edges=e, order=2 * n)
    dega = [adj[u].bit_count() for u in range(n)]
    degb = [radj[v].bit_count() for v in range(n)]

    def drop_a(u):
        nonlocal e
        m = adj[u]
        while m:
            low = m & -m
            w = low.bit_length() - 1
            radj[w] &= ~(1 << u)
            degb[w] -= 1
            e -= 1
            m ^= low
        adj[u] = 0
        dega[u] = 0
        alive_a.discard(u)

    def drop_b(v):
        nonlocal e
        m = radj[v]
        while m:
            low = m & -m
            w = low.bit_length() - 1
            adj[w] &= ~(1 << v)
            dega[w] -= 1
            e -= 1
            m ^= low
        radj[v] = 0
        degb[v] = 0
        alive_b.discard(v)

    def assert_density():
        if not _obs_density(e, len(alive_a) + len(alive_b), k):
            raise InternalAssertion("obs-deleting", edges=e, order=len(alive_a) + len(alive_b))

    # first loop: low a-degrees, then low degree-sum pairs.  Degrees only
    # decrease, so a lazy min-heap reproduces exactly the least-id-first
    # rescan order without the quadratic scans.
    heap_a = [(prio[u], u) for u in range(n) if 2 * dega[u] < k]
    heapq.heapify(heap_a)

    def drain_rule1():
        while heap_a:
            _, u = heapq.heappop(heap_a)
            if u in alive_a and 2 * dega[u] < k:
                drop_a(u)
                assert_density()

    while True:
        drain_rule1()
        min_b = min((degb[v] for v in alive_b), default=None)
        pair = None
        if min_b is not None:
            for u2 in sorted(alive_a, key=lambda q: prio[q]):
                if dega[u2] + min_b < k:
                    v2 = min((v for v in alive_b if dega[u2] + degb[v] < k), key=lambda q: prio[q])
                    pair = (u2, v2)
                    break
        if pair is None:
            break
        # the density observation covers the pair as one deletion event
        hit = radj[pair[1]]
        drop_a(pair[0])
        drop_b(pair[1])
        assert_density()
        for u in _bit_list(hit):
            if u in alive_a and 2 * dega[u] < k:
                heapq.heappush(heap_a, (prio[u], u))

    audit = {"loop2": False}
    if any(degb[v] < r for v in alive_b):
        # some b-vertex is below r: strip everything under k/2 on both sides
        audit["loop2"] = True
        heap2 = [(0, prio[u], u) for u in alive_a if 2 * dega[u] < k]
        heap2 += [(1, prio[v], v) for v in alive_b if 2 * degb[v] < k]
        heapq.heapify(heap2)
        while heap2:
            side, _, u = heapq.heappop(heap2)
            if side == 0:
                if u in alive_a and 2 * dega[u] < k:
                    hit = adj[u]
                    drop_a(u)
                    assert_density()
                    for v in _bit_list(hit):
                        if v in alive_b and 2 * degb[v] < k:
                            heapq.heappush(heap2, (1, prio[v], v))
            else:
                if u in alive_b and 2 * degb[u] < k:
                    hit = radj[u]
                    drop_b(u)
                    assert_density()
                    for w in _bit_list(hit):
                        if w in alive_a and 2 * dega[w] < k:
                            heapq.heappush(heap2, (0, prio[w], w))
        case = "II" if len(alive_a) > len(alive_b) else "I"
    else:
        case = "I"

    if not alive_a or not alive_b or e == 0:
        raise InternalAssertion("bipartite-empty")
    audit["edges"] = e
    audit["sides"] = (len(alive_a), len(alive_b))
    return alive_a, alive_b, adj, case, audit


@dataclass
class SelectionResult:
    sub: Digraph
    case_tag: str  # "I" or "II"
    witness_vertex: int
    r: int
    k: int
    audit: dict = field(default_factory=dict)


def select_subdigraph(d: Digraph, k: int, r: int, shuffle_seed: int | None = None) -> SelectionResult:
    """Dense subdigraph with the paired degree-sum guarantee and one of the
    two witness regimes; every condition is revalidated before returning."""
    if k > d.n:
        raise HypothesisViolated("k-exceeds-order", k=k, n=d.n)
    if d.a() <= (k - 1) * d.n:
        raise HypothesisViolated("density", arcs=d.a(), need=(k - 1) * d.n + 1)
    if not (1 <= r and 2 * r <= k + 1):
        raise AntembedError(f"need 1 <= r <= ceil(k/2), got r={r}, k={k}")
    h = split_bipartite(d)
    alive_a, alive_b, adj, case, audit = prune_bipartite(h, k, r, shuffle_seed=shuffle_seed)
    arcs = []
    for u in sorted(alive_a):
        m = adj[u]
        while m:
            low = m & -m
            arcs.append((u, low.bit_length() - 1))
            m ^= low
    sub = Digraph(d.n, arcs)

    # full revalidation from scratch
    prof = degree_profile(sub)
    plus = [v for v in range(d.n) if prof.out_deg[v] > 0]
    minus = [v for v in range(d.n) if prof.in_deg[v] > 0]
    if 2 * sub.a() <= (k - 1) * (len(plus) + len(minus)):
        raise InternalAssertion("cor-cond-1", arcs=sub.a(), sides=(len(plus), len(minus)))
    min_out = min(prof.out_deg[v] for v in plus)
    min_in = min(prof.in_deg[v] for v in minus)
    if min_out + min_in < k:
        raise InternalAssertion("cor-cond-2", min_out=min_out, min_in=min_in)
    if case == "I":
        witness = next((a for a in sorted(plus) if prof.out_deg[a] >= k), None)
        ok = (
            witness is not None
            and 2 * prof.delta_plus_bar >= k
            and prof.delta_minus_bar >= r
            and len(plus) <= len(minus)
        )
    else:
        witness = next((b for b in sorted(minus) if prof.in_deg[b] >= k), None)
        ok = (
            witness is not None
            and 2 * prof.delta0_bar >= k
            and all(len(d.out_adj[a]) > k - r for a in plus)
        )
    if not ok:
        raise InternalAssertion("cor-cond-3", case=case)
    audit.update(
        {
            "case": case,
            "plus": len(plus),
            "minus": len(minus),
            "min_out": min_out,
            "min_in": min_in,
            "delta_plus_bar": prof.delta_plus_bar,
            "delta_minus_bar": prof.delta_minus_bar,
        }
    )
    return SelectionResult(sub=sub, case_tag=case, witness_vertex=witness, r=r, k=k, audit=audit)
