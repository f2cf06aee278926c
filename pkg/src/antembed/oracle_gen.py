"""Ground-truth embedding oracle, instance generators, and small-case enumerators.

The oracle is an exact backtracking search over tree vertices in BFS order from
a centroid, with sign-degree pruning and bitmask domains.  Generators cover the
extremal Burr host, the point-line incidence digraphs of PG(2,q) (a dense
K_{2,2}-free family), seeded random dense digraphs, and the full labeled
enumeration used by the exhaustive sweeps.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .antitree import AntiTree, caterpillar_decompose, rooted_view, validate_antitree
from .convex import ConvexDigraph
from .digraph import Digraph
from .errors import AntembedError

_PRIME_POWERS = {
    2: (2, 1, None),
    3: (3, 1, None),
    4: (2, 2, (1, 1)),       # x^2 + x + 1
    5: (5, 1, None),
    7: (7, 1, None),
    8: (2, 3, (1, 1, 0)),    # x^3 + x + 1
    9: (3, 2, (1, 0)),       # x^2 + 1
    11: (11, 1, None),
    13: (13, 1, None),
    16: (2, 4, (1, 1, 0, 0)),  # x^4 + x + 1
    17: (17, 1, None),
    19: (19, 1, None),
    23: (23, 1, None),
    25: (5, 2, (2, 0)),      # x^2 + 2
}


@dataclass(frozen=True)
class SearchStats:
    verdict: str  # "Embeds", "NotContained", "Inconclusive"
    witness: dict[int, int] | None
    nodes_expanded: int
    max_depth: int
    elapsed: float


def _centroid(t: AntiTree) -> int:
    if t.n == 1:
        return 0
    deg = list(t.deg)
    layer = [v for v in range(t.n) if deg[v] == 1]
    left = t.n
    last = sorted(layer)
    while left > 2:
        nxt = []
        for v in layer:
            left -= 1
            for w in t.adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
        last = sorted(layer) or last
    return min(last)


def oracle_embed(d: Digraph, t: AntiTree, budget: int | None = None) -> SearchStats:
    """Exact decision of "t embeds in d", exhaustive when budget is None."""
    t0 = time.perf_counter()
    rv = rooted_view(t, _centroid(t))
    order = rv.bfs_order
    # candidate host vertices must carry the full sign-degree of the tree vertex
    eligible = []
    by_slack = {}
    for x in order:
        need = t.deg[x]
        sg = t.sign[x]
        mask = 0
        for c in range(d.n):
            if d.sign_deg(c, sg) >= need:
                mask |= 1 << c
        eligible.append(mask)
        key = (x, sg)
        by_slack[key] = sorted(range(d.n), key=lambda c: (d.sign_deg(c, sg), c))
    nodes = 0
    max_depth = 0
    assign: dict[int, int] = {}

    def rec(i: int, used: int):
        nonlocal nodes, max_depth
        if i == len(order):
            return True
        if budget is not None and nodes > budget:
            return None
        x = order[i]
        max_depth = max(max_depth, i)
        if i == 0:
            cand_mask = eligible[0]
        else:
            p = rv.parent[x]
            hp = assign[p]
            cand_mask = d.neighbor_bits(hp, -t.sign[x]) & eligible[i] & ~used
            # sign(x)=+ means the arc x->p, so the image must be an in-neighbor
            # of f(p); the helper above flips accordingly
        inconclusive = False
        for c in by_slack[(x, t.sign[x])]:
            if not (cand_mask >> c) & 1:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                return None
            assign[x] = c
            res = rec(i + 1, used | (1 << c))
            if res:
                return True
            del assign[x]
            if res is None:
                inconclusive = True
                break
        return None if inconclusive else False

    res = rec(0, 0)
    elapsed = time.perf_counter() - t0
    if res:
        return SearchStats("Embeds", dict(assign), nodes, max_depth, elapsed)
    if res is None:
        return SearchStats("Inconclusive", None, nodes, max_depth, elapsed)
    return SearchStats("NotContained", None, nodes, max_depth, elapsed)


def all_embeddings(d: Digraph, t: AntiTree):
    """Yield every embedding of t in d (desk scale only)."""
    rv = rooted_view(t, _centroid(t))
    order = rv.bfs_order
    assign: dict[int, int] = {}

    def rec(i: int, used: int):
        if i == len(order):
            yield dict(assign)
            return
        x = order[i]
        if i == 0:
            cand = range(d.n)
        else:
            hp = assign[rv.parent[x]]
            bits = d.neighbor_bits(hp, -t.sign[x]) & ~used
            cand = []
            while bits:
                low = bits & -bits
                cand.append(low.bit_length() - 1)
                bits ^= low
        for c in cand:
            if (used >> c) & 1:
                continue
            assign[x] = c
            yield from rec(i + 1, used | (1 << c))
            del assign[x]

    yield from rec(0, 0)


def brute_good_arcs(c: ConvexDigraph, t: AntiTree) -> set[tuple[int, int]]:
    """Goodness by definition: enumerate all embeddings, check the final-edge
    image and the parity side condition.  Independent of the staged construction."""
    dec = caterpillar_decompose(t)
    u = dec.final_vertex
    v = dec.spine[-2]
    odd = len(dec.spine) % 2 == 1
    good = set()
    for f in all_embeddings(c.d, t):
        x, y = f[u], f[v]
        arc = (y, x) if t.sign[v] > 0 else (x, y)
        zone = c.interval(x, y) if odd else c.interval(y, x)
        if not (zone & set(f.values())):
            good.add(arc)
    return good


# -- generators --------------------------------------------------------


def gen_burr(k: int) -> Digraph:
    """The oriented K_{2k-2,2k-2} with half of each vertex's edges in either
    direction: exactly (k-1)n arcs, and the k-out-star does not embed."""
    if k < 2:
        raise AntembedError("gen_burr needs k >= 2")
    m = 2 * k - 2
    arcs = []
    for i in range(m):
        for tshift in range(m):
            j = (i + tshift) % m
            if 1 <= tshift <= k - 1:
                arcs.append((i, m + j))
            else:
                arcs.append((m + j, i))
    d = Digraph(2 * m, arcs)
    for v in range(d.n):
        if d.out_deg(v) != k - 1 or d.in_deg(v) != k - 1:
            raise AntembedError("burr regularity audit failed")
    return d


class _GF:
    """Arithmetic tables for GF(q), q a prime power from the supported list."""

    def __init__(self, q: int):
        if q not in _PRIME_POWERS:
            raise AntembedError(f"unsupported prime power q={q}")
        p, e, poly = _PRIME_POWERS[q]
        self.q = q
        if e == 1:
            self.add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
            return

        def to_vec(a):
            v = []
            for _ in range(e):
                v.append(a % p)
                a //= p
            return v

        def to_int(v):
            a = 0
            for c in reversed(v):
                a = a * p + c
            return a

        def polymul(u, v):
            prod = [0] * (2 * e - 1)
            for i, ui in enumerate(u):
                if ui:
                    for j, vj in enumerate(v):
                        prod[i + j] = (prod[i + j] + ui * vj) % p
            # reduce by x^e = -(poly), poly listing low-order coefficients
            for i in range(2 * e - 2, e - 1, -1):
                c = prod[i]
                if c:
                    prod[i] = 0
                    for j in range(e):
                        prod[i - e + j] = (prod[i - e + j] - c * poly[j]) % p
            return prod[:e]

        self.add = [[0] * q for _ in range(q)]
        self.mul = [[0] * q for _ in range(q)]
        for a in range(q):
            va = to_vec(a)
            for b in range(q):
                vb = to_vec(b)
                self.add[a][b] = to_int([(x + y) % p for x, y in zip(va, vb)])
                self.mul[a][b] = to_int(polymul(va, vb))


def _projective_points(gf: _GF) -> list[tuple[int, int, int]]:
    q = gf.q
    pts = [(1, y, z) for y in range(q) for z in range(q)]
    pts += [(0, 1, z) for z in range(q)]
    pts.append((0, 0, 1))
    return pts


def gen_incidence(q: int) -> Digraph:
    """Point -> line incidence digraph of PG(2, q).

    Points occupy ids 0..N-1 and lines N..2N-1 with N = q^2 + q + 1; the arc
    set is exactly the incidence relation, so every vertex is a pure source or
    a pure sink and the digraph is antidirected.
    """
    gf = _GF(q)
    pts = _projective_points(gf)
    N = len(pts)
    arcs = []
    for i, (a, b, c) in enumerate(pts):
        for j, (x, y, z) in enumerate(pts):
            s = gf.add[gf.mul[a][x]][gf.add[gf.mul[b][y]][gf.mul[c][z]]]
            if s == 0:
                arcs.append((i, N + j))
    d = Digraph(2 * N, arcs)
    if d.a() != (q + 1) * N:
        raise AntembedError("incidence arc count audit failed")
    return d


def audit_projective(d: Digraph) -> bool:
    """Two points on exactly one common line, two lines through exactly one
    common point; checked directly on the bitmask adjacency."""
    n2 = d.n // 2
    pts = range(n2)
    for i in pts:
        for j in range(i + 1, n2):
            if (d.out_bits[i] & d.out_bits[j]).bit_count() != 1:
                return False
            if (d.in_bits[n2 + i] & d.in_bits[n2 + j]).bit_count() != 1:
                return False
    return True


def gen_random_dense(n: int, k: int, seed: int) -> Digraph:
    """Uniform simple digraph with exactly (k-1)n + 1 arcs, reproducible."""
    if not (1 <= k <= n):
        raise AntembedError("need 1 <= k <= n")
    want = (k - 1) * n + 1
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if want > len(pairs):
        raise AntembedError(f"cannot place {want} arcs on {n} vertices")
    rng = random.Random(seed)
    return Digraph(n, rng.sample(pairs, want))


def sample_antitree(k: int, rng: random.Random) -> AntiTree:
    """Random k-arc antidirected tree: random labeled tree, random source side."""
    n = k + 1
    if n == 2:
        edges = [(0, 1)]
    else:
        pruefer = [rng.randrange(n) for _ in range(n - 2)]
        deg = [1] * n
        for x in pruefer:
            deg[x] += 1
        edges = []
        import heapq

        leaves = [v for v in range(n) if deg[v] == 1]
        heapq.heapify(leaves)
        for x in pruefer:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, x))
            deg[leaf] -= 1
            deg[x] -= 1
            if deg[x] == 1:
                heapq.heappush(leaves, x)
        last = [v for v in range(n) if deg[v] == 1]
        edges.append((last[0], last[1]))
    color = {0: 0}
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in color:
                color[y] = 1 - color[x]
                stack.append(y)
    src = rng.randrange(2)
    arcs = [(a, b) if color[a] == src else (b, a) for a, b in edges]
    return validate_antitree(Digraph(n, arcs))


def sample_antitree_heavy(k: int, rng: random.Random, delta2_min: int) -> AntiTree:
    """Random k-arc antidirected tree with second-highest degree >= delta2_min:
    two hubs joined by a short path, leaves split between them, leftovers
    attached uniformly."""
    while True:
        d2v = rng.randint(delta2_min, (k + 1) // 2)
        plen = rng.randint(1, 3)
        hi = k - (d2v - 1) - plen + 1
        if hi < d2v:
            continue
        d1v = rng.randint(d2v, hi)
        edges = []
        route = [0] + list(range(2, 2 + plen - 1)) + [1]
        for a, b in zip(route, route[1:]):
            edges.append((a, b))
        nxt = 2 + plen - 1
        for _ in range(d1v - 1):
            edges.append((0, nxt))
            nxt += 1
        for _ in range(d2v - 1):
            edges.append((1, nxt))
            nxt += 1
        hosts = list(range(nxt))
        while nxt <= k:
            edges.append((rng.choice(hosts), nxt))
            hosts.append(nxt)
            nxt += 1
        color = [-1] * (k + 1)
        color[0] = 0
        adj = [[] for _ in range(k + 1)]
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    stack.append(y)
        src = rng.randrange(2)
        arcs = [(a, b) if color[a] == src else (b, a) for a, b in edges]
        t = validate_antitree(Digraph(k + 1, arcs))
        from .antitree import degree_stats

        if degree_stats(t).delta2 >= delta2_min:
            return t


def enumerate_digraphs(n: int, min_arcs: int = 0, max_n: int = 5, dedup: bool = False):
    """Stream all labeled digraphs on n vertices with at least min_arcs arcs."""
    if n > max_n:
        raise AntembedError(f"n={n} above the guard {max_n}; pass max_n to override")
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    npairs = len(pairs)
    seen = set()
    for mask in range(1 << npairs):
        if mask.bit_count() < min_arcs:
            continue
        arcs = [pairs[i] for i in range(npairs) if (mask >> i) & 1]
        d = Digraph(n, arcs)
        if dedup:
            key = _canon_digraph(d)
            if key in seen:
                continue
            seen.add(key)
        yield d


def _canon_digraph(d: Digraph):
    from itertools import permutations

    best = None
    for perm in permutations(range(d.n)):
        key = tuple(sorted((perm[u], perm[v]) for u, v in d.arcs))
        if best is None or key < best:
            best = key
    return best
