"""Core digraph representation and degree machinery.

Vertices are dense integers 0..n-1.  Arcs are ordered pairs (tail, head);
both (u, v) and (v, u) may coexist, loops and duplicates are rejected.
Adjacency is kept both as insertion-ordered tuples and as int bitmasks
(bit v of ``out_bits[u]`` is set iff the arc u->v exists), which is what
all the heavier algorithms operate on.

Digraph values are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AntembedError

Arc = tuple[int, int]


class Digraph:
    __slots__ = ("n", "arcs", "arc_set", "out_adj", "in_adj", "out_bits", "in_bits", "_hash")

    def __init__(self, n: int, arcs: Iterable[Arc]):
        if n < 0:
            raise AntembedError("order must be non-negative")
        self.n = n
        seen = set()
        ordered = []
        out_adj = [[] for _ in range(n)]
        in_adj = [[] for _ in range(n)]
        out_bits = [0] * n
        in_bits = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise AntembedError(f"arc ({u},{v}) out of range for order {n}")
            if u == v:
                raise AntembedError(f"loop at vertex {u} rejected")
            if (u, v) in seen:
                raise AntembedError(f"duplicate arc ({u},{v}) rejected")
            seen.add((u, v))
            ordered.append((u, v))
            out_adj[u].append(v)
            in_adj[v].append(u)
            out_bits[u] |= 1 << v
            in_bits[v] |= 1 << u
        self.arcs = tuple(ordered)
        self.arc_set = frozenset(seen)
        self.out_adj = tuple(tuple(a) for a in out_adj)
        self.in_adj = tuple(tuple(a) for a in in_adj)
        self.out_bits = tuple(out_bits)
        self.in_bits = tuple(in_bits)
        self._hash = None

    # -- basic queries -------------------------------------------------

    def a(self) -> int:
        """Arc count a(D)."""
        return len(self.arcs)

    def out_deg(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_deg(self, v: int) -> int:
        return len(self.in_adj[v])

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_set

    def out_sorted(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self.out_adj[v]))

    def in_sorted(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self.in_adj[v]))

    def vertices(self) -> range:
        return range(self.n)

    def neighbor_bits(self, v: int, sign: int) -> int:
        """Sign-typed neighborhood as a bitmask: N^+(v) for sign +1, N^-(v) for -1."""
        return self.out_bits[v] if sign > 0 else self.in_bits[v]

    def sign_deg(self, v: int, sign: int) -> int:
        return len(self.out_adj[v]) if sign > 0 else len(self.in_adj[v])

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.arc_set == other.arc_set

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.arc_set))
        return self._hash

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={sorted(self.arc_set)})"


@dataclass(frozen=True)
class DegreeProfile:
    out_deg: tuple[int, ...]
    in_deg: tuple[int, ...]
    delta_plus_bar: int
    delta_minus_bar: int
    delta0_bar: int
    max_out: int
    max_in: int


def _pseudo(degs: Sequence[int]) -> int:
    positive = [d for d in degs if d > 0]
    return min(positive) if positive else 0


def degree_profile(d: Digraph) -> DegreeProfile:
    """Degree summary with the pseudo-semidegrees.

    The minimum pseudo-out-degree is 0 for an arcless digraph, otherwise the
    least d such that every vertex has out-degree 0 or >= d.
    """
    outs = tuple(len(a) for a in d.out_adj)
    ins = tuple(len(a) for a in d.in_adj)
    dp = _pseudo(outs)
    dm = _pseudo(ins)
    return DegreeProfile(
        out_deg=outs,
        in_deg=ins,
        delta_plus_bar=dp,
        delta_minus_bar=dm,
        delta0_bar=min(dp, dm),
        max_out=max(outs, default=0),
        max_in=max(ins, default=0),
    )


def plus_minus_sets(d: Digraph) -> tuple[set[int], set[int]]:
    """(D+, D-): vertices of positive out-degree and of positive in-degree."""
    plus = {v for v in range(d.n) if d.out_adj[v]}
    minus = {v for v in range(d.n) if d.in_adj[v]}
    return plus, minus


def reverse(d: Digraph) -> Digraph:
    """Flip every arc; order preserved."""
    return Digraph(d.n, [(v, u) for u, v in d.arcs])


def induced_subdigraph(d: Digraph, keep_arcs: Iterable[Arc], drop_isolated: bool = False):
    """Digraph on the same vertex set with arc set ``keep_arcs``.

    With ``drop_isolated`` the vertices untouched by keep_arcs are removed and
    a remap table old_id -> new_id is returned alongside the digraph.
    """
    keep = list(dict.fromkeys(tuple(a) for a in keep_arcs))
    for a in keep:
        if a not in d.arc_set:
            raise AntembedError(f"arc {a} not present in digraph")
    if not drop_isolated:
        return Digraph(d.n, keep)
    touched = sorted({u for u, _ in keep} | {v for _, v in keep})
    remap = {old: new for new, old in enumerate(touched)}
    sub = Digraph(len(touched), [(remap[u], remap[v]) for u, v in keep])
    return sub, remap


def core_member_bits(d: Digraph) -> int:
    """Bitmask of vertices with positive total degree (the vertex set of a subdigraph)."""
    bits = 0
    for v in range(d.n):
        if d.out_adj[v] or d.in_adj[v]:
            bits |= 1 << v
    return bits


# -- file formats ------------------------------------------------------


def parse_arclist(text: str):
    """Parse the arc-list format.

    First line ``n m`` (optionally ``n m root r``), then m lines ``u v``;
    lines starting with ``#`` are ignored.  Returns (Digraph, root or None).
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise AntembedError("empty arc-list input")
    head = lines[0].split()
    if len(head) not in (2, 4) or (len(head) == 4 and head[2] != "root"):
        raise AntembedError(f"bad header line: {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    root = int(head[3]) if len(head) == 4 else None
    arcs = []
    for ln in lines[1 : m + 1]:
        parts = ln.split()
        if len(parts) != 2:
            raise AntembedError(f"bad arc line: {ln!r}")
        arcs.append((int(parts[0]), int(parts[1])))
    if len(arcs) != m:
        raise AntembedError(f"expected {m} arcs, found {len(arcs)}")
    return Digraph(n, arcs), root


def to_arclist(d: Digraph, root: int | None = None) -> str:
    head = f"{d.n} {d.a()}" if root is None else f"{d.n} {d.a()} root {root}"
    return "\n".join([head] + [f"{u} {v}" for u, v in d.arcs]) + "\n"


def to_json_obj(d: Digraph) -> dict:
    return {"n": d.n, "arcs": [[u, v] for u, v in d.arcs]}


def from_json_obj(obj: dict) -> Digraph:
    return Digraph(int(obj["n"]), [(int(u), int(v)) for u, v in obj["arcs"]])


def to_dot(d: Digraph, name: str = "D") -> str:
    body = "\n".join(f"  {u} -> {v};" for u, v in sorted(d.arc_set))
    isolated = [v for v in range(d.n) if not d.out_adj[v] and not d.in_adj[v]]
    iso = "\n".join(f"  {v};" for v in isolated)
    parts = [f"digraph {name} {{", iso, body, "}"]
    return "\n".join(p for p in parts if p) + "\n"
