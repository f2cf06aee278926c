"""Embeddings: injective arc-preserving vertex maps, with standalone validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .antitree import AntiTree
from .digraph import Digraph


@dataclass(frozen=True)
class Embedding:
    map: dict[int, int] = field(compare=False)

    def __getitem__(self, v: int) -> int:
        return self.map[v]

    def image(self) -> set[int]:
        return set(self.map.values())


def validate_embedding(t: AntiTree, d: Digraph, mapping: dict[int, int]) -> bool:
    """Injectivity plus arc preservation on every tree arc; vertex range checked."""
    if set(mapping.keys()) != set(range(t.n)):
        return False
    vals = list(mapping.values())
    if len(set(vals)) != len(vals):
        return False
    if any(not (0 <= h < d.n) for h in vals):
        return False
    return all((mapping[u], mapping[v]) in d.arc_set for u, v in t.tree.arcs)


def validate_partial(t: AntiTree, d: Digraph, mapping: dict[int, int]) -> bool:
    """Like validate_embedding but over a subset of the tree's vertices."""
    vals = list(mapping.values())
    if len(set(vals)) != len(vals):
        return False
    dom = set(mapping)
    return all(
        (mapping[u], mapping[v]) in d.arc_set
        for u, v in t.tree.arcs
        if u in dom and v in dom
    )
