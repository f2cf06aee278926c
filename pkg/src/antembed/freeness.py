"""Detection of the three forbidden orientations of K_{2,s}.

A digraph is free of them iff every sign-typed common neighborhood of two
distinct vertices has size at most s-1.  The triple-probe bound used by the
embedders (any three sign-typed neighborhoods meet a k-set in < 5k/4 vertices
in a free digraph) lives here as a checkable report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph
from .errors import AntembedError

_SIGN_PAIRS = ((1, 1), (-1, -1), (1, -1), (-1, 1))


def common_neighborhood(d: Digraph, a: int, sign_a: int, b: int, sign_b: int) -> set[int]:
    """N^{sign_a}(a) ∩ N^{sign_b}(b), excluding a and b themselves."""
    if a == b:
        raise AntembedError("common neighborhood needs two distinct vertices")
    bits = d.neighbor_bits(a, sign_a) & d.neighbor_bits(b, sign_b)
    bits &= ~((1 << a) | (1 << b))
    out = set()
    while bits:
        low = bits & -bits
        out.add(low.bit_length() - 1)
        bits ^= low
    return out


@dataclass(frozen=True)
class ForbiddenWitness:
    a: int
    b: int
    sign_a: int
    sign_b: int
    common: frozenset[int]

    def revalidate(self, d: Digraph, s: int) -> bool:
        if self.a == self.b or len(self.common) != s:
            return False
        cn = common_neighborhood(d, self.a, self.sign_a, self.b, self.sign_b)
        return self.common <= cn and self.a not in self.common and self.b not in self.common


def is_k2s_free(d: Digraph, s: int, prune: bool = False):
    """True iff no sign-typed common neighborhood of size s exists.

    Returns True or a ForbiddenWitness with exactly s common vertices.  With
    ``prune`` only pairs whose sign-degrees both reach s are examined (a pure
    optimization; the outcome is identical).
    """
    if s < 1:
        raise AntembedError("s must be positive")
    n = d.n
    for a in range(n):
        mask_a = ~(1 << a)
        for b in range(a + 1, n):
            strip = mask_a & ~(1 << b)
            for sa, sb in _SIGN_PAIRS:
                if prune and (d.sign_deg(a, sa) < s or d.sign_deg(b, sb) < s):
                    continue
                bits = d.neighbor_bits(a, sa) & d.neighbor_bits(b, sb) & strip
                if bits.bit_count() >= s:
                    picked = []
                    while bits and len(picked) < s:
                        low = bits & -bits
                        picked.append(low.bit_length() - 1)
                        bits ^= low
                    return ForbiddenWitness(a=a, b=b, sign_a=sa, sign_b=sb, common=frozenset(picked))
    return True


@dataclass(frozen=True)
class TripleProbeReport:
    parts: tuple[int, int, int]
    total: int
    k: int
    holds: bool  # total < 5k/4, compared exactly as 4*total < 5k


def k4_bound_check(d: Digraph, s: int, S, probes, k: int | None = None) -> TripleProbeReport:
    """Sum of three sign-typed neighborhood intersections with S against 5k/4.

    ``probes`` is a sequence of three (vertex, sign) pairs with pairwise
    distinct vertices.  When k is omitted it defaults to 12*s, the largest k
    with ceil(k/12) = s.  In a free digraph with |S| <= k the bound holds;
    the embedders use this as a debug report when a guaranteed step fails.
    """
    probes = list(probes)
    if len(probes) != 3:
        raise AntembedError("exactly three probes required")
    if len({v for v, _ in probes}) != 3:
        raise AntembedError("probe vertices must be pairwise distinct")
    if k is None:
        k = 12 * s
    sbits = 0
    for v in S:
        sbits |= 1 << v
    parts = tuple((d.neighbor_bits(v, sg) & sbits).bit_count() for v, sg in probes)
    total = sum(parts)
    return TripleProbeReport(parts=parts, total=total, k=k, holds=4 * total < 5 * k)
