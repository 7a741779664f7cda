"""Sunflower search and the O(k^d)-edge kernel for d-Set Matching."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import factorial

from .graphcore import Hypergraph
from .trace import KernelTrace

__all__ = ["Sunflower", "find_sunflower", "kernelize_set_matching", "set_matching_bound", "compact"]


@dataclass(frozen=True)
class Sunflower:
    core: tuple[int, ...]
    petals: tuple[tuple[int, ...], ...]

    def is_valid(self) -> bool:
        core = set(self.core)
        if len(self.petals) < 2:
            return False
        for a in range(len(self.petals)):
            for b in range(a + 1, len(self.petals)):
                if set(self.petals[a]) & set(self.petals[b]) != core:
                    return False
        return True


def _greedy(edges: list[frozenset], want: int, core: frozenset):
    family, used = [], set()
    for e in edges:
        if used.isdisjoint(e):
            family.append(e)
            used |= e
    if len(family) >= want:
        return core, family
    if not used:
        return None
    counts = Counter(v for e in edges for v in e)
    top = max(counts.values())
    v = min(u for u, c in counts.items() if c == top)
    return _greedy([e - {v} for e in edges if v in e], want, core | {v})


def find_sunflower(h: Hypergraph, petals: int) -> Sunflower | None:
    """Sunflower with at least ``petals`` petals, or None.

    Greedy: take a maximal disjoint family; if it is too small, recurse on the
    edges through the most frequent vertex. Succeeds whenever the edge count
    exceeds ``d! * (petals - 1) ** d``. All petals of the final family are
    returned, so the result can carry more than ``petals`` petals.
    """
    if petals < 2:
        raise ValueError("a sunflower needs at least two petals")
    found = _greedy([frozenset(e) for e in h.edges], petals, frozenset())
    if found is None:
        return None
    core, family = found
    return Sunflower(
        tuple(sorted(core)), tuple(sorted(tuple(sorted(e | core)) for e in family))
    )


def set_matching_bound(d: int, k: int) -> int:
    return factorial(d) * (d * k) ** d


def compact(h: Hypergraph) -> tuple[Hypergraph, list[int]]:
    """Drop isolated vertices; returns the relabelled hypergraph and the old ids."""
    return h.induced(sorted({v for e in h.edges for v in e}))


def kernelize_set_matching(h: Hypergraph, k: int, drop_isolated: bool = True):
    """Delete petals of (dk+1)-petal sunflowers until at most d!(dk)^d edges remain.

    Returns ``(kernel, trace)``. The removed petal is always the
    lexicographically largest one. With ``drop_isolated`` the kernel is
    relabelled and ``trace.info["vertex_map"]`` maps new ids to old ones.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    d = h.d
    r = d * k
    bound = set_matching_bound(d, k)
    trace = KernelTrace()
    trace.info.update(bound=bound, r=r)
    edges = set(h.edges)
    while len(edges) > bound:
        cur = Hypergraph(d, h.n, tuple(edges))
        flower = find_sunflower(cur, r + 1)
        # the greedy finder cannot fail above the bound
        assert flower is not None and flower.is_valid()
        petals = list(flower.petals)
        while len(petals) > r and len(edges) > bound:
            victim = petals.pop()
            before = (h.n, len(edges))
            edges.discard(victim)
            trace.log(
                "sunflower-petal",
                f"sunflower with {len(petals) + 1} > dk petals",
                before,
                (h.n, len(edges)),
                core=flower.core,
                removed=victim,
            )
    out = Hypergraph(d, h.n, tuple(edges))
    assert out.m <= bound
    if drop_isolated:
        before = (out.n, out.m)
        out, old = compact(out)
        trace.info["vertex_map"] = old
        if out.n != before[0]:
            trace.log("drop-isolated", "isolated vertices carry no edge", before, (out.n, out.m))
    else:
        trace.info["vertex_map"] = list(range(h.n))
    return out, trace
