"""Switch, selector and hyperedge gadgets plus a naive clique packing structure."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphcore import HPattern, Hypergraph, PartitionedHypergraph, SimpleGraph
from .oracles import OracleBudget, count_perfect_matchings, has_h_factor

__all__ = [
    "SelectorGadget",
    "HyperedgeGadget",
    "build_switch_gadget",
    "build_selector_gadget",
    "build_hyperedge_gadget",
    "naive_packing_structure",
    "verify_selector",
    "verify_hyperedge_gadget",
]


@dataclass(frozen=True)
class SelectorGadget:
    """d-partite gadget whose perfect matchings leave exactly one block uncovered.

    All block vertices are in colour class 0; every other vertex is private.
    The single-block gadget has no edges and so cannot fill every colour
    class, which is why the hypergraph and colouring are kept separately.
    """

    hypergraph: Hypergraph
    color: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    @property
    def graph(self) -> PartitionedHypergraph:
        return PartitionedHypergraph(self.hypergraph, self.color)

    @property
    def n(self) -> int:
        return self.hypergraph.n

    @property
    def private(self) -> tuple[int, ...]:
        inside = {v for b in self.blocks for v in b}
        return tuple(v for v in range(self.n) if v not in inside)


@dataclass(frozen=True)
class HyperedgeGadget:
    graph: SimpleGraph
    terminals: tuple[int, ...]


def _switch_edges(d: int, s: int, u1: list[int], u2: list[int], fresh):
    """Edges of one switch between blocks ``u1`` and ``u2``.

    Edge e_j (j = 1..2s) holds one private block vertex, one vertex shared
    with its odd-side neighbour and d-2 vertices shared with its even-side
    neighbour.
    """
    odd_cut = [fresh(1) for _ in range(s)]  # e_{2t-1} & e_{2t}
    even_cut = [[fresh(c) for c in range(2, d)] for _ in range(s)]  # e_{2t} & e_{2t+1}
    edges = []
    for t in range(s):
        # e_{2t+1} (odd): own vertex in U_1, meets e_{2t+2} in one vertex,
        # meets e_{2t} in d-2 vertices
        edges.append((u1[t], odd_cut[t], *even_cut[t - 1]))
        # e_{2t+2} (even): own vertex in U_2
        edges.append((u2[t], odd_cut[t], *even_cut[t]))
    return edges


def build_switch_gadget(d: int, s: int) -> SelectorGadget:
    """d-uniform cycle of 2s edges with blocks U_1 (odd edges) and U_2 (even edges)."""
    return build_selector_gadget(d, 2, s)


def build_selector_gadget(d: int, m: int, s: int) -> SelectorGadget:
    """Chain of m-1 switches between consecutive blocks U_1..U_m of size s.

    ``m == 1`` gives the single block with no edges, which lets compositions
    handle a one-instance input uniformly.
    """
    if d < 3:
        raise ValueError("selector gadgets need d >= 3")
    if s < 2:
        raise ValueError("switch gadgets need blocks of size s >= 2")
    if m < 1:
        raise ValueError("need at least one block")
    color: list[int] = []

    def fresh(c: int) -> int:
        color.append(c)
        return len(color) - 1

    blocks = [[fresh(0) for _ in range(s)] for _ in range(m)]
    edges = []
    for a in range(m - 1):
        edges.extend(_switch_edges(d, s, blocks[a], blocks[a + 1], fresh))
    h = Hypergraph(d, len(color), tuple(edges))
    return SelectorGadget(h, tuple(color), tuple(map(tuple, blocks)))


def build_hyperedge_gadget(h: HPattern) -> HyperedgeGadget:
    """Graph e(v_1..v_d) with an H-factor after removing S iff |S| in {0, d}.

    Vertices 0..d-1 carry the central copy of H. Copy H_u occupies
    ``d + u*d .. d + u*d + d-1`` with its anchor copy v_u at offset 0; v_u is
    the terminal. Vertex u of the centre is joined to every vertex of H_u
    that is adjacent to v_u.
    """
    d = h.vertex_count
    if d < 3:
        raise ValueError("H needs at least three vertices")
    if not h.is_connected:
        raise ValueError("H must be connected")
    hg, a = h.graph, h.anchor
    relabel = [a] + [x for x in range(d) if x != a]
    pos = {x: i for i, x in enumerate(relabel)}
    local = [(pos[x], pos[y]) for x, y in hg.edges]
    anchor_nb = {y for e in local for y in e if 0 in e and y != 0}
    edges = list(local)
    terminals = []
    for u in range(d):
        base = d + u * d
        terminals.append(base)
        edges.extend((base + x, base + y) for x, y in local)
        edges.extend((u, base + y) for y in sorted(anchor_nb))
    return HyperedgeGadget(SimpleGraph(d * (d + 1), tuple(edges)), tuple(terminals))


def naive_packing_structure(p: int, t: int) -> tuple[SimpleGraph, list[tuple[int, ...]]]:
    """t disjoint copies of K_p; clique i is ``i*p .. i*p + p-1``."""
    if p < 2 or t < 1:
        raise ValueError("need p >= 2 and t >= 1")
    cliques = [tuple(range(i * p, (i + 1) * p)) for i in range(t)]
    edges = [e for c in cliques for e in itertools.combinations(c, 2)]
    return SimpleGraph(p * t, tuple(edges)), cliques


def verify_selector(gadget: SelectorGadget, budget: OracleBudget | None = None) -> dict:
    """Exhaustive check over all subsets B of the block vertices.

    Returns counts of proper blocks with a unique matching, and of improper
    subsets that wrongly admit one.
    """
    outside = sorted({v for b in gadget.blocks for v in b})
    blocks = {frozenset(b) for b in gadget.blocks}
    g = gadget.hypergraph
    unique, bad = 0, []
    for r in range(len(outside) + 1):
        for B in itertools.combinations(outside, r):
            rest, _ = g.induced(set(range(g.n)) - set(B))
            count = count_perfect_matchings(rest, limit=2, budget=budget)
            if frozenset(B) in blocks:
                unique += count == 1
                if count != 1:
                    bad.append(B)
            elif count:
                bad.append(B)
    return {"blocks": len(blocks), "unique": unique, "violations": bad}


def verify_hyperedge_gadget(gadget: HyperedgeGadget, h: HPattern, budget: OracleBudget | None = None) -> list:
    """Terminal subsets S where "e - S has an H-factor" disagrees with |S| in {0, d}."""
    d = len(gadget.terminals)
    g = gadget.graph
    bad = []
    for r in range(d + 1):
        for S in itertools.combinations(gadget.terminals, r):
            rest, _ = g.induced(set(range(g.n)) - set(S))
            if has_h_factor(rest, h, budget) != (r in (0, d)):
                bad.append(S)
    return bad
