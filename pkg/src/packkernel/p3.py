"""Kernel with O(k^2.5) edges for P_3-Matching (paths with three edges).

Two stages: every vertex of degree above ``C * k**1.5`` loses edges until it
drops below that cap, then a greedy path packing either answers YES or gives a
small hitting set S around which the rest of the graph is trimmed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graphcore import SimpleGraph
from .trace import YES, KernelTrace

__all__ = [
    "DEFAULT_C",
    "DegreeReductionState",
    "find_side_matching",
    "find_good_witness",
    "reduce_vertex_degree",
    "greedy_p3_matching",
    "kernelize_p3",
    "p3_edge_bound",
]

DEFAULT_C = 32.0
STALLED = "degree-reduction-stalled"


def _degree_cap(k: int, C: float) -> float:
    return C * k**1.5


def p3_edge_bound(k: int, C: float = DEFAULT_C) -> float:
    """Edge bound ``16 C k^2.5`` met by every non-stalled kernel."""
    return 16 * C * k**2.5


def _adjacency(g):
    if isinstance(g, SimpleGraph):
        return [set(s) for s in g.adj]
    return g


def find_side_matching(g, v: int) -> list[tuple[int, int]]:
    """Greedy maximal matching a_i b_i in G - v with every a_i adjacent to v.

    Neighbours of ``v`` are scanned by increasing id and matched to their
    lowest-id free neighbour other than ``v``. ``g`` may be a graph or a list
    of adjacency sets.
    """
    adj = _adjacency(g)
    used: set[int] = set()
    pairs = []
    for a in sorted(adj[v]):
        if a in used:
            continue
        free = [b for b in adj[a] if b != v and b not in used]
        if free:
            b = min(free)
            pairs.append((a, b))
            used.update((a, b))
    return pairs


@dataclass
class DegreeReductionState:
    """Bookkeeping for one pivot vertex ``v`` while searching for a removable edge."""

    v: int
    pairs: list[tuple[int, int]]
    M: list[int]
    X: list[int]
    good: set[int] = field(default_factory=set)
    helper: list[tuple[int, int]] = field(default_factory=list)
    parts: dict[int, list[int]] = field(default_factory=dict)

    @classmethod
    def build(cls, g, v: int) -> "DegreeReductionState":
        adj = _adjacency(g)
        pairs = find_side_matching(adj, v)
        M = sorted({x for p in pairs for x in p})
        X = sorted(adj[v] - set(M))
        return cls(v, pairs, M, X)

    def edges_to_m(self, g) -> list[tuple[int, int]]:
        adj = _adjacency(g)
        ms = set(self.M)
        return sorted((m, x) for x in self.X for m in adj[x] if m in ms)


def _cheapest_matching(rows, adj, mset, deg_h, need: int):
    """Minimum-weight matching of size ``need`` from ``rows`` into M; weight deg_H(y).

    Solved as an assignment problem with one zero-cost spare column, so at
    most one row may stay unmatched. Returns (pairs, weight) or None.
    """
    cols = sorted({y for x in rows for y in adj[x] if y in mset})
    if len(cols) < need:
        return None
    big = sum(deg_h.values()) * len(rows) + len(rows) + 1
    cost = np.full((len(rows), len(cols) + 1), float(big))
    for r, x in enumerate(rows):
        for c, y in enumerate(cols):
            if y in adj[x]:
                cost[r, c] = deg_h[y]
        cost[r, len(cols)] = 0.0
    ri, ci = linear_sum_assignment(cost)
    if len(ri) < len(rows) or any(cost[r, c] >= big for r, c in zip(ri, ci)):
        return None
    pairs = [(rows[r], cols[c]) for r, c in zip(ri, ci) if c < len(cols)]
    if len(pairs) > need:
        # every row matched: the dearest pair is the one to drop
        pairs.remove(max(pairs, key=lambda p: (deg_h[p[1]], p)))
    return pairs, sum(deg_h[y] for _, y in pairs)


def find_good_witness(g, state: DegreeReductionState, k: int):
    """One round of the good-vertex search.

    Returns ``("x", x)`` when some x in X has only certified-good neighbours
    in M, ``("good", m)`` when m is newly certified good (``state.good`` is
    updated), or ``("stall", None)`` when every block was matchable. The
    helper graph H is rebuilt from scratch on each call.
    """
    adj = _adjacency(g)
    mset = set(state.M)
    bad = mset - state.good
    for x in state.X:
        if not adj[x] & bad:
            return "x", x
    parts: dict[int, list[int]] = {m: [] for m in sorted(bad)}
    for x in state.X:
        parts[min(adj[x] & bad)].append(x)
    state.parts = parts
    deg_h: Counter = Counter()
    helper = []
    for m, block in parts.items():
        if len(block) <= 1:
            continue
        found = _cheapest_matching(block, adj, mset, deg_h, len(block) - 1)
        if found is None or found[1] > 4 * k:
            state.good.add(m)
            state.helper = helper
            return "good", m
        for x, y in found[0]:
            helper.append((x, y))
            deg_h[y] += 1
    state.helper = helper
    assert all(c <= 1 for c in Counter(x for x, _ in helper).values())
    return "stall", None


def _drop(adj, u, v):
    adj[u].discard(v)
    adj[v].discard(u)


def _size(adj):
    return len(adj), sum(len(a) for a in adj) // 2


def _reduce_at(adj, v: int, k: int, cap: float, strict: bool, trace: KernelTrace) -> bool:
    while len(adj[v]) > cap:
        before = _size(adj)
        state = DegreeReductionState.build(adj, v)
        if len(state.pairs) >= 4 * k + 2:
            u = min(adj[v])
            _drop(adj, v, u)
            trace.log("many2path", f"side matching of size {len(state.pairs)} >= 4k+2", before, _size(adj), vertex=v, removed=(min(u, v), max(u, v)))
            continue
        gate = len(state.X) > 100 * k if strict else len(adj[v]) >= 4 * k + 1
        if not gate:
            trace.flags.add(STALLED)
            trace.log("stall", "good-vertex search precondition fails", before, before, vertex=v, X=len(state.X), M=len(state.M))
            return False
        while True:
            kind, w = find_good_witness(adj, state, k)
            if kind == "x":
                _drop(adj, v, w)
                trace.log("move", f"{w} has only good neighbours in M", before, _size(adj), vertex=v, removed=(min(v, w), max(v, w)))
                break
            if kind == "good":
                trace.log(
                    "good-certified",
                    "no cheap matching of size |X^i|-1",
                    before,
                    before,
                    vertex=v,
                    good=w,
                    M=list(state.M),
                    X=list(state.X),
                    edges=state.edges_to_m(adj),
                )
                continue
            trace.flags.add(STALLED)
            trace.log("stall", "every block admitted a cheap matching", before, before, vertex=v)
            return False
    return True


def reduce_vertex_degree(g: SimpleGraph, v: int, k: int, C: float = DEFAULT_C, strict: bool = True):
    """Delete edges at ``v`` until deg(v) <= C k^1.5; returns ``(graph, trace)``.

    With ``strict`` the good-vertex search only starts when |X| > 100k, the
    regime where it provably succeeds. ``strict=False`` only asks for
    deg(v) >= 4k+1, which keeps every deletion safe but may stall.
    """
    adj = [set(s) for s in g.adj]
    trace = KernelTrace()
    _reduce_at(adj, v, k, _degree_cap(k, C), strict, trace)
    return _to_graph(adj), trace


def _to_graph(adj) -> SimpleGraph:
    return SimpleGraph(len(adj), tuple((u, v) for u in range(len(adj)) for v in adj[u] if u < v))


def _first_path(adj, used) -> tuple[int, ...] | None:
    def walk(path):
        if len(path) == 4:
            return tuple(path)
        for u in sorted(adj[path[-1]]):
            if u not in used and u not in path:
                found = walk(path + [u])
                if found:
                    return found
        return None

    for a in range(len(adj)):
        if a not in used:
            found = walk([a])
            if found:
                return found
    return None


def greedy_p3_matching(g) -> list[tuple[int, ...]]:
    """Maximal set of vertex-disjoint 3-edge paths, each lexicographically first."""
    adj = _adjacency(g)
    used: set[int] = set()
    paths = []
    while True:
        p = _first_path(adj, used)
        if p is None:
            return paths
        paths.append(p)
        used.update(p)


def kernelize_p3(g: SimpleGraph, k: int, C: float = DEFAULT_C, strict: bool = True, drop_isolated: bool = True):
    """Kernel for P_3-Matching; returns ``(graph, trace)``.

    ``trace.info`` holds the degree cap, the edge constant ``c = 16 C`` and the
    bound ``c k^2.5``; the bound is asserted unless the degree reduction
    stalled somewhere.
    """
    if k < 0 or C <= 0:
        raise ValueError("need k >= 0 and C > 0")
    trace = KernelTrace()
    if k == 0:
        trace.verdict = YES
        trace.info["vertex_map"] = []
        return SimpleGraph(0), trace
    cap = _degree_cap(k, C)
    trace.info.update(C=C, delta=cap, c=16 * C, edge_bound=p3_edge_bound(k, C), strict=strict)
    adj = [set(s) for s in g.adj]
    for v in range(g.n):
        if len(adj[v]) > cap:
            _reduce_at(adj, v, k, cap, strict, trace)

    paths = greedy_p3_matching(adj)
    trace.info["greedy_paths"] = len(paths)
    if len(paths) >= k:
        trace.verdict = YES
        cert = paths[:k]
        verts = sorted({x for p in cert for x in p})
        pos = {x: i for i, x in enumerate(verts)}
        out = SimpleGraph(len(verts), tuple((pos[p[j]], pos[p[j + 1]]) for p in cert for j in range(3)))
        trace.info["vertex_map"] = verts
        trace.log("yes-certificate", f"greedy found {k} disjoint paths", _size(adj), (out.n, out.m), paths=cert)
        return out, trace

    S = {x for p in paths for x in p}
    rest, _ = _to_graph(adj).induced(set(range(g.n)) - S)
    outside = sorted(set(range(g.n)) - S)
    for comp in rest.components():
        comp = [outside[i] for i in comp]
        if not any(adj[x] & S for x in comp):
            if any(adj[x] for x in comp):
                before = _size(adj)
                for x in comp:
                    for y in list(adj[x]):
                        _drop(adj, x, y)
                trace.log("detached-component", "component of G - S not adjacent to S", before, _size(adj), vertices=comp)
    for w in outside:
        pendants = sorted(u for u in adj[w] if u not in S and len(adj[u]) == 1)
        if len(pendants) >= 2:
            before = _size(adj)
            for u in pendants[1:]:
                _drop(adj, w, u)
            trace.log("twin-pendants", "interchangeable degree-one neighbours", before, _size(adj), vertex=w, kept=pendants[0], removed=pendants[1:])

    out = _to_graph(adj)
    if not trace.stalled:
        assert max((len(a) for a in adj), default=0) <= cap
        assert out.m <= p3_edge_bound(k, C)
    if drop_isolated:
        before = (out.n, out.m)
        out, old = out.induced([v for v in range(g.n) if adj[v]])
        trace.info["vertex_map"] = old
        if out.n != before[0]:
            trace.log("drop-isolated", "isolated vertices carry no edge", before, (out.n, out.m))
    else:
        trace.info["vertex_map"] = list(range(g.n))
    return out, trace
