"""Quadratic edge kernel for K_{1,d}-Matching."""

from __future__ import annotations

from .graphcore import SimpleGraph
from .trace import YES, KernelTrace

__all__ = ["kernelize_star_matching", "greedy_star_matching", "star_bound"]


def star_bound(d: int, k: int) -> int:
    return d**3 * k**2


def _graph(n, adj) -> SimpleGraph:
    return SimpleGraph(n, tuple((u, v) for u in range(n) for v in adj[u] if u < v))


def greedy_star_matching(adj, d: int) -> list[tuple[int, tuple[int, ...]]]:
    """Maximal set of disjoint d-stars as (centre, leaves); vertices scanned by id."""
    used: set[int] = set()
    stars = []
    for v in range(len(adj)):
        if v in used:
            continue
        free = sorted(u for u in adj[v] if u not in used)
        if len(free) >= d:
            leaves = tuple(free[:d])
            stars.append((v, leaves))
            used.add(v)
            used.update(leaves)
    return stars


def kernelize_star_matching(g: SimpleGraph, d: int, k: int, drop_isolated: bool = True):
    """Kernel with at most d^3 k^2 edges, or a YES certificate of k stars.

    Phase one trims every vertex to degree dk by deleting edges to its
    lowest-id neighbours. Phase two removes edges that lie in no K_{1,d}.
    A greedy star matching of size k ends the run with ``trace.verdict ==
    "yes"`` and the k stars as the output graph.
    """
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    n = g.n
    adj = [set(s) for s in g.adj]
    m = g.m
    trace = KernelTrace()
    cap = d * k
    # deleting an edge never raises a degree, so one sweep suffices
    for v in range(n):
        while len(adj[v]) > cap:
            u = min(adj[v])
            adj[v].discard(u)
            adj[u].discard(v)
            trace.log("high-degree", f"deg({v}) >= dk+1", (n, m), (n, m - 1), vertex=v, removed=(min(u, v), max(u, v)))
            m -= 1
    assert all(len(a) <= cap for a in adj)

    while True:
        dead = [(u, v) for u in range(n) for v in adj[u] if u < v and len(adj[u]) < d and len(adj[v]) < d]
        if not dead:
            break
        for u, v in dead:
            adj[u].discard(v)
            adj[v].discard(u)
        trace.log("not-in-star", "edge lies in no K_{1,d}", (n, m), (n, m - len(dead)), removed=dead)
        m -= len(dead)

    stars = greedy_star_matching(adj, d)
    trace.info["greedy_stars"] = len(stars)
    if len(stars) >= k:
        trace.verdict = YES
        cert = stars[:k]
        verts = sorted({v for c, ls in cert for v in (c, *ls)})
        pos = {v: i for i, v in enumerate(verts)}
        out = SimpleGraph(len(verts), tuple((pos[c], pos[x]) for c, ls in cert for x in ls))
        trace.info["vertex_map"] = verts
        trace.log("yes-certificate", f"greedy found {k} disjoint stars", (n, m), (out.n, out.m), stars=cert)
        return out, trace

    out = _graph(n, adj)
    assert out.m <= star_bound(d, k)
    if drop_isolated:
        keep = [v for v in range(n) if adj[v]]
        before = (out.n, out.m)
        out, old = out.induced(keep)
        trace.info["vertex_map"] = old
        if out.n != before[0]:
            trace.log("drop-isolated", "isolated vertices carry no edge", before, (out.n, out.m))
    else:
        trace.info["vertex_map"] = list(range(n))
    return out, trace
