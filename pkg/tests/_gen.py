"""Small instance generators shared by the test modules."""

from __future__ import annotations

import itertools

import numpy as np

from packkernel.graphcore import (
    CNF,
    HPattern,
    Hypergraph,
    MCBInstance,
    PartitionedHypergraph,
    SimpleGraph,
    WeightedPathGraph,
)


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_graph(r, n: int, p: float) -> SimpleGraph:
    coin = r.random(n * (n - 1) // 2)
    return SimpleGraph(n, tuple(e for e, c in zip(itertools.combinations(range(n), 2), coin) if c < p))


def random_hypergraph(r, d: int, n: int, m: int) -> Hypergraph:
    edges = {tuple(sorted(int(v) for v in r.choice(n, d, replace=False))) for _ in range(m)}
    return Hypergraph(d, n, tuple(sorted(edges)))


def random_pdm(r, d: int, q: int, extra: int, planted: bool) -> PartitionedHypergraph:
    edges = set()
    if planted:
        perms = [r.permutation(q) for _ in range(d)]
        edges.update(tuple(c * q + int(perms[c][j]) for c in range(d)) for j in range(q))
    for _ in range(extra):
        edges.add(tuple(c * q + int(r.integers(q)) for c in range(d)))
    return PartitionedHypergraph(Hypergraph(d, d * q, tuple(sorted(edges))), tuple(v // q for v in range(d * q)))


def random_weighted(r, n: int, p: float, d: int, dangling: float = 0.2) -> WeightedPathGraph:
    items = {}
    for e in itertools.combinations(range(n), 2):
        if r.random() < p:
            items[e] = int(r.integers(1, d + 1))
    for v in range(n):
        if r.random() < dangling:
            items[(v, v)] = int(r.integers(1, d + 1))
    return WeightedPathGraph(n, items, d)


def fan_weighted(r, d: int, core: int, fans: int) -> WeightedPathGraph:
    """A small core plus many pendant paths; drives the subtree and component rules."""
    items = {}
    for e in itertools.combinations(range(core), 2):
        if r.random() < 0.5:
            items[e] = int(r.integers(1, d + 1))
    n = core
    for _ in range(fans):
        anchor = int(r.integers(core))
        length = int(r.integers(1, d))
        prev = anchor
        for _ in range(length):
            items[(prev, n) if prev < n else (n, prev)] = 1
            prev = n
            n += 1
        if r.random() < 0.3:
            items[(prev, prev)] = 1
    return WeightedPathGraph(n, items, d)


def random_mcb(r, k: int, n: int, p: float) -> MCBInstance:
    u = tuple(tuple(range(c * n, (c + 1) * n)) for c in range(k))
    w = tuple(tuple(range(k * n + c * n, k * n + (c + 1) * n)) for c in range(k))
    edges = tuple((a, b) for a in range(k * n) for b in range(k * n, 2 * k * n) if r.random() < p)
    return MCBInstance(SimpleGraph(2 * k * n, edges), u, w)


def random_cnf(r, nvars: int, clauses: int, unsat: bool = False) -> CNF:
    out = []
    if unsat:
        vs = [int(x) for x in r.choice(np.arange(1, nvars + 1), 3, replace=False)]
        out += [tuple(v if (mask >> j) & 1 else -v for j, v in enumerate(vs)) for mask in range(8)]
    for _ in range(clauses):
        vs = r.choice(np.arange(1, nvars + 1), 3, replace=False)
        out.append(tuple(int(v) if r.random() < 0.5 else -int(v) for v in vs))
    return CNF(nvars, tuple(out))


def colored_instance(r, h: HPattern, n: int, p: float, plant: bool = False):
    """Properly p-coloured graph with n vertices per class, optionally with an H-factor."""
    chi = h.chromatic_number
    N = chi * n
    color = [v // n for v in range(N)]
    edges = {e for e in itertools.combinations(range(N), 2) if color[e[0]] != color[e[1]] and r.random() < p}
    if plant and chi == h.vertex_count:
        perms = [r.permutation(n) for _ in range(chi)]
        for j in range(n):
            vs = [c * n + int(perms[c][j]) for c in range(chi)]
            edges.update(tuple(sorted(e)) for e in itertools.combinations(vs, 2))
    return SimpleGraph(N, tuple(sorted(edges))), color


def hub_instance(r, k: int, pairs: int, xs: int):
    """Vertex 0 joined to matched pairs (a_i, b_i) and to X vertices touching 1-2 of them."""
    n = 1 + 2 * pairs + xs
    edges = set()
    m_vertices = list(range(1, 1 + 2 * pairs))
    for i in range(pairs):
        a, b = 1 + 2 * i, 2 + 2 * i
        edges.update({(0, a), (a, b)})
    for j in range(xs):
        x = 1 + 2 * pairs + j
        edges.add((0, x))
        for m in r.choice(m_vertices, int(r.integers(1, 3)), replace=False):
            edges.add((int(m), x))
    return SimpleGraph(n, tuple(sorted(edges)))


def pendant_weighted(r, d: int, pairs: int, leaves: int, links: float = 0.05) -> WeightedPathGraph:
    """Heavy matched core pairs plus many light pendants hung on the core.

    Light pendants cannot form heavy paths by themselves, so the greedy
    packing stops at the core and the request rules get to work.
    """
    items = {}
    core = 2 * pairs
    for j in range(pairs):
        items[(2 * j, 2 * j + 1)] = d
    light = max(1, (d - 1) // 2)
    for v in range(core, core + leaves):
        items[(int(r.integers(core)), v)] = int(r.integers(1, light + 1))
    for a, b in itertools.combinations(range(core, core + leaves), 2):
        if r.random() < links:
            items[(a, b)] = 1
    return WeightedPathGraph(core + leaves, items, d)
