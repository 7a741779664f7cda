"""OR-compositions and parameter-preserving reductions between matching problems.

Every composer returns the composed instance together with a
:class:`CompositionReport` that records the exact output size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, isqrt

from .gadgets import build_hyperedge_gadget, build_selector_gadget, naive_packing_structure
from .graphcore import (
    CNF,
    HPattern,
    Hypergraph,
    MCBInstance,
    PartitionedHypergraph,
    SimpleGraph,
    complement_hypergraph,
    serialize_instance,
)

__all__ = [
    "CompositionReport",
    "index_vector",
    "compose_or_perfect_dm",
    "reduce_pdm_to_clique_matching",
    "clique_to_multicolored_biclique",
    "compose_or_mcb_to_vertex_cover",
    "compose_or_3sat",
    "compose_or_hfactor",
]

# Hard cap on d-subsets scanned by the 3-Sat composer.
SUBSET_CAP = 5_000_000


@dataclass
class CompositionReport:
    t: int
    t_padded: int
    s: int
    d: int
    n_out: int
    m: int
    padding: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "t_padded": self.t_padded,
            "s": self.s,
            "d": self.d,
            "n_out": self.n_out,
            "m": self.m,
            "padding": dict(self.padding),
            **self.extra,
        }


def _root_ceil(t: int, d: int) -> int:
    m = max(1, round(t ** (1 / d)))
    while m**d < t:
        m += 1
    while m > 1 and (m - 1) ** d >= t:
        m -= 1
    return m


def index_vector(i: int, m: int, d: int) -> tuple[int, ...]:
    """Mixed-radix little-endian digits of ``i`` in base ``m``, length ``d``."""
    return tuple((i // m**a) % m for a in range(d))


def _bitlength(instances) -> int:
    return max((len(serialize_instance(x)) for x in instances), default=0)


# ----------------------------------------------------------- perfect d-dim matching


def _balanced_pdm(h: PartitionedHypergraph, q: int) -> list[list[tuple[int, ...]]]:
    """Edges of ``h`` as colour-ordered tuples over per-class local indices,
    padded with fresh dummy edges until every class has ``q`` vertices."""
    classes = h.classes()
    local = {v: i for cls in classes for i, v in enumerate(cls)}
    color = h.color
    edges = [tuple(local[v] for v in sorted(e, key=lambda x: color[x])) for e in h.edges]
    size = len(classes[0])
    edges.extend((j,) * h.d for j in range(size, q))
    return edges


def compose_or_perfect_dm(instances, d: int | None = None):
    """One d-partite hypergraph with a perfect matching iff some input has one.

    Inputs with unequal colour classes cannot have a perfect matching and are
    replaced by an edgeless instance. The rest are padded with disjoint dummy
    edges so every class holds ``q >= 2`` vertices, and t is padded with
    edgeless instances to ``m**d``. Group ``V[a][b]`` holds ids
    ``(a*m + b)*q .. +q-1``; the selector for class ``a`` follows.
    """
    instances = list(instances)
    if not instances:
        raise ValueError("need at least one instance")
    if d is None:
        d = instances[0].d
    if d < 3:
        raise ValueError("perfect d-dimensional matching composition needs d >= 3")
    for h in instances:
        if not isinstance(h, PartitionedHypergraph) or h.d != d:
            raise ValueError("every input must be a d-partite hypergraph with the same d")
    t = len(instances)
    s = _bitlength(instances)
    sizes = [len(h.classes()[0]) if h.n else 0 for h in instances]
    uneven = [i for i, h in enumerate(instances) if h.n and len({len(c) for c in h.classes()}) != 1]
    q = max([2] + [sizes[i] + (sizes[i] == 0) for i in range(t) if i not in uneven])
    m = _root_ceil(t, d)
    per_instance = []
    for i, h in enumerate(instances):
        if i in uneven:
            per_instance.append([])
        else:
            per_instance.append(_balanced_pdm(h, q))
    per_instance += [[] for _ in range(m**d - t)]

    def gid(a: int, b: int, j: int) -> int:
        return (a * m + b) * q + j

    n = d * m * q
    color = [a for a in range(d) for _ in range(m * q)]
    edges: list[tuple[int, ...]] = []
    for idx, inst in enumerate(per_instance):
        b = index_vector(idx, m, d)
        edges.extend(tuple(gid(a, b[a], e[a]) for a in range(d)) for e in inst)
    gadget = build_selector_gadget(d, m, q)
    for a in range(d):
        remap = {}
        for blk, verts in enumerate(gadget.blocks):
            for j, v in enumerate(verts):
                remap[v] = gid(a, blk, j)
        for v in gadget.private:
            remap[v] = n
            color.append((gadget.color[v] + a) % d)
            n += 1
        edges.extend(tuple(remap[v] for v in e) for e in gadget.hypergraph.edges)
    out = PartitionedHypergraph(Hypergraph(d, n, tuple(edges)), tuple(color))
    expect = d * m * q + d * (m - 1) * q * (d - 1)
    assert n == expect
    report = CompositionReport(
        t, m**d, s, d, n, m,
        padding={"class_size": q, "uneven_replaced": len(uneven), "no_instances_added": m**d - t},
        extra={"size_formula": "d*m*q + d*(m-1)*q*(d-1)"},
    )
    return out, report


def reduce_pdm_to_clique_matching(h: PartitionedHypergraph) -> tuple[SimpleGraph, int]:
    """Add a vertex v_e per (d-1)-edge e and make e + v_e a d-clique.

    Returns the graph and ``k = ceil(n / (d-1))``; for n divisible by d-1
    this is the number of edges in a perfect matching, otherwise both sides
    are NO.
    """
    d = h.d + 1
    if d < 4:
        raise ValueError("the clique reduction needs d >= 4 (input arity >= 3)")
    n = h.n
    edges = []
    for idx, e in enumerate(h.edges):
        ve = n + idx
        clique = sorted(e) + [ve]
        edges.extend(itertools.combinations(clique, 2))
    g = SimpleGraph(n + len(h.edges), tuple(sorted(set(edges))))
    return g, -(-n // (d - 1))


# ------------------------------------------------------------ biclique / vertex cover


def clique_to_multicolored_biclique(g: SimpleGraph, k: int) -> MCBInstance:
    """u_{i,j} = i*n + j and w_{i,j} = k*n + i*n + j for i < k, j < n."""
    n = g.n
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    edges = []
    for i, j, i2, j2 in itertools.product(range(k), range(n), range(k), range(n)):
        if (i, j) == (i2, j2) or (i != i2 and g.has_edge(j, j2)):
            edges.append((i * n + j, k * n + i2 * n + j2))
    u = tuple(tuple(i * n + j for j in range(n)) for i in range(k))
    w = tuple(tuple(k * n + i * n + j for j in range(n)) for i in range(k))
    return MCBInstance(SimpleGraph(2 * k * n, tuple(edges)), u, w)


def _mcb_layout(inst: MCBInstance, k: int, n: int):
    """Edges of ``inst`` as ((block, pos), (block, pos)) pairs after padding.

    Missing blocks get one vertex adjacent to the whole opposite side;
    short blocks get isolated vertices.
    """
    pos = {}
    for side, blocks in ((0, inst.u_blocks), (1, inst.w_blocks)):
        for c, blk in enumerate(blocks):
            for j, v in enumerate(blk):
                pos[v] = (side, c, j)
    cross = []
    for a, b in inst.graph.edges:
        pa, pb = pos[a], pos[b]
        if pa[0] == 1:
            pa, pb = pb, pa
        cross.append((pa[1:], pb[1:]))
    kk = inst.k
    if kk < k:
        real_u = [(c, j) for c, blk in enumerate(inst.u_blocks) for j in range(len(blk))]
        real_w = [(c, j) for c, blk in enumerate(inst.w_blocks) for j in range(len(blk))]
        extra = [(c, 0) for c in range(kk, k)]
        cross += [(x, y) for x in extra for y in real_w + extra]
        cross += [(x, y) for x in real_u for y in extra]
    return cross


def compose_or_mcb_to_vertex_cover(instances):
    """Complement of the group graph plus the budget ``N - 2k``.

    Instances are padded to a common block count and block size and t to a
    perfect square r*r with edgeless instances; instance ``idx`` goes to
    ``(U^(idx % r), W^(idx // r))``.
    """
    instances = list(instances)
    if not instances:
        raise ValueError("need at least one instance")
    t = len(instances)
    s = _bitlength(instances)
    k = max(inst.k for inst in instances)
    if k < 1:
        raise ValueError("instances need at least one block")
    n = max(len(b) for inst in instances for b in (*inst.u_blocks, *inst.w_blocks))
    n = max(n, 1)
    r = isqrt(t - 1) + 1
    layouts = [_mcb_layout(inst, k, n) for inst in instances]
    layouts += [[] for _ in range(r * r - t)]
    kn = k * n

    def uid(i, c, j):
        return i * kn + c * n + j

    def wid(i, c, j):
        return r * kn + i * kn + c * n + j

    N = 2 * r * kn
    edges = set()
    for i in range(r):
        for (c1, j1), (c2, j2) in itertools.combinations(itertools.product(range(k), range(n)), 2):
            if c1 != c2:
                edges.add((uid(i, c1, j1), uid(i, c2, j2)))
                edges.add((wid(i, c1, j1), wid(i, c2, j2)))
    for idx, cross in enumerate(layouts):
        i, j = idx % r, idx // r
        for (cu, ju), (cw, jw) in cross:
            edges.add((uid(i, cu, ju), wid(j, cw, jw)))
    for a, b in edges:
        ia = a // kn if a < r * kn else None
        ib = b // kn if b < r * kn else None
        # no edges between distinct U^i, nor between distinct W^j
        if ia is not None and ib is not None:
            assert ia == ib
        if ia is None and ib is None:
            assert (a - r * kn) // kn == (b - r * kn) // kn
    g = SimpleGraph(N, tuple(sorted(edges)))
    comp = SimpleGraph(N, tuple(e for e in itertools.combinations(range(N), 2) if e not in g.edge_set))
    budget = N - 2 * k
    assert N == 2 * r * k * n
    report = CompositionReport(
        t, r * r, s, 2, N, r,
        padding={"k": k, "block_size": n, "no_instances_added": r * r - t},
        extra={"budget": budget, "k": k},
    )
    return comp, budget, report


# ------------------------------------------------------------------------ 3-Sat


def _falsifies(sigma: dict[int, int], clause) -> bool:
    if not all(abs(x) in sigma for x in clause):
        return False
    return all(sigma[abs(x)] != (x > 0) for x in clause)


UNSAT_PAD = CNF(1, ((1, 1, 1), (-1, -1, -1)))


def compose_or_3sat(formulas, d: int, target: str = "clique"):
    """d-uniform hypergraph with a k-clique iff some formula is satisfiable.

    ``k = C(s,3) + d - 1``. Group ``V[0][b]`` is a copy of the three-variable
    partial assignments; ``V[a][b]`` for a > 0 is a single vertex. With
    ``target="vertex-cover"`` the complement is returned with budget n - k.
    """
    formulas = list(formulas)
    if not formulas:
        raise ValueError("need at least one formula")
    if d < 2:
        raise ValueError("need d >= 2")
    if target not in ("clique", "vertex-cover"):
        raise ValueError(f"unknown target {target!r}")
    t = len(formulas)
    s = max(3, max(f.nvars for f in formulas))
    m = _root_ceil(t, d)
    padded = formulas + [UNSAT_PAD] * (m**d - t)
    assignments = []
    for dom in itertools.combinations(range(1, s + 1), 3):
        for bits in itertools.product((0, 1), repeat=3):
            assignments.append(dict(zip(dom, bits)))
    P = len(assignments)
    consistent = [[all(a[x] == b[x] for x in a.keys() & b.keys()) for b in assignments] for a in assignments]
    # vertex layout: copy b of V_1 at b*P .. b*P + P-1, then V[a][b] singletons
    n = m * P + (d - 1) * m
    group = [(0, v // P, v % P) for v in range(m * P)]
    group += [(a, b, 0) for a in range(1, d) for b in range(m)]
    bad_for = [
        [any(_falsifies(sigma, c) for c in padded[idx].clauses) for sigma in assignments]
        for idx in range(m**d)
    ]
    if comb(n, d) > SUBSET_CAP:
        raise ValueError(f"{comb(n, d)} candidate edges exceed the cap {SUBSET_CAP}")
    edges = []
    for e in itertools.combinations(range(n), d):
        chosen: dict[int, int] = {}
        ok = True
        v1 = []
        for v in e:
            a, b, x = group[v]
            if chosen.setdefault(a, b) != b:
                ok = False
                break
            if a == 0:
                v1.append(x)
        if not ok:
            continue
        if any(not consistent[x][y] for x, y in itertools.combinations(v1, 2)):
            continue
        if len(chosen) == d:
            idx = sum(chosen[a] * m**a for a in range(d))
            if bad_for[idx][v1[0]]:
                continue
        edges.append(e)
    g = Hypergraph(d, n, tuple(edges))
    k = comb(s, 3) + d - 1
    report = CompositionReport(
        t, m**d, _bitlength(formulas), d, n, m,
        padding={"variables": s, "no_instances_added": m**d - t},
        extra={"k": k, "target": target},
    )
    if target == "clique":
        return g, k, report
    budget = n - k
    report.extra["budget"] = budget
    return complement_hypergraph(g, cap=SUBSET_CAP), budget, report


# ---------------------------------------------------------------------- H-factor


def _check_p_partite(g: SimpleGraph, color, p: int) -> int:
    color = tuple(color)
    if len(color) != g.n or any(not 0 <= c < p for c in color):
        raise ValueError("colouring must map every vertex into 0..p-1")
    if any(color[a] == color[b] for a, b in g.edges):
        raise ValueError("colouring is not proper")
    sizes = {color.count(c) for c in range(p)}
    if len(sizes) != 1:
        raise ValueError("every colour class must have the same size")
    return sizes.pop()


def _h_coloring(h: HPattern) -> list[int]:
    p = h.chromatic_number
    for col in itertools.product(range(p), repeat=h.vertex_count):
        if all(col[a] != col[b] for a, b in h.graph.edges):
            return list(col)
    raise AssertionError("chromatic number is attained")


def _pad_with_h(g: SimpleGraph, color, h: HPattern):
    """Add p disjoint copies of H with rotated colourings (|V(H)| per class)."""
    p = h.chromatic_number
    base = _h_coloring(h)
    edges = list(g.edges)
    color = list(color)
    n = g.n
    for rot in range(p):
        edges.extend((n + a, n + b) for a, b in h.graph.edges)
        color.extend((c + rot) % p for c in base)
        n += h.vertex_count
    return SimpleGraph(n, tuple(edges)), color


def compose_or_hfactor(instances, h: HPattern):
    """Graph with an H-factor iff some input graph has one.

    Each input is ``(graph, colouring)`` with a proper p-colouring, p the
    chromatic number of H, and n vertices per class. Inputs sit on the
    naive packing structure (t disjoint p-cliques), one selector per colour
    class picks the uncovered instance, and every selector hyperedge is
    replaced by the hyperedge gadget for H. Selector arity is |V(H)| so the
    gadget terminals match.
    """
    instances = [(g, tuple(c)) for g, c in instances]
    if not instances:
        raise ValueError("need at least one instance")
    if not h.is_connected:
        raise ValueError("H must be connected")
    d = h.vertex_count
    if d < 3:
        raise ValueError("H needs at least three vertices")
    p = h.chromatic_number
    sizes = {_check_p_partite(g, c, p) for g, c in instances}
    if len(sizes) != 1:
        raise ValueError("all inputs need the same class size")
    n = sizes.pop()
    padded = 0
    if n < 2:
        instances = [_pad_with_h(g, c, h) for g, c in instances]
        n += d
        padded = d
    t = len(instances)
    _, cliques = naive_packing_structure(p, t)
    # vertex (P-vertex x, j) has id x*n + j; P-vertex i*p + c is class c of input i
    edges = []
    for i, (g, col) in enumerate(instances):
        slot = [0] * p
        ident = {}
        for v in range(g.n):
            c = col[v]
            ident[v] = cliques[i][c] * n + slot[c]
            slot[c] += 1
        edges.extend((ident[a], ident[b]) for a, b in g.edges)
    total = p * t * n
    selector = build_selector_gadget(d, t, n)
    hyper = build_hyperedge_gadget(h)
    inner = [v for v in range(hyper.graph.n) if v not in hyper.terminals]
    for c in range(p):
        remap = {}
        for i, verts in enumerate(selector.blocks):
            for j, v in enumerate(verts):
                remap[v] = cliques[i][c] * n + j
        for v in selector.private:
            remap[v] = total
            total += 1
        for e in selector.hypergraph.edges:
            local = {term: remap[x] for term, x in zip(hyper.terminals, e)}
            for v in inner:
                local[v] = total
                total += 1
            edges.extend((local[a], local[b]) for a, b in hyper.graph.edges)
    out = SimpleGraph(total, tuple(edges))
    report = CompositionReport(
        t, t, _bitlength([g for g, _ in instances]), d, total, t,
        padding={"class_size": n, "h_copies_vertices_per_class": padded},
        extra={"p": p, "selector_arity": d},
    )
    return out, report
