"""Exact brute-force solvers used as ground truth.

None of these return heuristic answers. When an :class:`OracleBudget` runs
out the call raises :class:`BudgetExhausted` instead of guessing.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .graphcore import (
    CNF,
    HPattern,
    Hypergraph,
    MCBInstance,
    PartitionedHypergraph,
    SimpleGraph,
    WeightedPathGraph,
)

__all__ = [
    "OracleBudget",
    "BudgetExhausted",
    "max_packing",
    "max_set_matching",
    "count_perfect_matchings",
    "has_perfect_matching",
    "h_copies",
    "max_h_matching",
    "has_h_factor",
    "heavy_path_sets",
    "max_weighted_path_matching",
    "iter_paths",
    "find_path",
    "exists_path",
    "max_clique",
    "max_independent_set",
    "min_vertex_cover",
    "has_multicolored_biclique",
    "sat3",
    "max_bipartite_matching",
    "is_good_vertex",
]


@dataclass(frozen=True)
class OracleBudget:
    max_nodes: int = 20_000_000
    timeout_ms: int = 300_000

    def __post_init__(self):
        if self.max_nodes <= 0 or self.timeout_ms <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = OracleBudget()


class BudgetExhausted(RuntimeError):
    """The search was cut off; the answer is unknown."""


class _Meter:
    __slots__ = ("nodes", "limit", "deadline")

    def __init__(self, budget: OracleBudget | None):
        budget = budget or DEFAULT_BUDGET
        self.nodes = 0
        self.limit = budget.max_nodes
        self.deadline = time.monotonic() + budget.timeout_ms / 1000.0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExhausted(f"node budget of {self.limit} exhausted")
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted("time budget exhausted")


class _Enough(Exception):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


# ------------------------------------------------------------------ packing


def max_packing(
    masks: Sequence[int], budget: OracleBudget | None = None, stop_at: int | None = None
) -> list[int]:
    """Largest family of pairwise-disjoint masks; returns their indices.

    Branches on the lowest vertex still coverable: either it stays uncovered
    or one of the masks containing it is taken. With ``stop_at`` the search
    returns as soon as a family of that size is found.
    """
    meter = _Meter(budget)
    idx = sorted({m: i for i, m in reversed(list(enumerate(masks))) if m}.values())
    best: list[int] = []
    if stop_at is not None and stop_at <= 0:
        return best

    def rec(avail: list[int], chosen: list[int]):
        nonlocal best
        meter.tick()
        if len(chosen) > len(best):
            best = list(chosen)
            if stop_at is not None and len(best) >= stop_at:
                raise _Enough
        if not avail:
            return
        union = 0
        smallest = None
        for i in avail:
            union |= masks[i]
            c = _popcount(masks[i])
            smallest = c if smallest is None or c < smallest else smallest
        if len(chosen) + min(len(avail), _popcount(union) // smallest) <= len(best):
            return
        low = union & -union
        with_v = [i for i in avail if masks[i] & low]
        without = [i for i in avail if not masks[i] & low]
        for i in with_v:
            mi = masks[i]
            chosen.append(i)
            rec([j for j in without if not masks[j] & mi], chosen)
            chosen.pop()
        rec(without, chosen)

    try:
        rec(idx, [])
    except _Enough:
        pass
    return best


def max_set_matching(
    h: Hypergraph | PartitionedHypergraph, budget: OracleBudget | None = None, stop_at: int | None = None
) -> int:
    """Maximum number of pairwise disjoint hyperedges (capped at ``stop_at`` if given)."""
    base = h.base if isinstance(h, PartitionedHypergraph) else h
    return len(max_packing(base.masks, budget, stop_at))


def _split(universe: int, masks: Sequence[int]) -> list[int]:
    """Connected parts of ``universe`` where masks inside it link their vertices."""
    parts: list[int] = []
    for m in masks:
        merged = m
        keep = []
        for p in parts:
            if p & merged:
                merged |= p
            else:
                keep.append(p)
        keep.append(merged)
        parts = keep
    covered = 0
    for p in parts:
        covered |= p
    x = universe & ~covered
    while x:
        low = x & -x
        parts.append(low)
        x ^= low
    return parts


def _exact_covers(universe: int, masks: Sequence[int], limit: int | None, meter: _Meter) -> int:
    """Number of ways to partition ``universe`` into masks (capped at ``limit``).

    Branches on the vertex with the fewest usable masks. Before branching the
    remaining vertices are split into independent parts whose counts
    multiply, and parts already known to be uncoverable are remembered.
    """
    masks = sorted({m for m in masks if m and m & ~universe == 0})
    by_vertex: dict[int, list[int]] = {}
    for m in masks:
        x = m
        while x:
            low = x & -x
            by_vertex.setdefault(low, []).append(m)
            x ^= low
    cap = limit if limit is not None else float("inf")
    dead: set[int] = set()
    sizes = {_popcount(m) for m in masks}
    # with equal-size masks a part whose size is not a multiple is hopeless
    unit = sizes.pop() if len(sizes) == 1 else 1

    def rec(uncovered: int, split: bool = True) -> int:
        meter.tick()
        if not uncovered:
            return 1
        if uncovered in dead:
            return 0
        best_opts = None
        x = uncovered
        while x:
            low = x & -x
            x ^= low
            opts = [m for m in by_vertex.get(low, ()) if m & ~uncovered == 0]
            if best_opts is None or len(opts) < len(best_opts):
                best_opts = opts
                if len(opts) <= 1:
                    break
        if not best_opts:
            dead.add(uncovered)
            return 0
        if len(best_opts) > 1 and split:
            live = [m for m in masks if m & ~uncovered == 0]
            parts = _split(uncovered, live)
            if any(_popcount(p) % unit for p in parts):
                dead.add(uncovered)
                return 0
            if len(parts) > 1:
                total = 1
                for p in sorted(parts, key=_popcount):
                    c = rec(p, False)
                    if not c:
                        dead.add(uncovered)
                        return 0
                    total = min(total * c, cap)
                return total
        total = 0
        for m in best_opts:
            total += rec(uncovered & ~m)
            if total >= cap:
                return cap
        if not total:
            dead.add(uncovered)
        return total

    return int(rec(universe))


def count_perfect_matchings(
    h: Hypergraph | PartitionedHypergraph, limit: int | None = None, budget: OracleBudget | None = None
) -> int:
    base = h.base if isinstance(h, PartitionedHypergraph) else h
    if base.n % base.d:
        return 0
    return _exact_covers((1 << base.n) - 1, base.masks, limit, _Meter(budget))


def has_perfect_matching(h: Hypergraph | PartitionedHypergraph, budget: OracleBudget | None = None) -> bool:
    """True iff n/d disjoint edges cover every vertex."""
    return count_perfect_matchings(h, limit=1, budget=budget) > 0


# --------------------------------------------------------------- H-matching


def _pattern_order(h: SimpleGraph) -> list[int]:
    order, seen = [], set()
    for s in sorted(range(h.n), key=lambda v: -len(h.adj[v])):
        if s in seen:
            continue
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(h.adj[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def h_copies(g: SimpleGraph, h: HPattern | SimpleGraph, budget: OracleBudget | None = None) -> set[int]:
    """Vertex sets (as bitmasks) of subgraphs of ``g`` isomorphic to ``h``."""
    hg = h.graph if isinstance(h, HPattern) else h
    meter = _Meter(budget)
    order = _pattern_order(hg)
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[w] for w in hg.adj[v] if pos[w] < pos[v]] for v in order]
    image = [0] * len(order)
    found: set[int] = set()

    def rec(i: int, used: int):
        meter.tick()
        if i == len(order):
            found.add(used)
            return
        if back[i]:
            cands = set(g.adj[image[back[i][0]]])
            for j in back[i][1:]:
                cands &= g.adj[image[j]]
        else:
            cands = range(g.n)
        for c in cands:
            if not used >> c & 1:
                image[i] = c
                rec(i + 1, used | (1 << c))

    if hg.n <= g.n:
        rec(0, 0)
    return found


def max_h_matching(
    g: SimpleGraph, h: HPattern | SimpleGraph, budget: OracleBudget | None = None, stop_at: int | None = None
) -> int:
    """Maximum number of vertex-disjoint copies of ``h`` in ``g``."""
    return len(max_packing(sorted(h_copies(g, h, budget)), budget, stop_at))


def has_h_factor(g: SimpleGraph, h: HPattern | SimpleGraph, budget: OracleBudget | None = None) -> bool:
    """True iff vertex-disjoint copies of ``h`` cover all of ``g``."""
    hn = h.vertex_count if isinstance(h, HPattern) else h.n
    if g.n % hn:
        return False
    copies = h_copies(g, h, budget)
    return _exact_covers((1 << g.n) - 1, sorted(copies), 1, _Meter(budget)) > 0


# ------------------------------------------------------ weighted path packing


def heavy_path_sets(g: WeightedPathGraph, d: int, budget: OracleBudget | None = None) -> set[int]:
    """Vertex sets of all inclusion-minimal-by-extension paths of weight >= d.

    A path may begin and end with a dangling edge; a one-vertex path may use
    its dangling edge once. Extensions of a path that already reaches weight
    ``d`` are skipped because their vertex sets are supersets.
    """
    meter = _Meter(budget)
    found: set[int] = set()
    dang = g.dangling
    adj = g.adj

    def grow(v: int, used: int, weight: int, edges: int):
        meter.tick()
        for u in sorted(adj[v]):
            if used >> u & 1:
                continue
            w = weight + adj[v][u]
            mask = used | (1 << u)
            if w >= d or w + dang.get(u, 0) >= d:
                found.add(mask)
            elif edges + 1 < d:
                grow(u, mask, w, edges + 1)

    for s in range(g.n):
        ws = dang.get(s, 0)
        if ws >= d:
            found.add(1 << s)
            continue
        grow(s, 1 << s, 0, 0)
        if ws:
            grow(s, 1 << s, ws, 1)
    return found


def max_weighted_path_matching(
    g: WeightedPathGraph, d: int, budget: OracleBudget | None = None, stop_at: int | None = None
) -> int:
    """Maximum number of vertex-disjoint paths of weight at least ``d``."""
    if any(w > d for _, w in g.weights):
        raise ValueError("edge weights must not exceed d")
    return len(max_packing(sorted(heavy_path_sets(g, d, budget)), budget, stop_at))


def _reachable(adj, src: int, dst: int, allowed: set, used: set) -> bool:
    if dst in adj[src]:
        return True
    seen = {src}
    stack = [src]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y == dst:
                return True
            if y not in seen and y in allowed and y not in used:
                seen.add(y)
                stack.append(y)
    return False


def iter_paths(
    g: WeightedPathGraph,
    allowed: Iterable[int],
    f: Sequence[int],
    i: int,
    minimal: bool = True,
    proper: bool = False,
) -> Iterator[tuple[int, ...]]:
    """Vertex sequences of paths in ``g[allowed | f]`` serving the request ``(f, i)``.

    For ``f = {x, y}`` the path runs from ``min(f)`` to ``max(f)`` over regular
    edges with inner vertices from ``allowed``. For ``f = {x}`` it starts at x
    and may finish with a dangling edge; the lone vertex x counts when its own
    dangling edge is heavy enough. Sequences come out in lexicographic order.
    With ``minimal`` a one-terminal path is not extended once it is heavy enough.
    With ``proper`` the path must visit at least one vertex outside ``f``, which
    rules out the edge ``f`` itself.
    """
    f = sorted(set(f))
    adj, dang = g.adj, g.dangling
    inner = set(allowed) - set(f)
    if len(f) == 1:
        (x,) = f
        if dang.get(x, 0) >= i and not proper:
            yield (x,)
            if minimal:
                return

        def walk1(path, used, weight):
            v = path[-1]
            for u in sorted(adj[v]):
                if u in used or u not in inner:
                    continue
                w = weight + adj[v][u]
                path.append(u)
                heavy = w >= i or w + dang.get(u, 0) >= i
                if heavy:
                    yield tuple(path)
                if not (heavy and minimal):
                    used.add(u)
                    yield from walk1(path, used, w)
                    used.discard(u)
                path.pop()

        yield from walk1([x], {x}, 0)
        return
    if len(f) != 2:
        raise ValueError("a request names one or two vertices")
    x, y = f

    def walk2(path, used, weight):
        v = path[-1]
        for u in sorted(adj[v]):
            if u == y:
                if weight + adj[v][y] >= i and not (proper and v == x):
                    yield tuple(path) + (y,)
                continue
            if u in used or u not in inner:
                continue
            w = weight + adj[v][u]
            if w >= i and not _reachable(adj, u, y, inner, used | {u}):
                continue
            used.add(u)
            path.append(u)
            yield from walk2(path, used, w)
            path.pop()
            used.discard(u)

    yield from walk2([x], {x}, 0)


def find_path(g: WeightedPathGraph, allowed: Iterable[int], f: Sequence[int], i: int, proper: bool = False):
    """Lexicographically least path for request ``(f, i)`` inside ``allowed``, or None."""
    return next(iter_paths(g, allowed, f, i, proper=proper), None)


def exists_path(g: WeightedPathGraph, allowed: Iterable[int], f: Sequence[int], i: int, proper: bool = False) -> bool:
    """Whether ``allowed`` satisfies the request ``(f, i)``."""
    return find_path(g, allowed, f, i, proper) is not None


# --------------------------------------------------- cliques and vertex cover


def _max_uniform_set(h: Hypergraph, want_edge: bool, meter: _Meter) -> list[int]:
    """Largest S whose d-subsets are all edges (clique) or all non-edges (independent)."""
    d, E = h.d, h.edge_set
    cands = list(range(h.n))
    if d == 1:
        cands = [v for v in cands if ((v,) in E) == want_edge]
    best: list[int] = []

    def rec(chosen: list[int], cands: list[int]):
        nonlocal best
        meter.tick()
        if len(chosen) > len(best):
            best = list(chosen)
        for pos, v in enumerate(cands):
            if len(chosen) + len(cands) - pos <= len(best):
                return
            subsets = list(itertools.combinations(chosen, d - 2)) if d >= 2 else []
            nxt = []
            for u in cands[pos + 1:]:
                if all((tuple(sorted(T + (v, u))) in E) == want_edge for T in subsets):
                    nxt.append(u)
            chosen.append(v)
            rec(chosen, nxt)
            chosen.pop()

    rec([], cands)
    return best


def _as_hypergraph(h) -> Hypergraph:
    if isinstance(h, SimpleGraph):
        return Hypergraph(2, h.n, h.edges)
    if isinstance(h, PartitionedHypergraph):
        return h.base
    return h


def max_clique(h: Hypergraph | SimpleGraph, budget: OracleBudget | None = None) -> int:
    return len(_max_uniform_set(_as_hypergraph(h), True, _Meter(budget)))


def max_independent_set(h: Hypergraph | SimpleGraph, budget: OracleBudget | None = None) -> int:
    return len(_max_uniform_set(_as_hypergraph(h), False, _Meter(budget)))


def min_vertex_cover(h: Hypergraph | SimpleGraph, budget: OracleBudget | None = None) -> int:
    """Smallest vertex set meeting every edge (complement of a maximum independent set)."""
    h = _as_hypergraph(h)
    return h.n - max_independent_set(h, budget)


# ------------------------------------------------------------------- misc


def has_multicolored_biclique(inst: MCBInstance) -> bool:
    """One vertex per U-block and per W-block, all U-W pairs adjacent."""
    adj = inst.graph.adj
    w_blocks = [set(b) for b in inst.w_blocks]
    if any(not b for b in inst.u_blocks) or any(not b for b in w_blocks):
        return False

    def rec(i: int, live: list[set]) -> bool:
        if i == len(inst.u_blocks):
            return True
        for u in inst.u_blocks[i]:
            nxt = [c & adj[u] for c in live]
            if all(nxt) and rec(i + 1, nxt):
                return True
        return False

    return rec(0, w_blocks)


def sat3(formula: CNF) -> bool:
    """Exhaustive satisfiability check over all assignments."""
    if formula.nvars > 20:
        raise ValueError("exhaustive search is limited to 20 variables")
    for bits in itertools.product((False, True), repeat=formula.nvars):
        if all(any(bits[abs(x) - 1] == (x > 0) for x in c) for c in formula.clauses):
            return True
    return False


def max_bipartite_matching(left: Iterable, adj) -> int:
    """Maximum matching size by augmenting paths; ``adj[x]`` lists right partners of x."""
    mate: dict = {}

    def augment(x, seen) -> bool:
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in mate or augment(mate[y], seen):
                mate[y] = x
                return True
        return False

    return sum(1 for x in left if augment(x, set()))


def is_good_vertex(u: int, M: Sequence[int], X: Sequence[int], edges: Iterable[tuple[int, int]], k: int) -> bool:
    """Exhaustive goodness test for ``u`` in ``M`` over all subsets S of M.

    ``edges`` lists the (m, x) adjacencies between M and X. ``u`` is good when
    every S that matches all but one vertex of N(u) within X has more than
    4k neighbours in X.
    """
    xs = set(X)
    nbr = {m: set() for m in M}
    for m, x in edges:
        if m in nbr and x in xs:
            nbr[m].add(x)
    xu = nbr[u]
    need = len(xu) - 1
    for r in range(len(M) + 1):
        for S in itertools.combinations(M, r):
            if max_bipartite_matching(S, {s: sorted(nbr[s] & xu) for s in S}) >= need:
                if len(set().union(*(nbr[s] for s in S))) <= 4 * k:
                    return False
    return True
