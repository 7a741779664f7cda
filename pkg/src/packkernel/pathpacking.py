"""Annotated kernel for P_d-Matching on weighted graphs with dangling edges.

The pipeline follows seven stages:

* A1 greedy packing of heavy paths (weight >= d); its vertices form M;
* A2 DFS forest of G' = G - M, whose depth is below d;
* A3 resolve requests over M backed by more than dk disjoint subtrees;
* A4 resolve requests over M | N' backed by more than dk components of G'';
* A5 drop components of G'' that serve no unresolved request;
* A6 branch on path hitting sets to mark representative vertices;
* A7 delete unmarked vertices of the remaining components.

A request ``(f, i)`` asks for a path of weight at least ``i`` that joins the
two vertices of ``f`` or starts at the single vertex of ``f``. It is resolved
once ``f`` itself is an edge (or dangling edge) of weight at least ``i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graphcore import SimpleGraph, WeightedPathGraph
from .oracles import find_path as _find_path, iter_paths, max_packing
from .trace import YES, KernelTrace

__all__ = [
    "Request",
    "HeavyPath",
    "DfsForest",
    "PdState",
    "AnnotatedKernel",
    "find_heavy_path",
    "greedy_heavy_paths",
    "build_dfs_forest",
    "resolve_over_M",
    "resolve_over_MN",
    "prune_components",
    "mark_useful",
    "kernelize_pd",
    "check_witness",
    "pd_vertex_bound",
]


@dataclass(frozen=True, order=True)
class Request:
    f: tuple[int, ...]
    i: int

    def __post_init__(self):
        f = tuple(sorted(set(self.f)))
        if len(f) not in (1, 2) or self.i < 1:
            raise ValueError("a request names one or two vertices and a weight >= 1")
        object.__setattr__(self, "f", f)

    @property
    def key(self) -> tuple[int, int]:
        return (self.f[0], self.f[-1])


@dataclass(frozen=True)
class HeavyPath:
    vertices: tuple[int, ...]
    start_dangling: bool = False
    end_dangling: bool = False

    def edge_keys(self) -> list[tuple[int, int]]:
        vs = self.vertices
        keys = [(min(a, b), max(a, b)) for a, b in zip(vs, vs[1:])]
        if self.start_dangling:
            keys.insert(0, (vs[0], vs[0]))
        if self.end_dangling:
            keys.append((vs[-1], vs[-1]))
        return keys


def find_path(g, allowed, f, i):
    # the edge f itself never counts as routing through a vertex set
    return _find_path(g, allowed, f, i, proper=True)


def pd_vertex_bound(d: int, k: int) -> int:
    return d ** (d * d) * d**7 * k**3


def find_heavy_path(g: WeightedPathGraph, d: int, alive=None) -> HeavyPath | None:
    """Lexicographically first path of weight >= d inside ``alive``.

    Start vertices are tried by id; at each start the lone dangling edge comes
    first, then paths without and with a leading dangling edge.
    """
    alive = set(range(g.n)) if alive is None else set(alive)
    adj, dang = g.adj, g.dangling

    def walk(path, weight, start_d):
        v = path[-1]
        for u in sorted(adj[v]):
            if u not in alive or u in path:
                continue
            w = weight + adj[v][u]
            if w >= d:
                return HeavyPath(tuple(path) + (u,), start_d, False)
            if w + dang.get(u, 0) >= d:
                return HeavyPath(tuple(path) + (u,), start_d, True)
            found = walk(path + [u], w, start_d)
            if found:
                return found
        return None

    for s in sorted(alive):
        ws = dang.get(s, 0)
        if ws >= d:
            return HeavyPath((s,), True, False)
        for start_d in (False, True) if ws else (False,):
            found = walk([s], ws if start_d else 0, start_d)
            if found:
                return found
    return None


def greedy_heavy_paths(g: WeightedPathGraph, d: int, k: int, alive=None):
    """Greedy disjoint heavy paths, stopping at k; returns ``(paths, M)``."""
    alive = set(range(g.n)) if alive is None else set(alive)
    paths: list[HeavyPath] = []
    while len(paths) < k:
        p = find_heavy_path(g, d, alive)
        if p is None:
            break
        paths.append(p)
        alive -= set(p.vertices)
    return paths, sorted({v for p in paths for v in p.vertices})


@dataclass
class DfsForest:
    parent: dict[int, int | None]
    depth: dict[int, int]
    children: dict[int, list[int]]
    roots: list[int]
    order: list[int]

    def subtree(self, v: int) -> set[int]:
        out, stack = set(), [v]
        while stack:
            x = stack.pop()
            out.add(x)
            stack.extend(self.children[x])
        return out

    def leaves_within(self, nodes: set[int]) -> list[int]:
        """Leaves of the subforest induced by an ancestor-closed node set."""
        return sorted(v for v in nodes if not any(c in nodes for c in self.children[v]))

    def ancestors(self, v: int) -> list[int]:
        out = []
        while self.parent[v] is not None:
            v = self.parent[v]
            out.append(v)
        return out


def build_dfs_forest(g: WeightedPathGraph, vertices=None, d: int | None = None) -> DfsForest:
    """DFS forest of ``g[vertices]``: lowest-id roots, children in increasing id."""
    vs = set(range(g.n)) if vertices is None else set(vertices)
    adj = g.adj
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    children: dict[int, list[int]] = {v: [] for v in vs}
    roots, order = [], []
    for r in sorted(vs):
        if r in parent:
            continue
        roots.append(r)
        parent[r], depth[r] = None, 0
        order.append(r)
        stack = [(r, iter(sorted(u for u in adj[r] if u in vs)))]
        while stack:
            v, it = stack[-1]
            for u in it:
                if u not in parent:
                    parent[u], depth[u] = v, depth[v] + 1
                    children[v].append(u)
                    order.append(u)
                    stack.append((u, iter(sorted(w for w in adj[u] if w in vs))))
                    break
            else:
                stack.pop()
    if d is not None and depth and max(depth.values()) > d - 1:
        raise RuntimeError("DFS depth reached d; the heavy-path packing was not maximal")
    return DfsForest(parent, depth, children, roots, order)


@dataclass
class PdState:
    """Mutable working state of one kernelization run."""

    n: int
    d: int
    k: int
    weights: dict[tuple[int, int], int]
    alive: set[int]
    M: list[int] = field(default_factory=list)
    paths: list[HeavyPath] = field(default_factory=list)
    forest: DfsForest | None = None
    n_sets: dict[Request, set[int]] = field(default_factory=dict)
    n_prime: set[int] = field(default_factory=set)
    components: list[list[int]] = field(default_factory=list)
    useful: dict[int, list[Request]] = field(default_factory=dict)
    marked: set[int] = field(default_factory=set)
    witnesses: dict[tuple[int, int], tuple[frozenset, int]] | None = None
    trace: KernelTrace = field(default_factory=KernelTrace)

    def snapshot(self) -> WeightedPathGraph:
        alive = self.alive
        return WeightedPathGraph(
            self.n, {e: w for e, w in self.weights.items() if e[0] in alive and e[1] in alive}, self.d
        )

    def weight(self, f: tuple[int, ...]) -> int:
        return self.weights.get((f[0], f[-1]), 0)

    def resolved(self, req: Request) -> bool:
        """Whether the edge f can stand in for every path serving (f, i).

        A dangling edge at x replaces a segment of weight i only if the path
        did not already start with it, hence the extra condition.
        """
        w = self.weight(req.f)
        if len(req.f) == 1:
            return w >= self.d or (w >= req.i and w + req.i < self.d)
        return w >= req.i

    def size(self) -> tuple[int, int]:
        a = self.alive
        return len(a), sum(1 for u, v in self.weights if u in a and v in a)

    def raise_weight(self, req: Request, rule: str, reason: str, support: list[set[int]]):
        before = self.size()
        old = self.weight(req.f)
        new = max(old, req.i)
        if len(req.f) == 1 and old + req.i >= self.d:
            # old dangling edge plus any backing path is already heavy
            new = self.d
        self.weights[req.key] = new
        self.trace.log(rule, reason, before, self.size(), f=req.f, i=req.i, old=old, new=new)
        if self.witnesses is not None:
            self.witnesses[req.key] = (frozenset().union(*support), req.i)


def _requests(vertices, d: int):
    vs = sorted(vertices)
    fs = [(x,) for x in vs] + list(itertools.combinations(vs, 2))
    for i in range(d, 0, -1):
        for f in fs:
            yield Request(f, i)


def _inner(path, f) -> set[int]:
    return set(path) - set(f)


def resolve_over_M(state: PdState) -> PdState:
    """A3: raise w_f to i when more than dk disjoint subtrees satisfy (f, i), f in M."""
    d, k = state.d, state.k
    forest = state.forest
    g = state.snapshot()
    subtrees = {v: forest.subtree(v) for v in forest.order}
    changed = True
    while changed:
        changed = False
        state.n_sets = {}
        for req in _requests(state.M, d):
            if state.resolved(req):
                continue
            N = set()
            for v in forest.order:
                p = forest.parent[v]
                if (p is None or p in N) and find_path(g, subtrees[v], req.f, req.i) is not None:
                    N.add(v)
            leaves = forest.leaves_within(N)
            if len(leaves) > d * k:
                support = [_inner(find_path(g, subtrees[v], req.f, req.i), req.f) for v in leaves[: d * k + 1]]
                state.raise_weight(req, "resolve-over-M", f"{len(leaves)} > dk satisfying subtrees", support)
                changed = True
            else:
                state.n_sets[req] = N
    state.n_sets = {r: N for r, N in state.n_sets.items() if not state.resolved(r)}
    for r, N in state.n_sets.items():
        assert len(forest.leaves_within(N)) <= d * k
        assert len(N) <= d * d * k
    state.n_prime = set().union(*state.n_sets.values()) if state.n_sets else set()
    assert len(state.n_prime) <= d**5 * k**3
    _split_components(state)
    return state


def _split_components(state: PdState):
    g = state.snapshot()
    rest = set(state.forest.order) - state.n_prime
    comps, seen = [], set()
    for s in sorted(rest):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.adj[x]:
                if y in rest and y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    forest = state.forest
    for comp in comps:
        top = min(comp, key=lambda v: (forest.depth[v], v))
        assert set(comp) == forest.subtree(top)
        assert len(_neighbours(g, comp) & state.n_prime) <= state.d - 1
    state.components = comps


def _neighbours(g: WeightedPathGraph, comp) -> set[int]:
    cs = set(comp)
    return {y for x in comp for y in g.adj[x]} - cs


def _component_requests(g, comp, pool: set[int], d: int):
    """Requests over ``pool`` that could route through ``comp``, strongest first."""
    nb = sorted(_neighbours(g, comp) & pool)
    return list(_requests(nb, d))


def resolve_over_MN(state: PdState) -> PdState:
    """A4: raise w_g to i when more than dk components of G'' satisfy (g, i)."""
    d, k = state.d, state.k
    g = state.snapshot()
    pool = set(state.M) | state.n_prime
    support: dict[Request, list[set[int]]] = {}
    for comp in state.components:
        cs = set(comp)
        for req in _component_requests(g, comp, pool, d):
            if state.resolved(req):
                continue
            p = find_path(g, cs, req.f, req.i)
            if p is not None:
                support.setdefault(req, []).append(_inner(p, req.f))
    for req in sorted(support, key=lambda r: (r.f, -r.i)):
        if not state.resolved(req) and len(support[req]) > d * k:
            state.raise_weight(
                req, "resolve-over-MN", f"{len(support[req])} > dk satisfying components", support[req][: d * k + 1]
            )
    return state


def prune_components(state: PdState) -> PdState:
    """A5: delete components of G'' that satisfy no unresolved request."""
    d, k = state.d, state.k
    g = state.snapshot()
    pool = set(state.M) | state.n_prime
    state.useful = {}
    per_request: dict[Request, int] = {}
    for idx, comp in enumerate(state.components):
        cs = set(comp)
        reqs = [
            r
            for r in _component_requests(g, comp, pool, d)
            if not state.resolved(r) and find_path(g, cs, r.f, r.i) is not None
        ]
        if reqs:
            state.useful[idx] = reqs
            for r in reqs:
                per_request[r] = per_request.get(r, 0) + 1
        else:
            before = state.size()
            state.alive -= cs
            state.trace.log("prune-component", "component serves no unresolved request", before, state.size(), vertices=comp)
    assert all(c <= d * k for c in per_request.values())
    return state


def mark_useful(state: PdState) -> PdState:
    """A6 and A7: keep only vertices marked by the hitting-set branching."""
    d = state.d
    g = state.snapshot()
    node_cap = sum(d**j for j in range(d * d + 2))
    for idx, reqs in state.useful.items():
        comp = set(state.components[idx])
        marked: set[int] = set()
        for req in reqs:
            seen: set[frozenset] = set()
            stack = [frozenset()]
            while stack:
                S = stack.pop()
                if S in seen:
                    continue
                seen.add(S)
                if len(S) > d * d:
                    continue
                p = find_path(g, comp - S, req.f, req.i)
                if p is None:
                    continue
                inner = sorted(_inner(p, req.f))
                marked.update(inner)
                stack.extend(S | {v} for v in inner)
            assert len(seen) <= node_cap
            assert seen and frozenset() in seen
        state.marked |= marked
        drop = comp - marked
        if drop:
            before = state.size()
            state.alive -= drop
            state.trace.log("unmarked-vertices", "not on any representative path", before, state.size(), vertices=sorted(drop))
    return state


@dataclass
class AnnotatedKernel:
    graph: WeightedPathGraph
    k: int
    d: int
    trace: KernelTrace
    vertex_map: list[int]
    witnesses: dict[tuple[int, int], tuple[frozenset, int]] | None = None

    @property
    def verdict(self) -> str:
        return self.trace.verdict


def _restrict(n: int, weights, keep, d: int) -> tuple[WeightedPathGraph, list[int]]:
    old = sorted(keep)
    pos = {v: i for i, v in enumerate(old)}
    items = {(pos[u], pos[v]): w for (u, v), w in weights.items() if u in pos and v in pos}
    return WeightedPathGraph(len(old), items, d), old


def _lift(g, d: int) -> WeightedPathGraph:
    if isinstance(g, SimpleGraph):
        return WeightedPathGraph.from_graph(g, d)
    if any(w > d for _, w in g.weights):
        raise ValueError("edge weights must not exceed d")
    return WeightedPathGraph(g.n, g.weights, d)


def kernelize_pd(g, d: int, k: int, witnesses: bool = False) -> AnnotatedKernel:
    """Annotated kernel for weighted P_d-Matching.

    Plain graphs are read as unit weights without dangling edges. The output
    has only vertices of the input and weights at least as large as before.
    With ``witnesses`` every raised weight keeps a vertex set V_g holding dk+1
    internally disjoint paths that justify it; those vertices stay in the
    kernel. The output is relabelled; ``vertex_map[i]`` is the input id of
    output vertex i.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if k < 0:
        raise ValueError("k must be nonnegative")
    g = _lift(g, d)
    trace = KernelTrace()
    trace.info.update(d=d, k=k, bound=pd_vertex_bound(d, k))
    if k == 0:
        trace.verdict = YES
        trace.info["vertex_map"] = []
        return AnnotatedKernel(WeightedPathGraph(0, (), d), k, d, trace, [], {} if witnesses else None)
    if d * k > g.n:
        trace.log("passthrough", "dk exceeds the vertex count", (g.n, g.m), (g.n, g.m))
        trace.info["vertex_map"] = list(range(g.n))
        return AnnotatedKernel(g, k, d, trace, list(range(g.n)), {} if witnesses else None)

    state = PdState(g.n, d, k, dict(g.weights), set(range(g.n)), trace=trace, witnesses={} if witnesses else None)
    paths, M = greedy_heavy_paths(g, d, k)
    state.paths, state.M = paths, M
    if len(paths) >= k:
        trace.verdict = YES
        used = {e for p in paths for e in p.edge_keys()}
        out, old = _restrict(g.n, {e: w for e, w in g.weight_map.items() if e in used}, set(M), d)
        trace.info["vertex_map"] = old
        trace.log("yes-certificate", f"greedy found {k} heavy paths", (g.n, g.m), (out.n, out.m), paths=[p.vertices for p in paths])
        return AnnotatedKernel(out, k, d, trace, old, state.witnesses)
    assert len(M) <= (d + 1) * (k - 1)
    trace.log("heavy-paths", f"{len(paths)} < k greedy heavy paths", (g.n, g.m), (g.n, g.m), M=M)

    state.forest = build_dfs_forest(g, set(range(g.n)) - set(M), d)
    resolve_over_M(state)
    trace.info.update(M=len(M), n_prime=len(state.n_prime), components=len(state.components))
    resolve_over_MN(state)
    prune_components(state)
    mark_useful(state)
    trace.info["useful_components"] = len(state.useful)

    keep = set(state.alive)
    if witnesses:
        extra = set().union(*(v for v, _ in state.witnesses.values())) - keep
        if extra:
            trace.log("witness-vertices", "kept to certify raised weights", state.size(), (len(keep | extra), state.size()[1]), vertices=sorted(extra))
        keep |= extra
    out, old = _restrict(g.n, state.weights, keep, d)
    trace.info["vertex_map"] = old
    trace.info["within_bound"] = out.n <= pd_vertex_bound(d, k)
    return AnnotatedKernel(out, k, d, trace, old, state.witnesses)


def check_witness(g, f, i: int, support, d: int, k: int) -> bool:
    """True iff ``g`` has dk+1 internally disjoint paths serving (f, i) inside ``support``."""
    g = _lift(g, d)
    f = tuple(sorted(set(f)))
    masks = sorted({sum(1 << v for v in set(p) - set(f)) for p in iter_paths(g, support, f, i, proper=True)})
    return len(max_packing(masks, stop_at=d * k + 1)) >= d * k + 1
