"""Immutable instance types and the plain-text exchange format.

Every instance uses dense 0-based integer vertices. Constructors canonicalise
their input (sorted vertices inside an edge, sorted edge lists), so two values
describing the same instance compare equal.

Text format (UTF-8, one record per line, ``#`` lines are comments)::

    hg <d> <n> <m>          d-uniform hypergraph, then m lines ``e v1 .. vd``
                            and optionally one ``part <class> <v>`` per vertex
    g <n> <m>               simple graph, then m lines ``e u v``
    wg <n> <m> <dmax>       weighted path graph, m lines ``e u v w``
                            (``u == v`` is a dangling edge)
    cnf <nvars> <nclauses>  3-CNF, one clause of three nonzero literals per line
    mcb <n> <m> <k>         multicolored biclique instance: ``e u w`` edges,
                            ``U <block> <v>`` and ``W <block> <v>`` lines
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "ParseError",
    "Hypergraph",
    "PartitionedHypergraph",
    "SimpleGraph",
    "WeightedPathGraph",
    "HPattern",
    "CNF",
    "MCBInstance",
    "parse_instance",
    "serialize_instance",
    "complement_hypergraph",
    "COMPLEMENT_CAP",
]

COMPLEMENT_CAP = 10**7


class ParseError(ValueError):
    """Malformed instance text; ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _check_vertices(vs: Iterable[int], n: int) -> None:
    for v in vs:
        if not isinstance(v, int) or v < 0 or v >= n:
            raise ValueError(f"vertex {v!r} out of range for n={n}")


@dataclass(frozen=True)
class Hypergraph:
    d: int
    n: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("edge arity d must be >= 1")
        if self.n < 0:
            raise ValueError("vertex count must be >= 0")
        canon = set()
        for e in self.edges:
            t = tuple(sorted(e))
            if len(t) != self.d or len(set(t)) != self.d:
                raise ValueError(f"edge {e!r} does not have {self.d} distinct vertices")
            _check_vertices(t, self.n)
            canon.add(t)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v in e) for e in self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def without_edges(self, drop: Iterable[tuple[int, ...]]) -> "Hypergraph":
        drop = {tuple(sorted(e)) for e in drop}
        return Hypergraph(self.d, self.n, tuple(e for e in self.edges if e not in drop))

    def induced(self, keep: Iterable[int]) -> tuple["Hypergraph", list[int]]:
        """Subhypergraph induced by ``keep``, relabelled; returns (h, old ids)."""
        old = sorted(set(keep))
        new = {v: i for i, v in enumerate(old)}
        edges = [tuple(new[v] for v in e) for e in self.edges if all(v in new for v in e)]
        return Hypergraph(self.d, len(old), tuple(edges)), old


@dataclass(frozen=True)
class PartitionedHypergraph:
    """A d-uniform hypergraph with a vertex colouring in ``0..d-1``."""

    base: Hypergraph
    color: tuple[int, ...]

    def __post_init__(self):
        color = tuple(self.color)
        object.__setattr__(self, "color", color)
        b = self.base
        if len(color) != b.n:
            raise ValueError("colour map must cover every vertex")
        if any(c < 0 or c >= b.d for c in color):
            raise ValueError(f"colour classes must lie in 0..{b.d - 1}")
        for e in b.edges:
            if len({color[v] for v in e}) != len(e):
                raise ValueError(f"edge {e} has two vertices of the same colour")
        if b.n > 0 and set(color) != set(range(b.d)):
            raise ValueError("every colour class must be nonempty")

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def edges(self):
        return self.base.edges

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.d)]
        for v, c in enumerate(self.color):
            out[c].append(v)
        return out


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be >= 0")
        canon = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at {u}")
            _check_vertices((u, v), self.n)
            canon.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> tuple[frozenset, ...]:
        nb: list[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def induced(self, keep: Iterable[int]) -> tuple["SimpleGraph", list[int]]:
        old = sorted(set(keep))
        new = {v: i for i, v in enumerate(old)}
        edges = [(new[u], new[v]) for u, v in self.edges if u in new and v in new]
        return SimpleGraph(len(old), tuple(edges)), old

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1


@dataclass(frozen=True)
class WeightedPathGraph:
    """Graph with edge weights in ``1..dmax``; a key ``(v, v)`` is a dangling edge at v.

    Dangling edges may only be the first or last edge of a path.
    """

    n: int
    weights: tuple[tuple[tuple[int, int], int], ...] = ()
    dmax: int = 1

    def __post_init__(self):
        if self.n < 0 or self.dmax < 1:
            raise ValueError("need n >= 0 and dmax >= 1")
        items = self.weights.items() if isinstance(self.weights, Mapping) else self.weights
        canon: dict[tuple[int, int], int] = {}
        for key, w in items:
            if len(key) == 1:
                key = (key[0], key[0])
            u, v = key
            _check_vertices((u, v), self.n)
            if not 1 <= w <= self.dmax:
                raise ValueError(f"weight {w} of edge {key} outside 1..{self.dmax}")
            k = (min(u, v), max(u, v))
            if k in canon:
                raise ValueError(f"duplicate edge {k}")
            canon[k] = int(w)
        object.__setattr__(self, "weights", tuple(sorted(canon.items())))

    @classmethod
    def from_graph(cls, g: SimpleGraph, dmax: int) -> "WeightedPathGraph":
        return cls(g.n, tuple((e, 1) for e in g.edges), dmax)

    @cached_property
    def weight_map(self) -> dict[tuple[int, int], int]:
        return dict(self.weights)

    @property
    def m(self) -> int:
        return len(self.weights)

    @cached_property
    def adj(self) -> tuple[dict[int, int], ...]:
        """Regular-edge adjacency: ``adj[u][v] = weight``."""
        nb: list[dict[int, int]] = [{} for _ in range(self.n)]
        for (u, v), w in self.weights:
            if u != v:
                nb[u][v] = w
                nb[v][u] = w
        return tuple(nb)

    @cached_property
    def dangling(self) -> dict[int, int]:
        return {u: w for (u, v), w in self.weights if u == v}

    def weight(self, u: int, v: int) -> int:
        """Weight of edge {u, v} (dangling when u == v); 0 when absent."""
        return self.weight_map.get((min(u, v), max(u, v)), 0)


def _chromatic_number(n: int, adj: Sequence[frozenset]) -> int:
    if n == 0:
        return 0
    for p in range(1, n + 1):
        color = [-1] * n

        def place(v: int) -> bool:
            if v == n:
                return True
            used = {color[w] for w in adj[v] if color[w] >= 0}
            # symmetry: a new colour is only ever the next unused one
            top = max(color[:v], default=-1)
            for c in range(min(p, top + 2)):
                if c not in used:
                    color[v] = c
                    if place(v + 1):
                        return True
            color[v] = -1
            return False

        if place(0):
            return p
    return n


@dataclass(frozen=True)
class HPattern:
    """Small pattern graph H with its derived attributes."""

    graph: SimpleGraph
    anchor: int = 0

    def __post_init__(self):
        if self.graph.n == 0:
            raise ValueError("pattern must have at least one vertex")
        if not 0 <= self.anchor < self.graph.n:
            raise ValueError("anchor must be a vertex of H")

    @property
    def vertex_count(self) -> int:
        return self.graph.n

    @cached_property
    def chromatic_number(self) -> int:
        return _chromatic_number(self.graph.n, self.graph.adj)

    @property
    def is_connected(self) -> bool:
        return self.graph.is_connected()

    @classmethod
    def clique(cls, p: int) -> "HPattern":
        return cls(SimpleGraph(p, tuple(itertools.combinations(range(p), 2))))

    @classmethod
    def path(cls, length: int) -> "HPattern":
        """Path with ``length`` edges (``length + 1`` vertices)."""
        return cls(SimpleGraph(length + 1, tuple((i, i + 1) for i in range(length))))

    @classmethod
    def star(cls, leaves: int) -> "HPattern":
        """K_{1,leaves}, centre 0."""
        return cls(SimpleGraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1))))


@dataclass(frozen=True)
class CNF:
    nvars: int
    clauses: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        cl = []
        for c in self.clauses:
            c = tuple(int(x) for x in c)
            if len(c) != 3 or any(x == 0 or abs(x) > self.nvars for x in c):
                raise ValueError(f"bad clause {c!r} for {self.nvars} variables")
            cl.append(c)
        object.__setattr__(self, "clauses", tuple(cl))


@dataclass(frozen=True)
class MCBInstance:
    """Multicolored biclique: bipartite graph with U and W each split into k blocks."""

    graph: SimpleGraph
    u_blocks: tuple[tuple[int, ...], ...]
    w_blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ub = tuple(tuple(sorted(b)) for b in self.u_blocks)
        wb = tuple(tuple(sorted(b)) for b in self.w_blocks)
        object.__setattr__(self, "u_blocks", ub)
        object.__setattr__(self, "w_blocks", wb)
        if len(ub) != len(wb):
            raise ValueError("U and W need the same number of blocks")
        us = [v for b in ub for v in b]
        ws = [v for b in wb for v in b]
        if len(set(us) | set(ws)) != len(us) + len(ws):
            raise ValueError("blocks must be pairwise disjoint")
        _check_vertices(us + ws, self.graph.n)
        uset = set(us)
        wset = set(ws)
        for a, b in self.graph.edges:
            if not ((a in uset and b in wset) or (a in wset and b in uset)):
                raise ValueError(f"edge {(a, b)} does not cross U/W")

    @property
    def k(self) -> int:
        return len(self.u_blocks)


Instance = Union[Hypergraph, PartitionedHypergraph, SimpleGraph, WeightedPathGraph, CNF, MCBInstance]


def complement_hypergraph(h: Hypergraph, cap: int = COMPLEMENT_CAP) -> Hypergraph:
    """All d-subsets of the vertex set that are not edges of ``h``."""
    total = comb(h.n, h.d)
    if total > cap:
        raise ValueError(f"complement would enumerate {total} subsets (cap {cap})")
    present = h.edge_set
    return Hypergraph(
        h.d, h.n, tuple(e for e in itertools.combinations(range(h.n), h.d) if e not in present)
    )


# ---------------------------------------------------------------- text format


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _records(text: Union[str, bytes]):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


_HEADER_ARGS = {"hg": 3, "g": 2, "wg": 3, "cnf": 2, "mcb": 3}


def parse_instance(text: Union[str, bytes], kind: str | None = None) -> Instance:
    """Parse one instance; ``kind`` (``hg``/``g``/``wg``/``cnf``/``mcb``) is checked if given."""
    recs = list(_records(text))
    if not recs:
        raise ParseError("empty input")
    lineno, head = recs[0]
    tag = head[0]
    if tag not in _HEADER_ARGS:
        raise ParseError(f"unknown header {tag!r}", lineno)
    if kind is not None and kind != tag:
        raise ParseError(f"expected a {kind!r} instance, found {tag!r}", lineno)
    if len(head) != 1 + _HEADER_ARGS[tag]:
        raise ParseError(f"header {tag!r} takes {_HEADER_ARGS[tag]} integers", lineno)
    args = _ints(head[1:], lineno)
    if any(a < 0 for a in args):
        raise ParseError("header values must be nonnegative", lineno)
    body = recs[1:]
    parser = {"hg": _parse_hg, "g": _parse_g, "wg": _parse_wg, "cnf": _parse_cnf, "mcb": _parse_mcb}[tag]
    return parser(args, body)


def _count_check(kind: str, expected: int, got: int):
    if got != expected:
        raise ParseError(f"header announces {expected} {kind}, found {got}")


def _parse_hg(args, body):
    d, n, m = args
    if d < 1:
        raise ParseError("arity must be >= 1")
    edges, seen, color = [], set(), {}
    for lineno, tok in body:
        if tok[0] == "e":
            vs = _ints(tok[1:], lineno)
            if len(vs) != d:
                raise ParseError(f"edge has {len(vs)} vertices, arity is {d}", lineno)
            if len(set(vs)) != d:
                raise ParseError("repeated vertex in edge", lineno)
            bad = [v for v in vs if v < 0 or v >= n]
            if bad:
                raise ParseError(f"vertex {bad[0]} >= n={n}", lineno)
            key = tuple(sorted(vs))
            if key in seen:
                raise ParseError(f"duplicate edge {key}", lineno)
            seen.add(key)
            edges.append(key)
        elif tok[0] == "part":
            c, v = _ints(tok[1:], lineno) if len(tok) == 3 else (None, None)
            if c is None:
                raise ParseError("part line needs '<class> <vertex>'", lineno)
            if not 0 <= v < n:
                raise ParseError(f"vertex {v} >= n={n}", lineno)
            if not 0 <= c < d:
                raise ParseError(f"class {c} outside 0..{d - 1}", lineno)
            if v in color:
                raise ParseError(f"vertex {v} coloured twice", lineno)
            color[v] = c
        else:
            raise ParseError(f"unexpected record {tok[0]!r}", lineno)
    _count_check("edges", m, len(edges))
    h = Hypergraph(d, n, tuple(edges))
    if not color:
        return h
    if len(color) != n:
        raise ParseError("part lines must colour every vertex")
    try:
        return PartitionedHypergraph(h, tuple(color[v] for v in range(n)))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _parse_g(args, body):
    n, m = args
    edges, seen = [], set()
    for lineno, tok in body:
        if tok[0] != "e" or len(tok) != 3:
            raise ParseError("expected 'e u v'", lineno)
        u, v = _ints(tok[1:], lineno)
        for x in (u, v):
            if not 0 <= x < n:
                raise ParseError(f"vertex {x} >= n={n}", lineno)
        if u == v:
            raise ParseError("self-loop in simple graph", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append(key)
    _count_check("edges", m, len(edges))
    return SimpleGraph(n, tuple(edges))


def _parse_wg(args, body):
    n, m, dmax = args
    if dmax < 1:
        raise ParseError("dmax must be >= 1")
    items, seen = [], set()
    for lineno, tok in body:
        if tok[0] != "e" or len(tok) != 4:
            raise ParseError("expected 'e u v w'", lineno)
        u, v, w = _ints(tok[1:], lineno)
        for x in (u, v):
            if not 0 <= x < n:
                raise ParseError(f"vertex {x} >= n={n}", lineno)
        if not 1 <= w <= dmax:
            raise ParseError(f"weight {w} outside 1..{dmax}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        items.append((key, w))
    _count_check("edges", m, len(items))
    return WeightedPathGraph(n, tuple(items), dmax)


def _parse_cnf(args, body):
    nvars, ncl = args
    clauses = []
    for lineno, tok in body:
        lits = _ints(tok, lineno)
        if len(lits) != 3:
            raise ParseError("clauses have exactly three literals", lineno)
        if any(x == 0 or abs(x) > nvars for x in lits):
            raise ParseError(f"literal out of range 1..{nvars}", lineno)
        clauses.append(tuple(lits))
    _count_check("clauses", ncl, len(clauses))
    return CNF(nvars, tuple(clauses))


def _parse_mcb(args, body):
    n, m, k = args
    edges, seen = [], set()
    blocks = {"U": [[] for _ in range(k)], "W": [[] for _ in range(k)]}
    for lineno, tok in body:
        if len(tok) != 3 or tok[0] not in ("e", "U", "W"):
            raise ParseError("expected 'e u w', 'U <block> <v>' or 'W <block> <v>'", lineno)
        a, b = _ints(tok[1:], lineno)
        if tok[0] == "e":
            for x in (a, b):
                if not 0 <= x < n:
                    raise ParseError(f"vertex {x} >= n={n}", lineno)
            key = (min(a, b), max(a, b))
            if key in seen or a == b:
                raise ParseError(f"duplicate or loop edge {key}", lineno)
            seen.add(key)
            edges.append(key)
        else:
            if not 0 <= a < k:
                raise ParseError(f"block {a} outside 0..{k - 1}", lineno)
            if not 0 <= b < n:
                raise ParseError(f"vertex {b} >= n={n}", lineno)
            blocks[tok[0]][a].append(b)
    _count_check("edges", m, len(edges))
    try:
        return MCBInstance(SimpleGraph(n, tuple(edges)), tuple(map(tuple, blocks["U"])), tuple(map(tuple, blocks["W"])))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_instance(value: Instance) -> str:
    """Canonical text form; ``parse_instance(serialize_instance(x)) == x``."""
    out: list[str] = []
    if isinstance(value, PartitionedHypergraph):
        out.append(serialize_instance(value.base).rstrip("\n"))
        out.extend(f"part {c} {v}" for v, c in enumerate(value.color))
    elif isinstance(value, Hypergraph):
        out.append(f"hg {value.d} {value.n} {value.m}")
        out.extend("e " + " ".join(map(str, e)) for e in value.edges)
    elif isinstance(value, SimpleGraph):
        out.append(f"g {value.n} {value.m}")
        out.extend(f"e {u} {v}" for u, v in value.edges)
    elif isinstance(value, WeightedPathGraph):
        out.append(f"wg {value.n} {value.m} {value.dmax}")
        out.extend(f"e {u} {v} {w}" for (u, v), w in value.weights)
    elif isinstance(value, CNF):
        out.append(f"cnf {value.nvars} {len(value.clauses)}")
        out.extend(" ".join(map(str, c)) for c in value.clauses)
    elif isinstance(value, MCBInstance):
        g = value.graph
        out.append(f"mcb {g.n} {g.m} {value.k}")
        out.extend(f"e {u} {v}" for u, v in g.edges)
        for side, blocks in (("U", value.u_blocks), ("W", value.w_blocks)):
            out.extend(f"{side} {i} {v}" for i, b in enumerate(blocks) for v in b)
    else:
        raise TypeError(f"cannot serialise {type(value).__name__}")
    return "\n".join(out) + "\n"
