"""Random instances, oracle-equivalence runs and kernel size curves.

Randomness comes from numpy's PCG64 generator. Trial ``i`` of a run with
seed ``s`` draws from ``PCG64(SeedSequence(s).spawn(trials)[i])``, so every
trial replays on its own and the worker count never changes a report.
"""

from __future__ import annotations

import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .graphcore import (
    CNF,
    HPattern,
    Hypergraph,
    PartitionedHypergraph,
    SimpleGraph,
    WeightedPathGraph,
    serialize_instance,
)
from .oracles import (
    BudgetExhausted,
    OracleBudget,
    max_h_matching,
    max_set_matching,
    max_weighted_path_matching,
)
from .p3 import kernelize_p3
from .pathpacking import kernelize_pd, pd_vertex_bound
from .star import kernelize_star_matching, star_bound
from .sunflower import kernelize_set_matching, set_matching_bound

__all__ = [
    "PROBLEMS",
    "TrialConfig",
    "CurvePoint",
    "make_rng",
    "gen_random",
    "verify_kernel",
    "size_curve",
    "curve_csv",
    "fit_slope",
    "report_json",
]

PROBLEMS = ("set-matching", "star", "p3", "pd")


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    trials: int = 100
    problem: str = "set-matching"
    n: tuple[int, int] = (4, 15)
    m: tuple[int, int] = (0, 40)
    k: tuple[int, int] = (1, 4)
    d: tuple[int, ...] = (3,)
    density: tuple[float, ...] = (0.15, 0.3, 0.5)
    max_weight: int | None = None
    dangling: float = 0.2
    p3_C: float = 32.0
    p3_strict: bool = False
    max_nodes: int = 5_000_000
    timeout_ms: int = 60_000
    dump_dir: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")
        for name in ("n", "m", "k"):
            lo, hi = getattr(self, name)
            if lo < 0 or lo > hi:
                raise ValueError(f"bad {name} range {(lo, hi)}")
        if not self.d or not all(p >= 0 for p in self.density):
            raise ValueError("need at least one d and nonnegative densities")

    @property
    def budget(self) -> OracleBudget:
        return OracleBudget(max_nodes=self.max_nodes, timeout_ms=self.timeout_ms)


@dataclass(frozen=True)
class CurvePoint:
    k: int
    mean_edges: float
    max_edges: int
    samples: int


def make_rng(seed: int, trials: int = 1) -> list[np.random.Generator]:
    """One independent PCG64 stream per trial."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(trials)]


def _int(rng, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


# ------------------------------------------------------------------- generators


def gen_random(kind: str, rng: np.random.Generator, **p):
    """Random instance of ``kind``; returns ``(instance, info)``.

    kinds: ``hypergraph`` (d, n, m, planted), ``pdm`` (d, q, extra, planted),
    ``graph`` (n, p, planted_h, planted), ``weighted`` (n, p, d, dangling,
    max_weight) and ``cnf`` (nvars, clauses). ``planted`` asks for that many
    disjoint hyperedges / pattern copies (or a perfect matching for pdm).
    """
    if kind == "hypergraph":
        d, n, m, planted = p["d"], p["n"], p.get("m", 0), p.get("planted", 0)
        if d < 1 or d > n or planted * d > n:
            raise ValueError("infeasible hypergraph parameters")
        edges = set()
        order = [int(v) for v in rng.permutation(n)]
        for j in range(planted):
            edges.add(tuple(sorted(order[j * d:(j + 1) * d])))
        for _ in range(m):
            edges.add(tuple(sorted(int(v) for v in rng.choice(n, d, replace=False))))
        return Hypergraph(d, n, tuple(sorted(edges))), {"planted": planted}
    if kind == "pdm":
        d, q, extra, planted = p["d"], p["q"], p.get("extra", 0), p.get("planted", False)
        if d < 2 or q < 1:
            raise ValueError("infeasible pdm parameters")
        edges = set()
        if planted:
            perms = [rng.permutation(q) for _ in range(d)]
            edges.update(tuple(c * q + int(perms[c][j]) for c in range(d)) for j in range(q))
        for _ in range(extra):
            edges.add(tuple(c * q + int(rng.integers(q)) for c in range(d)))
        h = Hypergraph(d, d * q, tuple(sorted(edges)))
        return PartitionedHypergraph(h, tuple(v // q for v in range(d * q))), {"planted": bool(planted)}
    if kind == "graph":
        n, prob = p["n"], p.get("p", 0.0)
        h, planted = p.get("planted_h"), p.get("planted", 0)
        if not 0 <= prob <= 1:
            raise ValueError("edge probability must lie in [0, 1]")
        coin = rng.random(n * (n - 1) // 2)
        edges = {e for e, c in zip(itertools.combinations(range(n), 2), coin) if c < prob}
        if planted:
            if h is None or planted * h.vertex_count > n:
                raise ValueError("infeasible planting")
            order = [int(v) for v in rng.permutation(n)]
            for j in range(planted):
                img = order[j * h.vertex_count:(j + 1) * h.vertex_count]
                edges.update((min(img[a], img[b]), max(img[a], img[b])) for a, b in h.graph.edges)
        return SimpleGraph(n, tuple(sorted(edges))), {"planted": planted}
    if kind == "weighted":
        n, prob, d = p["n"], p.get("p", 0.0), p["d"]
        top = p.get("max_weight") or d
        dang = p.get("dangling", 0.0)
        if top < 1 or top > d:
            raise ValueError("max_weight must lie in 1..d")
        items = {}
        coin = rng.random(n * (n - 1) // 2)
        ws = rng.integers(1, top + 1, size=n * (n - 1) // 2)
        for e, c, w in zip(itertools.combinations(range(n), 2), coin, ws):
            if c < prob:
                items[e] = int(w)
        dcoin = rng.random(n)
        dws = rng.integers(1, top + 1, size=n)
        for v in range(n):
            if dcoin[v] < dang:
                items[(v, v)] = int(dws[v])
        return WeightedPathGraph(n, items, d), {"planted": 0}
    if kind == "cnf":
        nv, nc = p["nvars"], p["clauses"]
        if nv < 1:
            raise ValueError("need at least one variable")
        clauses = []
        for _ in range(nc):
            vs = rng.integers(1, nv + 1, size=3)
            sg = rng.integers(0, 2, size=3)
            clauses.append(tuple(int(v) if s else -int(v) for v, s in zip(vs, sg)))
        return CNF(nv, tuple(clauses)), {"planted": 0}
    raise ValueError(f"unknown instance kind {kind!r}")


# ------------------------------------------------------------- verification


def _trial_instance(problem: str, cfg: TrialConfig, rng):
    """Draw ``(instance, k, d, planted)`` for one trial of ``problem``."""
    d = int(cfg.d[int(rng.integers(len(cfg.d)))])
    k = _int(rng, *cfg.k)
    prob = float(cfg.density[int(rng.integers(len(cfg.density)))])
    if problem == "set-matching":
        n = _int(rng, max(cfg.n[0], d), max(cfg.n[1], d))
        planted = _int(rng, 0, min(k, n // d))
        inst, _ = gen_random("hypergraph", rng, d=d, n=n, m=_int(rng, *cfg.m), planted=planted)
    elif problem in ("star", "p3"):
        h = HPattern.star(d) if problem == "star" else HPattern.path(3)
        n = _int(rng, *cfg.n)
        planted = _int(rng, 0, min(k, n // h.vertex_count))
        inst, _ = gen_random("graph", rng, n=n, p=prob, planted_h=h, planted=planted)
    else:
        n = _int(rng, *cfg.n)
        planted = 0
        inst, _ = gen_random("weighted", rng, n=n, p=prob, d=d, dangling=cfg.dangling, max_weight=cfg.max_weight)
    return inst, k, d, planted


def _solve(problem: str, inst, d: int, k: int, budget: OracleBudget) -> bool:
    if problem == "set-matching":
        return max_set_matching(inst, budget, stop_at=k) >= k
    if problem == "star":
        return max_h_matching(inst, HPattern.star(d), budget, stop_at=k) >= k
    if problem == "p3":
        return max_h_matching(inst, HPattern.path(3), budget, stop_at=k) >= k
    return max_weighted_path_matching(inst, d, budget, stop_at=k) >= k


def _kernelize(problem: str, inst, d: int, k: int, cfg: TrialConfig):
    """Run the kernel; returns ``(kernel_instance, k_out, bound_ok, size, bound, stalled)``."""
    if problem == "set-matching":
        out, tr = kernelize_set_matching(inst, k)
        b = set_matching_bound(d, k)
        return out, k, out.m <= b, out.m, b, False
    if problem == "star":
        out, tr = kernelize_star_matching(inst, d, k)
        b = star_bound(d, k)
        return out, k, tr.verdict == "yes" or out.m <= b, out.m, b, False
    if problem == "p3":
        out, tr = kernelize_p3(inst, k, C=cfg.p3_C, strict=cfg.p3_strict)
        b = tr.info.get("edge_bound", 0)
        ok = tr.stalled or tr.verdict == "yes" or out.m <= b
        return out, k, ok, out.m, b, tr.stalled
    ker = kernelize_pd(inst, d, k)
    b = pd_vertex_bound(d, k)
    return ker.graph, ker.k, True, ker.graph.n, b, False


def _run_trial(args):
    problem, cfg, idx, seed_seq, kernelizer = args
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    inst, k, d, planted = _trial_instance(problem, cfg, rng)
    budget = cfg.budget
    rec = {"trial": idx, "k": k, "d": d, "planted": planted}
    try:
        before = _solve(problem, inst, d, k, budget)
        run = kernelizer or _kernelize
        out, k_out, bound_ok, size, bound, stalled = run(problem, inst, d, k, cfg)
        after = _solve(problem, out, d, k_out, budget)
    except BudgetExhausted:
        rec["status"] = "skipped"
        return rec, None
    rec.update(before=before, after=after, size=size, bound=bound, bound_ok=bound_ok, stalled=stalled)
    rec["status"] = "pass" if before == after and bound_ok else "fail"
    dump = serialize_instance(inst) if rec["status"] == "fail" else None
    return rec, dump


def verify_kernel(problem: str, config: TrialConfig, kernelizer: Callable | None = None) -> dict:
    """Oracle equivalence of ``problem``'s kernel over ``config.trials`` random inputs.

    ``kernelizer`` replaces the real kernel (same signature as the internal
    dispatcher) so the harness itself can be tested against a broken one.
    Trials whose oracle runs out of budget are counted as skipped.
    """
    cfg = replace(config, problem=problem)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    jobs = [(problem, cfg, i, s, kernelizer) for i, s in enumerate(seeds)]
    if cfg.workers > 1 and kernelizer is None:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=8))
    else:
        results = [_run_trial(j) for j in jobs]
    report = {
        "problem": problem,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "passed": 0,
        "mismatches": 0,
        "bound_violations": 0,
        "skipped": 0,
        "stalled": 0,
        "yes_instances": 0,
        "max_size_ratio": 0.0,
        "failures": [],
    }
    for rec, dump in results:
        if rec["status"] == "skipped":
            report["skipped"] += 1
            continue
        report["yes_instances"] += rec["before"]
        report["stalled"] += rec["stalled"]
        if rec["bound"]:
            report["max_size_ratio"] = max(report["max_size_ratio"], rec["size"] / rec["bound"])
        if rec["status"] == "pass":
            report["passed"] += 1
            continue
        if rec["before"] != rec["after"]:
            report["mismatches"] += 1
        if not rec["bound_ok"]:
            report["bound_violations"] += 1
        entry = {"trial": rec["trial"], "k": rec["k"], "d": rec["d"], "before": rec["before"], "after": rec["after"]}
        if cfg.dump_dir is not None:
            path = Path(cfg.dump_dir) / f"{problem}-seed{cfg.seed}-trial{rec['trial']}.txt"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(f"# problem={problem} k={rec['k']} d={rec['d']}\n" + dump)
            entry["file"] = str(path)
        report["failures"].append(entry)
    report["max_size_ratio"] = round(report["max_size_ratio"], 12)
    return report


# ------------------------------------------------------------------- curves


def _curve_instance(problem: str, k: int, d: int, cfg: TrialConfig, rng):
    n = _int(rng, *cfg.n)
    prob = float(cfg.density[int(rng.integers(len(cfg.density)))])
    if problem == "set-matching":
        inst, _ = gen_random("hypergraph", rng, d=d, n=max(n, d), m=_int(rng, *cfg.m))
    elif problem in ("star", "p3"):
        inst, _ = gen_random("graph", rng, n=n, p=prob)
    else:
        inst, _ = gen_random("weighted", rng, n=n, p=prob, d=d, dangling=cfg.dangling, max_weight=cfg.max_weight)
    return inst


def size_curve(problem: str, ks, config: TrialConfig) -> list[CurvePoint]:
    """Output size of the kernel for every k in ``ks`` over ``config.trials`` inputs each.

    Sizes are edges (vertices for ``pd``). YES certificates are left out of
    the statistics since their size is fixed by k.
    """
    ks = sorted(set(int(k) for k in ks))
    cfg = replace(config, problem=problem)
    d = int(cfg.d[0])
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(ks))
    points = []
    for k, ss in zip(ks, seeds):
        rngs = [np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(cfg.trials)]
        sizes = []
        for rng in rngs:
            inst = _curve_instance(problem, k, d, cfg, rng)
            if k == 0:
                sizes.append(0)
                continue
            if problem == "set-matching":
                out, tr = kernelize_set_matching(inst, k)
                size = out.m
            elif problem == "star":
                out, tr = kernelize_star_matching(inst, d, k)
                size = out.m
            elif problem == "p3":
                out, tr = kernelize_p3(inst, k, C=cfg.p3_C, strict=cfg.p3_strict)
                size = out.m
            else:
                ker = kernelize_pd(inst, d, k)
                tr, size = ker.trace, ker.graph.n
            if tr.verdict != "yes":
                sizes.append(size)
        if sizes:
            points.append(CurvePoint(k, round(float(np.mean(sizes)), 6), int(max(sizes)), len(sizes)))
        else:
            points.append(CurvePoint(k, 0.0, 0, 0))
    return points


def fit_slope(points: list[CurvePoint]) -> float | None:
    """Least-squares slope of log(max_edges) against log(k); None with < 2 usable points."""
    xs = [(np.log(p.k), np.log(p.max_edges)) for p in points if p.k > 0 and p.max_edges > 0]
    if len(xs) < 2:
        return None
    x, y = np.array(xs).T
    return round(float(np.polyfit(x, y, 1)[0]), 6)


def curve_csv(points: list[CurvePoint]) -> str:
    buf = io.StringIO()
    buf.write("k,mean_edges,max_edges,samples\n")
    for p in points:
        buf.write(f"{p.k},{p.mean_edges:.6f},{p.max_edges},{p.samples}\n")
    return buf.getvalue()


def report_json(report) -> str:
    """Canonical JSON (sorted keys, no timings) for byte-identical replays."""
    if isinstance(report, list):
        report = [asdict(p) if isinstance(p, CurvePoint) else p for p in report]
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
