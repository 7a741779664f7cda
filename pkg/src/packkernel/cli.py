"""Command line entry point ``packkernel``.

Exit codes: 0 success, 1 answer NO (``solve``), 2 verification mismatch,
3 input error. Reports are JSON on stdout unless ``--csv`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import compositions as comp
from .gadgets import (
    build_hyperedge_gadget,
    build_selector_gadget,
    build_switch_gadget,
    naive_packing_structure,
)
from .graphcore import (
    CNF,
    HPattern,
    Hypergraph,
    MCBInstance,
    ParseError,
    PartitionedHypergraph,
    SimpleGraph,
    WeightedPathGraph,
    parse_instance,
    serialize_instance,
)
from .harness import PROBLEMS, TrialConfig, curve_csv, fit_slope, report_json, size_curve, verify_kernel
from .oracles import (
    BudgetExhausted,
    OracleBudget,
    has_h_factor,
    has_multicolored_biclique,
    has_perfect_matching,
    max_clique,
    max_h_matching,
    max_set_matching,
    max_weighted_path_matching,
    min_vertex_cover,
    sat3,
)
from .p3 import kernelize_p3
from .pathpacking import kernelize_pd
from .star import kernelize_star_matching
from .sunflower import kernelize_set_matching

EXIT_OK, EXIT_NO, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2, 3

SOLVE_PROBLEMS = (
    "set-matching", "perfect-matching", "star", "p3", "pd", "h-factor",
    "clique", "vertex-cover", "3sat", "mcb",
)


class InputError(Exception):
    pass


def _read(path: str, kind: str | None = None):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_instance(text, kind)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _pattern(spec: str) -> HPattern:
    """``K3``, ``P3`` (three edges), ``S3`` (K_{1,3}) or a graph file."""
    kind, num = spec[:1].upper(), spec[1:]
    if num.isdigit():
        size = int(num)
        if kind == "K":
            return HPattern.clique(size)
        if kind == "P":
            return HPattern.path(size)
        if kind == "S":
            return HPattern.star(size)
    g = _read(spec, "g")
    return HPattern(g)


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name} is required for problem {args.problem}")
    return value


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


# ------------------------------------------------------------------ commands


def cmd_solve(args) -> int:
    p = args.problem
    budget = OracleBudget(max_nodes=args.max_nodes)
    inst = _read(args.file)
    out: dict = {"problem": p}
    if p in ("set-matching", "perfect-matching"):
        if not isinstance(inst, (Hypergraph, PartitionedHypergraph)):
            raise InputError("expected a hypergraph")
        if p == "set-matching":
            k = _need(args, "k")
            best = max_set_matching(inst, budget, stop_at=k)
            out.update(k=k, value=best, answer=best >= k)
        else:
            out["answer"] = has_perfect_matching(inst, budget)
    elif p in ("star", "p3", "h-factor"):
        if not isinstance(inst, SimpleGraph):
            raise InputError("expected a graph")
        if p == "h-factor":
            h = _pattern(args.pattern or "K3")
            out["answer"] = has_h_factor(inst, h, budget)
        else:
            h = HPattern.star(_need(args, "d")) if p == "star" else HPattern.path(3)
            k = _need(args, "k")
            best = max_h_matching(inst, h, budget, stop_at=k)
            out.update(k=k, value=best, answer=best >= k)
    elif p == "pd":
        if not isinstance(inst, (SimpleGraph, WeightedPathGraph)):
            raise InputError("expected a graph or weighted graph")
        d, k = _need(args, "d"), _need(args, "k")
        best = max_weighted_path_matching(inst if isinstance(inst, WeightedPathGraph) else WeightedPathGraph.from_graph(inst, d), d, budget, stop_at=k)
        out.update(k=k, d=d, value=best, answer=best >= k)
    elif p in ("clique", "vertex-cover"):
        if not isinstance(inst, (SimpleGraph, Hypergraph)):
            raise InputError("expected a graph or hypergraph")
        k = _need(args, "k")
        if p == "clique":
            best = max_clique(inst, budget)
            out.update(k=k, value=best, answer=best >= k)
        else:
            best = min_vertex_cover(inst, budget)
            out.update(k=k, value=best, answer=best <= k)
    elif p == "3sat":
        if not isinstance(inst, CNF):
            raise InputError("expected a cnf instance")
        out["answer"] = sat3(inst)
    elif p == "mcb":
        if not isinstance(inst, MCBInstance):
            raise InputError("expected an mcb instance")
        out["answer"] = has_multicolored_biclique(inst)
    _emit(out)
    return EXIT_OK if out["answer"] else EXIT_NO


def cmd_kernelize(args) -> int:
    p, k = args.problem, args.k
    inst = _read(args.file)
    if p == "set-matching":
        if not isinstance(inst, (Hypergraph, PartitionedHypergraph)):
            raise InputError("expected a hypergraph")
        base = inst.base if isinstance(inst, PartitionedHypergraph) else inst
        out, trace = kernelize_set_matching(base, k)
        kernel = out
    elif p in ("star", "p3"):
        if not isinstance(inst, SimpleGraph):
            raise InputError("expected a graph")
        if p == "star":
            kernel, trace = kernelize_star_matching(inst, _need(args, "d"), k)
        else:
            kernel, trace = kernelize_p3(inst, k, C=args.C, strict=not args.relaxed)
    else:
        if not isinstance(inst, (SimpleGraph, WeightedPathGraph)):
            raise InputError("expected a graph or weighted graph")
        res = kernelize_pd(inst, _need(args, "d"), k, witnesses=args.witnesses)
        kernel, trace = res.graph, res.trace
    if args.out:
        Path(args.out).write_text(serialize_instance(kernel))
    if args.trace:
        Path(args.trace).write_text(trace.to_jsonl())
    _emit({
        "problem": p,
        "k": k,
        "verdict": trace.verdict,
        "flags": sorted(trace.flags),
        "rules": {r: trace.count(r) for r in sorted({e.rule for e in trace.entries})},
        "info": {key: v for key, v in trace.info.items() if key != "vertex_map"},
        "vertex_map": trace.info.get("vertex_map"),
        "kernel": None if args.out else serialize_instance(kernel),
    })
    return EXIT_OK


def cmd_gadget(args) -> int:
    kind = args.kind
    if kind == "switch":
        g = build_switch_gadget(args.d, args.s)
        inst, extra = g.graph, {"blocks": g.blocks}
    elif kind == "selector":
        g = build_selector_gadget(args.d, args.m, args.s)
        inst = g.graph if args.m > 1 else g.hypergraph
        extra = {"blocks": g.blocks}
    elif kind == "hyperedge":
        g = build_hyperedge_gadget(_pattern(args.pattern or "K3"))
        inst, extra = g.graph, {"terminals": g.terminals}
    else:
        inst, cliques = naive_packing_structure(args.p, args.t)
        extra = {"cliques": cliques}
    _write_instance(args, inst, {"gadget": kind, **extra})
    return EXIT_OK


def _write_instance(args, inst, report: dict) -> None:
    text = serialize_instance(inst)
    if args.out:
        Path(args.out).write_text(text)
        _emit(report)
    else:
        _emit({**report, "instance": text})


def _hfactor_input(path: str):
    """Graph file whose ``# color c0 c1 ...`` comment line gives the p-colouring."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    color = None
    for line in text.splitlines():
        if line.startswith("# color"):
            color = [int(x) for x in line.split()[2:]]
    g = _read(path, "g")
    if color is None:
        raise InputError(f"{path}: missing '# color' line")
    return g, color


def cmd_compose(args) -> int:
    r = args.reducer
    if r == "or-pdm":
        out, rep = comp.compose_or_perfect_dm([_read(f, "hg") for f in args.files])
        _write_instance(args, out, rep.to_dict())
    elif r == "or-vc":
        out, budget, rep = comp.compose_or_mcb_to_vertex_cover([_read(f, "mcb") for f in args.files])
        _write_instance(args, out, rep.to_dict())
    elif r == "or-3sat":
        d = args.d or 2
        out, k, rep = comp.compose_or_3sat([_read(f, "cnf") for f in args.files], d, args.target)
        _write_instance(args, out, rep.to_dict())
    elif r == "pdm-to-kd":
        if len(args.files) != 1:
            raise InputError("pdm-to-kd takes one instance")
        h = _read(args.files[0], "hg")
        if not isinstance(h, PartitionedHypergraph):
            raise InputError("pdm-to-kd needs 'part' lines")
        out, k = comp.reduce_pdm_to_clique_matching(h)
        _write_instance(args, out, {"k": k, "d": h.d + 1})
    elif r == "clique-to-mcb":
        if len(args.files) != 1:
            raise InputError("clique-to-mcb takes one instance")
        out = comp.clique_to_multicolored_biclique(_read(args.files[0], "g"), _need(args, "k"))
        _write_instance(args, out, {"k": out.k})
    else:
        h = _pattern(args.pattern or "K3")
        ins = [_hfactor_input(f) for f in args.files]
        out, rep = comp.compose_or_hfactor(ins, h)
        _write_instance(args, out, rep.to_dict())
    return EXIT_OK


def _config(args) -> TrialConfig:
    fields = {"seed": args.seed, "trials": args.trials, "problem": args.problem}
    for name in ("n", "m", "k"):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = tuple(value)
    if getattr(args, "d", None):
        fields["d"] = tuple(args.d)
    if getattr(args, "C", None) is not None:
        fields["p3_C"] = args.C
    if getattr(args, "dump_dir", None):
        fields["dump_dir"] = args.dump_dir
    if getattr(args, "workers", None):
        fields["workers"] = args.workers
    return TrialConfig(**fields)


def cmd_verify(args) -> int:
    report = verify_kernel(args.problem, _config(args))
    sys.stdout.write(report_json(report))
    return EXIT_MISMATCH if report["mismatches"] or report["bound_violations"] else EXIT_OK


def cmd_curve(args) -> int:
    cfg = _config(args)
    points = size_curve(args.problem, range(args.kmin, args.kmax + 1), cfg)
    slope = fit_slope(points)
    if args.csv:
        sys.stdout.write(curve_csv(points))
        sys.stdout.write(f"# slope {slope}\n")
    else:
        sys.stdout.write(report_json({"points": [asdict(p) for p in points], "slope": slope}))
    return EXIT_OK


# -------------------------------------------------------------------- parser


def _pair(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO,HI") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="packkernel", description="Kernels, oracles and gadgets for packing problems.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="answer an instance with an exact oracle")
    sp.add_argument("--problem", required=True, choices=SOLVE_PROBLEMS)
    sp.add_argument("--k", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--pattern", help="K3, P3, S3 or a graph file")
    sp.add_argument("--max-nodes", type=int, default=20_000_000)
    sp.add_argument("file")
    sp.set_defaults(func=cmd_solve)

    kp = sub.add_parser("kernelize", help="run a kernel and print the trace summary")
    kp.add_argument("--problem", required=True, choices=PROBLEMS)
    kp.add_argument("--k", type=int, required=True)
    kp.add_argument("--d", type=int)
    kp.add_argument("--C", type=float, default=32.0)
    kp.add_argument("--relaxed", action="store_true", help="p3: start the good-vertex search at deg >= 4k+1")
    kp.add_argument("--witnesses", action="store_true", help="pd: keep certificate vertex sets")
    kp.add_argument("--out", help="write the kernel here instead of embedding it in the report")
    kp.add_argument("--trace", help="write the rule trace as JSON lines")
    kp.add_argument("file")
    kp.set_defaults(func=cmd_kernelize)

    gp = sub.add_parser("gadget", help="build a gadget")
    gp.add_argument("kind", choices=("switch", "selector", "hyperedge", "packing"))
    gp.add_argument("--d", type=int, default=3)
    gp.add_argument("--m", type=int, default=2)
    gp.add_argument("--s", type=int, default=2)
    gp.add_argument("--p", type=int, default=3)
    gp.add_argument("--t", type=int, default=2)
    gp.add_argument("--pattern")
    gp.add_argument("--out")
    gp.set_defaults(func=cmd_gadget)

    cp = sub.add_parser("compose", help="run a composition or reduction")
    cp.add_argument("reducer", choices=("or-pdm", "or-vc", "or-3sat", "pdm-to-kd", "clique-to-mcb", "or-hfactor"))
    cp.add_argument("files", nargs="+")
    cp.add_argument("--d", type=int)
    cp.add_argument("--k", type=int)
    cp.add_argument("--target", choices=("clique", "vertex-cover"), default="clique")
    cp.add_argument("--pattern")
    cp.add_argument("--out")
    cp.set_defaults(func=cmd_compose)

    for name, func, hlp in (("verify", cmd_verify, "oracle equivalence over random inputs"), ("curve", cmd_curve, "kernel size against k")):
        vp = sub.add_parser(name, help=hlp)
        vp.add_argument("--problem", required=True, choices=PROBLEMS)
        vp.add_argument("--seed", type=int, default=0)
        vp.add_argument("--trials", type=int, default=100 if name == "verify" else 20)
        vp.add_argument("--n", type=_pair)
        vp.add_argument("--m", type=_pair)
        vp.add_argument("--d", type=int, nargs="+")
        vp.add_argument("--C", type=float)
        vp.add_argument("--workers", type=int)
        if name == "verify":
            vp.add_argument("--k", type=_pair)
            vp.add_argument("--dump-dir")
        else:
            vp.add_argument("--kmin", type=int, default=1)
            vp.add_argument("--kmax", type=int, default=4)
            vp.add_argument("--csv", action="store_true")
        vp.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExhausted as exc:
        print(f"error: oracle budget exhausted: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
