import pytest

from packkernel.graphcore import Hypergraph, serialize_instance
from packkernel.harness import (
    CurvePoint,
    TrialConfig,
    curve_csv,
    fit_slope,
    gen_random,
    make_rng,
    report_json,
    size_curve,
    verify_kernel,
)
from packkernel.oracles import has_perfect_matching


def test_planted_perfect_matching():
    (rng,) = make_rng(3)
    h, info = gen_random("pdm", rng, d=3, q=3, extra=4, planted=True)
    assert h.n == 9 and info["planted"]
    assert has_perfect_matching(h)


def test_zero_probability_is_edgeless():
    (rng,) = make_rng(0)
    g, _ = gen_random("graph", rng, n=12, p=0.0)
    assert g.m == 0
    w, _ = gen_random("weighted", rng, n=6, p=0.0, d=3)
    assert w.m == 0


@pytest.mark.parametrize(
    "kind,params",
    [
        ("hypergraph", dict(d=3, n=10, m=12, planted=2)),
        ("pdm", dict(d=3, q=3, extra=5)),
        ("graph", dict(n=10, p=0.3)),
        ("weighted", dict(n=8, p=0.4, d=3, dangling=0.3)),
        ("cnf", dict(nvars=4, clauses=6)),
    ],
)
def test_same_seed_same_instance(kind, params):
    a, _ = gen_random(kind, make_rng(42)[0], **params)
    b, _ = gen_random(kind, make_rng(42)[0], **params)
    assert serialize_instance(a) == serialize_instance(b)


def test_infeasible_parameters_rejected():
    (rng,) = make_rng(0)
    with pytest.raises(ValueError):
        gen_random("hypergraph", rng, d=3, n=5, planted=2)
    with pytest.raises(ValueError):
        gen_random("graph", rng, n=5, p=1.5)
    with pytest.raises(ValueError):
        gen_random("weighted", rng, n=5, p=0.5, d=2, max_weight=3)
    with pytest.raises(ValueError):
        gen_random("tree", rng)
    with pytest.raises(ValueError):
        TrialConfig(problem="tsp")
    with pytest.raises(ValueError):
        TrialConfig(n=(5, 2))


def test_streams_are_independent_per_trial():
    a = [g.integers(1 << 30) for g in make_rng(7, 4)]
    b = [g.integers(1 << 30) for g in make_rng(7, 4)]
    assert a == b and len(set(a)) == 4


@pytest.mark.parametrize(
    "problem,cfg",
    [
        ("set-matching", TrialConfig(trials=40)),
        ("star", TrialConfig(trials=40, n=(2, 14), k=(1, 3), d=(2, 3))),
        ("p3", TrialConfig(trials=40, n=(4, 14), k=(1, 3))),
        ("pd", TrialConfig(trials=40, n=(2, 12), k=(1, 3), d=(2, 3, 4))),
    ],
)
def test_verify_passes(problem, cfg):
    rep = verify_kernel(problem, cfg)
    assert rep["passed"] == cfg.trials
    assert rep["mismatches"] == rep["bound_violations"] == rep["skipped"] == 0
    assert 0 < rep["yes_instances"] < cfg.trials


def _broken(problem, inst, d, k, cfg):
    # drops every edge: wrong on every YES instance
    empty = Hypergraph(inst.d, inst.n)
    return empty, k, True, 0, 1, False


def test_mutation_hook_is_caught(tmp_path):
    cfg = TrialConfig(trials=30, dump_dir=str(tmp_path))
    rep = verify_kernel("set-matching", cfg, kernelizer=_broken)
    assert rep["mismatches"] == rep["yes_instances"] > 0
    files = sorted(tmp_path.iterdir())
    assert len(files) == rep["mismatches"]
    head = files[0].read_text().splitlines()[0]
    assert head.startswith("# problem=set-matching k=") and " d=3" in head
    assert all("file" in f for f in rep["failures"])


def test_budget_exhaustion_counts_as_skipped():
    rep = verify_kernel("set-matching", TrialConfig(trials=10, m=(30, 40), max_nodes=1))
    assert rep["skipped"] == 10 and rep["passed"] == 0


def test_reports_are_byte_identical():
    cfg = TrialConfig(seed=11, trials=25)
    assert report_json(verify_kernel("p3", cfg)) == report_json(verify_kernel("p3", cfg))


def test_worker_pool_gives_the_same_report():
    cfg = TrialConfig(seed=5, trials=16)
    one = report_json(verify_kernel("set-matching", cfg))
    two = report_json(verify_kernel("set-matching", TrialConfig(seed=5, trials=16, workers=2)))
    assert one == two


def test_star_curve_within_bound():
    cfg = TrialConfig(trials=6, n=(20, 40), d=(3,), density=(0.3, 0.6))
    pts = size_curve("star", range(2, 7), cfg)
    assert [p.k for p in pts] == [2, 3, 4, 5, 6]
    assert all(p.max_edges <= 27 * p.k**2 for p in pts)


def test_set_matching_curve_within_bound():
    cfg = TrialConfig(trials=4, n=(10, 15), m=(20, 60))
    pts = size_curve("set-matching", [1, 2], cfg)
    assert all(p.max_edges <= 6 * (3 * p.k) ** 3 for p in pts)


def test_empty_inputs_give_zero_curve():
    pts = size_curve("set-matching", [1, 2, 3], TrialConfig(trials=3, m=(0, 0)))
    assert all(p.max_edges == 0 and p.mean_edges == 0 for p in pts)
    assert fit_slope(pts) is None


def test_curve_csv_and_slope():
    pts = [CurvePoint(1, 2.0, 2, 3), CurvePoint(2, 8.0, 8, 3)]
    assert curve_csv(pts).splitlines() == ["k,mean_edges,max_edges,samples", "1,2.000000,2,3", "2,8.000000,8,3"]
    assert fit_slope(pts) == pytest.approx(2.0)
    assert report_json(pts) == report_json(list(pts))
