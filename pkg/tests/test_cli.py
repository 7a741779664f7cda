import json
import subprocess
import sys

import pytest

from packkernel.cli import main
from packkernel.graphcore import parse_instance


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    paths = {
        "hg": "hg 3 6 2\ne 0 1 2\ne 3 4 5\n",
        "hg_bad": "hg 3 6 1\ne 0 1 9\n",
        "star": "g 5 4\ne 0 1\ne 0 2\ne 0 3\ne 0 4\n",
        "wg": "wg 3 2 3\ne 0 1 2\ne 1 2 1\n",
        "cnf": "cnf 3 1\n1 2 3\n",
        "pdm": "hg 3 3 1\ne 0 1 2\npart 0 0\npart 1 1\npart 2 2\n",
        "tri": "# color 0 1 2\ng 3 3\ne 0 1\ne 1 2\ne 0 2\n",
        "empty3": "# color 0 1 2\ng 3 0\n",
    }
    out = {}
    for name, text in paths.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        out[name] = str(p)
    return out


def test_solve_yes_and_no(capsys, files):
    code, out, _ = run(capsys, "solve", "--problem", "set-matching", "--k", "2", files["hg"])
    assert code == 0 and json.loads(out)["value"] == 2
    code, out, _ = run(capsys, "solve", "--problem", "set-matching", "--k", "3", files["hg"])
    assert code == 1 and json.loads(out)["answer"] is False
    code, _, _ = run(capsys, "solve", "--problem", "3sat", files["cnf"])
    assert code == 0
    code, out, _ = run(capsys, "solve", "--problem", "pd", "--d", "3", "--k", "1", files["wg"])
    assert code == 0


def test_input_errors(capsys, files, tmp_path):
    code, _, err = run(capsys, "solve", "--problem", "set-matching", "--k", "1", files["hg_bad"])
    assert code == 3 and "line 2" in err
    code, _, err = run(capsys, "solve", "--problem", "set-matching", "--k", "1", str(tmp_path / "nope"))
    assert code == 3 and "cannot read" in err
    code, _, err = run(capsys, "solve", "--problem", "set-matching", files["hg"])
    assert code == 3 and "--k" in err
    code, _, _ = run(capsys, "solve", "--problem", "star", "--k", "1", "--d", "2", files["hg"])
    assert code == 3
    code, _, _ = run(capsys, "frobnicate")
    assert code == 3


def test_kernelize_writes_kernel_and_trace(capsys, files, tmp_path):
    kout, tout = tmp_path / "k.txt", tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "kernelize", "--problem", "star", "--d", "3", "--k", "1", "--out", str(kout), "--trace", str(tout), files["star"])
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "yes" and rep["kernel"] is None
    assert parse_instance(kout.read_text()).m == 3
    last = json.loads(tout.read_text().splitlines()[-1])
    assert last["verdict"] == "yes"


def test_kernelize_p3_and_pd(capsys, files):
    code, out, _ = run(capsys, "kernelize", "--problem", "p3", "--k", "1", "--relaxed", files["star"])
    rep = json.loads(out)
    assert code == 0 and rep["info"]["strict"] is False
    code, out, _ = run(capsys, "kernelize", "--problem", "pd", "--d", "3", "--k", "1", "--witnesses", files["wg"])
    assert code == 0 and json.loads(out)["verdict"] == "yes"


@pytest.mark.parametrize(
    "argv,key",
    [
        (["switch", "--d", "3", "--s", "2"], "blocks"),
        (["selector", "--d", "4", "--m", "3", "--s", "2"], "blocks"),
        (["hyperedge", "--pattern", "P3"], "terminals"),
        (["packing", "--p", "3", "--t", "4"], "cliques"),
    ],
)
def test_gadgets(capsys, argv, key):
    code, out, _ = run(capsys, "gadget", *argv)
    rep = json.loads(out)
    assert code == 0 and key in rep
    parse_instance(rep["instance"])


def test_compose(capsys, files):
    code, out, _ = run(capsys, "compose", "or-pdm", files["pdm"], files["pdm"])
    assert code == 0 and json.loads(out)["t"] == 2
    code, out, _ = run(capsys, "compose", "pdm-to-kd", files["pdm"])
    assert json.loads(out)["k"] == 1
    code, out, _ = run(capsys, "compose", "or-3sat", "--d", "2", files["cnf"])
    assert json.loads(out)["k"] == 2
    code, out, _ = run(capsys, "compose", "or-hfactor", "--pattern", "K3", files["tri"], files["empty3"])
    assert code == 0 and json.loads(out)["p"] == 3
    code, out, _ = run(capsys, "compose", "clique-to-mcb", "--k", "2", files["star"])
    assert code == 0
    code, _, err = run(capsys, "compose", "or-hfactor", files["star"])
    assert code == 3 and "color" in err


def test_verify_is_deterministic(capsys):
    args = ["verify", "--problem", "p3", "--trials", "20", "--seed", "9"]
    code, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert code == 0 and a == b
    assert json.loads(a)["passed"] == 20


def test_curve_csv(capsys):
    code, out, _ = run(capsys, "curve", "--problem", "star", "--d", "3", "--kmin", "2", "--kmax", "4", "--trials", "4", "--n", "10,25", "--csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "k,mean_edges,max_edges,samples"
    assert lines[-1].startswith("# slope")


def test_module_entry_point(files):
    res = subprocess.run(
        [sys.executable, "-m", "packkernel", "solve", "--problem", "set-matching", "--k", "1", files["hg"]],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["answer"] is True
