import json
import subprocess
import sys

import pytest

from coxdom import cli
from coxdom.cone import ConeVerdict

from conftest import DATA


def run(*argv, datum="atilde1"):
    args = list(argv)
    if datum is not None:
        args += ["--datum", str(DATA / f"{datum}.cox")]
    return cli.run(args)


def test_roots_example():
    code, rep = run("roots", "--depth", "3")
    assert code == 0 and rep["status"] == "ok"
    res = rep["results"]
    assert res["count"] == 6
    assert [r["depth"] for r in res["roots"]] == [1, 1, 2, 2, 3, 3]
    assert res["roots"][4]["root"] == [3, 2]
    assert any("depth 3" in c for c in rep["caveats"])


def test_dn_example():
    code, rep = run("dn", "--n", "2")
    assert code == 0
    assert rep["results"]["sizes"] == {"0": 2, "1": 2, "2": 2}
    assert rep["results"]["complete_up_to"] == 2


def test_dominates_example():
    code, rep = run("dominates", "--x", "1,1", "--y", "1,0", datum="a2")
    assert code == 0
    assert rep["results"]["holds"] is False
    assert rep["results"]["reason"] == "inner-product-below-1"


def test_validate_and_small_roots():
    code, rep = run("validate", datum="atilde2")
    assert code == 0
    code, rep = run("small-roots", datum="atilde2")
    assert rep["results"]["count"] == 6


def test_height_by_word_and_by_root():
    _, a = run("height", "--word", "1.2.3.2.1", datum="atilde2")
    _, b = run("height", "--x", "2,1,1", datum="atilde2")
    assert a["results"] == b["results"]
    assert a["results"]["standard"] == 2 and a["results"]["infinity"] == 1
    code, rep = run("height", "--word", "1.2", datum="atilde2")
    assert code == 1 and rep["error"]["type"] == "InvalidArgument"


def test_tn_decompose_chains():
    _, rep = run("tn", "--n", "1")
    assert rep["results"]["sizes"] == {"0": 2, "1": 2}
    assert rep["results"]["sets"]["1"][0]["word"] == "1.2.1"
    _, rep = run("decompose", "--x", "1,0,0", "--depth", "3", datum="atilde2")
    assert rep["results"]["plane_count"] >= 3
    assert any("below l(t)" in c for c in rep["caveats"]) is False
    _, rep = run("chains", "--x", "1,0", "--y", "0,1", "--n", "3")
    res = rep["results"]
    assert res["subsystem"]["kind"] == "infinite" and res["subsystem"]["theta"] == 0
    assert res["chains"][0] == [[2, 1], [1, 0], [0, -1]]


def test_cone_and_witness():
    _, rep = run("cone", "--v", "1,1")
    assert rep["results"]["status"] == "member" and rep["results"]["witness"] == "e"
    _, rep = run("cone", "--x", "1,0", "--y", "2,1")
    assert rep["results"]["status"] == "not_member" and rep["results"]["tits_dual"] is False
    _, rep = run("witness", "--x", "2,1", "--y", "1,0")
    res = rep["results"]
    assert res["word"] == "1" and res["wx"] == [0, 1] and res["wy"] == [-1, 0]
    assert res["cover"] is True
    _, rep = run("witness", "--x", "3,2", "--y", "1,0")
    assert rep["results"]["cover"] is False and rep["results"]["between"] == [2, 1]


def test_verify_and_report():
    code, rep = run("verify", "--depth", "5")
    assert code == 0 and rep["results"]["ok"]
    code, rep = run("report", "--depth", "4", datum="a2")
    res = rep["results"]
    assert code == 0 and res["finite_group"] and res["positive_roots"] == 3
    assert res["dominated_pairs"] == 0


@pytest.mark.parametrize("argv,exit_code,kind", [
    (["roots", "--depth", "0"], 1, "InvalidArgument"),
    (["frobnicate"], 1, "InvalidArgument"),
    (["dominates", "--x", "1,1", "--y", "1,0"], 1, "UnknownRoot"),
    (["dominates", "--x", "1,0,0", "--y", "1,0"], 1, "DimensionMismatch"),
    (["witness", "--x", "1,0", "--y", "2,1"], 1, "NotDominant"),
    (["roots", "--threads", "0"], 1, "InvalidArgument"),
])
def test_error_records(argv, exit_code, kind):
    code, rep = run(*argv)
    assert code == exit_code and rep["status"] == "error"
    assert rep["error"]["type"] == kind


def test_bad_datum_files(tmp_path):
    bad = tmp_path / "bad.cox"
    bad.write_text("rank 2\nbond 1 2 1\n")
    code, rep = cli.run(["validate", "--datum", str(bad)])
    assert code == 1 and rep["error"]["type"] in ("InvalidBond", "ParseError")
    code, rep = cli.run(["report", "--datum", str(tmp_path / "missing.cox")])
    assert code == 1 and "results" not in rep
    code, rep = cli.run(["roots"])
    assert code == 1


def test_cap_maps_to_exit_two(monkeypatch):
    monkeypatch.setattr(cli, "imaginary_cone_contains",
                        lambda *a, **k: ConeVerdict("inconclusive", None, "cap"))
    code, rep = run("cone", "--v", "1,1")
    assert code == 2 and rep["status"] == "inconclusive"


def test_output_is_deterministic():
    outs = set()
    for threads in ("1", "4", "1"):
        _, rep = run("report", "--depth", "5", "--threads", threads, datum="triangle_337")
        outs.add(json.dumps(rep, sort_keys=False))
    assert len(outs) == 1
    _, rep = run("roots", "--timing")
    assert "timing" in rep


def test_rational_backend_prints_fractions():
    _, rep = run("chains", "--x", "1,0", "--y", "0,1", "--n", "3", "--backend", "rational",
                 datum="hyperbolic_rank2")
    assert rep["results"]["alpha_side"][2] == [8, 3]


def test_console_entry_point_and_pretty():
    out = subprocess.run([sys.executable, "-m", "coxdom", "dn", "--datum", str(DATA / "atilde1.cox"),
                          "--n", "1", "--pretty"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "status: ok" in out.stdout and "{" not in out.stdout
    out = subprocess.run([sys.executable, "-m", "coxdom", "roots"], capture_output=True, text=True)
    assert out.returncode == 1
    assert json.loads(out.stdout)["status"] == "error"
