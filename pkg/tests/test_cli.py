"""End-to-end command runs: reports, exit codes, determinism."""

import io
import contextlib
import json
import os

import pytest

from vcreg.cli import main


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def report(argv):
    code, out, _ = run(argv)
    return code, json.loads(out)


def test_dyadic_density_frozen():
    code, rep = report(["dyadic", "density", "--depth", "4"])
    assert code == 0
    assert rep["outputs"]["density"] == "1/3"
    assert rep["verification"]["brute_recount_equal"]


def test_vc_dim_empty_family(write_json):
    p = write_json("empty.json", {"ground_size": 5, "members": []})
    code, rep = report(["vc", "dim", "--in", p])
    assert code == 0
    assert rep["outputs"]["value"] == 0


def test_reg_partition_on_half16(tmp_path):
    inst = str(tmp_path / "half16.json")
    code, _rep = report(["gen", "half-graph", "--sizes", "16,16",
                         "--out", inst])
    assert code == 0
    code, rep = report(["reg", "partition", "--in", inst, "--epsilon", "1/4"])
    assert code == 0
    assert rep["ok"] and rep["verification"]["ok"]
    num, den = map(int, rep["verification"]["sigma_mass"].split("/"))
    assert num * 4 <= den


def test_gen_writes_instance_not_report(tmp_path):
    inst = str(tmp_path / "i.json")
    code, rep = report(["gen", "block-union", "--sizes", "12,12",
                        "--blocks", "3", "--seed", "1", "--out", inst])
    assert code == 0
    obj = json.load(open(inst))
    assert set(obj) == {"spec", "hypergraph", "measures", "measured"}
    assert rep["verification"]["roundtrip_equal"]


def test_partition_report_feeds_verify(tmp_path):
    inst = str(tmp_path / "h.json")
    report(["gen", "half-graph", "--sizes", "12,12", "--out", inst])
    rep_path = str(tmp_path / "rep.json")
    code, _, _ = run(["reg", "partition", "--in", inst, "--epsilon", "1/4",
                      "--out", rep_path])
    assert code == 0
    code, rep = report(["reg", "verify", "--in", inst, "--epsilon", "1/4",
                        "--partition", rep_path])
    assert code == 0 and rep["ok"]


def test_verify_rejects_bad_partition(tmp_path, write_json):
    inst = str(tmp_path / "h.json")
    report(["gen", "half-graph", "--sizes", "4,4", "--out", inst])
    bad = write_json("bad.json", {
        "epsilon": "1/10",
        "classes": [[[0, 1, 2, 3]], [[0, 1, 2, 3]]],
        "sigma": [], "labels": [], "provenance": [[], []],
    })
    code, rep = report(["reg", "verify", "--in", inst, "--partition", bad])
    assert code == 1
    assert not rep["ok"]
    kinds = {v["kind"] for v in rep["verification"]["violations"]}
    assert "box_not_01_dense" in kinds


def test_exit_codes():
    code, _, _ = run(["dyadic", "density", "--no-such-flag"])
    assert code == 2
    code, rep = report(["vc", "dim", "--in", "/nonexistent.json"])
    assert code == 2 and rep["error"]["kind"] == "input"
    # decimal epsilon is rejected: rationals are num/den strings
    code, _, _ = run(["dyadic", "density", "--depth", "4"])
    assert code == 0
    code, _, _ = run(["reg", "partition", "--in", "x.json",
                      "--epsilon", "0.25"])
    assert code == 2


def test_ehbox_premise_failure_is_input_error(tmp_path):
    inst = str(tmp_path / "sparse.json")
    report(["gen", "block-union", "--sizes", "16,16", "--blocks", "4",
            "--seed", "3", "--out", inst])
    code, rep = report(["reg", "eh-box", "--in", inst, "--epsilon", "1/10",
                        "--alpha", "2/5"])
    assert code == 2
    assert rep["error"]["kind"] == "input"


def test_every_computing_report_has_verification(tmp_path):
    inst = str(tmp_path / "h.json")
    report(["gen", "half-graph", "--sizes", "8,8", "--out", inst])
    for argv in (
        ["vc", "dim", "--in", inst],
        ["vc", "shatter", "--in", inst, "--n", "4"],
        ["vc", "net", "--in", inst, "--epsilon", "1/4"],
        ["reg", "partition", "--in", inst, "--epsilon", "1/2"],
        ["reg", "rect", "--in", inst, "--epsilon", "1/2"],
        ["stable", "ladder", "--in", inst],
        ["stable", "partition", "--in", inst, "--epsilon", "1/4"],
        ["dyadic", "density", "--depth", "3"],
        ["dyadic", "report", "--depth", "4"],
        ["dyadic", "bound", "--depth", "5", "--prefix", "0", "--prefix", "10"],
        ["convexity", "density", "--n", "8"],
        ["convexity", "involution", "--interval", "1..5"],
        ["rodl", "search", "--depth", "5", "--eps", "1/3"],
    ):
        code, rep = report(argv)
        assert code == 0, (argv, rep.get("error"))
        assert rep["verification"], argv
        assert rep["ok"], argv


def test_reports_are_deterministic(tmp_path):
    inst = str(tmp_path / "h.json")
    report(["gen", "half-graph", "--sizes", "16,16", "--out", inst])
    argv = ["reg", "partition", "--in", inst, "--epsilon", "1/4"]
    _, a = report(argv)
    _, b = report(argv)
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_out_file_matches_stdout(tmp_path):
    inst = str(tmp_path / "h.json")
    report(["gen", "half-graph", "--sizes", "8,8", "--out", inst])
    argv = ["stable", "ladder", "--in", inst]
    _, via_stdout = report(argv)
    out_path = str(tmp_path / "r.json")
    code, stdout_text, _ = run(argv + ["--out", out_path])
    assert code == 0 and stdout_text == ""
    via_file = json.load(open(out_path))
    via_stdout.pop("timing"), via_file.pop("timing")
    assert via_file == via_stdout


def test_threads_env_recorded(monkeypatch):
    monkeypatch.setenv("VCREG_THREADS", "4")
    code, rep = report(["dyadic", "density", "--depth", "3"])
    assert code == 0
    assert rep["env"]["vcreg_threads"] == {"requested": 4, "effective": 1}
    monkeypatch.setenv("VCREG_THREADS", "zero?")
    code, rep = report(["dyadic", "density", "--depth", "3"])
    assert code == 2 and rep["error"]["kind"] == "input"


def test_rodl_graph_mode(write_json):
    n = 12
    edges = [[x, y] for x in range(n) for y in range(n)
             if x != y and (x < 6) == (y < 6)]
    p = write_json("sym.json", {"hypergraph": {
        "k": 2, "part_sizes": [n, n], "edges": edges, "symmetric": True}})
    code, rep = report(["rodl", "search", "--in", p, "--eps", "1/8",
                        "--m", "2"])
    assert code == 0
    assert rep["outputs"]["found"]
    assert rep["outputs"]["density"] == "1/1"


def test_selftest_subcommand_filter():
    code, out, err = run(["selftest", "core.fiber"])
    assert code == 0
    rep = json.loads(out)
    assert rep["outputs"]["passed"] >= 1
    assert "PASS" in err


def test_rational_outputs_never_use_floats(tmp_path):
    inst = str(tmp_path / "h.json")
    report(["gen", "half-graph", "--sizes", "8,8", "--out", inst])
    code, out, _ = run(["reg", "rect", "--in", inst, "--epsilon", "1/3"])
    rep = json.loads(out)
    assert code == 0

    def no_float(x):
        assert not isinstance(x, float), x
        if isinstance(x, dict):
            for v in x.values():
                no_float(v)
        elif isinstance(x, list):
            for v in x:
                no_float(v)

    body = dict(rep)
    body.pop("timing")  # wall-clock seconds are the one sanctioned float
    no_float(body)
