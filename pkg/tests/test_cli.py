import json

import pytest

from linkforge.cli import main, run


def report(argv):
    code, rep = run(argv)
    return code, rep


def strip_timing(rep):
    return {k: v for k, v in rep.items() if k != "timing"}


def test_verify_cg():
    code, rep = report(["verify-cg", "--seeds", "12"])
    assert code == 0 and rep["results"]["all_one"]
    assert set(rep) == {"command", "inputs_digest", "results", "timing", "seed", "version"}


def test_verify_cg_threads_same_result():
    _, a = report(["verify-cg", "--seeds", "8"])
    _, b = report(["--threads", "2", "verify-cg", "--seeds", "8"])
    assert strip_timing(a) == strip_timing(b)


def test_bounds():
    code, rep = report(["bounds", "--q", "1", "--n", "1"])
    assert code == 0 and rep["results"]["key"] == 24
    _, rep = report(["bounds", "--q", "1", "--n", "1", "--r", "2"])
    assert rep["results"]["stage_sizes"] == [1024, 16, 2]


def test_stitch_and_replay(tmp_path):
    inp, tr = tmp_path / "in.json", tmp_path / "tr.json"
    assert run(["gen-stitch-input", "--S", "1", "--T", "1", "--q", "2", "--seed", "5", "--out", str(inp)])[0] == 0
    code, rep = report(["stitch", "--input", str(inp), "--trace-out", str(tr)])
    assert code == 0 and rep["results"]["verified"]
    code, again = report(["stitch", "--input", str(inp), "--replay", str(tr)])
    assert code == 0 and again["results"]["matches"] and again["results"]["z"] == rep["results"]["z"]
    obj = json.loads(tr.read_text())
    obj["x_signs"] = [-s for s in obj["x_signs"]]
    tr.write_text(json.dumps(obj))
    assert run(["stitch", "--input", str(inp), "--replay", str(tr)])[0] == 1


def test_paths_and_prism(tmp_path):
    p = tmp_path / "p.json"
    code, rep = report(["gen-path", "--n", "2", "--len", "4", "--out", str(p)])
    assert code == 0 and rep["results"]["vertices"] == 6 and rep["results"]["boundary_ridges"] == 6
    code, rep = report(["gen-prism", "--disc", str(p), "--m", "30"])
    assert code == 0 and rep["results"]["vertices"] == rep["results"]["vsphere_upper"]


def test_lk_and_search(tmp_path):
    e = tmp_path / "e.json"
    run(["gen-embedding", "--N", "6", "--seed", "2", "--out", str(e)])
    code, rep = report(["lk", "--embedding", str(e), "--c1", "0", "1", "2", "--c2", "3", "4", "5", "--oracle"])
    assert code == 0 and rep["results"]["lk"] == rep["results"]["oracle"]
    assert run(["lk", "--embedding", str(e), "--c1", "0", "1", "2", "--c2", "2", "4", "5"])[0] == 2
    code, rep = report(["search-modq", "--N", "6", "--q", "1", "--seed", "2", "--budget", "100"])
    assert code == 0 and rep["results"]["found"]["lk"] != 0


def test_two_component_and_keyring(tmp_path):
    code, rep = report(["two-component", "--keys", "1", "1", "2", "--q", "2"])
    assert code == 0 and rep["results"]["lk"] == 2
    inst = tmp_path / "k.json"
    inst.write_text(json.dumps({"m": 2, "s": [1, 0, 1, 0],
                                "M": [[int(i == j) for j in range(4)] for i in range(4)]}))
    code, rep = report(["keyring", "--instance", str(inst)])
    assert code == 0 and rep["results"]["A"] == [2, 4] and rep["results"]["I"] == [1, 2, 3, 4]


def test_theorem_command():
    code, rep = report(["theorem", "--r", "2", "--q", "1", "--seed", "4"])
    assert code == 0 and rep["results"]["replayed"]


def test_usage_errors(tmp_path, capsys):
    assert run(["nope"])[0] == 2
    assert run(["bounds", "--q", "0", "--n", "1"])[0] == 2
    assert run(["stitch", "--input", str(tmp_path / "missing.json")])[0] == 2
    capsys.readouterr()


def test_determinism_and_pretty(capsys):
    assert main(["--pretty", "two-component", "--keys", "3", "--q", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("{\n")
    a = strip_timing(run(["search-modq", "--N", "7", "--q", "2", "--seed", "1", "--budget", "50"])[1])
    b = strip_timing(run(["search-modq", "--N", "7", "--q", "2", "--seed", "1", "--budget", "50"])[1])
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_env_threads(monkeypatch):
    monkeypatch.setenv("LINKFORGE_THREADS", "3")
    from linkforge.cli import build_parser
    assert build_parser().parse_args(["bounds", "--q", "1", "--n", "1"]).threads == 3
