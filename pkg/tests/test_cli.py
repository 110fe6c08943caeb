import copy
import json
import subprocess
import sys

import pytest

from linvariants.cli import main

from conftest import CONFIGS, fixture_json


def run(argv, capsys):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_explore_tree_depth_one(capsys):
    code, out = run(["explore", "tree", "--config", str(CONFIGS / "tate_w2.json"), "--depth", "1"], capsys)
    assert code == 0
    assert len(out["edges"]) == 6
    assert all("ball" in e for e in out["edges"])


def test_explore_graph_of_length_two_loop(capsys):
    code, out = run(["explore", "graph", "--config", str(CONFIGS / "tate_w2.json")], capsys)
    comp = out["components"][0]
    assert (comp["vertex_count"], comp["edge_count"]) == (2, 2)


def test_explore_cocycles(capsys):
    code, out = run(["explore", "cocycles", "--config", str(CONFIGS / "tate_w2.json")], capsys)
    assert out["components"][0]["dimension"] == 1


def test_compute_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["compute", "--config", str(CONFIGS / "loop_w2.json"), "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["ok"] and rep["config"]["guard"] == 2


def test_invalid_config_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"p": 5, "N": 4, "depth": 8, "weight": {"k": [2], "w": 2},
                                "group": {"fixture": "tate_rank1.json"}}))
    code, out = run(["compute", "--config", str(path)], capsys)
    assert code == 2
    assert out["module"] == "config" and "hint" in out


def test_verify_rank_one(capsys):
    code, out = run(["verify", "--config", str(CONFIGS / "tate_w2.json")], capsys)
    assert code == 0
    assert out["ok"]
    assert set(out["summary"]) >= {"harmonicity", "exact_sequence", "stability"}


def test_verify_reports_corrupted_involution(capsys, tmp_path):
    obj = copy.deepcopy(fixture_json("tate_rank1.json"))
    obj["edges"][1]["reverse"] = 1
    (tmp_path / "broken.json").write_text(json.dumps(obj))
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({"p": 5, "N": 12, "depth": 8, "weight": {"k": [2], "w": 2},
                                "group": {"fixture": "broken.json"}}))
    code, out = run(["verify", "--config", str(conf)], capsys)
    assert code == 1
    harm = out["groups"]["harmonicity"]
    assert not harm["pass"]
    assert "edge 1" in harm["checks"][0]["detail"]["error"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "linvariants", "explore", "tree", "--config",
                          str(CONFIGS / "tate_w2.json")], capture_output=True, text=True)
    assert res.returncode == 0
    assert len(json.loads(res.stdout)["edges"]) == 6
