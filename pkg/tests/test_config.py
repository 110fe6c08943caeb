import json

import pytest

from linvariants.config import ConfigError, load_config, parse_config

BASE = {"p": 5, "N": 12, "depth": 8, "weight": {"k": [2], "w": 2}, "group": {"fixture": "tate_rank1.json"}}


def cfg(**changes):
    obj = dict(BASE)
    obj.update(changes)
    return parse_config(obj)


def test_defaults_are_filled_in():
    c = cfg()
    assert (c.d, c.guard, c.tau, c.branch) == (1, 2, 0, "iwasawa")
    assert c.working_precision == c.N + c.budget
    assert c.fixture_path().name == "tate_rank1.json"
    out = c.to_json()
    assert out["working_precision"] == c.working_precision


@pytest.mark.parametrize(
    "changes",
    [
        {"N": 5},
        {"p": 6},
        {"depth": 0},
        {"weight": {"k": [3], "w": 2}},
        {"weight": {"k": [2, 2], "w": 2}},
        {"group": {}},
        {"tau": 3},
    ],
)
def test_invalid_configs_are_rejected(changes):
    with pytest.raises(ConfigError):
        cfg(**changes)


def test_missing_fixture(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(dict(BASE, group={"fixture": "nope.json"})))
    with pytest.raises(ConfigError, match="fixture not found"):
        load_config(path).fixture_path()


def test_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)


def test_budget_grows_with_weight():
    assert cfg(weight={"k": [4], "w": 4}).budget > cfg().budget
