import json

import pytest

from eo_theta import io
from eo_theta.config import DEFAULT_BUDGETS, ConfigError, RunConfig, budgets, parse_int_list


def test_budget_parsing():
    assert budgets({}) == DEFAULT_BUDGETS
    assert budgets({"EO_THETA_BUDGET": "500"})["iso"] == 500
    b = budgets({"EO_THETA_BUDGET": "comb=9, theta=4"})
    assert (b["comb"], b["theta"], b["iso"]) == (9, 4, DEFAULT_BUDGETS["iso"])
    with pytest.raises(ConfigError):
        budgets({"EO_THETA_BUDGET": "bogus=1"})
    with pytest.raises(ConfigError):
        budgets({"EO_THETA_BUDGET": "iso=lots"})


def test_int_lists():
    assert parse_int_list("3") == [3]
    assert parse_int_list("3-5,8") == [3, 4, 5, 8]
    assert parse_int_list("5,2,2") == [2, 5]
    for bad in ("", "a", "3-x"):
        with pytest.raises(ConfigError):
            parse_int_list(bad)


def test_run_config_checks():
    cfg = RunConfig("strata", n=[3, 9], p=[2])
    with pytest.raises(ConfigError):
        cfg.check("comb")
    with pytest.raises(ConfigError):
        RunConfig("strata", n=[3], p=[4]).check("comb")
    with pytest.raises(ConfigError):
        RunConfig("strata", n=[1]).check("comb")
    assert RunConfig("x", r=[1]).grid() == {"n": [3], "p": [2], "ext_degree": 1, "trunc": 3, "r": [1]}


@pytest.mark.parametrize("name", io.SCHEMAS)
def test_schemas_load(name):
    schema = io.load_schema(name)
    assert schema["$id"] == f"{name}.schema.json"


def test_schema_rejects_bad_module():
    obj = io.load_fixture("standard_3_2.json")
    io.validate(obj, "module")
    bad = dict(obj)
    bad["F"] = {"p": 2, "rows": "nope"}
    with pytest.raises(io.SchemaError, match="F"):
        io.validate(bad, "module")


def test_read_json_errors(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(io.SchemaError):
        io.read_json(path, "module")
    with pytest.raises(io.SchemaError):
        io.read_json(tmp_path / "missing.json")


def test_dumps_is_canonical():
    a = io.dumps({"b": 1, "a": [1, 2]})
    assert a == io.dumps(json.loads(a)) and a.endswith("\n")
    env = io.envelope("cmd", 3, {"n": [3]}, {"x": 1}, {"seconds": 1.0})
    assert set(env) == {"version", "command", "seed", "grid", "result", "timing"}
    assert "timing" not in io.strip_timing(env)
