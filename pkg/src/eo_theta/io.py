"""JSON schemas, fixtures and report serialisation."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from . import __version__

SCHEMAS = ("matrix", "module", "section", "filtspec")


class SchemaError(ValueError):
    pass


@lru_cache(maxsize=None)
def load_schema(name):
    text = resources.files("eo_theta").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry():
    return Registry().with_resources(
        (f"{name}.schema.json", Resource.from_contents(load_schema(name))) for name in SCHEMAS)


def validate(obj, name):
    validator = jsonschema.Draft202012Validator(load_schema(name), registry=_registry())
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(x) for x in err.absolute_path) or "<root>"
        raise SchemaError(f"{name} schema violation at {where}: {err.message}")
    return obj


def read_json(path, schema=None):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    return validate(obj, schema) if schema else obj


def fixture_path(name):
    return resources.files("eo_theta").joinpath("fixtures", name)


def load_fixture(name):
    return json.loads(fixture_path(name).read_text())


def dumps(obj):
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def envelope(command, seed, grid, result, timing):
    return {"version": __version__, "command": command, "seed": seed, "grid": grid,
            "result": result, "timing": timing}


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}
