"""Named JSON schemas for every interchange format the package speaks.

The shapes live in one versioned document shipped as package data; each
public name is a definition in it.  ``validate_payload`` is the gate the
command line runs inputs through before doing any arithmetic, so a
malformed payload fails with a pointer to the offending field instead of
a stack trace from deep inside the math.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from .errors import InputError

__all__ = ["SCHEMA_VERSION", "schema_names", "schema_for", "validate_payload"]

SCHEMA_VERSION = 1

_DOCUMENT = "circledeg-v1.schema.json"


@lru_cache(maxsize=1)
def _document() -> dict:
    text = resources.files("circledeg.schemas").joinpath(_DOCUMENT).read_text("utf-8")
    return json.loads(text)


def schema_names() -> list[str]:
    return sorted(_document()["$defs"])


@lru_cache(maxsize=None)
def schema_for(name: str) -> dict:
    """Self-contained schema for one named definition."""
    doc = _document()
    if name not in doc["$defs"]:
        raise KeyError(f"no schema named {name!r}")
    return {
        "$schema": doc["$schema"],
        "$ref": f"#/$defs/{name}",
        "$defs": doc["$defs"],
    }


@lru_cache(maxsize=None)
def _validator(name: str) -> jsonschema.Draft202012Validator:
    return jsonschema.Draft202012Validator(schema_for(name))


def validate_payload(name: str, obj: object) -> None:
    """Raise :class:`InputError` naming the failing field when ``obj``
    does not match the schema ``name``."""
    best = jsonschema.exceptions.best_match(_validator(name).iter_errors(obj))
    if best is None:
        return
    where = best.json_path if best.json_path != "$" else "payload"
    raise InputError(f"invalid {name} at {where}: {best.message}")
