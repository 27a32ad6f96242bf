"""Path-aware field accessors for JSON-shaped dictionaries.

Every reader reports the full dotted path of the offending field so that
parse failures on hand-edited files point at the exact location.
"""

from __future__ import annotations

from typing import Any

from .errors import SchemaError


def _kind(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "number"
    return type(value).__name__


def get_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{path}: expected object, got {_kind(value)}")
    return value


def get_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{path}: expected array, got {_kind(value)}")
    return value


def require(mapping: Any, key: str, path: str) -> Any:
    obj = get_object(mapping, path)
    if key not in obj:
        raise SchemaError(f"{path}.{key}: missing required field")
    return obj[key]


def require_str(mapping: Any, key: str, path: str) -> str:
    value = require(mapping, key, path)
    if not isinstance(value, str):
        raise SchemaError(f"{path}.{key}: expected string, got {_kind(value)}")
    return value


def require_bool(mapping: Any, key: str, path: str) -> bool:
    value = require(mapping, key, path)
    if not isinstance(value, bool):
        raise SchemaError(f"{path}.{key}: expected boolean, got {_kind(value)}")
    return value


def require_int(mapping: Any, key: str, path: str) -> int:
    value = require(mapping, key, path)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{path}.{key}: expected integer, got {_kind(value)}")
    return value


def require_real(mapping: Any, key: str, path: str) -> float:
    value = require(mapping, key, path)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}.{key}: expected number, got {_kind(value)}")
    return float(value)


def optional_bool(mapping: dict, key: str, path: str, default: bool) -> bool:
    if key not in mapping:
        return default
    return require_bool(mapping, key, path)


def optional_int(mapping: dict, key: str, path: str, default: int) -> int:
    if key not in mapping:
        return default
    return require_int(mapping, key, path)


def optional_str(mapping: dict, key: str, path: str, default: str | None) -> str | None:
    if key not in mapping or mapping[key] is None:
        return default
    return require_str(mapping, key, path)
