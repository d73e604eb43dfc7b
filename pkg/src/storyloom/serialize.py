"""Dataclass <-> plain-dict conversion used by persistence and the service.

``to_plain`` flattens each value object's ``extra`` dict back into the
record, so fields written by a newer schema survive a load/save round trip
byte for byte.  ``from_plain`` routes unknown keys into ``extra``.
"""

from __future__ import annotations

import dataclasses
import types
import typing
from enum import Enum
from typing import Any, get_args, get_origin, get_type_hints

_hints_cache: dict[type, dict] = {}


def _hints(cls: type) -> dict:
    if cls not in _hints_cache:
        _hints_cache[cls] = get_type_hints(cls)
    return _hints_cache[cls]


def to_plain(value: Any) -> Any:
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        out = {}
        for f in dataclasses.fields(value):
            if f.name == "extra":
                continue
            out[f.name] = to_plain(getattr(value, f.name))
        for key, v in getattr(value, "extra", {}).items():
            if key not in out:
                out[key] = to_plain(v)
        return out
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: to_plain(v) for k, v in value.items()}
    return value


def _decode(hint: Any, value: Any) -> Any:
    origin = get_origin(hint)
    if origin in (typing.Union, types.UnionType):
        args = [a for a in get_args(hint) if a is not type(None)]
        if value is None:
            return None
        return _decode(args[0], value)
    if hint is Any or hint is None:
        return value
    if isinstance(hint, type) and issubclass(hint, Enum):
        return hint(value)
    if dataclasses.is_dataclass(hint):
        return from_plain(hint, value)
    if origin is tuple:
        args = get_args(hint)
        items = list(value)
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_decode(args[0], v) for v in items)
        return tuple(_decode(a, v) for a, v in zip(args, items))
    if origin is list:
        (arg,) = get_args(hint)
        return [_decode(arg, v) for v in value]
    if origin is dict:
        _, val_arg = get_args(hint)
        return {k: _decode(val_arg, v) for k, v in value.items()}
    return value


def from_plain(cls: type, data: dict) -> Any:
    """Build dataclass ``cls`` from ``data``; unknown keys go to ``extra``."""
    hints = _hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs: dict[str, Any] = {}
    extra: dict[str, Any] = {}
    for key, value in data.items():
        if key in names and key != "extra":
            kwargs[key] = _decode(hints[key], value)
        else:
            extra[key] = value
    if "extra" in names:
        kwargs["extra"] = extra
    return cls(**kwargs)
