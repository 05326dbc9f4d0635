"""Potential config documents and tabular output.

A config is a JSON object whose keys are the dataclass field names of the
potential, plus ``name`` (``"V1"`` .. ``"V4"``) and an optional
``constants`` object with the fields of :class:`~superint.model.Constants`.
Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
import re
from typing import Any, Iterable, Sequence

from . import model
from .errors import SuperintError

POTENTIALS = {"V1": model.V1, "V2": model.V2, "V3": model.V3, "V4": model.V4}


class ConfigError(SuperintError, ValueError):
    """A config document that cannot be turned into a potential."""

    def __init__(self, message: str, source: str = "<config>", line: int | None = None,
                 field: str | None = None):
        self.source, self.line, self.field = source, line, field
        where = source if line is None else f"{source}:{line}"
        prefix = f"{where}: field {field!r}: " if field else f"{where}: "
        super().__init__(prefix + message)


def _key_line(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _number(value, key, text, source, *, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("expected a number", source, _key_line(text, key), key)
    return float(value)


def _fields(cls) -> list[str]:
    return [f.name for f in dataclasses.fields(cls)]


def _check_keys(obj: dict, allowed: Iterable[str], text: str, source: str, where: str = ""):
    allowed = set(allowed)
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key{where}; allowed: {', '.join(sorted(allowed))}",
                              source, _key_line(text, key), key)


def _table(obj, text, source) -> model.AngularTable:
    if not isinstance(obj, dict):
        raise ConfigError("expected an object", source, _key_line(text, "table"), "table")
    _check_keys(obj, _fields(model.AngularTable), text, source, " in table")

    def arr(key, depth):
        val = obj.get(key, [] if key == "f_values" else None)
        ok = isinstance(val, list) and all(
            (isinstance(v, list) and all(isinstance(u, (int, float)) and not isinstance(u, bool) for u in v))
            if depth == 2 else (isinstance(v, (int, float)) and not isinstance(v, bool)) for v in val)
        if not ok:
            raise ConfigError("expected an array of numbers" + (" arrays" if depth == 2 else ""),
                              source, _key_line(text, key), f"table.{key}")
        return tuple(tuple(float(u) for u in v) for v in val) if depth == 2 else tuple(float(v) for v in val)

    return model.AngularTable(arr("lambda_phi", 1), arr("phi", 1), arr("values", 2), arr("f_values", 1))


def parse_config(text: str, source: str = "<config>") -> tuple[model.PotentialSpec, model.Constants]:
    """Build ``(spec, constants)`` from a JSON document, failing closed."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (column {exc.colno})", source, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a JSON object", source, 1)
    if "name" not in doc:
        raise ConfigError("missing potential name", source, 1, "name")
    name = doc["name"]
    if name not in POTENTIALS:
        raise ConfigError(f"unknown potential {name!r}; choose from {', '.join(POTENTIALS)}",
                          source, _key_line(text, "name"), "name")
    cls = POTENTIALS[name]
    fields = _fields(cls)
    _check_keys(doc, ["name", "constants", *fields], text, source)

    kwargs: dict[str, Any] = {}
    for f in dataclasses.fields(cls):
        if f.name not in doc:
            if f.default is dataclasses.MISSING:
                raise ConfigError(f"missing required field for {name}", source, 1, f.name)
            continue
        val = doc[f.name]
        if f.name in ("s1", "s2"):
            if val not in model.SIGNS:
                raise ConfigError("expected \"plus\" or \"minus\"", source, _key_line(text, f.name), f.name)
            kwargs[f.name] = val
        elif f.name == "table":
            kwargs[f.name] = None if val is None else _table(val, text, source)
        else:
            kwargs[f.name] = _number(val, f.name, text, source, allow_none=f.name == "gamma")

    consts = doc.get("constants", {})
    if not isinstance(consts, dict):
        raise ConfigError("expected an object", source, _key_line(text, "constants"), "constants")
    _check_keys(consts, _fields(model.Constants), text, source, " in constants")
    ckw = {k: _number(v, k, text, source) for k, v in consts.items()}

    try:
        return cls(**kwargs), model.Constants(**ckw)
    except SuperintError as exc:
        raise ConfigError(str(exc), source) from None


def load_config(path: str) -> tuple[model.PotentialSpec, model.Constants]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None
    return parse_config(text, path)


# -- output ------------------------------------------------------------------

def format_number(x) -> str:
    """Shortest round-trip text of a float (at most 17 significant digits)."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines += [",".join(format_number(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def to_json(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    records = [dict(zip(header, row)) for row in rows]
    return json.dumps(records, indent=2, allow_nan=True) + "\n"


def render(header: Sequence[str], rows: Iterable[Sequence], fmt: str) -> str:
    rows = list(rows)
    return to_csv(header, rows) if fmt == "csv" else to_json(header, rows)
