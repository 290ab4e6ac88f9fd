"""Strict ``key = value`` config parsing against per-experiment schemas.

Format::

    # comment
    dim = 128
    sigma_phi = 0, 0.1, 0.2
    [grid]
    resolution = 25        # becomes key "grid.resolution"

Lists are comma separated.  Unknown keys, duplicate keys, bad types and
out-of-range values all raise :class:`ConfigError` carrying the key path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from ..exceptions import ConfigError, RangeError

__all__ = ["Param", "ConfigRangeError", "parse_config", "resolve"]


class ConfigRangeError(ConfigError, RangeError):
    pass


_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


@dataclass(frozen=True)
class Param:
    """Schema entry: ``kind`` in {int, float, bool, str, floats, ints, pair}."""

    kind: str
    default: Any
    check: Callable = None
    doc: str = ""


def _convert_scalar(kind, text, path):
    text = text.strip()
    try:
        if kind == "int":
            return int(text, 0) if text.lower().startswith(("0x", "0b", "0o")) else int(text)
        if kind == "float":
            return float(text)
        if kind == "bool":
            low = text.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(text)
        if kind == "str":
            return text.strip("\"'")
    except ValueError:
        raise ConfigError(f"expected {kind}, got {text!r}", path) from None
    raise ConfigError(f"unknown schema kind {kind!r}", path)


def _convert(param: Param, raw, path):
    if param.kind in ("floats", "ints", "pair"):
        items = raw if isinstance(raw, (list, tuple)) else [p for p in str(raw).split(",") if p.strip()]
        base = "int" if param.kind == "ints" else "float"
        vals = [_convert_scalar(base, str(v), path) if isinstance(v, str) else v for v in items]
        try:
            vals = [int(v) if base == "int" else float(v) for v in vals]
        except (TypeError, ValueError):
            raise ConfigError(f"expected a list of {base}s", path) from None
        if not vals:
            raise ConfigError("empty list", path)
        if param.kind == "pair":
            if len(vals) != 2:
                raise ConfigError(f"expected two values, got {len(vals)}", path)
            return tuple(vals)
        return vals
    if isinstance(raw, str):
        return _convert_scalar(param.kind, raw, path)
    if param.kind == "int" and isinstance(raw, bool) or param.kind == "int" and not float(raw).is_integer():
        raise ConfigError(f"expected int, got {raw!r}", path)
    cast = {"int": int, "float": float, "bool": bool, "str": str}[param.kind]
    return cast(raw)


def parse_config(text):
    """Split config text into an ordered ``{key_path: raw_string}`` mapping."""
    out = {}
    section = ""
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if not section:
                raise ConfigError(f"line {lineno}: empty section name")
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: missing key")
        path = f"{section}.{key}" if section else key
        if path in out:
            raise ConfigError(f"duplicate key (line {lineno})", path)
        out[path] = value
    return out


def resolve(schema, raw=None, overrides=None):
    """Apply defaults, convert and validate; returns params in schema order."""
    raw = dict(raw or {})
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = [k for k in raw if k not in schema]
    if unknown:
        raise ConfigError(f"unknown key (allowed: {', '.join(schema)})", unknown[0])
    params = {}
    for key, param in schema.items():
        value = _convert(param, raw[key], key) if key in raw else param.default
        if param.check is not None and value is not None:
            msg = param.check(value)
            if msg:
                raise ConfigRangeError(msg, key)
        params[key] = list(value) if isinstance(value, tuple) else value
    return params


def positive(v):
    vals = v if isinstance(v, (list, tuple)) else [v]
    return None if all(x > 0 for x in vals) else f"must be > 0, got {v}"


def non_negative(v):
    vals = v if isinstance(v, (list, tuple)) else [v]
    return None if all(x >= 0 for x in vals) else f"must be >= 0, got {v}"


def at_least(n):
    def check(v):
        return None if v >= n else f"must be >= {n}, got {v}"

    return check


def fractions_pct(v):
    return None if all(0 <= x <= 100 for x in v) else f"percentages must lie in [0, 100], got {v}"


def seed_range(v):
    return None if 0 <= v < 2**64 else f"seed must be an unsigned 64-bit integer, got {v}"
