"""Suite configuration files.

Grammar: one ``key = value`` assignment per line, ``#`` starts a comment,
values are numbers, quoted strings, ``true``/``false`` or ``[...]`` lists.
This is the flat subset of TOML; tables are rejected.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import tomli

from .gallery import GALLERY

SEED_MAX = 2**64


class ConfigError(ValueError):
    """Invalid or incomplete configuration (a usage error)."""


@dataclass(frozen=True)
class Param:
    kind: type
    default: Any
    check: Optional[Callable] = None
    doc: str = ""
    many: bool = False


def positive(x):
    return x > 0


def above_one(x):
    return x > 1


def unit_open(x):
    return 0 < x < 1


def count(x):
    return x >= 1


COMMON = {
    "seed": Param(int, None, lambda x: 0 <= x < SEED_MAX, "64-bit RNG seed (required)"),
    "map": Param(str, None, lambda x: x in GALLERY, "gallery map id"),
    "n": Param(int, 2, lambda x: x >= 2, "complex dimension"),
    "expect": Param(str, "auto", lambda x: x in ("auto", "pass", "fail"),
                    "expected outcome; auto reads the gallery metadata"),
}


def load_text(text):
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError(f"tables are not allowed ([{key}])")
    return data


def load_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return load_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None


def _coerce(key, spec, value):
    def one(v):
        if spec.kind is float and isinstance(v, int) and not isinstance(v, bool):
            v = float(v)
        if spec.kind is not bool and isinstance(v, bool):
            raise ConfigError(f"{key}: expected {spec.kind.__name__}, got a boolean")
        if not isinstance(v, spec.kind):
            raise ConfigError(f"{key}: expected {spec.kind.__name__}, got {type(v).__name__}")
        if spec.check is not None and not spec.check(v):
            raise ConfigError(f"{key}: value {v!r} out of range ({spec.doc})")
        return v

    if spec.many:
        if not isinstance(value, list) or not value:
            raise ConfigError(f"{key}: expected a non-empty list")
        return [one(v) for v in value]
    return one(value)


@dataclass
class SuiteConfig:
    suite: str
    seed: int
    map_id: str
    n: int
    expect: str
    params: dict = field(default_factory=dict)

    def echo(self):
        out = {"suite": self.suite, "map": self.map_id, "n": self.n,
               "expect": self.expect, "seed": self.seed}
        out.update(self.params)
        return out


def build_config(suite, schema, raw, default_map, seed_override=None):
    """Validate ``raw`` against ``COMMON`` plus ``schema`` and fill defaults."""
    raw = dict(raw)
    if seed_override is not None:
        raw["seed"] = seed_override
    known = {**COMMON, **schema}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigError(f"unknown keys for {suite}: {', '.join(unknown)}")
    if "seed" not in raw:
        raise ConfigError("missing required key: seed")
    values = {}
    for key, spec in known.items():
        if key in raw:
            values[key] = _coerce(key, spec, raw[key])
        else:
            values[key] = spec.default
    map_id = values.pop("map") or default_map
    seed = values.pop("seed")
    n = values.pop("n")
    expect = values.pop("expect")
    return SuiteConfig(suite=suite, seed=seed, map_id=map_id, n=n, expect=expect,
                       params={k: values[k] for k in schema})
