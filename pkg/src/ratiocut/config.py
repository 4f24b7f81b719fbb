"""Plain-text ``key = value`` configuration.

Grammar: one ``key = value`` pair per line; ``#`` starts a comment; blank
lines are ignored; keys are case-sensitive identifiers from ``DEFAULTS``.
Values are parsed with the type of the default (``none`` clears an
optional value).  The file named by ``RATIOCUT_CONFIG`` is read when no
``--config`` flag is given; command-line flags override file values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import DomainError

ENV_VAR = "RATIOCUT_CONFIG"

# key -> (type, default)
DEFAULTS = {
    "gate": (float, 0.25),
    "extend_gate": (float, None),
    "seed": (int, 0),
    "out": (str, "."),
    "format": (str, "all"),
    "count": (int, 21),
    "workers": (int, 1),
    "order": (str, "first"),
    "steps": (int, 6),
    "policy": (str, "away-from-original"),
    "iq_gate": (float, 1.0),
    "n_points": (int, 2000),
    "knn": (int, 10),
    "bandwidth": (float, None),
    "radius": (float, None),
    "starts": (int, 5),
    "width": (float, 2.0),
    "height": (float, 1.0),
}


class ConfigError(DomainError):
    pass


def _convert(key, raw: str):
    typ, _ = DEFAULTS[key]
    raw = raw.strip()
    if raw.lower() == "none":
        return None
    try:
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc


def parse_config(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = _convert(key, value)
    return out


def load_config(path: str | None = None) -> dict:
    """Defaults updated by the config file (explicit path, else ``RATIOCUT_CONFIG``)."""
    cfg = {k: v for k, (_, v) in DEFAULTS.items()}
    path = path or os.environ.get(ENV_VAR)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg.update(parse_config(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    return cfg


def merge(cfg: dict, overrides: dict) -> dict:
    out = dict(cfg)
    out.update({k: v for k, v in overrides.items() if v is not None})
    return out
