"""Scenario configuration: JSON file plus command-line overrides.

A config file is a flat JSON object; unknown keys are rejected. Grid-valued
keys (distances, depths, gains, mus, tau_cs) accept a scalar, a list, or a
generator spec {"geom": [lo, hi, count]} / {"lin": [lo, hi, count]}. On the
command line the same grids are written "1,5,10", "geom:1:50:60", or
"lin:0:10:5". tau_cs additionally accepts "inf" for an ideal memory.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError


def _geomspace(lo: float, hi: float, count: int) -> list[float]:
    if count < 1 or lo <= 0 or hi < lo:
        raise ConfigError(f"bad geom spec ({lo}, {hi}, {count})")
    if count == 1:
        return [lo]
    step = (math.log10(hi) - math.log10(lo)) / (count - 1)
    return [10.0 ** (math.log10(lo) + step * i) for i in range(count)]


def _linspace(lo: float, hi: float, count: int) -> list[float]:
    if count < 1 or hi < lo:
        raise ConfigError(f"bad lin spec ({lo}, {hi}, {count})")
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + step * i for i in range(count)]


def _to_float(key: str, v) -> float:
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {v!r}") from None


def _to_int(key: str, v) -> int:
    f = _to_float(key, v)
    if not f == int(f):
        raise ConfigError(f"{key}: expected an integer, got {v!r}")
    return int(f)


def _parse_grid(key: str, v, integer: bool = False) -> list:
    """Scalar, list, {'geom'|'lin': [lo,hi,n]} or 'geom:lo:hi:n' string."""
    if isinstance(v, dict):
        if set(v) == {"geom"}:
            lo, hi, n = v["geom"]
            vals = _geomspace(_to_float(key, lo), _to_float(key, hi), _to_int(key, n))
        elif set(v) == {"lin"}:
            lo, hi, n = v["lin"]
            vals = _linspace(_to_float(key, lo), _to_float(key, hi), _to_int(key, n))
        else:
            raise ConfigError(f"{key}: unknown grid spec {sorted(v)}")
    elif isinstance(v, str):
        s = v.strip()
        if s.startswith(("geom:", "lin:")):
            kind, *parts = s.split(":")
            if len(parts) != 3:
                raise ConfigError(f"{key}: expected {kind}:lo:hi:count, got {v!r}")
            lo, hi = _to_float(key, parts[0]), _to_float(key, parts[1])
            n = _to_int(key, parts[2])
            vals = _geomspace(lo, hi, n) if kind == "geom" else _linspace(lo, hi, n)
        else:
            vals = [_to_float(key, p) for p in s.split(",") if p.strip()]
    elif isinstance(v, (list, tuple)):
        vals = [_to_float(key, p) for p in v]
    else:
        vals = [_to_float(key, v)]
    if not vals:
        raise ConfigError(f"{key}: empty list")
    if integer:
        out = []
        for x in vals:
            if x != int(x):
                raise ConfigError(f"{key}: expected integers, got {x}")
            out.append(int(x))
        return out
    return vals


@dataclass
class ScenarioConfig:
    """Effective configuration after merging defaults, file, and flags."""

    distances: list[float] = field(default_factory=lambda: [200.0])
    depths: list[int] = field(default_factory=lambda: [1])
    gains: list[float] = field(default_factory=lambda: [1.0])
    mus: list[float] = field(default_factory=lambda: [3.0])
    tau_cs: list[float] = field(default_factory=lambda: [math.inf])
    xi: float = 0.0
    alpha: float = 0.2
    xi_qm: float = 0.0
    c_speed: float = 2.0e5
    seed: int = 12345
    trials: int = 10000
    threads: int = 1
    g_bounds: list[float] = field(default_factory=lambda: [1.0, 50.0])
    mu_bounds: list[float] = field(default_factory=lambda: [1.5, 6.0])
    objective: str = "rate_weighted"
    out: str | None = None
    format: str | None = None  # resolved per command when left unset

    def apply(self, key: str, value) -> None:
        if value is None:
            return
        if key in ("distances", "gains", "mus", "tau_cs"):
            setattr(self, key, _parse_grid(key, value))
        elif key == "depths":
            setattr(self, key, _parse_grid(key, value, integer=True))
        elif key in ("xi", "alpha", "xi_qm", "c_speed"):
            setattr(self, key, _to_float(key, value))
        elif key in ("seed", "trials", "threads"):
            setattr(self, key, _to_int(key, value))
        elif key in ("g_bounds", "mu_bounds"):
            vals = _parse_grid(key, value)
            if len(vals) != 2:
                raise ConfigError(f"{key}: expected [lo, hi], got {value!r}")
            setattr(self, key, vals)
        elif key == "objective":
            if value not in ("rate_weighted", "rci"):
                raise ConfigError(f"objective: unknown value {value!r}")
            self.objective = value
        elif key == "out":
            self.out = str(value)
        elif key == "format":
            if value not in ("csv", "json"):
                raise ConfigError(f"format: expected csv or json, got {value!r}")
            self.format = value
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
        self._check(key)

    def _check(self, key: str) -> None:
        if key == "distances" and any(d < 0 for d in self.distances):
            raise ConfigError("distances: must be >= 0 km")
        if key == "depths" and any(n < 0 for n in self.depths):
            raise ConfigError("depths: must be >= 0")
        if key == "gains" and any(g < 1.0 for g in self.gains):
            raise ConfigError("gains: must be >= 1")
        if key == "mus" and any(m < 1.0 for m in self.mus):
            raise ConfigError("mus: must be >= 1")
        if key == "tau_cs" and any(t <= 0.0 for t in self.tau_cs):
            raise ConfigError("tau_cs: must be > 0 (or inf)")
        if key == "xi" and self.xi < 0.0:
            raise ConfigError("xi: must be >= 0")
        if key == "alpha" and self.alpha <= 0.0:
            raise ConfigError("alpha: must be > 0")
        if key == "xi_qm" and self.xi_qm < 0.0:
            raise ConfigError("xi_qm: must be >= 0")
        if key == "c_speed" and self.c_speed <= 0.0:
            raise ConfigError("c_speed: must be > 0")
        if key == "trials" and self.trials < 1:
            raise ConfigError("trials: must be >= 1")
        if key == "threads" and self.threads < 1:
            raise ConfigError("threads: must be >= 1")
        if key == "seed" and self.seed < 0:
            raise ConfigError("seed: must be >= 0")

    def echo(self) -> dict:
        """Effective configuration as plain JSON-ready values, sorted keys."""
        out = {}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return {k: out[k] for k in sorted(out)}


_KNOWN_KEYS = {f.name for f in fields(ScenarioConfig)}


def load_config(path: str | None, overrides: dict | None = None) -> ScenarioConfig:
    """Defaults, then the JSON file, then non-None overrides, in that order."""
    cfg = ScenarioConfig()
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = sorted(set(data) - _KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        for key, value in data.items():
            cfg.apply(key, value)
    for key, value in (overrides or {}).items():
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key {key!r}")
        cfg.apply(key, value)
    return cfg
