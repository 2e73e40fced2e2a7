"""
JSON run configuration.

Example::

    {
      "system": {
        "beta1": "a1 + a2 + 2*a1^2 + a2^2",
        "beta2": [{"i": 1, "j": 0, "num": 1, "den": 1}, ...],
        "l2": "1 + a1 + 2*a2 + a1^2 + a2^3",
        "theta0": 0.05,
        "order": 4
      },
      "transform": {"k": 2},
      "classify": {"sign_tol": 1e-9, "delta_tol": 1e-5},
      "diagram": {"window": [[-0.01, 0.01], [-0.1, 0.1]], "resolution": [41, 41]},
      "simulate": {"n_max": 5000, "probes": [{"rho": 0.17, "phi": 0.0, "n_max": 800}]},
      "output": {"dir": "out", "formats": ["csv", "json", "svg"]}
    }

Every block is optional; a missing system block means the built-in example.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .normal_form import ChencinerError, NormalFormSystem, example_system
from .series import DEFAULT_ORDER, parse_series, series_from_records
from .simulate import Probe, Thresholds

FORMATS = ("csv", "json", "svg")


class ConfigError(ChencinerError, ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"config error at {where}: {message}")
        self.where = where


@dataclass
class RunConfig:
    system: NormalFormSystem = field(default_factory=example_system)
    k: int = 2
    sign_tol: float = 1e-9
    delta_tol: Optional[float] = None
    window: tuple = ((-0.01, 0.01), (-0.1, 0.1))
    resolution: tuple = (41, 41)
    thresholds: Thresholds = field(default_factory=Thresholds)
    probes: Optional[list[Probe]] = None
    out_dir: Path = Path("out")
    formats: tuple[str, ...] = FORMATS


def _get(block: dict, key: str, where: str, kind, default=None):
    if key not in block or block[key] is None:
        return default
    value = block[key]
    try:
        if kind is float and isinstance(value, bool):
            raise TypeError
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key}", f"expected {kind.__name__}, got {value!r}") from None


def _series(block: dict, key: str, order: int):
    where = f"system.{key}"
    if key not in block:
        raise ConfigError(where, "missing")
    raw = block[key]
    try:
        if isinstance(raw, str):
            return parse_series(raw, order)
        if isinstance(raw, list):
            return series_from_records(raw, order)
    except ValueError as exc:
        raise ConfigError(where, str(exc)) from None
    raise ConfigError(where, "expected a string literal or a list of {i, j, num, den} records")


def _pair(value, where: str, kind=float):
    try:
        a, b = value
        return kind(a), kind(b)
    except (TypeError, ValueError):
        raise ConfigError(where, f"expected a pair, got {value!r}") from None


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "expected a JSON object")
    unknown = set(doc) - {"system", "transform", "classify", "diagram", "simulate", "output"}
    if unknown:
        raise ConfigError("<root>", f"unknown block(s): {', '.join(sorted(unknown))}")
    cfg = RunConfig()
    sysb = doc.get("system")
    if sysb is not None:
        if not isinstance(sysb, dict):
            raise ConfigError("system", "expected an object")
        order = _get(sysb, "order", "system", int, DEFAULT_ORDER)
        theta0 = _get(sysb, "theta0", "system", float, 0.05)
        try:
            cfg.system = NormalFormSystem(_series(sysb, "beta1", order), _series(sysb, "beta2", order),
                                          _series(sysb, "l2", order), theta0)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("system", str(exc)) from None
    tb = doc.get("transform", {})
    cfg.k = _get(tb, "k", "transform", int, cfg.k)
    cb = doc.get("classify", {})
    cfg.sign_tol = _get(cb, "sign_tol", "classify", float, cfg.sign_tol)
    cfg.delta_tol = _get(cb, "delta_tol", "classify", float, cfg.delta_tol)
    db = doc.get("diagram", {})
    if "window" in db:
        w = db["window"]
        if not isinstance(w, list) or len(w) != 2:
            raise ConfigError("diagram.window", "expected [[mu1_lo, mu1_hi], [mu2_lo, mu2_hi]]")
        cfg.window = (_pair(w[0], "diagram.window[0]"), _pair(w[1], "diagram.window[1]"))
    if "resolution" in db:
        cfg.resolution = _pair(db["resolution"], "diagram.resolution", int)
    sb = doc.get("simulate", {})
    th = {}
    for key in ("origin_eps", "escape_radius", "circle_rel_range", "match_rtol"):
        val = _get(sb, key, "simulate", float)
        if val is not None:
            th[key] = val
    for key in ("window", "n_max"):
        val = _get(sb, key, "simulate", int)
        if val is not None:
            th[key] = val
    cfg.thresholds = Thresholds(**th)
    if "probes" in sb:
        probes = []
        for n, p in enumerate(sb["probes"]):
            where = f"simulate.probes[{n}]"
            if not isinstance(p, dict) or "rho" not in p:
                raise ConfigError(where, "expected an object with 'rho'")
            probes.append(Probe(_get(p, "rho", where, float), _get(p, "phi", where, float, 0.0),
                                _get(p, "n_max", where, int)))
        cfg.probes = probes
    ob = doc.get("output", {})
    if "dir" in ob:
        cfg.out_dir = Path(str(ob["dir"]))
    if "formats" in ob:
        fmts = tuple(ob["formats"])
        bad = [f for f in fmts if f not in FORMATS]
        if bad:
            raise ConfigError("output.formats", f"unknown format(s) {bad}")
        cfg.formats = fmts
    return cfg


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return parse_config(doc)
