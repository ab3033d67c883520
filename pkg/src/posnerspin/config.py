"""Experiment configuration: a frozen dataclass, a strict TOML file format
and dotted-path overrides.

The file format mirrors the dataclass through named sections::

    [system]
    species = "posner"        # posner | phosphate_h
    doping = "none"           # none | Li6 | Li7

    [field]
    b0_tesla = 5e-5

    [couplings]
    topology = "symmetric"    # symmetric | weak_asymmetry | strong_asymmetry | none
    scale = 1.0
    # j_p_li_hz, j_li_li_hz, j_p_h_hz override the built-in defaults

    [pairs]
    entangled = ["P0", "P0"]
    observed = [["P0", "P0"]]

    [time]
    t_start = 0.0
    t_end = 500.0
    n_points = 2001

    [outputs]
    quantities = ["coherence", "concurrence"]
    oracle_check = false

    [transitions]
    alpha = 1.0
    tol_degeneracy = 1e-6

    [relaxation]
    j7_hz = 1.0
    tau6_s = 300.0
    tau7_s = 10.0

Parsing is strict: unknown sections or keys raise
:class:`~posnerspin.errors.ConfigError` naming the offending dotted key, as
do type mismatches and out-of-range values.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .hamiltonian import COUPLING_TOPOLOGIES, J_P_H_HZ

SPECIES = ("posner", "phosphate_h")
DOPINGS = ("none", "Li6", "Li7")
TIMESERIES_QUANTITIES = ("coherence", "concurrence", "populations")
TABLE_QUANTITIES = ("transition_spectrum", "relaxation_table")
QUANTITIES = TIMESERIES_QUANTITIES + TABLE_QUANTITIES


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one run; every field has a safe default."""

    species: str = "posner"
    doping: str = "none"
    b0_tesla: float = 50e-6
    topology: str = "symmetric"
    j_scale: float = 1.0
    j_p_li_hz: float | None = None
    j_li_li_hz: float | None = None
    j_p_h_hz: float = J_P_H_HZ
    entangled: tuple[str, str] = ("P0", "P0")
    observed: tuple[tuple[str, str], ...] = (("P0", "P0"),)
    t_start: float = 0.0
    t_end: float = 500.0
    n_points: int = 2001
    quantities: tuple[str, ...] = ("coherence", "concurrence")
    oracle_check: bool = False
    alpha: float = 1.0
    tol_degeneracy: float = 1e-6
    relax_j7_hz: float = 1.0
    relax_tau6_s: float = 300.0
    relax_tau7_s: float = 10.0


# section -> key -> (dataclass field, kind)
_SCHEMA: dict[str, dict[str, tuple[str, str]]] = {
    "system": {"species": ("species", "str"), "doping": ("doping", "str")},
    "field": {"b0_tesla": ("b0_tesla", "float")},
    "couplings": {
        "topology": ("topology", "str"),
        "scale": ("j_scale", "float"),
        "j_p_li_hz": ("j_p_li_hz", "float"),
        "j_li_li_hz": ("j_li_li_hz", "float"),
        "j_p_h_hz": ("j_p_h_hz", "float"),
    },
    "pairs": {
        "entangled": ("entangled", "pair"),
        "observed": ("observed", "pair_list"),
    },
    "time": {
        "t_start": ("t_start", "float"),
        "t_end": ("t_end", "float"),
        "n_points": ("n_points", "int"),
    },
    "outputs": {
        "quantities": ("quantities", "str_list"),
        "oracle_check": ("oracle_check", "bool"),
    },
    "transitions": {
        "alpha": ("alpha", "float"),
        "tol_degeneracy": ("tol_degeneracy", "float"),
    },
    "relaxation": {
        "j7_hz": ("relax_j7_hz", "float"),
        "tau6_s": ("relax_tau6_s", "float"),
        "tau7_s": ("relax_tau7_s", "float"),
    },
}


def _coerce(dotted: str, value: Any, kind: str) -> Any:
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{dotted}: expected a number, got {value!r}")
        return float(value)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{dotted}: expected an integer, got {value!r}")
        return int(value)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{dotted}: expected true/false, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{dotted}: expected a string, got {value!r}")
        return value
    if kind == "pair":
        if (
            not isinstance(value, (list, tuple))
            or len(value) != 2
            or not all(isinstance(x, str) and x for x in value)
        ):
            raise ConfigError(f"{dotted}: expected a pair of site labels, got {value!r}")
        return (value[0], value[1])
    if kind == "pair_list":
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError(f"{dotted}: expected a non-empty list of label pairs")
        return tuple(_coerce(f"{dotted}[{i}]", item, "pair") for i, item in enumerate(value))
    if kind == "str_list":
        if not isinstance(value, (list, tuple)) or not all(
            isinstance(x, str) for x in value
        ):
            raise ConfigError(f"{dotted}: expected a list of strings, got {value!r}")
        return tuple(value)
    raise AssertionError(f"unhandled kind {kind}")


def parse_tree(tree: dict[str, Any]) -> ExperimentConfig:
    """Build a validated config from a nested dict (strict mode)."""
    if not isinstance(tree, dict):
        raise ConfigError("configuration root must be a table")
    fields: dict[str, Any] = {}
    for section, content in tree.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section {section!r}")
        if not isinstance(content, dict):
            raise ConfigError(f"{section}: expected a table of keys")
        for key, value in content.items():
            spec = _SCHEMA[section].get(key)
            if spec is None:
                raise ConfigError(f"unknown key {section}.{key!r}")
            attr, kind = spec
            fields[attr] = _coerce(f"{section}.{key}", value, kind)
    config = ExperimentConfig(**fields)
    validate(config)
    return config


def validate(config: ExperimentConfig) -> None:
    """Range and consistency checks shared by every entry point."""
    if config.species not in SPECIES:
        raise ConfigError(f"system.species: expected one of {SPECIES}, got {config.species!r}")
    if config.doping not in DOPINGS:
        raise ConfigError(f"system.doping: expected one of {DOPINGS}, got {config.doping!r}")
    if config.species == "phosphate_h" and config.doping != "none":
        raise ConfigError("system.doping: the phosphate_h species cannot be doped")
    if config.topology not in COUPLING_TOPOLOGIES:
        raise ConfigError(
            f"couplings.topology: expected one of {COUPLING_TOPOLOGIES}, "
            f"got {config.topology!r}"
        )
    if config.b0_tesla < 0:
        raise ConfigError(f"field.b0_tesla: must be >= 0, got {config.b0_tesla}")
    for name, value in (
        ("couplings.scale", config.j_scale),
        ("field.b0_tesla", config.b0_tesla),
        ("time.t_start", config.t_start),
        ("time.t_end", config.t_end),
    ):
        if not _finite(value):
            raise ConfigError(f"{name}: must be finite, got {value}")
    if config.t_end <= config.t_start:
        raise ConfigError("time.t_end: must be greater than time.t_start")
    if config.n_points < 2:
        raise ConfigError(f"time.n_points: must be >= 2, got {config.n_points}")
    if not config.quantities:
        raise ConfigError("outputs.quantities: must not be empty")
    seen = set()
    for q in config.quantities:
        if q not in QUANTITIES:
            raise ConfigError(
                f"outputs.quantities: unknown quantity {q!r}; expected from {QUANTITIES}"
            )
        if q in seen:
            raise ConfigError(f"outputs.quantities: duplicate quantity {q!r}")
        seen.add(q)
    if config.alpha < 0 or not _finite(config.alpha):
        raise ConfigError(f"transitions.alpha: must be >= 0, got {config.alpha}")
    if config.tol_degeneracy <= 0:
        raise ConfigError("transitions.tol_degeneracy: must be positive")
    for name, value in (
        ("relaxation.j7_hz", config.relax_j7_hz),
        ("relaxation.tau6_s", config.relax_tau6_s),
        ("relaxation.tau7_s", config.relax_tau7_s),
    ):
        if value <= 0 or not _finite(value):
            raise ConfigError(f"{name}: must be positive, got {value}")
    for opt, name in (
        (config.j_p_li_hz, "couplings.j_p_li_hz"),
        (config.j_li_li_hz, "couplings.j_li_li_hz"),
        (config.j_p_h_hz, "couplings.j_p_h_hz"),
    ):
        if opt is not None and not _finite(opt):
            raise ConfigError(f"{name}: must be finite, got {opt}")


def _finite(x: float) -> bool:
    return x == x and abs(x) != float("inf")


def to_tree(config: ExperimentConfig) -> dict[str, Any]:
    """Inverse of :func:`parse_tree`; omits optional fields left at None."""
    tree: dict[str, Any] = {}
    for section, keys in _SCHEMA.items():
        body = {}
        for key, (attr, _) in keys.items():
            value = getattr(config, attr)
            if value is None:
                continue
            if isinstance(value, tuple):
                value = [list(v) if isinstance(v, tuple) else v for v in value]
            body[key] = value
        if body:
            tree[section] = body
    return tree


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Parse a TOML config file into a tree (strictness applied later)."""
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from None


def apply_overrides(tree: dict[str, Any], assignments: list[str]) -> dict[str, Any]:
    """Apply ``section.key=value`` assignments; values use TOML syntax."""
    out = {k: dict(v) if isinstance(v, dict) else v for k, v in tree.items()}
    for raw in assignments:
        if "=" not in raw:
            raise ConfigError(f"override {raw!r} is not of the form section.key=value")
        path, text = raw.split("=", 1)
        parts = path.strip().split(".")
        if len(parts) != 2 or not all(parts):
            raise ConfigError(f"override path {path.strip()!r} must be section.key")
        try:
            value = tomllib.loads(f"v = {text.strip()}")["v"]
        except tomllib.TOMLDecodeError:
            raise ConfigError(f"override value {text.strip()!r} is not valid TOML") from None
        out.setdefault(parts[0], {})[parts[1]] = value
    return out


def config_sha256(config: ExperimentConfig) -> str:
    """Canonical hash of the resolved configuration."""
    payload = json.dumps(dataclasses.asdict(config), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()
