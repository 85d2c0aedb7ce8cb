"""Run configuration: JSON schema, loading, and unit conversion.

Configuration files are plain JSON.  Frequencies are given in MHz and
converted internally to rad/us; lengths are um, temperatures uK,
lifetimes ms, and the controlled phase is in radians.  Every field has
a default matching the reference operating point (theta = pi CZ gate
at 0.8 MHz Rabi frequency on the Rb 97S_1/2 state), so ``{}`` is a
valid configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .constants import (
    C6_97S,
    MHZ,
    RB87_MASS_KG,
    SIGMA_PERP0_DEFAULT,
    SIGMA_Z0_DEFAULT,
    TEMPERATURE_DEFAULT_UK,
)
from .errors import ConfigError

__all__ = ["SCHEMA", "RunConfig", "load_config", "parse_config", "DEFAULT_SEED"]

DEFAULT_SEED = 20210901

_positive = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "rydvdw run configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "gate": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["cz", "cnot"]},
                "theta_rad": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "exclusiveMaximum": 6.283185307179586,
                },
            },
        },
        "drive": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "omega_control_mhz": _positive,
                "omega_target_mhz": _positive,
            },
        },
        "vdw": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"c6_thz_um6": _positive},
        },
        "noise": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "sigma_z0_um": _positive,
                "sigma_perp0_um": _positive,
                "temperature_uk": _positive,
                "atom_mass_kg": _positive,
                "rydberg_lifetime_ms": _positive,
                "trap_separation_um": _positive,
            },
        },
        "sampling": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["grid", "mc", "both"]},
                "deltas": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "number", "exclusiveMinimum": 0, "maximum": 1.5},
                },
                "mc_samples": {"type": "integer", "minimum": 1},
                "mc_truncated": {"type": "boolean"},
            },
        },
        "overrides": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "interaction_mhz": {"type": "number", "minimum": 0},
                "separation_um": _positive,
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["axis", "start", "stop", "points"],
            "properties": {
                "axis": {"enum": ["separation", "omega", "temperature"]},
                "start": _positive,
                "stop": _positive,
                "points": {"type": "integer", "minimum": 2},
            },
        },
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "threads": {"type": "integer", "minimum": 1},
    },
}


@dataclass
class RunConfig:
    """Validated configuration with units converted to internal ones."""

    kind: str = "cz"
    theta: float = math.pi
    omega_control: float = 0.8 * MHZ
    omega_target: float = 0.8 * MHZ
    c6: float = C6_97S
    sigma_z0: float = SIGMA_Z0_DEFAULT
    sigma_perp0: float = SIGMA_PERP0_DEFAULT
    temperature: float = TEMPERATURE_DEFAULT_UK
    atom_mass: float = RB87_MASS_KG
    rydberg_lifetime: float = 0.311
    trap_separation: float | None = None
    mode: str = "grid"
    deltas: tuple[float, ...] = (0.25, 0.2, 0.15, 0.12, 0.1)
    mc_samples: int = 100_000
    mc_truncated: bool = False
    interaction_override: float | None = None
    separation_override: float | None = None
    sweep: dict | None = None
    seed: int = DEFAULT_SEED
    threads: int = 1
    raw: dict = field(default_factory=dict)


def parse_config(raw: dict) -> RunConfig:
    """Validate a configuration dict against the schema and apply units.

    Raises :class:`ConfigError` naming the offending field on any
    schema violation.
    """
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config field '{where}': {exc.message}") from exc

    cfg = RunConfig(raw=raw)
    gate = raw.get("gate", {})
    cfg.kind = gate.get("kind", cfg.kind)
    cfg.theta = gate.get("theta_rad", cfg.theta)
    drive = raw.get("drive", {})
    cfg.omega_control = drive.get("omega_control_mhz", 0.8) * MHZ
    cfg.omega_target = drive.get("omega_target_mhz", 0.8) * MHZ
    if "c6_thz_um6" in raw.get("vdw", {}):
        # h x THz um^6 -> rad/us um^6: 1 THz = 1e6 cycles/us
        cfg.c6 = MHZ * raw["vdw"]["c6_thz_um6"] * 1e6
    noise = raw.get("noise", {})
    cfg.sigma_z0 = noise.get("sigma_z0_um", cfg.sigma_z0)
    cfg.sigma_perp0 = noise.get("sigma_perp0_um", cfg.sigma_perp0)
    cfg.temperature = noise.get("temperature_uk", cfg.temperature)
    cfg.atom_mass = noise.get("atom_mass_kg", cfg.atom_mass)
    cfg.rydberg_lifetime = noise.get("rydberg_lifetime_ms", cfg.rydberg_lifetime)
    cfg.trap_separation = noise.get("trap_separation_um", None)
    sampling = raw.get("sampling", {})
    cfg.mode = sampling.get("mode", cfg.mode)
    cfg.deltas = tuple(sampling.get("deltas", cfg.deltas))
    for delta in cfg.deltas:
        if abs(round(3.0 / delta) * delta - 3.0) > 1e-9:
            raise ConfigError(
                f"invalid config field 'sampling.deltas': {delta} does not evenly "
                "divide the +-1.5 sigma grid range"
            )
    cfg.mc_samples = sampling.get("mc_samples", cfg.mc_samples)
    cfg.mc_truncated = sampling.get("mc_truncated", cfg.mc_truncated)
    overrides = raw.get("overrides", {})
    if "interaction_mhz" in overrides:
        cfg.interaction_override = overrides["interaction_mhz"] * MHZ
    cfg.separation_override = overrides.get("separation_um", None)
    cfg.sweep = raw.get("sweep", None)
    cfg.seed = raw.get("seed", cfg.seed)
    cfg.threads = raw.get("threads", cfg.threads)

    if cfg.kind == "cnot" and abs(cfg.theta - math.pi) > 1e-9:
        raise ConfigError("invalid config field 'gate.theta_rad': cnot requires theta_rad = pi")
    return cfg


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a JSON configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return parse_config(raw)
