"""Run configuration: defaults, JSON persistence, validation and hashing."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

import platformdirs

from dinilab.errors import ConfigError, InvalidArgumentError
from dinilab.funcspace.witness import WITNESS_REGISTRY, witness_params
from dinilab.grid import SHAPES

COMMANDS = ("seminorm", "poisson", "stokes", "euler", "study")
SUITES = ("embeddings", "regularity", "transport")
INTERPOLATIONS = {"bilinear": 1, "bicubic": 3}
SINE_TRANSFORM_COMMANDS = frozenset({"poisson", "stokes", "euler"})
OUTPUT_DIR_ENV = "DINILAB_OUTPUT_DIR"


@dataclass
class RunConfig:
    """Everything a run depends on; ``None`` cutoffs mean r_lo = 2h and ρ = R/2."""

    command: str = "seminorm"
    grid: int = 129
    shape: str = "square"
    witness: str = "eigen_sine"
    params: dict[str, Any] = field(default_factory=dict)
    r_lo: float | None = None
    rho: float | None = None
    nodes: int = 256
    tol: float = 1e-10
    max_iters: int = 500
    picard_iters: int = 60
    t_final: float = 1.0
    window: float = 0.25
    substeps: int = 8
    rk_steps: int = 4
    interpolation: str = "bilinear"
    forcing: str | None = None
    forcing_params: dict[str, Any] = field(default_factory=dict)
    grids: list[int] = field(default_factory=lambda: [33, 65, 129])
    suite: str = "embeddings"
    threads: int = 1
    seed: int = 0
    ceiling: float = 2.0
    output_dir: str | None = None

    @property
    def interpolation_order(self) -> int:
        return INTERPOLATIONS[self.interpolation]

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> RunConfig:
        unknown = sorted(set(data) - VALID_CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"Unknown config key: {unknown[0]}")
        values = {key: _coerce(key, value) for key, value in data.items()}
        return cls(**values)

    def validate(self) -> RunConfig:
        """Raise ConfigError naming the first offending field."""
        _require(self.command in COMMANDS, "command", f"must be one of {', '.join(COMMANDS)}")
        _require(self.shape in SHAPES, "shape", f"must be one of {', '.join(SHAPES)}")
        _require(self.suite in SUITES, "suite", f"must be one of {', '.join(SUITES)}")
        _require(self.interpolation in INTERPOLATIONS, "interpolation", "must be bilinear or bicubic")
        _require(self.grid >= 5, "grid", "must be at least 5")
        for name in ("tol", "t_final", "window", "ceiling"):
            _require(getattr(self, name) > 0, name, "must be positive")
        for name in ("nodes", "max_iters", "picard_iters", "substeps", "rk_steps", "threads"):
            _require(getattr(self, name) >= 1, name, "must be at least 1")
        _require(self.nodes >= 2, "nodes", "must be at least 2")
        _require(self.window <= self.t_final, "window", "must not exceed t_final")
        if self.r_lo is not None:
            _require(self.r_lo > 0, "r_lo", "must be positive")
        if self.rho is not None:
            _require(self.rho > (self.r_lo or 0.0), "rho", "must exceed r_lo")
        _require(len(self.grids) >= 2 and all(g >= 5 for g in self.grids), "grids", "needs at least two sizes >= 5")
        _require(list(self.grids) == sorted(set(self.grids)), "grids", "must be strictly increasing")
        if self.command in SINE_TRANSFORM_COMMANDS:
            _require(self.shape == "square", "shape", f"{self.command} solvers need the square domain")
            _require(_power_of_two_plus_one(self.grid), "grid", "sine-transform solvers need 2^k + 1 nodes")
            _require(all(_power_of_two_plus_one(g) for g in self.grids), "grids", "sine-transform solvers need 2^k + 1 nodes")
        if self.command == "study" and self.suite == "regularity":
            _require(len(self.grids) >= 3, "grids", "a regularity study needs at least three sizes")
            _require(all(_power_of_two_plus_one(g) for g in self.grids), "grids", "sine-transform solvers need 2^k + 1 nodes")
        _check_witness(self.witness, self.params, "witness")
        if self.forcing is not None:
            _check_witness(self.forcing, self.forcing_params, "forcing")
        return self


VALID_CONFIG_KEYS = frozenset(f.name for f in fields(RunConfig))
_FIELD_TYPES = {f.name: str(f.type) for f in fields(RunConfig)}
_SCALARS: dict[str, type] = {"int": int, "float": float, "str": str}


def _coerce(key: str, value: Any) -> Any:
    """Convert a JSON or flag value to the field's declared type."""
    declared = _FIELD_TYPES[key]
    if value is None:
        _require(declared.endswith("| None"), key, "may not be null")
        return None
    base = declared.removesuffix(" | None")
    try:
        if base == "list[int]":
            if isinstance(value, str):
                value = value.split(",")
            return [int(v) for v in value]
        if base == "dict[str, Any]":
            _require(isinstance(value, Mapping), key, "must be an object")
            return dict(value)
        if base == "int" and isinstance(value, float) and not value.is_integer():
            raise ValueError(value)
        return _SCALARS[base](value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid config field {key}: cannot read {value!r} as {base}") from e


def _require(condition: bool, name: str, message: str) -> None:
    if not condition:
        raise ConfigError(f"Invalid config field {name}: {message}")


def _power_of_two_plus_one(n: int) -> bool:
    m = n - 1
    return m >= 2 and m & (m - 1) == 0


def _check_witness(kind: str, params: Mapping[str, Any], name: str) -> None:
    _require(kind in WITNESS_REGISTRY, name, f"unknown witness kind {kind!r}")
    try:
        witness_params(kind, params)
    except InvalidArgumentError as e:
        raise ConfigError(f"Invalid config field {name}: {e}") from e


def load_config(path: Path) -> dict[str, Any]:
    """Read a JSON config file; the top level must be an object."""
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except (json.JSONDecodeError, OSError) as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"Config {path} must hold a JSON object")
    return raw


def parse_config(path: Path | None = None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """File values first, then non-``None`` overrides, then validation."""
    data: dict[str, Any] = load_config(path) if path is not None else {}
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig.from_dict(data).validate()


def save_config(config: RunConfig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(config.to_dict()) + "\n")
    return path


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(config: RunConfig) -> str:
    """SHA-256 of the canonical JSON form; the output directory does not take part."""
    data = config.to_dict()
    data.pop("output_dir", None)
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()


def default_output_dir() -> Path:
    """``$DINILAB_OUTPUT_DIR`` if set, else the per-user data directory."""
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env)
    return Path(platformdirs.user_data_dir("dinilab")) / "runs"


def run_directory(config: RunConfig) -> Path:
    base = Path(config.output_dir) if config.output_dir else default_output_dir()
    return base / f"{config.command}-{config_hash(config)[:12]}"
