"""YAML run configuration: schema-validated before any simulation starts.

A config file is a single YAML mapping with a required ``schema_version: 1``
and optional sections mirroring the parameter dataclasses (protocol, device,
adc, workload, energy, curve) plus top-level ``out_dir``, ``seeds``, ``cols``
and an optional ``embeddings`` CSV path (mutually exclusive with workload).
Unknown keys are rejected with their dotted path; YAML syntax errors surface
with line/column positions.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import yaml

from .crossbar import AdcConfig
from .device import DeviceModelParams
from .energy import EnergyTimeParams
from .errors import ConfigInvalid
from .protocol import ProtocolSpec
from .workload import SyntheticWorkloadParams

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CurveParams:
    """Shape of a conductance-curve characterization run."""

    n_devices: int = 65536
    n_pulses: int = 20

    def __post_init__(self):
        if self.n_devices < 1:
            raise ValueError("n_devices must be >= 1")
        if self.n_pulses < 0:
            raise ValueError("n_pulses must be >= 0")


@dataclass
class RunConfig:
    schema_version: int = SCHEMA_VERSION
    protocol: ProtocolSpec = dataclasses.field(default_factory=ProtocolSpec)
    device: DeviceModelParams = dataclasses.field(default_factory=DeviceModelParams)
    adc: AdcConfig = dataclasses.field(default_factory=AdcConfig)
    workload: SyntheticWorkloadParams = dataclasses.field(
        default_factory=SyntheticWorkloadParams
    )
    embeddings: str | None = None
    energy: EnergyTimeParams = dataclasses.field(default_factory=EnergyTimeParams)
    curve: CurveParams = dataclasses.field(default_factory=CurveParams)
    cols: int = 256
    out_dir: str = "out"
    seeds: tuple[int, ...] = (0,)


_SECTIONS = {
    "protocol": ProtocolSpec,
    "device": DeviceModelParams,
    "adc": AdcConfig,
    "workload": SyntheticWorkloadParams,
    "energy": EnergyTimeParams,
    "curve": CurveParams,
}
_TOP_LEVEL = set(_SECTIONS) | {"schema_version", "embeddings", "cols", "out_dir", "seeds"}


def _build_section(cls, data, where: str):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigInvalid(f"{where}: expected a mapping, got {type(data).__name__}")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigInvalid(f"{where}.{unknown[0]}: unknown key")
    try:
        return cls(**data)
    except (ValueError, TypeError) as exc:
        raise ConfigInvalid(f"{where}: {exc}") from exc


def config_from_mapping(data: dict, source: str = "<config>") -> RunConfig:
    """Build a validated RunConfig from a parsed YAML mapping."""
    if not isinstance(data, dict):
        raise ConfigInvalid(f"{source}: top level must be a mapping")
    unknown = sorted(set(data) - _TOP_LEVEL)
    if unknown:
        raise ConfigInvalid(f"{source}: unknown key {unknown[0]!r}")
    if "schema_version" not in data:
        raise ConfigInvalid(f"{source}: missing schema_version (expected {SCHEMA_VERSION})")
    if data["schema_version"] != SCHEMA_VERSION:
        raise ConfigInvalid(
            f"{source}: unsupported schema_version {data['schema_version']!r} "
            f"(expected {SCHEMA_VERSION})"
        )
    cfg = RunConfig()
    for key, cls in _SECTIONS.items():
        if key in data:
            setattr(cfg, key, _build_section(cls, data[key], f"{source}: {key}"))
    if "embeddings" in data and data["embeddings"] is not None:
        if "workload" in data:
            raise ConfigInvalid(
                f"{source}: 'workload' and 'embeddings' are mutually exclusive"
            )
        if not isinstance(data["embeddings"], str):
            raise ConfigInvalid(f"{source}: embeddings must be a file path")
        cfg.embeddings = data["embeddings"]
    if "cols" in data:
        if not isinstance(data["cols"], int) or data["cols"] < 1:
            raise ConfigInvalid(f"{source}: cols must be a positive integer")
        cfg.cols = data["cols"]
    if "out_dir" in data:
        if not isinstance(data["out_dir"], str):
            raise ConfigInvalid(f"{source}: out_dir must be a string")
        cfg.out_dir = data["out_dir"]
    if "seeds" in data:
        seeds = data["seeds"]
        if isinstance(seeds, int):
            seeds = [seeds]
        if (
            not isinstance(seeds, list)
            or not seeds
            or not all(isinstance(s, int) for s in seeds)
        ):
            raise ConfigInvalid(f"{source}: seeds must be an integer or list of integers")
        cfg.seeds = tuple(seeds)
    return cfg


def load_config(path) -> RunConfig:
    """Load and validate a YAML config file."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config file {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ConfigInvalid(
                f"{path}:{mark.line + 1}:{mark.column + 1}: "
                f"{getattr(exc, 'problem', exc)}"
            ) from exc
        raise ConfigInvalid(f"{path}: {exc}") from exc
    if data is None:
        raise ConfigInvalid(f"{path}: empty config")
    return config_from_mapping(data, source=str(path))


def resolved_text(cfg: RunConfig) -> str:
    """Flat dotted key-value rendering of a config (for --dry-run)."""
    lines = [f"schema_version: {cfg.schema_version}"]
    for section in _SECTIONS:
        value = getattr(cfg, section)
        for f in dataclasses.fields(value):
            lines.append(f"{section}.{f.name}: {getattr(value, f.name)}")
    lines.append(f"embeddings: {cfg.embeddings}")
    lines.append(f"cols: {cfg.cols}")
    lines.append(f"out_dir: {cfg.out_dir}")
    lines.append(f"seeds: {list(cfg.seeds)}")
    return "\n".join(lines) + "\n"
