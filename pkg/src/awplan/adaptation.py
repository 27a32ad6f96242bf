"""Adaptation-layer power leveling: attenuator settings toward a flat profile.

Alien carriers enter the host line through attenuators, so leveling can only
remove power. Channels measured below the target cannot be raised; they are
reported as clipped instead of silently adjusted, and any clipped channel
fails its node in the equalization summary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _schema
from .errors import AdaptationError, SchemaError
from .spectrum import SpectrumGrid


@dataclass(frozen=True)
class PowerReading:
    """Measured per-channel power at one tap point."""

    channel_ref: str
    power_dbm: float

    def __post_init__(self) -> None:
        if not self.channel_ref:
            raise ValueError("channel_ref must be non-empty")
        if not math.isfinite(self.power_dbm):
            raise ValueError(f"power_dbm must be finite, got {self.power_dbm}")

    def to_dict(self) -> dict:
        return {"channel_ref": self.channel_ref, "power_dbm": self.power_dbm}

    @classmethod
    def from_dict(cls, data: dict, path: str = "reading") -> "PowerReading":
        try:
            return cls(
                channel_ref=_schema.require_str(data, "channel_ref", path),
                power_dbm=_schema.require_real(data, "power_dbm", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class VoaSetting:
    """Per-channel attenuation; an attenuator cannot amplify."""

    channel_ref: str
    attenuation_db: float

    def __post_init__(self) -> None:
        if not self.channel_ref:
            raise ValueError("channel_ref must be non-empty")
        if self.attenuation_db < 0:
            raise ValueError(f"attenuation_db must be >= 0, got {self.attenuation_db}")

    def to_dict(self) -> dict:
        return {"channel_ref": self.channel_ref, "attenuation_db": self.attenuation_db}

    @classmethod
    def from_dict(cls, data: dict, path: str = "setting") -> "VoaSetting":
        try:
            return cls(
                channel_ref=_schema.require_str(data, "channel_ref", path),
                attenuation_db=_schema.require_real(data, "attenuation_db", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class EqualizationResult:
    settings: tuple[VoaSetting, ...]
    max_residual_db: float
    clipped_channels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.max_residual_db < 0:
            raise ValueError(f"max_residual_db must be >= 0, got {self.max_residual_db}")

    def to_dict(self) -> dict:
        return {
            "settings": [setting.to_dict() for setting in self.settings],
            "max_residual_db": self.max_residual_db,
            "clipped_channels": list(self.clipped_channels),
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "equalization") -> "EqualizationResult":
        settings = tuple(
            VoaSetting.from_dict(item, f"{path}.settings[{i}]")
            for i, item in enumerate(
                _schema.get_list(_schema.require(data, "settings", path), f"{path}.settings")
            )
        )
        clipped_raw = _schema.get_list(
            _schema.require(data, "clipped_channels", path), f"{path}.clipped_channels"
        )
        for i, item in enumerate(clipped_raw):
            if not isinstance(item, str):
                raise SchemaError(f"{path}.clipped_channels[{i}]: expected string")
        try:
            return cls(
                settings=settings,
                max_residual_db=_schema.require_real(data, "max_residual_db", path),
                clipped_channels=tuple(clipped_raw),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


def compute_voa_settings(
    readings: list[PowerReading] | tuple[PowerReading, ...], target_dbm: float
) -> EqualizationResult:
    """Level every channel to *target_dbm* by attenuation alone.

    Channels above target get the exact attenuation to reach it; channels
    below target are clipped at zero attenuation and reported, leaving their
    shortfall in the residual.
    """
    if not readings:
        raise AdaptationError("cannot equalize an empty set of readings")
    if not math.isfinite(target_dbm):
        raise AdaptationError(f"target_dbm must be finite, got {target_dbm}")

    settings: list[VoaSetting] = []
    clipped: list[str] = []
    max_residual = 0.0
    for reading in readings:
        attenuation = max(0.0, reading.power_dbm - target_dbm)
        settings.append(VoaSetting(channel_ref=reading.channel_ref, attenuation_db=attenuation))
        if reading.power_dbm < target_dbm:
            clipped.append(reading.channel_ref)
            residual = abs(reading.power_dbm - target_dbm)
        else:
            residual = abs((reading.power_dbm - attenuation) - target_dbm)
        max_residual = max(max_residual, residual)
    return EqualizationResult(
        settings=tuple(settings),
        max_residual_db=max_residual,
        clipped_channels=tuple(clipped),
    )


@dataclass(frozen=True)
class NodeEqualizationSummary:
    node_id: str
    passed: bool
    max_residual_db: float
    clipped_channels: tuple[str, ...]
    unknown_channel_refs: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "node_id": self.node_id,
            "passed": self.passed,
            "max_residual_db": self.max_residual_db,
            "clipped_channels": list(self.clipped_channels),
            "unknown_channel_refs": list(self.unknown_channel_refs),
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "node_summary") -> "NodeEqualizationSummary":
        clipped = _schema.get_list(
            _schema.require(data, "clipped_channels", path), f"{path}.clipped_channels"
        )
        unknown = _schema.get_list(
            _schema.require(data, "unknown_channel_refs", path), f"{path}.unknown_channel_refs"
        )
        for label, items in (("clipped_channels", clipped), ("unknown_channel_refs", unknown)):
            for i, item in enumerate(items):
                if not isinstance(item, str):
                    raise SchemaError(f"{path}.{label}[{i}]: expected string")
        return cls(
            node_id=_schema.require_str(data, "node_id", path),
            passed=_schema.require_bool(data, "passed", path),
            max_residual_db=_schema.require_real(data, "max_residual_db", path),
            clipped_channels=tuple(clipped),
            unknown_channel_refs=tuple(unknown),
        )


@dataclass(frozen=True)
class EqualizationReport:
    flatness_tolerance_db: float
    nodes: tuple[NodeEqualizationSummary, ...]

    @property
    def failing_nodes(self) -> tuple[NodeEqualizationSummary, ...]:
        return tuple(node for node in self.nodes if not node.passed)

    @property
    def all_passed(self) -> bool:
        return all(node.passed for node in self.nodes)

    def to_dict(self) -> dict:
        return {
            "flatness_tolerance_db": self.flatness_tolerance_db,
            "nodes": [node.to_dict() for node in self.nodes],
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "equalization_report") -> "EqualizationReport":
        nodes = tuple(
            NodeEqualizationSummary.from_dict(item, f"{path}.nodes[{i}]")
            for i, item in enumerate(
                _schema.get_list(_schema.require(data, "nodes", path), f"{path}.nodes")
            )
        )
        return cls(
            flatness_tolerance_db=_schema.require_real(data, "flatness_tolerance_db", path),
            nodes=nodes,
        )


DEFAULT_FLATNESS_TOLERANCE_DB = 1.0


def equalization_report(
    grid: SpectrumGrid,
    results_by_node: dict[str, EqualizationResult],
    flatness_tolerance_db: float = DEFAULT_FLATNESS_TOLERANCE_DB,
) -> EqualizationReport:
    """Per-node pass/fail against a flatness tolerance.

    A node passes when its residual is within tolerance and nothing clipped.
    Settings naming channels absent from the grid are surfaced per node; they
    do not affect pass/fail, which is purely a power criterion.
    """
    if flatness_tolerance_db <= 0:
        raise AdaptationError(
            f"flatness_tolerance_db must be > 0, got {flatness_tolerance_db}"
        )
    known = grid.occupant_ids()
    summaries = []
    for node_id in sorted(results_by_node):
        result = results_by_node[node_id]
        referenced = [setting.channel_ref for setting in result.settings]
        unknown = tuple(sorted({ref for ref in referenced if ref not in known}))
        passed = result.max_residual_db <= flatness_tolerance_db and not result.clipped_channels
        summaries.append(
            NodeEqualizationSummary(
                node_id=node_id,
                passed=passed,
                max_residual_db=result.max_residual_db,
                clipped_channels=result.clipped_channels,
                unknown_channel_refs=unknown,
            )
        )
    return EqualizationReport(
        flatness_tolerance_db=flatness_tolerance_db, nodes=tuple(summaries)
    )
