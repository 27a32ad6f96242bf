"""Calibrated empirical Q-value model for coherent carriers over the host line.

The model is deliberately simple: a per-modulation baseline Q at a reference
distance, a linear dB decline with distance, and additive penalties per
adjacent native channel (guarded vs unguarded) plus an optional per-ROADM
term. It is exactly determined by a small set of measured calibration points
and makes no physics claims beyond them; reports label it empirical.

Feasibility classification uses two floors: a hard minimum below which a
signal is unworkable, and a design minimum that good practice stays above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _schema
from .errors import CalibrationError, SchemaError
from .spectrum import Modulation, NeighborConfig
from .topology import PathMetrics

DEFAULT_L_REF_KM = 345.0
HARD_MIN_DB = 6.5
DESIGN_MIN_DB = 8.5

# residual ceiling for an exactly-determined calibration solve
_SOLVE_TOLERANCE = 1e-9


class Feasibility(Enum):
    INFEASIBLE = "Infeasible"
    MARGINAL = "Marginal"
    OK = "Ok"


@dataclass(frozen=True)
class Thresholds:
    """Q floors in dB: hard working minimum and design-practice minimum."""

    hard_min_db: float = HARD_MIN_DB
    design_min_db: float = DESIGN_MIN_DB

    def __post_init__(self) -> None:
        if not self.hard_min_db < self.design_min_db:
            raise ValueError(
                f"hard_min_db must be below design_min_db, "
                f"got {self.hard_min_db} >= {self.design_min_db}"
            )

    def to_dict(self) -> dict:
        return {"hard_min_db": self.hard_min_db, "design_min_db": self.design_min_db}

    @classmethod
    def from_dict(cls, data: dict, path: str = "thresholds") -> "Thresholds":
        try:
            return cls(
                hard_min_db=_schema.require_real(data, "hard_min_db", path),
                design_min_db=_schema.require_real(data, "design_min_db", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


DEFAULT_THRESHOLDS = Thresholds()


def classify_q(value_db: float, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Feasibility:
    """Classify a Q value against the floors. The hard floor itself fails:
    a signal must be strictly above it to be workable."""
    if value_db <= thresholds.hard_min_db:
        return Feasibility.INFEASIBLE
    if value_db <= thresholds.design_min_db:
        return Feasibility.MARGINAL
    return Feasibility.OK


@dataclass(frozen=True)
class QEstimate:
    value_db: float
    feasibility: Feasibility

    def to_dict(self) -> dict:
        return {"value_db": self.value_db, "class": self.feasibility.value}

    @classmethod
    def from_dict(cls, data: dict, path: str = "q") -> "QEstimate":
        raw = _schema.require_str(data, "class", path)
        try:
            feasibility = Feasibility(raw)
        except ValueError:
            raise SchemaError(
                f"{path}.class: expected one of 'Infeasible', 'Marginal', 'Ok', got {raw!r}"
            ) from None
        return cls(value_db=_schema.require_real(data, "value_db", path), feasibility=feasibility)


@dataclass(frozen=True)
class CalibrationPoint:
    """One measured Q value at a known distance and neighbor configuration."""

    distance_km: float
    modulation: Modulation
    neighbor_config: NeighborConfig
    measured_q_db: float

    def __post_init__(self) -> None:
        if self.distance_km < 0:
            raise ValueError(f"distance_km must be >= 0, got {self.distance_km}")
        if self.measured_q_db <= 0:
            raise ValueError(f"measured_q_db must be > 0, got {self.measured_q_db}")

    def to_dict(self) -> dict:
        return {
            "distance_km": self.distance_km,
            "modulation": self.modulation.value,
            "neighbor_config": self.neighbor_config.to_dict(),
            "measured_q_db": self.measured_q_db,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "point") -> "CalibrationPoint":
        raw = _schema.require_str(data, "modulation", path)
        try:
            modulation = Modulation(raw)
        except ValueError:
            raise SchemaError(
                f"{path}.modulation: expected 'BPSK' or 'QPSK', got {raw!r}"
            ) from None
        neighbors = NeighborConfig.from_dict(
            _schema.require(data, "neighbor_config", path), f"{path}.neighbor_config"
        )
        try:
            return cls(
                distance_km=_schema.require_real(data, "distance_km", path),
                modulation=modulation,
                neighbor_config=neighbors,
                measured_q_db=_schema.require_real(data, "measured_q_db", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


def _modulation_map(data: dict, key: str, path: str) -> dict[Modulation, float]:
    raw = _schema.get_object(_schema.require(data, key, path), f"{path}.{key}")
    result: dict[Modulation, float] = {}
    for modulation in Modulation:
        result[modulation] = _schema.require_real(raw, modulation.value, f"{path}.{key}")
    return result


@dataclass(frozen=True)
class QModel:
    """Empirical Q model: per-modulation baseline, distance slope, and
    additive neighbor penalties. Immutable once calibrated."""

    l_ref_km: float
    q_ref_db: dict[Modulation, float]
    slope_db_per_km: dict[Modulation, float]
    p_guard_db: dict[Modulation, float]
    p_unguard_db: dict[Modulation, float]
    roadm_penalty_db: float = 0.0

    def __post_init__(self) -> None:
        for name in ("q_ref_db", "slope_db_per_km", "p_guard_db", "p_unguard_db"):
            mapping = getattr(self, name)
            missing = [m.value for m in Modulation if m not in mapping]
            if missing:
                raise ValueError(f"{name} is missing modulations: {', '.join(missing)}")
        for name in ("slope_db_per_km", "p_guard_db", "p_unguard_db"):
            for modulation, value in getattr(self, name).items():
                if value < 0:
                    raise ValueError(f"{name}[{modulation.value}] must be >= 0, got {value}")
        if self.roadm_penalty_db < 0:
            raise ValueError(f"roadm_penalty_db must be >= 0, got {self.roadm_penalty_db}")
        if not self.q_ref_db[Modulation.BPSK] > self.q_ref_db[Modulation.QPSK]:
            raise ValueError(
                "q_ref_db[BPSK] must exceed q_ref_db[QPSK]; "
                f"got {self.q_ref_db[Modulation.BPSK]} <= {self.q_ref_db[Modulation.QPSK]}"
            )

    def to_dict(self) -> dict:
        def by_name(mapping: dict[Modulation, float]) -> dict:
            return {m.value: mapping[m] for m in sorted(Modulation, key=lambda m: m.value)}

        return {
            "l_ref_km": self.l_ref_km,
            "q_ref_db": by_name(self.q_ref_db),
            "slope_db_per_km": by_name(self.slope_db_per_km),
            "p_guard_db": by_name(self.p_guard_db),
            "p_unguard_db": by_name(self.p_unguard_db),
            "roadm_penalty_db": self.roadm_penalty_db,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "model") -> "QModel":
        try:
            return cls(
                l_ref_km=_schema.require_real(data, "l_ref_km", path),
                q_ref_db=_modulation_map(data, "q_ref_db", path),
                slope_db_per_km=_modulation_map(data, "slope_db_per_km", path),
                p_guard_db=_modulation_map(data, "p_guard_db", path),
                p_unguard_db=_modulation_map(data, "p_unguard_db", path),
                roadm_penalty_db=_schema.require_real(data, "roadm_penalty_db", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


def _at_reference(point: CalibrationPoint, l_ref_km: float) -> bool:
    return math.isclose(point.distance_km, l_ref_km, rel_tol=0.0, abs_tol=1e-6)


def _zero_neighbors(point: CalibrationPoint) -> bool:
    cfg = point.neighbor_config
    return cfg.guarded_native_count == 0 and cfg.unguarded_native_count == 0


def calibrate(points: list[CalibrationPoint], l_ref_km: float = DEFAULT_L_REF_KM) -> QModel:
    """Solve the model exactly from measured points.

    Per modulation the points must cover three roles at the reference
    distance: a clean (zero-neighbor) baseline, a guarded-neighbor
    configuration, and one that includes unguarded neighbors. At least one
    modulation additionally needs a clean point away from the reference
    distance to pin the slope; a modulation without one inherits the other's
    slope. Redundant points are tolerated only when consistent: the solve is
    checked to a 1e-9 residual.
    """
    by_modulation: dict[Modulation, list[CalibrationPoint]] = {m: [] for m in Modulation}
    for point in points:
        by_modulation[point.modulation].append(point)

    for modulation, group in by_modulation.items():
        name = modulation.value
        if not any(_at_reference(p, l_ref_km) and _zero_neighbors(p) for p in group):
            raise CalibrationError(
                f"{name}: missing zero-neighbor baseline point at {l_ref_km} km"
            )
        if not any(
            _at_reference(p, l_ref_km) and p.neighbor_config.guarded_native_count > 0
            for p in group
        ):
            raise CalibrationError(f"{name}: missing guarded-neighbor point at {l_ref_km} km")
        if not any(
            _at_reference(p, l_ref_km) and p.neighbor_config.unguarded_native_count > 0
            for p in group
        ):
            raise CalibrationError(f"{name}: missing unguarded-neighbor point at {l_ref_km} km")

    has_long = {
        m: any(not _at_reference(p, l_ref_km) and _zero_neighbors(p) for p in group)
        for m, group in by_modulation.items()
    }
    if not any(has_long.values()):
        raise CalibrationError(
            "missing long-distance zero-neighbor point: no modulation has a clean "
            f"measurement away from {l_ref_km} km, so no slope can be solved"
        )

    q_ref: dict[Modulation, float] = {}
    p_guard: dict[Modulation, float] = {}
    p_unguard: dict[Modulation, float] = {}
    slope: dict[Modulation, float] = {}

    for modulation, group in by_modulation.items():
        # Columns: q_ref, p_guard, p_unguard, and slope when this modulation
        # has distance diversity. Every point of the modulation participates
        # so inconsistent duplicates surface as residual.
        with_slope = has_long[modulation]
        rows = []
        rhs = []
        for point in group:
            cfg = point.neighbor_config
            row = [1.0, -float(cfg.guarded_native_count), -float(cfg.unguarded_native_count)]
            if with_slope:
                row.append(-(point.distance_km - l_ref_km))
            rows.append(row)
            rhs.append(point.measured_q_db)
        matrix = np.array(rows, dtype=float)
        vector = np.array(rhs, dtype=float)
        solution, _, rank, _ = np.linalg.lstsq(matrix, vector, rcond=None)
        if rank < matrix.shape[1]:
            raise CalibrationError(
                f"{modulation.value}: calibration points do not separate all model "
                f"terms (rank {rank} of {matrix.shape[1]})"
            )
        residual = float(np.max(np.abs(matrix @ solution - vector)))
        if residual > _SOLVE_TOLERANCE:
            raise CalibrationError(
                f"{modulation.value}: inconsistent duplicate points, "
                f"residual {residual:.3e} exceeds {_SOLVE_TOLERANCE:.0e}"
            )
        q_ref[modulation] = float(solution[0])
        p_guard[modulation] = float(solution[1])
        p_unguard[modulation] = float(solution[2])
        if with_slope:
            slope[modulation] = float(solution[3])

    for modulation in Modulation:
        if modulation not in slope:
            other = next(m for m in slope)
            slope[modulation] = slope[other]

    try:
        return QModel(
            l_ref_km=l_ref_km,
            q_ref_db=q_ref,
            slope_db_per_km=slope,
            p_guard_db=p_guard,
            p_unguard_db=p_unguard,
        )
    except ValueError as err:
        raise CalibrationError(str(err)) from None


def neighbor_penalty(model: QModel, neighbors: NeighborConfig, modulation: Modulation) -> float:
    """Total additive dB penalty from adjacent natives; zero inside a
    dedicated partition."""
    if neighbors.in_dedicated_partition:
        return 0.0
    return (
        model.p_guard_db[modulation] * neighbors.guarded_native_count
        + model.p_unguard_db[modulation] * neighbors.unguarded_native_count
    )


def estimate_q(
    model: QModel,
    metrics: PathMetrics,
    modulation: Modulation,
    neighbors: NeighborConfig,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> QEstimate:
    """Predict Q for a modulation over a path in a given neighbor context."""
    value = (
        model.q_ref_db[modulation]
        - model.slope_db_per_km[modulation] * (metrics.distance_km - model.l_ref_km)
        - neighbor_penalty(model, neighbors, modulation)
        - model.roadm_penalty_db * metrics.roadm_count
    )
    return QEstimate(value_db=value, feasibility=classify_q(value, thresholds))


def assess_native_impact(neighbors_of_native: object = None) -> float:
    """Modeled penalty a coherent block imposes on adjacent native IM-DD
    channels: none, in any configuration. Field observations back this; the
    function exists so reports state the claim explicitly rather than
    omitting natives."""
    return 0.0
