"""Capacity planning for coherent super-channels over the host spectrum.

For a demand between two ROADM nodes the planner weighs three deployment
options: a mixed-spectrum block among the native channels running all-BPSK,
the same block running all-QPSK (subject to a reach limit next to IM-DD
neighbors), and an all-QPSK block inside a dedicated partition, which costs
one edge carrier to boundary alignment but removes neighbor penalties. The
feasible option with the highest delivered capacity wins; ties fall to the
higher Q margin, then to mixed spectrum to avoid carving.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import _schema
from .errors import PlanningError, SchemaError, SpectrumError
from .perfmodel import (
    DEFAULT_THRESHOLDS,
    Feasibility,
    QEstimate,
    QModel,
    Thresholds,
    assess_native_impact,
    classify_q,
    estimate_q,
)
from .spectrum import (
    CARRIERS_PER_PAIR,
    MAX_CARRIERS,
    PAIR_COUNT,
    CarrierPair,
    Modulation,
    NeighborConfig,
    OccupantKind,
    SpectrumGrid,
    SuperChannel,
    candidate_starts,
    carve_dedicated_partition,
    guard_clearance_ok,
    neighbor_context,
    place_superchannel,
    unique_occupant_id,
)
from .topology import NetworkTopology, PathMetrics, Violation, aggregate_path

CARRIER_RATE_GBPS = {Modulation.QPSK: 50.0, Modulation.BPSK: 25.0}
DEFAULT_GUARD_BAND_SLOTS = 2
DEFAULT_QPSK_MIXED_REACH_LIMIT_KM = 1000.0


class Strategy(Enum):
    MIXED_SPECTRUM = "MixedSpectrum"
    DEDICATED_PARTITION = "DedicatedPartition"


@dataclass(frozen=True)
class Demand:
    path: tuple[str, ...]
    required_capacity_gbps: float

    def __post_init__(self) -> None:
        if not self.path:
            raise ValueError("demand path must be non-empty")
        if self.required_capacity_gbps <= 0:
            raise ValueError(
                f"required_capacity_gbps must be > 0, got {self.required_capacity_gbps}"
            )

    def to_dict(self) -> dict:
        return {"path": list(self.path), "required_capacity_gbps": self.required_capacity_gbps}

    @classmethod
    def from_dict(cls, data: dict, path: str = "demand") -> "Demand":
        nodes_raw = _schema.get_list(_schema.require(data, "path", path), f"{path}.path")
        nodes = []
        for i, item in enumerate(nodes_raw):
            if not isinstance(item, str):
                raise SchemaError(f"{path}.path[{i}]: expected string node id")
            nodes.append(item)
        try:
            return cls(
                path=tuple(nodes),
                required_capacity_gbps=_schema.require_real(data, "required_capacity_gbps", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class PlannerPolicy:
    """Planning knobs; defaults reproduce the production deployment choices."""

    guard_band_slots: int = DEFAULT_GUARD_BAND_SLOTS
    qpsk_mixed_reach_limit_km: float = DEFAULT_QPSK_MIXED_REACH_LIMIT_KM
    dedicated_edge_carrier_sacrifice: int = 1
    thresholds: Thresholds = field(default_factory=Thresholds)
    # off by default: only uniform per-block modulations are field-proven
    enumerate_pair_mixes: bool = False

    def __post_init__(self) -> None:
        if self.guard_band_slots < 0:
            raise ValueError(f"guard_band_slots must be >= 0, got {self.guard_band_slots}")
        if self.qpsk_mixed_reach_limit_km < 0:
            raise ValueError(
                f"qpsk_mixed_reach_limit_km must be >= 0, got {self.qpsk_mixed_reach_limit_km}"
            )
        if not 0 <= self.dedicated_edge_carrier_sacrifice <= 1:
            raise ValueError(
                f"dedicated_edge_carrier_sacrifice must be 0 or 1, "
                f"got {self.dedicated_edge_carrier_sacrifice}"
            )


DEFAULT_POLICY = PlannerPolicy()


def superchannel_capacity(
    pair_modulations: tuple[Modulation, ...], active_carriers: int
) -> float:
    """Delivered capacity in Gbps. Carriers fill pairs left to right, so a
    sacrificed edge carrier always comes off the last pair."""
    if len(pair_modulations) != PAIR_COUNT:
        raise PlanningError(
            f"expected {PAIR_COUNT} pair modulations, got {len(pair_modulations)}"
        )
    if not 0 <= active_carriers <= MAX_CARRIERS:
        raise PlanningError(
            f"active_carriers must be in 0..{MAX_CARRIERS}, got {active_carriers}"
        )
    total = 0.0
    for carrier in range(active_carriers):
        total += CARRIER_RATE_GBPS[pair_modulations[carrier // CARRIERS_PER_PAIR]]
    return total


@dataclass(frozen=True)
class PlanOption:
    """One candidate deployment. Construction is permissive so reports can be
    loaded and validated; consistency checks live in validate_plan."""

    strategy: Strategy
    pair_modulations: tuple[Modulation, ...]
    active_carriers: int
    capacity_gbps: float
    q: QEstimate
    feasible: bool

    def __post_init__(self) -> None:
        if len(self.pair_modulations) != PAIR_COUNT:
            raise ValueError(
                f"expected {PAIR_COUNT} pair modulations, got {len(self.pair_modulations)}"
            )
        if not 0 <= self.active_carriers <= MAX_CARRIERS:
            raise ValueError(
                f"active_carriers must be in 0..{MAX_CARRIERS}, got {self.active_carriers}"
            )

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "pair_modulations": [m.value for m in self.pair_modulations],
            "active_carriers": self.active_carriers,
            "capacity_gbps": self.capacity_gbps,
            "q": self.q.to_dict(),
            "feasible": self.feasible,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "option") -> "PlanOption":
        strategy_raw = _schema.require_str(data, "strategy", path)
        try:
            strategy = Strategy(strategy_raw)
        except ValueError:
            raise SchemaError(
                f"{path}.strategy: expected 'MixedSpectrum' or 'DedicatedPartition', "
                f"got {strategy_raw!r}"
            ) from None
        mods_raw = _schema.get_list(
            _schema.require(data, "pair_modulations", path), f"{path}.pair_modulations"
        )
        mods = []
        for i, item in enumerate(mods_raw):
            try:
                mods.append(Modulation(item))
            except ValueError:
                raise SchemaError(
                    f"{path}.pair_modulations[{i}]: expected 'BPSK' or 'QPSK', got {item!r}"
                ) from None
        q = QEstimate.from_dict(_schema.require(data, "q", path), f"{path}.q")
        try:
            return cls(
                strategy=strategy,
                pair_modulations=tuple(mods),
                active_carriers=_schema.require_int(data, "active_carriers", path),
                capacity_gbps=_schema.require_real(data, "capacity_gbps", path),
                q=q,
                feasible=_schema.require_bool(data, "feasible", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class PlanReport:
    demand: Demand
    chosen: PlanOption
    alternatives: tuple[PlanOption, ...]
    warnings: tuple[str, ...]
    rationale: str
    native_impact_db: float

    def to_dict(self) -> dict:
        return {
            "demand": self.demand.to_dict(),
            "chosen": self.chosen.to_dict(),
            "alternatives": [option.to_dict() for option in self.alternatives],
            "warnings": list(self.warnings),
            "rationale": self.rationale,
            "native_impact_db": self.native_impact_db,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "report") -> "PlanReport":
        demand = Demand.from_dict(_schema.require(data, "demand", path), f"{path}.demand")
        chosen = PlanOption.from_dict(_schema.require(data, "chosen", path), f"{path}.chosen")
        alternatives = tuple(
            PlanOption.from_dict(item, f"{path}.alternatives[{i}]")
            for i, item in enumerate(
                _schema.get_list(_schema.require(data, "alternatives", path), f"{path}.alternatives")
            )
        )
        warnings_raw = _schema.get_list(_schema.require(data, "warnings", path), f"{path}.warnings")
        for i, item in enumerate(warnings_raw):
            if not isinstance(item, str):
                raise SchemaError(f"{path}.warnings[{i}]: expected string")
        return cls(
            demand=demand,
            chosen=chosen,
            alternatives=alternatives,
            warnings=tuple(warnings_raw),
            rationale=_schema.require_str(data, "rationale", path),
            native_impact_db=_schema.require_real(data, "native_impact_db", path),
        )


@dataclass(frozen=True)
class GridContext:
    """What the current spectrum offers a new block: the lowest mixed window
    and its neighbor profile, and the lowest dedicated window (existing or
    carvable)."""

    mixed_start_slot: int | None
    mixed_neighbors: NeighborConfig | None
    dedicated_start_slot: int | None
    dedicated_needs_carve: bool

    @property
    def mixed_available(self) -> bool:
        return self.mixed_start_slot is not None

    @property
    def dedicated_available(self) -> bool:
        return self.dedicated_start_slot is not None


def _carve_width(width_slots: int) -> int:
    # partition boundaries align to the native grid, so round up to even
    return width_slots if width_slots % 2 == 0 else width_slots + 1


def grid_context_for(grid: SpectrumGrid, guard_band_slots: int) -> GridContext:
    """Probe the grid for the lowest feasible mixed placement and the lowest
    dedicated placement a new super-channel could use."""
    width = grid.band.superchannel_width_slots

    mixed_start: int | None = None
    mixed_neighbors: NeighborConfig | None = None
    native_intervals = [(n.start_slot, n.end_slot) for n in grid.natives]
    for start in candidate_starts(grid.band, OccupantKind.SUPERCHANNEL):
        end = start + width
        if any(p.overlaps(start, end) for p in grid.partitions):
            continue
        if not guard_clearance_ok(start, end, native_intervals, guard_band_slots):
            continue
        trial_id = unique_occupant_id(grid, "probe")
        try:
            placed = place_superchannel(grid, SuperChannel(id=trial_id, start_slot=start, width_slots=width))
        except SpectrumError:
            continue
        mixed_start = start
        mixed_neighbors = neighbor_context(placed, trial_id, guard_band_slots)
        break

    owners = grid.occupant_map()

    def window_free(start: int, end: int) -> bool:
        return all(slot not in owners for slot in range(start, end))

    dedicated_start: int | None = None
    needs_carve = False
    for partition in sorted(grid.partitions, key=lambda p: p.start_slot):
        for start in range(partition.start_slot, partition.end_slot - width + 1):
            if window_free(start, start + width):
                dedicated_start = start
                break
        if dedicated_start is not None:
            break
    if dedicated_start is None:
        carve = _carve_width(width)
        for start in range(0, grid.band.slot_count - carve + 1, 2):
            end = start + carve
            if any(p.overlaps(start, end) for p in grid.partitions):
                continue
            if window_free(start, end):
                dedicated_start = start
                needs_carve = True
                break

    return GridContext(
        mixed_start_slot=mixed_start,
        mixed_neighbors=mixed_neighbors,
        dedicated_start_slot=dedicated_start,
        dedicated_needs_carve=needs_carve,
    )


def _uniform(modulation: Modulation) -> tuple[Modulation, ...]:
    return (modulation,) * PAIR_COUNT


def enumerate_options(
    demand: Demand,
    metrics: PathMetrics,
    context: GridContext,
    model: QModel,
    policy: PlannerPolicy = DEFAULT_POLICY,
) -> list[PlanOption]:
    """Candidate deployments for one demand; infeasible ones are kept and
    flagged rather than dropped."""
    mixed_neighbors = context.mixed_neighbors if context.mixed_neighbors is not None else NeighborConfig()
    dedicated_neighbors = NeighborConfig(in_dedicated_partition=True)
    within_reach = metrics.distance_km <= policy.qpsk_mixed_reach_limit_km
    options: list[PlanOption] = []

    def mixed_option(pair_modulations: tuple[Modulation, ...]) -> PlanOption:
        # the worst-case modulation governs both the estimate and the reach rule
        governing = (
            Modulation.QPSK if Modulation.QPSK in pair_modulations else Modulation.BPSK
        )
        q = estimate_q(model, metrics, governing, mixed_neighbors, policy.thresholds)
        feasible = (
            context.mixed_available
            and q.feasibility is not Feasibility.INFEASIBLE
            and (governing is Modulation.BPSK or within_reach)
        )
        return PlanOption(
            strategy=Strategy.MIXED_SPECTRUM,
            pair_modulations=pair_modulations,
            active_carriers=MAX_CARRIERS,
            capacity_gbps=superchannel_capacity(pair_modulations, MAX_CARRIERS),
            q=q,
            feasible=feasible,
        )

    options.append(mixed_option(_uniform(Modulation.BPSK)))
    options.append(mixed_option(_uniform(Modulation.QPSK)))
    if policy.enumerate_pair_mixes:
        for bpsk_pairs in range(1, PAIR_COUNT):
            mix = (Modulation.BPSK,) * bpsk_pairs + (Modulation.QPSK,) * (PAIR_COUNT - bpsk_pairs)
            options.append(mixed_option(mix))

    active = MAX_CARRIERS - policy.dedicated_edge_carrier_sacrifice
    q_dedicated = estimate_q(model, metrics, Modulation.QPSK, dedicated_neighbors, policy.thresholds)
    options.append(
        PlanOption(
            strategy=Strategy.DEDICATED_PARTITION,
            pair_modulations=_uniform(Modulation.QPSK),
            active_carriers=active,
            capacity_gbps=superchannel_capacity(_uniform(Modulation.QPSK), active),
            q=q_dedicated,
            feasible=context.dedicated_available
            and q_dedicated.feasibility is not Feasibility.INFEASIBLE,
        )
    )
    return options


def _option_key(option: PlanOption) -> tuple:
    mixed_preference = 1 if option.strategy is Strategy.MIXED_SPECTRUM else 0
    return (option.capacity_gbps, option.q.value_db, mixed_preference)


def _modulation_summary(option: PlanOption) -> str:
    kinds = set(option.pair_modulations)
    if len(kinds) == 1:
        return f"all-{next(iter(kinds)).value}"
    counts = {m: option.pair_modulations.count(m) for m in Modulation}
    return "+".join(
        f"{counts[m]}x{m.value}" for m in Modulation if counts[m]
    )


def _describe(option: PlanOption) -> str:
    return (
        f"{option.strategy.value} {_modulation_summary(option)} with "
        f"{option.active_carriers} carriers at {option.capacity_gbps:.0f} Gbps "
        f"(Q {option.q.value_db:.2f} dB, {option.q.feasibility.value})"
    )


def _rejection_reason(
    option: PlanOption,
    chosen: PlanOption,
    metrics: PathMetrics,
    context: GridContext,
    policy: PlannerPolicy,
) -> str:
    if not option.feasible:
        if option.q.feasibility is Feasibility.INFEASIBLE:
            return (
                f"Q {option.q.value_db:.2f} dB is at or below the "
                f"{policy.thresholds.hard_min_db:g} dB floor"
            )
        if option.strategy is Strategy.MIXED_SPECTRUM:
            if not context.mixed_available:
                return "no mixed-spectrum window available"
            return (
                f"distance {metrics.distance_km:.0f} km exceeds the "
                f"{policy.qpsk_mixed_reach_limit_km:g} km reach limit for QPSK "
                f"beside IM-DD neighbors"
            )
        return "no dedicated partition available or carvable"
    if option.capacity_gbps < chosen.capacity_gbps:
        return (
            f"lower capacity ({option.capacity_gbps:.0f} vs "
            f"{chosen.capacity_gbps:.0f} Gbps)"
        )
    if option.q.value_db < chosen.q.value_db:
        return f"lower Q margin ({option.q.value_db:.2f} vs {chosen.q.value_db:.2f} dB)"
    if option.strategy is Strategy.DEDICATED_PARTITION:
        return "would carve a dedicated partition for no capacity or margin gain"
    return "tied with the chosen option"


def plan_link(
    demand: Demand,
    topology: NetworkTopology,
    grid: SpectrumGrid,
    model: QModel,
    policy: PlannerPolicy = DEFAULT_POLICY,
) -> PlanReport:
    """Plan one demand end to end: aggregate the path, probe the grid,
    enumerate options, and pick the feasible option with maximum capacity."""
    metrics = aggregate_path(topology, demand.path)
    context = grid_context_for(grid, policy.guard_band_slots)
    options = enumerate_options(demand, metrics, context, model, policy)

    feasible = [option for option in options if option.feasible]
    pool = feasible if feasible else options
    chosen = max(pool, key=_option_key)
    alternatives = tuple(option for option in options if option is not chosen)

    warnings: list[str] = []
    if not feasible:
        shortfall = max(0.0, policy.thresholds.hard_min_db - chosen.q.value_db)
        warnings.append(
            f"no feasible option for this demand; best candidate is "
            f"{_describe(chosen)}, {shortfall:.2f} dB short of the "
            f"{policy.thresholds.hard_min_db:g} dB floor"
        )
    else:
        if chosen.q.feasibility is Feasibility.MARGINAL:
            warnings.append(
                f"chosen option Q {chosen.q.value_db:.2f} dB does not clear the "
                f"design threshold {policy.thresholds.design_min_db:g} dB"
            )
        if demand.required_capacity_gbps > chosen.capacity_gbps:
            warnings.append(
                f"demand {demand.required_capacity_gbps:.0f} Gbps exceeds the "
                f"delivered capacity {chosen.capacity_gbps:.0f} Gbps"
            )

    parts = [f"chose {_describe(chosen)}"]
    for option in alternatives:
        parts.append(
            f"rejected {_describe(option)}: "
            f"{_rejection_reason(option, chosen, metrics, context, policy)}"
        )
    rationale = "; ".join(parts)

    return PlanReport(
        demand=demand,
        chosen=chosen,
        alternatives=alternatives,
        warnings=tuple(warnings),
        rationale=rationale,
        native_impact_db=assess_native_impact(),
    )


def validate_plan(
    report: PlanReport,
    grid: SpectrumGrid,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
    policy: PlannerPolicy | None = None,
) -> list[Violation]:
    """Integrity checks on a plan against a grid. Violations are data, not
    exceptions; an empty list means the plan is deployable as claimed."""
    violations: list[Violation] = []
    chosen = report.chosen

    if chosen.q.value_db <= thresholds.hard_min_db:
        violations.append(
            Violation(
                "Q_BELOW_HARD_MIN",
                f"chosen Q {chosen.q.value_db:.2f} dB is at or below the "
                f"{thresholds.hard_min_db:g} dB floor",
            )
        )
    expected_class = classify_q(chosen.q.value_db, thresholds)
    if expected_class is not chosen.q.feasibility:
        violations.append(
            Violation(
                "CLASS_MISMATCH",
                f"chosen Q {chosen.q.value_db:.2f} dB classifies as "
                f"{expected_class.value}, report says {chosen.q.feasibility.value}",
            )
        )
    try:
        expected_capacity = superchannel_capacity(chosen.pair_modulations, chosen.active_carriers)
    except PlanningError as err:
        violations.append(Violation("CAPACITY_MISMATCH", str(err)))
    else:
        if abs(expected_capacity - chosen.capacity_gbps) > 1e-9:
            violations.append(
                Violation(
                    "CAPACITY_MISMATCH",
                    f"capacity {chosen.capacity_gbps:.0f} Gbps does not match "
                    f"{expected_capacity:.0f} Gbps implied by the pair modulations",
                )
            )

    guard = (policy or DEFAULT_POLICY).guard_band_slots
    context = grid_context_for(grid, guard)
    if chosen.strategy is Strategy.MIXED_SPECTRUM and not context.mixed_available:
        violations.append(
            Violation("PLACEMENT_INFEASIBLE", "no mixed-spectrum window on this grid")
        )
    if chosen.strategy is Strategy.DEDICATED_PARTITION and not context.dedicated_available:
        violations.append(
            Violation(
                "PLACEMENT_INFEASIBLE",
                "no dedicated partition available or carvable on this grid",
            )
        )
    return violations


def apply_plan(
    grid: SpectrumGrid,
    report: PlanReport,
    policy: PlannerPolicy = DEFAULT_POLICY,
) -> tuple[SpectrumGrid, str]:
    """Commit a plan's chosen option to the grid: carve if needed, place the
    block, and return the updated grid with the new occupant id."""
    chosen = report.chosen
    context = grid_context_for(grid, policy.guard_band_slots)
    pairs = tuple(
        CarrierPair(index=i, modulation=chosen.pair_modulations[i]) for i in range(PAIR_COUNT)
    )
    width = grid.band.superchannel_width_slots
    sc_id = unique_occupant_id(grid, "aw-block")

    if chosen.strategy is Strategy.DEDICATED_PARTITION:
        if not context.dedicated_available:
            raise PlanningError("no dedicated partition available or carvable")
        start = context.dedicated_start_slot
        if context.dedicated_needs_carve:
            grid = carve_dedicated_partition(grid, start, _carve_width(width))
    else:
        if not context.mixed_available:
            raise PlanningError("no mixed-spectrum window available")
        start = context.mixed_start_slot

    block = SuperChannel(
        id=sc_id,
        start_slot=start,
        width_slots=width,
        pairs=pairs,
        active_carriers=chosen.active_carriers,
    )
    return place_superchannel(grid, block), sc_id
