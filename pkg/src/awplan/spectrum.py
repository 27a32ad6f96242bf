"""C-band spectrum model: native channels, super-channels, guard bands, partitions.

The atomic slot is 25 GHz, so the full C-band is 160 slots. Native channels
occupy 2 slots and start on even slots (the 50 GHz host grid); super-channel
blocks occupy 8 contiguous slots (200 GHz) at any offset. Dedicated
partitions reserve a region for coherent carriers and exclude natives.

All operations are pure: they take a grid and return an updated copy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from enum import Enum

from . import _schema
from .errors import SchemaError, SpectrumError

SLOT_WIDTH_GHZ = 25.0
NATIVE_WIDTH_SLOTS = 2
NATIVE_FORMAT = "IM-DD"
NATIVE_BITRATES_GBPS = (10, 40)
PAIR_COUNT = 5
CARRIERS_PER_PAIR = 2
MAX_CARRIERS = PAIR_COUNT * CARRIERS_PER_PAIR


class Modulation(Enum):
    BPSK = "BPSK"
    QPSK = "QPSK"


class OccupantKind(Enum):
    NATIVE = "native"
    SUPERCHANNEL = "superchannel"


@dataclass(frozen=True)
class BandConfig:
    """Fixed-grid C-band geometry. Slot width and native width are fixed by
    the host technology; only the band size and block width are tunable."""

    slot_width_ghz: float = SLOT_WIDTH_GHZ
    slot_count: int = 160
    native_channel_width_slots: int = NATIVE_WIDTH_SLOTS
    superchannel_width_slots: int = 8

    def __post_init__(self) -> None:
        if self.slot_width_ghz != SLOT_WIDTH_GHZ:
            raise ValueError(f"slot_width_ghz is fixed at {SLOT_WIDTH_GHZ}")
        if self.native_channel_width_slots != NATIVE_WIDTH_SLOTS:
            raise ValueError(f"native_channel_width_slots is fixed at {NATIVE_WIDTH_SLOTS}")
        if self.slot_count <= 0 or self.slot_count % 2 != 0:
            raise ValueError(f"slot_count must be a positive even integer, got {self.slot_count}")
        if not 0 < self.superchannel_width_slots <= self.slot_count:
            raise ValueError(
                f"superchannel_width_slots must be in 1..{self.slot_count}, "
                f"got {self.superchannel_width_slots}"
            )

    def to_dict(self) -> dict:
        return {
            "slot_width_ghz": self.slot_width_ghz,
            "slot_count": self.slot_count,
            "native_channel_width_slots": self.native_channel_width_slots,
            "superchannel_width_slots": self.superchannel_width_slots,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "band") -> "BandConfig":
        try:
            return cls(
                slot_width_ghz=_schema.require_real(data, "slot_width_ghz", path),
                slot_count=_schema.require_int(data, "slot_count", path),
                native_channel_width_slots=_schema.require_int(data, "native_channel_width_slots", path),
                superchannel_width_slots=_schema.require_int(data, "superchannel_width_slots", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class NativeChannel:
    """A host-domain IM-DD channel on the 50 GHz grid."""

    id: str
    start_slot: int
    bitrate_gbps: int = 10
    format: str = NATIVE_FORMAT

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("native channel id must be non-empty")
        if self.bitrate_gbps not in NATIVE_BITRATES_GBPS:
            raise ValueError(
                f"native bitrate must be one of {NATIVE_BITRATES_GBPS}, got {self.bitrate_gbps}"
            )
        if self.format != NATIVE_FORMAT:
            raise ValueError(f"native format is fixed at {NATIVE_FORMAT!r}")

    @property
    def end_slot(self) -> int:
        """First slot after the channel."""
        return self.start_slot + NATIVE_WIDTH_SLOTS

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "start_slot": self.start_slot,
            "bitrate_gbps": self.bitrate_gbps,
            "format": self.format,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "native") -> "NativeChannel":
        try:
            return cls(
                id=_schema.require_str(data, "id", path),
                start_slot=_schema.require_int(data, "start_slot", path),
                bitrate_gbps=_schema.optional_int(data, "bitrate_gbps", path, 10),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class CarrierPair:
    """Two carriers of a super-channel sharing one modulation setting."""

    index: int
    modulation: Modulation
    enabled: bool = True

    def __post_init__(self) -> None:
        if not 0 <= self.index < PAIR_COUNT:
            raise ValueError(f"pair index must be in 0..{PAIR_COUNT - 1}, got {self.index}")

    def to_dict(self) -> dict:
        return {"index": self.index, "modulation": self.modulation.value, "enabled": self.enabled}

    @classmethod
    def from_dict(cls, data: dict, path: str = "pair") -> "CarrierPair":
        modulation_raw = _schema.require_str(data, "modulation", path)
        try:
            modulation = Modulation(modulation_raw)
        except ValueError:
            raise SchemaError(
                f"{path}.modulation: expected one of 'BPSK', 'QPSK', got {modulation_raw!r}"
            ) from None
        try:
            return cls(
                index=_schema.require_int(data, "index", path),
                modulation=modulation,
                enabled=_schema.optional_bool(data, "enabled", path, True),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


def default_pairs(modulation: Modulation = Modulation.QPSK) -> tuple[CarrierPair, ...]:
    """Five enabled pairs with a uniform modulation."""
    return tuple(CarrierPair(index=i, modulation=modulation) for i in range(PAIR_COUNT))


@dataclass(frozen=True)
class SuperChannel:
    """A coherent block of 10 carriers managed as one entity.

    ``active_carriers`` is normally twice the enabled pair count; placing the
    block in a dedicated partition may sacrifice one edge carrier, so one
    fewer is also legal.
    """

    id: str
    start_slot: int
    width_slots: int = 8
    pairs: tuple[CarrierPair, ...] = field(default_factory=default_pairs)
    active_carriers: int = MAX_CARRIERS

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("super-channel id must be non-empty")
        if len(self.pairs) != PAIR_COUNT:
            raise ValueError(f"a super-channel has exactly {PAIR_COUNT} pairs, got {len(self.pairs)}")
        if tuple(sorted(p.index for p in self.pairs)) != tuple(range(PAIR_COUNT)):
            raise ValueError("pair indices must be 0..4 with no duplicates")
        if not 0 <= self.active_carriers <= MAX_CARRIERS:
            raise ValueError(f"active_carriers must be in 0..{MAX_CARRIERS}, got {self.active_carriers}")
        full = CARRIERS_PER_PAIR * sum(1 for p in self.pairs if p.enabled)
        if self.active_carriers not in (full, max(full - 1, 0)):
            raise ValueError(
                f"active_carriers must be {full} or {max(full - 1, 0)} "
                f"for {full // 2} enabled pairs, got {self.active_carriers}"
            )

    @property
    def end_slot(self) -> int:
        return self.start_slot + self.width_slots

    def pair_by_index(self, index: int) -> CarrierPair:
        for pair in self.pairs:
            if pair.index == index:
                return pair
        raise KeyError(index)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "start_slot": self.start_slot,
            "width_slots": self.width_slots,
            "pairs": [pair.to_dict() for pair in sorted(self.pairs, key=lambda p: p.index)],
            "active_carriers": self.active_carriers,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "superchannel") -> "SuperChannel":
        pairs_raw = _schema.get_list(_schema.require(data, "pairs", path), f"{path}.pairs")
        pairs = tuple(
            CarrierPair.from_dict(item, f"{path}.pairs[{i}]") for i, item in enumerate(pairs_raw)
        )
        try:
            return cls(
                id=_schema.require_str(data, "id", path),
                start_slot=_schema.require_int(data, "start_slot", path),
                width_slots=_schema.require_int(data, "width_slots", path),
                pairs=pairs,
                active_carriers=_schema.require_int(data, "active_carriers", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class DedicatedPartition:
    """A contiguous region reserved for coherent carriers; natives are kept out.
    Boundaries align to the 50 GHz native grid."""

    start_slot: int
    width_slots: int

    def __post_init__(self) -> None:
        if self.width_slots <= 0:
            raise ValueError(f"partition width must be > 0, got {self.width_slots}")
        if self.start_slot % 2 != 0 or (self.start_slot + self.width_slots) % 2 != 0:
            raise ValueError(
                f"partition boundaries must align to the 50GHz grid, "
                f"got [{self.start_slot}, {self.start_slot + self.width_slots})"
            )

    @property
    def end_slot(self) -> int:
        return self.start_slot + self.width_slots

    def contains(self, start: int, end: int) -> bool:
        return self.start_slot <= start and end <= self.end_slot

    def overlaps(self, start: int, end: int) -> bool:
        return start < self.end_slot and self.start_slot < end

    def to_dict(self) -> dict:
        return {"start_slot": self.start_slot, "width_slots": self.width_slots}

    @classmethod
    def from_dict(cls, data: dict, path: str = "partition") -> "DedicatedPartition":
        try:
            return cls(
                start_slot=_schema.require_int(data, "start_slot", path),
                width_slots=_schema.require_int(data, "width_slots", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class NeighborConfig:
    """Native channels adjacent to a super-channel, split by guard-band status."""

    guarded_native_count: int = 0
    unguarded_native_count: int = 0
    in_dedicated_partition: bool = False

    def __post_init__(self) -> None:
        if self.guarded_native_count < 0 or self.unguarded_native_count < 0:
            raise ValueError("neighbor counts must be >= 0")
        if self.in_dedicated_partition and (
            self.guarded_native_count or self.unguarded_native_count
        ):
            raise ValueError("a super-channel in a dedicated partition has no native neighbors")

    def to_dict(self) -> dict:
        return {
            "guarded_native_count": self.guarded_native_count,
            "unguarded_native_count": self.unguarded_native_count,
            "in_dedicated_partition": self.in_dedicated_partition,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "neighbors") -> "NeighborConfig":
        try:
            return cls(
                guarded_native_count=_schema.require_int(data, "guarded_native_count", path),
                unguarded_native_count=_schema.require_int(data, "unguarded_native_count", path),
                in_dedicated_partition=_schema.require_bool(data, "in_dedicated_partition", path),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class SpectrumGrid:
    band: BandConfig = field(default_factory=BandConfig)
    natives: tuple[NativeChannel, ...] = ()
    superchannels: tuple[SuperChannel, ...] = ()
    partitions: tuple[DedicatedPartition, ...] = ()

    def occupant_map(self) -> dict[int, tuple[OccupantKind, str]]:
        """Slot -> owner map; raises if two occupants ever share a slot."""
        owners: dict[int, tuple[OccupantKind, str]] = {}
        for native in self.natives:
            for slot in range(native.start_slot, native.end_slot):
                if slot in owners:
                    raise SpectrumError(
                        f"slot {slot} owned by both {owners[slot][1]!r} and {native.id!r}"
                    )
                owners[slot] = (OccupantKind.NATIVE, native.id)
        for sc in self.superchannels:
            for slot in range(sc.start_slot, sc.end_slot):
                if slot in owners:
                    raise SpectrumError(
                        f"slot {slot} owned by both {owners[slot][1]!r} and {sc.id!r}"
                    )
                owners[slot] = (OccupantKind.SUPERCHANNEL, sc.id)
        return owners

    def occupant_ids(self) -> set[str]:
        return {n.id for n in self.natives} | {sc.id for sc in self.superchannels}

    def find_superchannel(self, sc_id: str) -> SuperChannel | None:
        for sc in self.superchannels:
            if sc.id == sc_id:
                return sc
        return None

    def partition_containing(self, start: int, end: int) -> DedicatedPartition | None:
        for partition in self.partitions:
            if partition.contains(start, end):
                return partition
        return None

    def to_dict(self) -> dict:
        return {
            "band": self.band.to_dict(),
            "natives": [n.to_dict() for n in self.natives],
            "superchannels": [sc.to_dict() for sc in self.superchannels],
            "partitions": [p.to_dict() for p in self.partitions],
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "grid") -> "SpectrumGrid":
        """Rebuild a grid by replaying placements, so every grid invariant is
        re-checked on load."""
        band = BandConfig.from_dict(_schema.require(data, "band", path), f"{path}.band")
        grid = cls(band=band)
        try:
            partitions_raw = _schema.get_list(_schema.require(data, "partitions", path), f"{path}.partitions")
            for i, item in enumerate(partitions_raw):
                part = DedicatedPartition.from_dict(item, f"{path}.partitions[{i}]")
                grid = carve_dedicated_partition(grid, part.start_slot, part.width_slots)
            natives_raw = _schema.get_list(_schema.require(data, "natives", path), f"{path}.natives")
            for i, item in enumerate(natives_raw):
                grid = place_native(grid, NativeChannel.from_dict(item, f"{path}.natives[{i}]"))
            scs_raw = _schema.get_list(_schema.require(data, "superchannels", path), f"{path}.superchannels")
            for i, item in enumerate(scs_raw):
                grid = place_superchannel(grid, SuperChannel.from_dict(item, f"{path}.superchannels[{i}]"))
        except SpectrumError as err:
            raise SchemaError(f"{path}: {err}") from None
        return grid


def empty_grid(band: BandConfig | None = None) -> SpectrumGrid:
    return SpectrumGrid(band=band or BandConfig())


def _check_occupancy(grid: SpectrumGrid, start: int, end: int, occupant_id: str) -> None:
    if occupant_id in grid.occupant_ids():
        raise SpectrumError(f"occupant id {occupant_id!r} already present in grid")
    owners = grid.occupant_map()
    for slot in range(start, end):
        if slot in owners:
            raise SpectrumError(
                f"{occupant_id!r} would overlap {owners[slot][1]!r} at slot {slot}"
            )


def place_native(grid: SpectrumGrid, channel: NativeChannel) -> SpectrumGrid:
    """Place a native channel; rejects misalignment, overlap, partition
    intrusion, and out-of-band positions."""
    if channel.start_slot % 2 != 0:
        raise SpectrumError(
            f"native {channel.id!r}: start_slot {channel.start_slot} is not aligned "
            f"to the 50GHz native grid"
        )
    if channel.start_slot < 0 or channel.end_slot > grid.band.slot_count:
        raise SpectrumError(
            f"native {channel.id!r}: slots [{channel.start_slot}, {channel.end_slot}) "
            f"fall outside the {grid.band.slot_count}-slot band"
        )
    for partition in grid.partitions:
        if partition.overlaps(channel.start_slot, channel.end_slot):
            raise SpectrumError(
                f"native {channel.id!r}: placement inside dedicated partition "
                f"[{partition.start_slot}, {partition.end_slot})"
            )
    _check_occupancy(grid, channel.start_slot, channel.end_slot, channel.id)
    return replace(grid, natives=grid.natives + (channel,))


def place_superchannel(grid: SpectrumGrid, sc: SuperChannel) -> SpectrumGrid:
    """Place a super-channel block; it must lie fully inside or fully outside
    every dedicated partition."""
    if sc.width_slots != grid.band.superchannel_width_slots:
        raise SpectrumError(
            f"super-channel {sc.id!r}: width {sc.width_slots} does not match the "
            f"configured block width {grid.band.superchannel_width_slots}"
        )
    if sc.start_slot < 0 or sc.end_slot > grid.band.slot_count:
        raise SpectrumError(
            f"super-channel {sc.id!r}: slots [{sc.start_slot}, {sc.end_slot}) "
            f"fall outside the {grid.band.slot_count}-slot band"
        )
    for partition in grid.partitions:
        if partition.overlaps(sc.start_slot, sc.end_slot) and not partition.contains(
            sc.start_slot, sc.end_slot
        ):
            raise SpectrumError(
                f"super-channel {sc.id!r}: straddles the partition boundary at "
                f"[{partition.start_slot}, {partition.end_slot})"
            )
    _check_occupancy(grid, sc.start_slot, sc.end_slot, sc.id)
    return replace(grid, superchannels=grid.superchannels + (sc,))


def carve_dedicated_partition(grid: SpectrumGrid, start_slot: int, width_slots: int) -> SpectrumGrid:
    """Reserve [start_slot, start_slot + width_slots) for coherent carriers.

    The region must be free of native channels; existing super-channels are
    allowed and become in-partition occupants.
    """
    if width_slots <= 0:
        raise SpectrumError(f"partition width must be > 0, got {width_slots}")
    end_slot = start_slot + width_slots
    if start_slot % 2 != 0 or end_slot % 2 != 0:
        raise SpectrumError(
            f"partition [{start_slot}, {end_slot}) is not aligned to the 50GHz grid"
        )
    if start_slot < 0 or end_slot > grid.band.slot_count:
        raise SpectrumError(
            f"partition [{start_slot}, {end_slot}) falls outside the "
            f"{grid.band.slot_count}-slot band"
        )
    for existing in grid.partitions:
        if existing.overlaps(start_slot, end_slot):
            raise SpectrumError(
                f"partition [{start_slot}, {end_slot}) overlaps existing partition "
                f"[{existing.start_slot}, {existing.end_slot})"
            )
    for native in grid.natives:
        if start_slot < native.end_slot and native.start_slot < end_slot:
            raise SpectrumError(
                f"partition [{start_slot}, {end_slot}) region contains native {native.id!r}"
            )
    partition = DedicatedPartition(start_slot=start_slot, width_slots=width_slots)
    return replace(grid, partitions=grid.partitions + (partition,))


def _scan_side(
    grid: SpectrumGrid,
    sc: SuperChannel,
    guard_band_slots: int,
    right: bool,
) -> tuple[int, int]:
    """Count (guarded, unguarded) natives on one side of a super-channel.

    The scan runs outward until the band edge or the first other
    super-channel. The nearest native and every native directly abutting it
    form a chain classified by the chain head's gap to the block edge; any
    further native whose own gap is inside the guard window also counts as
    unguarded.
    """
    if right:
        natives = sorted(
            (n for n in grid.natives if n.start_slot >= sc.end_slot),
            key=lambda n: n.start_slot,
        )
        blockers = [
            other.start_slot
            for other in grid.superchannels
            if other.id != sc.id and other.start_slot >= sc.end_slot
        ]
        boundary = min(blockers) if blockers else grid.band.slot_count
        natives = [n for n in natives if n.end_slot <= boundary]
        gaps = [n.start_slot - sc.end_slot for n in natives]
    else:
        natives = sorted(
            (n for n in grid.natives if n.end_slot <= sc.start_slot),
            key=lambda n: n.start_slot,
            reverse=True,
        )
        blockers = [
            other.end_slot
            for other in grid.superchannels
            if other.id != sc.id and other.end_slot <= sc.start_slot
        ]
        boundary = max(blockers) if blockers else 0
        natives = [n for n in natives if n.start_slot >= boundary]
        gaps = [sc.start_slot - n.end_slot for n in natives]

    if not natives:
        return 0, 0

    # Maximal abutting chain anchored at the nearest native.
    chain_len = 1
    for prev, nxt in zip(natives, natives[1:]):
        adjacent = (
            nxt.start_slot == prev.end_slot if right else nxt.end_slot == prev.start_slot
        )
        if not adjacent:
            break
        chain_len += 1

    head_gap = gaps[0]
    guarded = 0
    unguarded = 0
    if head_gap < guard_band_slots:
        unguarded += chain_len
    else:
        guarded += chain_len
    for gap in gaps[chain_len:]:
        if gap < guard_band_slots:
            unguarded += 1
    return guarded, unguarded


def neighbor_context(grid: SpectrumGrid, sc_id: str, guard_band_slots: int) -> NeighborConfig:
    """Classify the native channels adjacent to a placed super-channel."""
    if guard_band_slots < 0:
        raise SpectrumError(f"guard_band_slots must be >= 0, got {guard_band_slots}")
    sc = grid.find_superchannel(sc_id)
    if sc is None:
        raise SpectrumError(f"unknown super-channel id {sc_id!r}")
    if grid.partition_containing(sc.start_slot, sc.end_slot) is not None:
        return NeighborConfig(in_dedicated_partition=True)
    left = _scan_side(grid, sc, guard_band_slots, right=False)
    right = _scan_side(grid, sc, guard_band_slots, right=True)
    return NeighborConfig(
        guarded_native_count=left[0] + right[0],
        unguarded_native_count=left[1] + right[1],
    )


@dataclass(frozen=True)
class PlacementRequest:
    kind: OccupantKind
    id: str
    guard_band_slots: int = 0
    partition_only: bool = False
    bitrate_gbps: int = 10

    def __post_init__(self) -> None:
        if self.guard_band_slots < 0:
            raise ValueError(f"guard_band_slots must be >= 0, got {self.guard_band_slots}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "id": self.id,
            "guard_band_slots": self.guard_band_slots,
            "partition_only": self.partition_only,
            "bitrate_gbps": self.bitrate_gbps,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "request") -> "PlacementRequest":
        kind_raw = _schema.require_str(data, "kind", path)
        try:
            kind = OccupantKind(kind_raw)
        except ValueError:
            raise SchemaError(
                f"{path}.kind: expected 'native' or 'superchannel', got {kind_raw!r}"
            ) from None
        try:
            return cls(
                kind=kind,
                id=_schema.require_str(data, "id", path),
                guard_band_slots=_schema.optional_int(data, "guard_band_slots", path, 0),
                partition_only=_schema.optional_bool(data, "partition_only", path, False),
                bitrate_gbps=_schema.optional_int(data, "bitrate_gbps", path, 10),
            )
        except ValueError as err:
            raise SchemaError(f"{path}: {err}") from None


@dataclass(frozen=True)
class Assignment:
    request: PlacementRequest
    start_slot: int | None
    reason: str | None = None

    @property
    def placed(self) -> bool:
        return self.start_slot is not None

    def to_dict(self) -> dict:
        return {
            "request": self.request.to_dict(),
            "start_slot": self.start_slot,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "assignment") -> "Assignment":
        request = PlacementRequest.from_dict(_schema.require(data, "request", path), f"{path}.request")
        start = _schema.require(data, "start_slot", path)
        if start is not None and (isinstance(start, bool) or not isinstance(start, int)):
            raise SchemaError(f"{path}.start_slot: expected integer or null")
        return cls(request=request, start_slot=start, reason=_schema.optional_str(data, "reason", path, None))


@dataclass(frozen=True)
class AllocationResult:
    assignments: tuple[Assignment, ...]
    grid: SpectrumGrid

    def to_dict(self) -> dict:
        return {
            "assignments": [a.to_dict() for a in self.assignments],
            "grid": self.grid.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "allocation") -> "AllocationResult":
        assignments = tuple(
            Assignment.from_dict(item, f"{path}.assignments[{i}]")
            for i, item in enumerate(
                _schema.get_list(_schema.require(data, "assignments", path), f"{path}.assignments")
            )
        )
        grid = SpectrumGrid.from_dict(_schema.require(data, "grid", path), f"{path}.grid")
        return cls(assignments=assignments, grid=grid)


def guard_clearance_ok(start: int, end: int, others: list[tuple[int, int]], guard: int) -> bool:
    """True when every interval in *others* keeps at least *guard* free slots
    of separation from [start, end)."""
    for other_start, other_end in others:
        if other_end <= start:
            gap = start - other_end
        elif other_start >= end:
            gap = other_start - end
        else:
            return False
        if gap < guard:
            return False
    return True


def _try_place(grid: SpectrumGrid, request: PlacementRequest, start: int) -> SpectrumGrid | None:
    if request.kind is OccupantKind.NATIVE:
        occupant = NativeChannel(id=request.id, start_slot=start, bitrate_gbps=request.bitrate_gbps)
        if request.partition_only:
            return None  # natives are excluded from partitions by invariant
        if request.guard_band_slots > 0:
            intervals = [(sc.start_slot, sc.end_slot) for sc in grid.superchannels]
            if not guard_clearance_ok(start, occupant.end_slot, intervals, request.guard_band_slots):
                return None
        try:
            return place_native(grid, occupant)
        except SpectrumError:
            return None

    sc = SuperChannel(id=request.id, start_slot=start, width_slots=grid.band.superchannel_width_slots)
    if request.partition_only and grid.partition_containing(sc.start_slot, sc.end_slot) is None:
        return None
    if request.guard_band_slots > 0:
        intervals = [(n.start_slot, n.end_slot) for n in grid.natives]
        if not guard_clearance_ok(sc.start_slot, sc.end_slot, intervals, request.guard_band_slots):
            return None
    try:
        return place_superchannel(grid, sc)
    except SpectrumError:
        return None


def candidate_starts(band: BandConfig, kind: OccupantKind) -> range:
    """Ascending start slots a request of *kind* may legally occupy."""
    if kind is OccupantKind.NATIVE:
        return range(0, band.slot_count - NATIVE_WIDTH_SLOTS + 1, 2)
    return range(0, band.slot_count - band.superchannel_width_slots + 1)


def first_fit_allocate(
    grid: SpectrumGrid, requests: list[PlacementRequest] | tuple[PlacementRequest, ...]
) -> AllocationResult:
    """Assign each request the lowest feasible start slot, in request order.

    Feasibility honors grid alignment, occupancy, partition rules, and the
    request's guard band. Requests that do not fit anywhere are reported as
    unplaced; they never fail the allocation.
    """
    assignments: list[Assignment] = []
    for request in requests:
        placed_grid: SpectrumGrid | None = None
        placed_start: int | None = None
        for start in candidate_starts(grid.band, request.kind):
            attempt = _try_place(grid, request, start)
            if attempt is not None:
                placed_grid = attempt
                placed_start = start
                break
        if placed_grid is None:
            assignments.append(Assignment(request=request, start_slot=None, reason="no feasible window"))
        else:
            grid = placed_grid
            assignments.append(Assignment(request=request, start_slot=placed_start))
    return AllocationResult(assignments=tuple(assignments), grid=grid)


def unique_occupant_id(grid: SpectrumGrid, stem: str) -> str:
    """A fresh occupant id based on *stem* that does not collide with the grid."""
    existing = grid.occupant_ids()
    if stem not in existing:
        return stem
    for i in itertools.count(2):
        candidate = f"{stem}-{i}"
        if candidate not in existing:
            return candidate
    raise AssertionError("unreachable")
