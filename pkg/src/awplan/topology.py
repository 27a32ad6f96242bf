"""Host optical network model: nodes, fiber spans, and per-path metric aggregation.

The graph stays at ROADM-node granularity. Inline amplifier sites are not
nodes; a span that terminates on an optical line amplifier hut instead of a
ROADM carries ``has_inline_ola=True``, and a multi-hut link between two
ROADM nodes is encoded as several consecutive spans sharing the same
endpoint pair. Spans are bidirectional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from . import _schema
from .errors import SchemaError, TopologyError

VIOLATION_DUPLICATE_NODE = "DUPLICATE_NODE"
VIOLATION_EMPTY_NODE_ID = "EMPTY_NODE_ID"
VIOLATION_NEGATIVE_LENGTH = "NEGATIVE_LENGTH"
VIOLATION_NEGATIVE_ATTENUATION = "NEGATIVE_ATTENUATION"
VIOLATION_SELF_LOOP = "SELF_LOOP"
VIOLATION_DANGLING_ENDPOINT = "DANGLING_ENDPOINT"


class AmplifierType(Enum):
    EDFA = "EDFA"
    RAMAN = "Raman"


@dataclass(frozen=True)
class Violation:
    """A single invariant violation with a stable machine code."""

    code: str
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


@dataclass(frozen=True)
class Node:
    id: str
    name: str
    has_roadm: bool

    def to_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "has_roadm": self.has_roadm}

    @classmethod
    def from_dict(cls, data: dict, path: str = "node") -> "Node":
        return cls(
            id=_schema.require_str(data, "id", path),
            name=_schema.require_str(data, "name", path),
            has_roadm=_schema.require_bool(data, "has_roadm", path),
        )


@dataclass(frozen=True)
class Span:
    """One fiber segment between two ROADM nodes, or between a ROADM node and
    an anonymous inline amplifier site on the way to the far node."""

    from_node: str
    to_node: str
    length_km: float
    attenuation_db: float
    amplifier: AmplifierType
    dcm_present: bool
    has_inline_ola: bool

    def to_dict(self) -> dict:
        return {
            "from": self.from_node,
            "to": self.to_node,
            "length_km": self.length_km,
            "attenuation_db": self.attenuation_db,
            "amplifier": self.amplifier.value,
            "dcm_present": self.dcm_present,
            "has_inline_ola": self.has_inline_ola,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "span") -> "Span":
        amplifier_raw = _schema.require_str(data, "amplifier", path)
        try:
            amplifier = AmplifierType(amplifier_raw)
        except ValueError:
            raise SchemaError(
                f"{path}.amplifier: expected one of 'EDFA', 'Raman', got {amplifier_raw!r}"
            ) from None
        return cls(
            from_node=_schema.require_str(data, "from", path),
            to_node=_schema.require_str(data, "to", path),
            length_km=_schema.require_real(data, "length_km", path),
            attenuation_db=_schema.require_real(data, "attenuation_db", path),
            amplifier=amplifier,
            dcm_present=_schema.require_bool(data, "dcm_present", path),
            has_inline_ola=_schema.require_bool(data, "has_inline_ola", path),
        )


@dataclass(frozen=True)
class NetworkTopology:
    """Immutable container of nodes and spans.

    Construction does not enforce invariants; use :func:`validate_topology`
    to collect violations, or :func:`parse_topology` which rejects invalid
    documents outright.
    """

    nodes: tuple[Node, ...]
    spans: tuple[Span, ...]

    def node_ids(self) -> set[str]:
        return {node.id for node in self.nodes}

    def find_node(self, node_id: str) -> Node | None:
        for node in self.nodes:
            if node.id == node_id:
                return node
        return None

    def spans_between(self, a: str, b: str) -> tuple[Span, ...]:
        """All spans joining *a* and *b* in either orientation, in list order."""
        key = frozenset((a, b))
        return tuple(
            s for s in self.spans if frozenset((s.from_node, s.to_node)) == key
        )

    def to_dict(self) -> dict:
        return {
            "nodes": [node.to_dict() for node in self.nodes],
            "spans": [span.to_dict() for span in self.spans],
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "topology") -> "NetworkTopology":
        nodes = tuple(
            Node.from_dict(item, f"{path}.nodes[{i}]")
            for i, item in enumerate(_schema.get_list(_schema.require(data, "nodes", path), f"{path}.nodes"))
        )
        spans = tuple(
            Span.from_dict(item, f"{path}.spans[{i}]")
            for i, item in enumerate(_schema.get_list(_schema.require(data, "spans", path), f"{path}.spans"))
        )
        return cls(nodes=nodes, spans=spans)


@dataclass(frozen=True)
class PathMetrics:
    """Aggregated link-table metrics for one path."""

    distance_km: float
    attenuation_db: float
    ola_count: int
    roadm_count: int
    raman_span_count: int

    def __post_init__(self) -> None:
        if self.distance_km < 0:
            raise ValueError(f"distance_km must be >= 0, got {self.distance_km}")
        if self.attenuation_db < 0:
            raise ValueError(f"attenuation_db must be >= 0, got {self.attenuation_db}")
        for field_name in ("ola_count", "roadm_count", "raman_span_count"):
            value = getattr(self, field_name)
            if value < 0:
                raise ValueError(f"{field_name} must be >= 0, got {value}")

    def to_dict(self) -> dict:
        return {
            "distance_km": self.distance_km,
            "attenuation_db": self.attenuation_db,
            "ola_count": self.ola_count,
            "roadm_count": self.roadm_count,
            "raman_span_count": self.raman_span_count,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "metrics") -> "PathMetrics":
        return cls(
            distance_km=_schema.require_real(data, "distance_km", path),
            attenuation_db=_schema.require_real(data, "attenuation_db", path),
            ola_count=_schema.require_int(data, "ola_count", path),
            roadm_count=_schema.require_int(data, "roadm_count", path),
            raman_span_count=_schema.require_int(data, "raman_span_count", path),
        )


def validate_topology(topology: NetworkTopology) -> list[Violation]:
    """Collect every invariant violation; an empty list means the topology is valid."""
    violations: list[Violation] = []
    seen: set[str] = set()
    for node in topology.nodes:
        if not node.id:
            violations.append(Violation(VIOLATION_EMPTY_NODE_ID, "node with empty id"))
        elif node.id in seen:
            violations.append(
                Violation(VIOLATION_DUPLICATE_NODE, f"duplicate node id {node.id!r}")
            )
        else:
            seen.add(node.id)
    node_ids = topology.node_ids()
    for index, span in enumerate(topology.spans):
        label = f"span[{index}] {span.from_node}-{span.to_node}"
        if span.length_km <= 0:
            violations.append(
                Violation(VIOLATION_NEGATIVE_LENGTH, f"{label}: length_km must be > 0, got {span.length_km}")
            )
        if span.attenuation_db <= 0:
            violations.append(
                Violation(
                    VIOLATION_NEGATIVE_ATTENUATION,
                    f"{label}: attenuation_db must be > 0, got {span.attenuation_db}",
                )
            )
        if span.from_node == span.to_node:
            violations.append(Violation(VIOLATION_SELF_LOOP, f"{label}: span endpoints are identical"))
        for endpoint in (span.from_node, span.to_node):
            if endpoint not in node_ids:
                violations.append(
                    Violation(
                        VIOLATION_DANGLING_ENDPOINT,
                        f"{label}: endpoint {endpoint!r} is not a declared node",
                    )
                )
    return violations


def parse_topology(document: str | dict, *, strict: bool = True) -> NetworkTopology:
    """Parse a topology document (JSON text or an already-decoded object).

    With ``strict=True`` (the default) any invariant violation raises
    :class:`TopologyError`; ``strict=False`` only enforces the structural
    schema, so the result can be fed to :func:`validate_topology`.
    """
    if isinstance(document, str):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as err:
            raise SchemaError(f"topology: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from None
    else:
        data = document
    topology = NetworkTopology.from_dict(_schema.get_object(data, "topology"))
    if strict:
        violations = validate_topology(topology)
        if violations:
            detail = "; ".join(f"{v.code}: {v.message}" for v in violations)
            raise TopologyError(f"invalid topology: {detail}")
    return topology


def aggregate_path(topology: NetworkTopology, node_sequence: list[str] | tuple[str, ...]) -> PathMetrics:
    """Aggregate link-table metrics along an explicit node sequence.

    Consecutive nodes must be joined by at least one span; all spans between
    a pair are treated as segments of the same link and summed. ROADM count
    is over traversed nodes, one per occurrence.
    """
    if not node_sequence:
        raise TopologyError("empty node sequence")
    for node_id in node_sequence:
        if topology.find_node(node_id) is None:
            raise TopologyError(f"unknown node {node_id!r} in path")

    roadm_count = sum(
        1 for node_id in node_sequence if topology.find_node(node_id).has_roadm
    )
    distance = 0.0
    attenuation = 0.0
    ola_count = 0
    raman_count = 0
    for a, b in zip(node_sequence, node_sequence[1:]):
        segments = topology.spans_between(a, b)
        if not segments:
            raise TopologyError(f"no span connects {a!r} and {b!r}")
        for span in segments:
            distance += span.length_km
            attenuation += span.attenuation_db
            if span.has_inline_ola:
                ola_count += 1
            if span.amplifier is AmplifierType.RAMAN:
                raman_count += 1
    return PathMetrics(
        distance_km=distance,
        attenuation_db=attenuation,
        ola_count=ola_count,
        roadm_count=roadm_count,
        raman_span_count=raman_count,
    )
