"""NGSI-LD entity records and their JSON-LD wire form.

A recognized motion becomes one Task entity; the objects it touches become
Resource entities (Material or Device). Attributes follow the NGSI-LD
shape: Properties carry ``value`` and Relationships carry ``object``, both
marked by the ``type`` discriminator. Serialization uses a fixed key order
so documents are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from ..foon import StateDescriptor, normalize_label

CORE_CONTEXT = "https://uri.etsi.org/ngsi-ld/v1/ngsi-ld-core-context.jsonld"
RESOURCE_TYPES = ("Material", "Device")

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def slugify(label: str) -> str:
    return normalize_label(label).replace(" ", "-")


def iso_time(seconds: float) -> str:
    """Wall-clock seconds since the Unix epoch as an NGSI-LD DateTime."""
    stamp = _EPOCH + timedelta(milliseconds=round(seconds * 1000))
    return stamp.strftime("%Y-%m-%dT%H:%M:%S.") + f"{stamp.microsecond // 1000:03d}Z"


def task_urn(subgraph: str, unit_index: int, run_id: str) -> str:
    return f"urn:ngsi-ld:Task:{subgraph}:{unit_index}:{run_id}"


def resource_urn(resource_type: str, label: str, run_id: str) -> str:
    return f"urn:ngsi-ld:{resource_type}:{slugify(label)}:{run_id}"


def unit_reference(subgraph: str, unit_index: int) -> str:
    """The sequential ID a Task's isDefinedBy points back to."""
    return f"foon:{subgraph}#unit/{unit_index}"


def encode_states(states) -> str:
    """Semicolon-joined ``name[:related]`` list; empty string for no states."""
    return ";".join(
        f"{s.name}:{s.related_object}" if s.related_object else s.name for s in states
    )


def decode_states(value: str) -> tuple[StateDescriptor, ...]:
    if not value:
        return ()
    states = []
    for chunk in value.split(";"):
        name, _, related = chunk.partition(":")
        states.append(StateDescriptor(name, related or None))
    return tuple(states)


@dataclass(frozen=True)
class TaskEntity:
    """A completed motion, linked to the resources it involved."""

    id: str
    involves: tuple[str, ...]
    is_defined_by: str
    observed_at: str
    status: str = "completed"

    @property
    def type(self) -> str:
        return "Task"


@dataclass(frozen=True)
class ResourceEntity:
    """A shop-floor object carrying its perceived state."""

    id: str
    resource_type: str
    label: str
    state_value: str
    observed_at: str

    def __post_init__(self):
        if self.resource_type not in RESOURCE_TYPES:
            raise ValueError(f"resource type must be one of {RESOURCE_TYPES}")

    @property
    def type(self) -> str:
        return self.resource_type

    def states(self) -> tuple[StateDescriptor, ...]:
        return decode_states(self.state_value)


def serialize_entity(entity: TaskEntity | ResourceEntity, context_url: str = CORE_CONTEXT) -> dict:
    """JSON-LD document for an entity, with deterministic key order."""
    if isinstance(entity, TaskEntity):
        document = {
            "id": entity.id,
            "type": entity.type,
            "involves": [
                {"type": "Relationship", "object": target, "datasetId": target}
                for target in entity.involves
            ],
            "isDefinedBy": {"type": "Property", "value": entity.is_defined_by},
            "status": {
                "type": "Property",
                "value": entity.status,
                "observedAt": entity.observed_at,
            },
        }
    else:
        document = {
            "id": entity.id,
            "type": entity.type,
            "state": {
                "type": "Property",
                "value": entity.state_value,
                "observedAt": entity.observed_at,
            },
        }
    document["@context"] = [context_url]
    return document


def parse_entity(document: dict) -> TaskEntity | ResourceEntity:
    """Inverse of serialize_entity, for round-trip checks and queries."""
    entity_type = document["type"]
    if entity_type == "Task":
        return TaskEntity(
            id=document["id"],
            involves=tuple(item["object"] for item in document.get("involves", [])),
            is_defined_by=document["isDefinedBy"]["value"],
            observed_at=document["status"].get("observedAt", ""),
            status=document["status"]["value"],
        )
    if entity_type in RESOURCE_TYPES:
        slug = document["id"].split(":")[3] if document["id"].count(":") >= 4 else ""
        return ResourceEntity(
            id=document["id"],
            resource_type=entity_type,
            label=slug.replace("-", " "),
            state_value=document["state"]["value"],
            observed_at=document["state"].get("observedAt", ""),
        )
    raise ValueError(f"unknown entity type {entity_type!r}")
