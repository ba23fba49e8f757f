"""Bridge from recognized functional units to an NGSI-LD context broker.

``foon2ont`` turns one recognized unit into a Task entity plus one Resource
entity per object of the unit, wiring each resource into the Task's
``involves`` relationships and stamping ``isDefinedBy`` with the unit's
sequential graph reference. ``publish`` sends the resources first and the
task last, so every relationship target exists by the time the task is
created; re-publishing the same run upserts instead of duplicating.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass
from urllib.parse import quote

import requests

from ..errors import (
    BrokerRejected,
    BrokerUnreachable,
    PartialPublish,
    UnresolvedUnit,
)
from ..foon import FunctionalUnit, Subgraph
from ..recognition import RecognizedUnit
from .entities import (
    CORE_CONTEXT,
    ResourceEntity,
    TaskEntity,
    encode_states,
    iso_time,
    resource_urn,
    serialize_entity,
    task_urn,
    unit_reference,
)

log = logging.getLogger(__name__)

ENTITIES_PATH = "/ngsi-ld/v1/entities"
UPSERT_PATH = "/ngsi-ld/v1/entityOperations/upsert"
CONTENT_TYPE = "application/ld+json"


@dataclass
class BrokerConfig:
    base_url: str
    context_url: str = CORE_CONTEXT
    timeout: float = 10.0
    retries: int = 3
    backoff_base: float = 0.5
    run_id: str = "default"
    stream_epoch: float = 0.0
    bearer_token: str | None = None

    def __post_init__(self):
        if not self.base_url:
            raise ValueError("base_url must be non-empty")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")

    def wall_clock(self, stream_seconds: float) -> float:
        return self.stream_epoch + stream_seconds


def foon2ont(
    predicted: RecognizedUnit,
    foon: Subgraph,
    clock: float,
    run_id: str = "default",
    resource_types: dict[str, str] | None = None,
    use_inputs: bool = False,
) -> tuple[TaskEntity, list[ResourceEntity]]:
    """Map a recognized unit to one Task and its Resource entities.

    ``clock`` is wall-clock seconds since the Unix epoch for the
    ``observedAt`` stamps. The unit's output objects are used (they carry
    the post-action state); pass ``use_inputs=True`` for the precondition
    view instead.
    """
    unit = resolve_unit(predicted, foon)
    resource_types = resource_types or {}
    observed_at = iso_time(clock)

    resources: list[ResourceEntity] = []
    involves: list[str] = []
    for node in unit.inputs if use_inputs else unit.outputs:
        resource_type = resource_types.get(node.label, "Material")
        resource = ResourceEntity(
            id=resource_urn(resource_type, node.label, run_id),
            resource_type=resource_type,
            label=node.label,
            state_value=encode_states(node.states),
            observed_at=observed_at,
        )
        resources.append(resource)
        involves.append(resource.id)

    task = TaskEntity(
        id=task_urn(predicted.subgraph, predicted.unit_index, run_id),
        involves=tuple(involves),
        is_defined_by=unit_reference(predicted.subgraph, predicted.unit_index),
        observed_at=observed_at,
    )
    return task, resources


def resolve_unit(predicted: RecognizedUnit, foon: Subgraph) -> FunctionalUnit:
    if predicted.subgraph != foon.name:
        raise UnresolvedUnit(
            f"unit refers to subgraph {predicted.subgraph!r}, loaded graph is {foon.name!r}"
        )
    if not 0 <= predicted.unit_index < len(foon.units):
        raise UnresolvedUnit(
            f"unit index {predicted.unit_index} out of range for {foon.name!r}"
        )
    return foon.units[predicted.unit_index]


class HttpTransport:
    """Thin requests-backed transport speaking to a real broker."""

    def __init__(self, cfg: BrokerConfig, session: requests.Session | None = None):
        self.cfg = cfg
        self.session = session or requests.Session()

    def request(self, method: str, path: str, body: dict | list | None = None):
        headers = {"Content-Type": CONTENT_TYPE}
        if self.cfg.bearer_token:
            headers["Authorization"] = f"Bearer {self.cfg.bearer_token}"
        response = self.session.request(
            method,
            self.cfg.base_url.rstrip("/") + path,
            data=None if body is None else json.dumps(body),
            headers=headers,
            timeout=self.cfg.timeout,
        )
        payload = None
        if response.content:
            try:
                payload = response.json()
            except ValueError:
                payload = response.text
        return response.status_code, payload


class InProcessTransport:
    """Routes requests straight into an embedded broker store, no sockets."""

    def __init__(self, store):
        self.store = store

    def request(self, method: str, path: str, body: dict | list | None = None):
        status, _, payload = self.store.route(method, path, body)
        return status, payload


@dataclass(frozen=True)
class ReceiptEntry:
    entity_id: str
    outcome: str  # created | updated
    status: int


@dataclass(frozen=True)
class PublishReceipt:
    run_id: str
    entries: tuple[ReceiptEntry, ...] = ()

    def outcomes(self) -> dict[str, str]:
        return {entry.entity_id: entry.outcome for entry in self.entries}

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "entities": [
                {"id": e.entity_id, "outcome": e.outcome, "status": e.status}
                for e in self.entries
            ],
        }


def _request_with_retry(transport, cfg: BrokerConfig, method, path, body):
    attempts = cfg.retries + 1
    last_error: Exception | None = None
    for attempt in range(attempts):
        try:
            status, payload = transport.request(method, path, body)
        except requests.RequestException as exc:
            last_error = exc
        else:
            if status < 500:
                return status, payload
            last_error = BrokerRejected(status, str(payload))
        if attempt + 1 < attempts:
            delay = cfg.backoff_base * (2**attempt)
            log.warning("broker request failed (%s), retrying in %.1fs", last_error, delay)
            if delay > 0:
                time.sleep(delay)
    raise BrokerUnreachable(cfg.base_url, attempts, last_error)


def _entity_path(entity_id: str) -> str:
    return f"{ENTITIES_PATH}/{quote(entity_id, safe=':')}"


def _publish_one(transport, cfg: BrokerConfig, entity) -> ReceiptEntry:
    document = serialize_entity(entity, cfg.context_url)
    status, payload = _request_with_retry(transport, cfg, "POST", ENTITIES_PATH, document)
    if status == 201:
        return ReceiptEntry(entity.id, "created", status)
    if status == 409:
        patch = {k: v for k, v in document.items() if k not in ("id", "type")}
        status, payload = _request_with_retry(
            transport, cfg, "PATCH", _entity_path(entity.id) + "/attrs", patch
        )
        if status == 204:
            return ReceiptEntry(entity.id, "updated", status)
    raise BrokerRejected(status, str(payload))


def publish(
    task: TaskEntity,
    resources: list[ResourceEntity],
    cfg: BrokerConfig,
    transport=None,
) -> PublishReceipt:
    """Create or update the resources, then the task.

    Raises BrokerUnreachable after exhausting retries, BrokerRejected on a
    permanent refusal of the first entity, and PartialPublish when some
    entities went through before a later one failed.
    """
    transport = transport or HttpTransport(cfg)
    entries: list[ReceiptEntry] = []
    for entity in (*resources, task):
        try:
            entries.append(_publish_one(transport, cfg, entity))
        except (BrokerRejected, BrokerUnreachable) as exc:
            if entries:
                raise PartialPublish(
                    succeeded=[e.entity_id for e in entries],
                    failed=[(entity.id, exc)],
                ) from exc
            raise
    return PublishReceipt(run_id=cfg.run_id, entries=tuple(entries))


def publish_batch(
    task: TaskEntity,
    resources: list[ResourceEntity],
    cfg: BrokerConfig,
    transport=None,
) -> PublishReceipt:
    """Optimization path: one upsert request for all entities."""
    transport = transport or HttpTransport(cfg)
    documents = [serialize_entity(e, cfg.context_url) for e in (*resources, task)]
    status, payload = _request_with_retry(transport, cfg, "POST", UPSERT_PATH, documents)
    if status not in (201, 204, 207):
        raise BrokerRejected(status, str(payload))
    created = set(payload or ())
    entries = tuple(
        ReceiptEntry(doc["id"], "created" if doc["id"] in created else "updated", status)
        for doc in documents
    )
    return PublishReceipt(run_id=cfg.run_id, entries=entries)


def query_entities(cfg: BrokerConfig, entity_type: str, transport=None) -> list[dict]:
    """All entities of a type, in the broker's stable id order."""
    transport = transport or HttpTransport(cfg)
    status, payload = _request_with_retry(
        transport, cfg, "GET", f"{ENTITIES_PATH}?type={quote(entity_type)}", None
    )
    if status != 200:
        raise BrokerRejected(status, str(payload))
    return list(payload)
