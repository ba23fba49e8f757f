"""In-memory NGSI-LD broker subset.

Implements exactly the endpoints the bridge client uses: entity create,
per-entity attribute patch, entity fetch/query, and batch upsert. Every
handled request lands in an append-only log (with its body), so tests can
assert request ordering and rebuild the store by replay. Mutations are
serialized under one lock.
"""

from __future__ import annotations

import copy
import json
import threading
import time
from dataclasses import dataclass
from urllib.parse import parse_qs, unquote, urlsplit

ENTITIES_PREFIX = "/ngsi-ld/v1/entities"
UPSERT_PATH = "/ngsi-ld/v1/entityOperations/upsert"
LOG_PATH = "/_sim/log"


def _problem(status: int, title: str, detail: str) -> tuple[int, dict, dict]:
    body = {
        "type": "https://uri.etsi.org/ngsi-ld/errors/" + title.replace(" ", ""),
        "title": title,
        "detail": detail,
    }
    return status, {"Content-Type": "application/json"}, body


def _attribute_problem(document: dict) -> str | None:
    """Reject attribute values without the Property/Relationship shape."""
    for key, value in document.items():
        if key in ("id", "type", "@context"):
            continue
        instances = value if isinstance(value, list) else [value]
        for instance in instances:
            if not isinstance(instance, dict):
                return f"attribute {key!r} is not an attribute object"
            kind = instance.get("type")
            if kind not in ("Property", "Relationship"):
                return f"attribute {key!r} lacks a Property/Relationship type"
            if kind == "Property" and "value" not in instance:
                return f"property {key!r} lacks a value"
            if kind == "Relationship" and "object" not in instance:
                return f"relationship {key!r} lacks an object"
    return None


@dataclass(frozen=True)
class LogEntry:
    seq: int
    method: str
    path: str
    timestamp: float
    outcome: int
    body: dict | list | None = None

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "method": self.method,
            "path": self.path,
            "timestamp": self.timestamp,
            "outcome": self.outcome,
            "body": self.body,
        }


class EntityStore:
    """URN-keyed entity map plus the request log."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entities: dict[str, dict] = {}
        self._log: list[LogEntry] = []

    # -- inspection -----------------------------------------------------

    def entities(self) -> dict[str, dict]:
        with self._lock:
            return copy.deepcopy(self._entities)

    def request_log(self) -> list[LogEntry]:
        with self._lock:
            return list(self._log)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entities)

    # -- handlers -------------------------------------------------------

    def handle_create(self, body) -> tuple[int, dict, dict | None]:
        if not isinstance(body, dict):
            return _problem(400, "InvalidRequest", "entity body must be a JSON object")
        entity_id = body.get("id")
        entity_type = body.get("type")
        if not entity_id or not entity_type:
            return _problem(400, "BadRequestData", "entity needs id and type")
        detail = _attribute_problem(body)
        if detail:
            return _problem(400, "BadRequestData", detail)
        if entity_id in self._entities:
            return _problem(409, "AlreadyExists", f"entity {entity_id} already exists")
        self._entities[entity_id] = copy.deepcopy(body)
        return 201, {"Location": f"{ENTITIES_PREFIX}/{entity_id}"}, None

    def handle_patch_attrs(self, entity_id: str, body) -> tuple[int, dict, dict | None]:
        if entity_id not in self._entities:
            return _problem(404, "ResourceNotFound", f"entity {entity_id} not found")
        if not isinstance(body, dict):
            return _problem(400, "InvalidRequest", "patch body must be a JSON object")
        detail = _attribute_problem(body)
        if detail:
            return _problem(400, "BadRequestData", detail)
        stored = self._entities[entity_id]
        for key, value in body.items():
            if key in ("id", "type", "@context"):
                continue
            stored[key] = copy.deepcopy(value)
        return 204, {}, None

    def handle_get(self, entity_id: str) -> tuple[int, dict, dict | None]:
        entity = self._entities.get(entity_id)
        if entity is None:
            return _problem(404, "ResourceNotFound", f"entity {entity_id} not found")
        return 200, {"Content-Type": "application/ld+json"}, copy.deepcopy(entity)

    def handle_query(self, entity_type: str | None) -> tuple[int, dict, list]:
        matches = [
            copy.deepcopy(entity)
            for entity_id, entity in sorted(self._entities.items())
            if entity_type is None or entity.get("type") == entity_type
        ]
        return 200, {"Content-Type": "application/ld+json"}, matches

    def handle_upsert(self, body) -> tuple[int, dict, list | None]:
        if not isinstance(body, list):
            return _problem(400, "InvalidRequest", "upsert body must be a JSON array")
        created: list[str] = []
        for document in body:
            if not isinstance(document, dict) or not document.get("id") or not document.get("type"):
                return _problem(400, "BadRequestData", "every entity needs id and type")
            detail = _attribute_problem(document)
            if detail:
                return _problem(400, "BadRequestData", detail)
        for document in body:
            entity_id = document["id"]
            if entity_id not in self._entities:
                created.append(entity_id)
            self._entities[entity_id] = copy.deepcopy(document)
        if created:
            return 201, {"Content-Type": "application/json"}, created
        return 204, {}, None

    # -- routing --------------------------------------------------------

    def route(self, method: str, target: str, body=None) -> tuple[int, dict, object]:
        """Dispatch one request; everything except /_sim paths is logged."""
        parts = urlsplit(target)
        path = unquote(parts.path)
        query = parse_qs(parts.query)

        with self._lock:
            status, headers, payload = self._dispatch(method, path, query, body)
            if not path.startswith("/_sim"):
                self._log.append(
                    LogEntry(
                        seq=len(self._log),
                        method=method.upper(),
                        path=path,
                        timestamp=time.time(),
                        outcome=status,
                        body=copy.deepcopy(body),
                    )
                )
        return status, headers, payload

    def _dispatch(self, method, path, query, body):
        method = method.upper()
        if path == LOG_PATH and method == "GET":
            return 200, {"Content-Type": "application/json"}, [e.to_dict() for e in self._log]
        if path == UPSERT_PATH and method == "POST":
            return self.handle_upsert(body)
        if path == ENTITIES_PREFIX:
            if method == "POST":
                return self.handle_create(body)
            if method == "GET":
                entity_type = query.get("type", [None])[0]
                return self.handle_query(entity_type)
        if path.startswith(ENTITIES_PREFIX + "/"):
            remainder = path[len(ENTITIES_PREFIX) + 1 :]
            if remainder.endswith("/attrs") and method == "PATCH":
                return self.handle_patch_attrs(remainder[: -len("/attrs")], body)
            if method == "GET":
                return self.handle_get(remainder)
        return _problem(404, "ResourceNotFound", f"no route for {method} {path}")

    # -- replay ---------------------------------------------------------

    @classmethod
    def replay(cls, entries: list[LogEntry]) -> "EntityStore":
        """Rebuild a store from a request log; state is a pure fold."""
        store = cls()
        for entry in entries:
            if entry.method in ("POST", "PATCH"):
                store.route(entry.method, entry.path, entry.body)
        return store


def dumps(payload) -> bytes:
    return json.dumps(payload, separators=(",", ":")).encode("utf-8")
