"""Linked-data bridge: entity mapping and context-broker publishing."""

from .bridge import (
    BrokerConfig,
    HttpTransport,
    InProcessTransport,
    PublishReceipt,
    ReceiptEntry,
    foon2ont,
    publish,
    publish_batch,
    query_entities,
    resolve_unit,
)
from .entities import (
    CORE_CONTEXT,
    ResourceEntity,
    TaskEntity,
    decode_states,
    encode_states,
    iso_time,
    parse_entity,
    resource_urn,
    serialize_entity,
    slugify,
    task_urn,
    unit_reference,
)

__all__ = [
    "CORE_CONTEXT",
    "BrokerConfig",
    "HttpTransport",
    "InProcessTransport",
    "PublishReceipt",
    "ReceiptEntry",
    "ResourceEntity",
    "TaskEntity",
    "decode_states",
    "encode_states",
    "foon2ont",
    "iso_time",
    "parse_entity",
    "publish",
    "publish_batch",
    "query_entities",
    "resolve_unit",
    "resource_urn",
    "serialize_entity",
    "slugify",
    "task_urn",
    "unit_reference",
]
