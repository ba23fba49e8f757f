"""Task-graph core: data model, text format, validation, merge, DOT export."""

from .dot import export_dot
from .merge import merge, units_producing
from .model import (
    HAND_ACTORS,
    FunctionalUnit,
    HandAnnotation,
    MotionNode,
    ObjectNode,
    StateDescriptor,
    Subgraph,
    UniversalFOON,
    normalize_label,
)
from .textio import parse_foon, serialize_foon, serialize_universal
from .validate import ValidationReport, Violation, validate

__all__ = [
    "HAND_ACTORS",
    "FunctionalUnit",
    "HandAnnotation",
    "MotionNode",
    "ObjectNode",
    "StateDescriptor",
    "Subgraph",
    "UniversalFOON",
    "ValidationReport",
    "Violation",
    "export_dot",
    "merge",
    "normalize_label",
    "parse_foon",
    "serialize_foon",
    "serialize_universal",
    "units_producing",
    "validate",
]
