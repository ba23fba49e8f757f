"""foonbridge: industrial task graphs, activity recognition, and an
NGSI-LD context-broker bridge.

The package splits into five parts: ``foon`` (graph model, text format,
validation, merge, DOT export), ``kb`` (the shipped assembly/disassembly
knowledge base), ``recognition`` (detection streams, distance features,
sequential unit matching, simulation), ``ngsi`` (entity mapping and broker
client) and ``broker_sim`` (an embeddable broker subset for tests and
demos). The ``foonbridge`` command wires them together.
"""

__version__ = "0.1.0"

from .foon import (
    FunctionalUnit,
    HandAnnotation,
    MotionNode,
    ObjectNode,
    StateDescriptor,
    Subgraph,
    UniversalFOON,
    export_dot,
    merge,
    parse_foon,
    serialize_foon,
    units_producing,
    validate,
)
from .kb import load_assembly, load_disassembly, part_catalog
from .ngsi import BrokerConfig, foon2ont, publish, serialize_entity
from .recognition import (
    DetectionFrame,
    RecognizedUnit,
    RecognizerConfig,
    distance_matrices,
    recognize_stream,
    segment_stream,
    simulate_stream,
)

__all__ = [
    "BrokerConfig",
    "DetectionFrame",
    "FunctionalUnit",
    "HandAnnotation",
    "MotionNode",
    "ObjectNode",
    "RecognizedUnit",
    "RecognizerConfig",
    "StateDescriptor",
    "Subgraph",
    "UniversalFOON",
    "__version__",
    "distance_matrices",
    "export_dot",
    "foon2ont",
    "load_assembly",
    "load_disassembly",
    "merge",
    "parse_foon",
    "part_catalog",
    "publish",
    "recognize_stream",
    "segment_stream",
    "serialize_entity",
    "serialize_foon",
    "simulate_stream",
    "units_producing",
    "validate",
]
