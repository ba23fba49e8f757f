"""Bipartite task-graph data model.

A graph alternates two node species: object nodes (parts, tools, with state
descriptors) and motion nodes (human action labels). One action is a
functional unit: input objects (preconditions), a motion, output objects
(effects). An ordered chain of units is a subgraph; the deduplicated union
of several subgraphs is a universal graph.

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

HAND_ACTORS = ("left-hand", "right-hand", "robot-end-effector")

# Identity of an object node: label plus the full state set (related objects
# included). The goal flag is display metadata and never part of identity.
Identity = tuple


def normalize_label(text: str) -> str:
    """Lowercase and collapse runs of whitespace to single spaces."""
    return " ".join(text.lower().split())


@dataclass(frozen=True)
class StateDescriptor:
    """One state of an object, optionally relative to another object."""

    name: str
    related_object: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_label(self.name))
        if not self.name:
            raise ValueError("state name must be non-empty")
        if self.related_object is not None:
            related = normalize_label(self.related_object)
            if not related:
                raise ValueError("related object label must be non-empty when given")
            object.__setattr__(self, "related_object", related)

    def key(self) -> tuple[str, str]:
        return (self.name, self.related_object or "")


@dataclass(frozen=True)
class ObjectNode:
    """An object with zero or more states and an optional goal marker."""

    label: str
    states: tuple[StateDescriptor, ...] = ()
    is_goal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "label", normalize_label(self.label))
        if not self.label:
            raise ValueError("object label must be non-empty")
        object.__setattr__(self, "states", tuple(self.states))
        seen = set()
        for state in self.states:
            if state.key() in seen:
                raise ValueError(
                    f"duplicate state {state.key()!r} on object {self.label!r}"
                )
            seen.add(state.key())

    def identity(self) -> Identity:
        """Deduplication key: label and the full state set, goal flag excluded."""
        return (self.label, tuple(sorted(s.key() for s in self.states)))


@dataclass(frozen=True)
class MotionNode:
    """An action label, e.g. pick-and-place, screw, unscrew."""

    label: str

    def __post_init__(self):
        object.__setattr__(self, "label", normalize_label(self.label))
        if not self.label:
            raise ValueError("motion label must be non-empty")


@dataclass(frozen=True)
class HandAnnotation:
    """Which actor manipulates which input object during a unit."""

    actor: str
    grasped_object: str | None = None

    def __post_init__(self):
        if self.actor not in HAND_ACTORS:
            raise ValueError(f"unknown actor {self.actor!r}, expected one of {HAND_ACTORS}")
        if self.grasped_object is not None:
            grasped = normalize_label(self.grasped_object)
            if not grasped:
                raise ValueError("grasped object label must be non-empty when given")
            object.__setattr__(self, "grasped_object", grasped)

    def key(self) -> tuple[str, str]:
        return (self.actor, self.grasped_object or "")


@dataclass(frozen=True)
class FunctionalUnit:
    """One action: input objects, a motion, output objects, hand annotations.

    Edges are implicit in the structure: every input connects to the motion
    (precondition) and the motion connects to every output (effect), so the
    graph is bipartite by construction. A unit may have empty inputs or
    outputs while being built; validation reports units empty on both sides.
    """

    inputs: tuple[ObjectNode, ...]
    outputs: tuple[ObjectNode, ...]
    motion: MotionNode
    hands: tuple[HandAnnotation, ...] = ()
    unit_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "hands", tuple(self.hands))
        if self.unit_index < 0:
            raise ValueError("unit_index must be non-negative")

    def input_labels(self) -> tuple[str, ...]:
        return tuple(node.label for node in self.inputs)

    def key(self):
        """Merge identity: input identity set, output identity set, motion."""
        return (
            frozenset(node.identity() for node in self.inputs),
            frozenset(node.identity() for node in self.outputs),
            self.motion.label,
        )


@dataclass(frozen=True)
class Subgraph:
    """An ordered chain of functional units describing a single activity."""

    name: str
    units: tuple[FunctionalUnit, ...] = ()

    def __post_init__(self):
        name = self.name.strip()
        if not name or "\n" in name:
            raise ValueError("subgraph name must be non-empty and single-line")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "units", tuple(self.units))

    def iter_nodes(self) -> Iterator[ObjectNode]:
        for unit in self.units:
            yield from unit.inputs
            yield from unit.outputs

    def object_labels(self) -> set[str]:
        return {node.label for node in self.iter_nodes()}

    def motion_labels(self) -> tuple[str, ...]:
        return tuple(unit.motion.label for unit in self.units)

    def produced_identities(self) -> set[Identity]:
        return {node.identity() for unit in self.units for node in unit.outputs}

    def initial_nodes(self) -> tuple[ObjectNode, ...]:
        """Input nodes never produced by any unit, i.e. the starting scene."""
        produced = self.produced_identities()
        initial: dict[Identity, ObjectNode] = {}
        for unit in self.units:
            for node in unit.inputs:
                identity = node.identity()
                if identity not in produced and identity not in initial:
                    initial[identity] = node
        return tuple(initial.values())


def canonical_node(node: ObjectNode, is_goal: bool) -> ObjectNode:
    """Rebuild a node with states in sorted order, for order-independent output."""
    states = tuple(
        sorted(node.states, key=lambda s: s.key())
    )
    return ObjectNode(node.label, states, is_goal)


@dataclass(frozen=True)
class UniversalFOON:
    """Deduplicated union of subgraphs.

    Nodes are stored in canonical (sorted) order and every unit references
    the canonical nodes, so equal inputs yield byte-equal serializations
    regardless of merge order. ``provenance`` is aligned with ``units`` and
    lists the source subgraph names of each unit.
    """

    object_nodes: tuple[ObjectNode, ...]
    motion_nodes: tuple[MotionNode, ...]
    units: tuple[FunctionalUnit, ...]
    provenance: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(self.units) != len(self.provenance):
            raise ValueError("provenance must be aligned with units")

    def provenance_map(self) -> Mapping[FunctionalUnit, tuple[str, ...]]:
        return dict(zip(self.units, self.provenance))

    def object_identities(self) -> set[Identity]:
        return {node.identity() for node in self.object_nodes}

    def source_names(self) -> tuple[str, ...]:
        names = sorted({name for sources in self.provenance for name in sources})
        return tuple(names)
