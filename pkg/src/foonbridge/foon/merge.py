"""Merging subgraphs into a universal graph.

Object nodes equal by identity (label plus state set) unify into one node
whose goal flag is the OR of the merged flags; motion nodes unify by label;
units unify by (input identities, output identities, motion) with their
hand annotations united and their provenance accumulated. The result is
canonically ordered, so it does not depend on the order of the inputs.
"""

from __future__ import annotations

from typing import Sequence

from .model import (
    FunctionalUnit,
    HandAnnotation,
    Identity,
    MotionNode,
    ObjectNode,
    Subgraph,
    UniversalFOON,
    canonical_node,
)


def merge(subgraphs: Sequence[Subgraph]) -> UniversalFOON:
    """Deduplicate the union of the given subgraphs."""
    goal_by_identity: dict[Identity, bool] = {}
    node_by_identity: dict[Identity, ObjectNode] = {}
    for graph in subgraphs:
        for node in graph.iter_nodes():
            identity = node.identity()
            node_by_identity.setdefault(identity, node)
            goal_by_identity[identity] = goal_by_identity.get(identity, False) or node.is_goal

    canonical: dict[Identity, ObjectNode] = {
        identity: canonical_node(node, goal_by_identity[identity])
        for identity, node in node_by_identity.items()
    }

    merged_hands: dict[tuple, set[HandAnnotation]] = {}
    merged_sources: dict[tuple, set[str]] = {}
    unit_shapes: dict[tuple, FunctionalUnit] = {}
    for graph in subgraphs:
        for unit in graph.units:
            key = unit.key()
            unit_shapes.setdefault(key, unit)
            merged_hands.setdefault(key, set()).update(unit.hands)
            merged_sources.setdefault(key, set()).add(graph.name)

    def rebuild(key: tuple, position: int) -> FunctionalUnit:
        input_ids, output_ids, motion_label = key
        return FunctionalUnit(
            inputs=tuple(canonical[i] for i in sorted(input_ids)),
            outputs=tuple(canonical[i] for i in sorted(output_ids)),
            motion=MotionNode(motion_label),
            hands=tuple(sorted(merged_hands[key], key=lambda h: h.key())),
            unit_index=position,
        )

    ordered_keys = sorted(
        unit_shapes,
        key=lambda k: (k[2], tuple(sorted(k[0])), tuple(sorted(k[1]))),
    )
    units = tuple(rebuild(key, position) for position, key in enumerate(ordered_keys))
    provenance = tuple(tuple(sorted(merged_sources[key])) for key in ordered_keys)

    object_nodes = tuple(canonical[i] for i in sorted(canonical))
    motion_nodes = tuple(
        MotionNode(label) for label in sorted({key[2] for key in ordered_keys})
    )
    return UniversalFOON(object_nodes, motion_nodes, units, provenance)


def units_producing(
    graph: UniversalFOON | Subgraph, target: ObjectNode | Identity
) -> list[FunctionalUnit]:
    """All units whose outputs contain a node with the given identity."""
    identity = target.identity() if isinstance(target, ObjectNode) else tuple(target)
    return [
        unit
        for unit in graph.units
        if any(node.identity() == identity for node in unit.outputs)
    ]
