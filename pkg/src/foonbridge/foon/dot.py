"""Graphviz DOT export.

Objects render as ellipses (goal nodes filled blue, the rest lime green),
motions as boxes; edges run input-object -> motion -> output-object. Output
is byte-deterministic for a given graph.
"""

from __future__ import annotations

from .model import FunctionalUnit, Identity, ObjectNode, Subgraph, UniversalFOON

OBJECT_FILL = "limegreen"
GOAL_FILL = "deepskyblue"
MOTION_FILL = "lightgrey"


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _object_label(node: ObjectNode) -> str:
    """Display label, already DOT-escaped; \\n is the DOT line break."""
    if not node.states:
        return _escape(node.label)
    states = ", ".join(
        f"{s.name} {s.related_object}" if s.related_object else s.name
        for s in node.states
    )
    return _escape(node.label) + "\\n" + _escape(states)


def export_dot(graph: Subgraph | UniversalFOON) -> str:
    """Render a subgraph or universal graph as a DOT digraph."""
    units: tuple[FunctionalUnit, ...] = graph.units

    nodes: dict[Identity, ObjectNode] = {}
    goals: dict[Identity, bool] = {}
    for unit in units:
        for node in (*unit.inputs, *unit.outputs):
            identity = node.identity()
            nodes.setdefault(identity, node)
            goals[identity] = goals.get(identity, False) or node.is_goal

    object_ids = {identity: f"o{i}" for i, identity in enumerate(sorted(nodes))}

    lines = ["digraph foon {", "  rankdir=LR;", '  node [fontname="Helvetica"];']
    for identity in sorted(nodes):
        fill = GOAL_FILL if goals[identity] else OBJECT_FILL
        label = _object_label(nodes[identity])
        lines.append(
            f'  {object_ids[identity]} [shape=ellipse style=filled '
            f'fillcolor={fill} label="{label}"];'
        )
    for unit in units:
        motion_id = f"u{unit.unit_index}_m"
        lines.append(
            f'  {motion_id} [shape=box style=filled fillcolor={MOTION_FILL} '
            f'label="{_escape(unit.motion.label)}"];'
        )
    for unit in units:
        motion_id = f"u{unit.unit_index}_m"
        for node in sorted(unit.inputs, key=lambda n: n.identity()):
            lines.append(f"  {object_ids[node.identity()]} -> {motion_id};")
        for node in sorted(unit.outputs, key=lambda n: n.identity()):
            lines.append(f"  {motion_id} -> {object_ids[node.identity()]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
