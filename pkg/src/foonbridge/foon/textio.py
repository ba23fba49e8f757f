"""Line-oriented text format for task subgraphs.

Documents are UTF-8 with ``\\n`` line endings. A subgraph file starts with a
``#FOONv1 <name>`` header; each functional unit is a block of tab-separated
records closed by a ``//`` line:

    O\t<object-label>\t<goal-flag 0|1>     object (inputs before M, outputs after)
    S\t<state-name>[\t<related-object>]    0..n per preceding O
    M\t<motion-label>                      exactly one per unit
    H\t<actor>[\t<grasped-object>]         0..n, between M and the first output O
    //                                     unit terminator

Outside a unit, lines starting with ``#`` in column 0 are comments and blank
lines are ignored. Unknown record tags are errors, never skipped.
Serialization is byte-deterministic and round-trips: parsing the output of
``serialize_foon`` reproduces a structurally equal subgraph.
"""

from __future__ import annotations

from ..errors import FoonStructureError, FoonSyntaxError
from .model import (
    FunctionalUnit,
    HandAnnotation,
    MotionNode,
    ObjectNode,
    StateDescriptor,
    Subgraph,
    UniversalFOON,
)

HEADER_TAG = "#FOONv1"
UNIVERSAL_HEADER_TAG = "#FOONv1-U"


class _UnitBuilder:
    """Accumulates records of one unit block during parsing."""

    def __init__(self):
        self.inputs: list[ObjectNode] = []
        self.outputs: list[ObjectNode] = []
        self.motion: MotionNode | None = None
        self.hands: list[HandAnnotation] = []
        self.current_label: str | None = None
        self.current_goal = False
        self.current_states: list[StateDescriptor] = []

    def finish_object(self, line_no: int):
        if self.current_label is None:
            return
        try:
            node = ObjectNode(self.current_label, tuple(self.current_states), self.current_goal)
        except ValueError as exc:
            raise FoonSyntaxError(line_no, str(exc)) from exc
        if self.motion is None:
            self.inputs.append(node)
        else:
            self.outputs.append(node)
        self.current_label = None
        self.current_states = []


def parse_foon(text: str) -> Subgraph:
    """Parse a FOONv1 document into a subgraph.

    Raises FoonSyntaxError for malformed records and FoonStructureError for a
    unit missing its motion line or its ``//`` terminator.
    """
    name: str | None = None
    units: list[FunctionalUnit] = []
    unit: _UnitBuilder | None = None

    for line_no, line in enumerate(text.split("\n"), start=1):
        if line.strip() == "":
            continue
        fields = line.split("\t")
        tag = fields[0]

        if name is None:
            if line.startswith(HEADER_TAG + " "):
                header_name = line[len(HEADER_TAG) + 1 :].strip()
                if not header_name:
                    raise FoonSyntaxError(line_no, "header is missing the subgraph name")
                name = header_name
                continue
            raise FoonSyntaxError(line_no, f"expected '{HEADER_TAG} <name>' header")

        if line.startswith("#"):
            if unit is not None:
                raise FoonSyntaxError(line_no, "comment inside a functional unit")
            continue

        if tag == "//":
            if len(fields) != 1:
                raise FoonSyntaxError(line_no, "unexpected fields after unit terminator")
            if unit is None:
                raise FoonSyntaxError(line_no, "unit terminator outside a unit")
            unit.finish_object(line_no)
            if unit.motion is None:
                raise FoonStructureError(
                    f"unit ending at line {line_no} has no motion record"
                )
            units.append(
                FunctionalUnit(
                    inputs=tuple(unit.inputs),
                    outputs=tuple(unit.outputs),
                    motion=unit.motion,
                    hands=tuple(unit.hands),
                    unit_index=len(units),
                )
            )
            unit = None
            continue

        if tag == "O":
            if len(fields) != 3:
                raise FoonSyntaxError(line_no, "object record needs label and goal flag")
            if fields[2] not in ("0", "1"):
                raise FoonSyntaxError(line_no, f"goal flag must be 0 or 1, got {fields[2]!r}")
            if unit is None:
                unit = _UnitBuilder()
            unit.finish_object(line_no)
            label = normalize_or_error(fields[1], line_no, "object label")
            unit.current_label = label
            unit.current_goal = fields[2] == "1"
            continue

        if tag == "S":
            if unit is None or unit.current_label is None:
                raise FoonSyntaxError(line_no, "state record must follow an object record")
            if len(fields) not in (2, 3):
                raise FoonSyntaxError(line_no, "state record needs a name and optional related object")
            try:
                state = StateDescriptor(fields[1], fields[2] if len(fields) == 3 else None)
            except ValueError as exc:
                raise FoonSyntaxError(line_no, str(exc)) from exc
            if state.key() in {s.key() for s in unit.current_states}:
                raise FoonSyntaxError(line_no, f"duplicate state {state.name!r} on object")
            unit.current_states.append(state)
            continue

        if tag == "M":
            if len(fields) != 2:
                raise FoonSyntaxError(line_no, "motion record needs exactly one label")
            if unit is None:
                unit = _UnitBuilder()
            if unit.motion is not None:
                raise FoonSyntaxError(line_no, "second motion record in unit")
            unit.finish_object(line_no)
            try:
                unit.motion = MotionNode(fields[1])
            except ValueError as exc:
                raise FoonSyntaxError(line_no, str(exc)) from exc
            continue

        if tag == "H":
            if unit is None or unit.motion is None:
                raise FoonSyntaxError(line_no, "hand record before motion record")
            if unit.outputs or unit.current_label is not None:
                raise FoonSyntaxError(line_no, "hand record after output objects")
            if len(fields) not in (2, 3):
                raise FoonSyntaxError(line_no, "hand record needs an actor and optional object")
            try:
                annotation = HandAnnotation(fields[1], fields[2] if len(fields) == 3 else None)
            except ValueError as exc:
                raise FoonSyntaxError(line_no, str(exc)) from exc
            unit.hands.append(annotation)
            continue

        raise FoonSyntaxError(line_no, f"unknown record tag {tag!r}")

    if name is None:
        raise FoonSyntaxError(1, "document is empty, expected a #FOONv1 header")
    if unit is not None:
        raise FoonStructureError("last unit is missing its '//' terminator")
    return Subgraph(name, tuple(units))


def normalize_or_error(raw: str, line_no: int, what: str) -> str:
    from .model import normalize_label

    label = normalize_label(raw)
    if not label:
        raise FoonSyntaxError(line_no, f"{what} must be non-empty")
    return label


def _object_lines(node: ObjectNode) -> list[str]:
    lines = [f"O\t{node.label}\t{1 if node.is_goal else 0}"]
    for state in node.states:
        if state.related_object:
            lines.append(f"S\t{state.name}\t{state.related_object}")
        else:
            lines.append(f"S\t{state.name}")
    return lines


def _unit_lines(unit: FunctionalUnit) -> list[str]:
    lines: list[str] = []
    for node in unit.inputs:
        lines.extend(_object_lines(node))
    lines.append(f"M\t{unit.motion.label}")
    for hand in unit.hands:
        if hand.grasped_object:
            lines.append(f"H\t{hand.actor}\t{hand.grasped_object}")
        else:
            lines.append(f"H\t{hand.actor}")
    for node in unit.outputs:
        lines.extend(_object_lines(node))
    lines.append("//")
    return lines


def serialize_foon(graph: Subgraph) -> str:
    """Serialize a subgraph to its canonical FOONv1 document."""
    lines = [f"{HEADER_TAG} {graph.name}"]
    for unit in graph.units:
        lines.extend(_unit_lines(unit))
    return "\n".join(lines) + "\n"


def serialize_universal(universal: UniversalFOON) -> str:
    """Serialize a merged graph, one provenance comment per unit."""
    name = "+".join(universal.source_names()) or "empty"
    lines = [f"{UNIVERSAL_HEADER_TAG} {name}"]
    lines.append(
        f"# units: {len(universal.units)}"
        f"  objects: {len(universal.object_nodes)}"
        f"  motions: {len(universal.motion_nodes)}"
    )
    for unit, sources in zip(universal.units, universal.provenance):
        lines.append(f"# from: {', '.join(sources)}")
        lines.extend(_unit_lines(unit))
    return "\n".join(lines) + "\n"
