"""Structural validation of subgraphs.

Validation never raises: every problem becomes a report entry so that
hand-authored files surface all their defects in one pass. An empty report
means the subgraph is valid.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Subgraph


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    unit_index: int | None = None

    def __str__(self) -> str:
        where = f"unit {self.unit_index}: " if self.unit_index is not None else ""
        return f"{self.kind}: {where}{self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [str(v) for v in self.violations]


def validate(graph: Subgraph) -> ValidationReport:
    """Check a subgraph against the structural rules.

    Reported violations: unit empty on both sides, a related-object naming
    no object in the subgraph, an input consumed before it is produced,
    out-of-sequence unit indices, and a hand grasping a non-input object.
    """
    violations: list[Violation] = []
    labels = graph.object_labels()
    produced_anywhere = graph.produced_identities()
    produced_before: set = set()

    for position, unit in enumerate(graph.units):
        if unit.unit_index != position:
            violations.append(
                Violation(
                    "unit-index",
                    f"expected index {position}, found {unit.unit_index}",
                    position,
                )
            )
        if not unit.inputs and not unit.outputs:
            violations.append(Violation("empty-unit", "no input or output objects", position))

        input_labels = set(unit.input_labels())
        for hand in unit.hands:
            if hand.grasped_object is not None and hand.grasped_object not in input_labels:
                violations.append(
                    Violation(
                        "hand-not-input",
                        f"{hand.actor} grasps {hand.grasped_object!r}, "
                        "which is not an input object of the unit",
                        position,
                    )
                )

        for node in (*unit.inputs, *unit.outputs):
            for state in node.states:
                if state.related_object is not None and state.related_object not in labels:
                    violations.append(
                        Violation(
                            "dangling-related",
                            f"state {state.name!r} of {node.label!r} refers to "
                            f"{state.related_object!r}, which appears nowhere in the subgraph",
                            position,
                        )
                    )

        for node in unit.inputs:
            identity = node.identity()
            if identity in produced_before:
                continue
            if identity in produced_anywhere:
                violations.append(
                    Violation(
                        "chaining",
                        f"input {node.label!r} {sorted(s.key() for s in node.states)!r} "
                        "is consumed before any unit produces it",
                        position,
                    )
                )
        produced_before.update(node.identity() for node in unit.outputs)

    return ValidationReport(tuple(violations))
