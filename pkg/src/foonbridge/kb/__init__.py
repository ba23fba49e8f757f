"""Embedded knowledge base: the strut-profile assembly and disassembly
subgraphs plus the four-part catalog they are built from.

The graph files are plain FOONv1 documents and can be swapped out for a
different part family; the loaders here only read the shipped copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..foon import Subgraph, normalize_label, parse_foon

ASSEMBLY_NAME = "industrial_assembly"
DISASSEMBLY_NAME = "industrial_disassembly"

# Recommended state vocabulary; the format itself accepts free strings.
STATE_VOCABULARY = (
    "loose",
    "aligned",
    "inserted",
    "attached to",
    "secured to",
    "detached",
    "empty-slot",
    "on",
)

RESOURCE_MATERIAL = "Material"
RESOURCE_DEVICE = "Device"


@dataclass(frozen=True)
class PartCatalogEntry:
    """One part of the workbench scene, numbered as laid out on the bench."""

    label: str
    catalog_number: int
    resource_type: str = RESOURCE_MATERIAL

    @property
    def node_label(self) -> str:
        """Label as it appears on graph nodes (normalized)."""
        return normalize_label(self.label)


_CATALOG = (
    PartCatalogEntry("strut profile", 1),
    PartCatalogEntry("bracket", 2),
    PartCatalogEntry("T-bolt", 3),
    PartCatalogEntry("flange nut", 4),
)


def part_catalog() -> list[PartCatalogEntry]:
    """The four parts in catalog order."""
    return list(_CATALOG)


def resource_type_map() -> dict[str, str]:
    """Normalized part label -> linked-data resource type."""
    return {entry.node_label: entry.resource_type for entry in _CATALOG}


def kb_text(name: str) -> str:
    """Raw bytes of a shipped graph file, by subgraph name."""
    return (
        resources.files(__package__)
        .joinpath("data", f"{name}.foon")
        .read_text(encoding="utf-8")
    )


def load_assembly() -> Subgraph:
    """The four-unit assembly task: place bracket, t-bolt and flange nut on
    the strut profile, then screw the nut tight."""
    return parse_foon(kb_text(ASSEMBLY_NAME))


def load_disassembly() -> Subgraph:
    """The four-unit mirror task: unscrew the flange nut, then remove nut,
    t-bolt and bracket."""
    return parse_foon(kb_text(DISASSEMBLY_NAME))
