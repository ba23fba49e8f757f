"""Synthetic detection streams for a subgraph.

For each unit in order the generator synthesizes a grasp, transport and
release trajectory of bounding-box centroids: the acting hand approaches
the manipulated part, dwells on it past the confirmation window, carries
it to a placement satisfying the unit's output proximity constraints (or a
free bin for detach-like outputs), then retreats to a rest pose. With zero
noise every threshold in the default recognizer configuration is met with
a 2x margin; otherwise independent Gaussian jitter of the given normalized
sigma is added to every centroid.

Streams are deterministic for a given seed.
"""

from __future__ import annotations

import math
import zlib
import numpy as np

from ..foon import FunctionalUnit, Subgraph
from .matcher import grasp_pairs, relative_constraints
from .stream import Detection, DetectionFrame

FRAME_WIDTH = 1280.0
FRAME_HEIGHT = 720.0
DIAGONAL = math.hypot(FRAME_WIDTH, FRAME_HEIGHT)

REST = {"right-hand": (1180.0, 640.0), "left-hand": (80.0, 640.0)}
HAND_OFFSET = (0.0, -10.0)
HAND_SIZE = (60.0, 60.0)

ANCHOR_COLUMNS = (260.0, 510.0, 760.0, 1010.0)
ANCHOR_ROWS = (400.0, 560.0, 240.0)
BIN_COLUMNS = (200.0, 450.0, 700.0, 950.0, 1200.0)
BIN_ROWS = (150.0, 60.0)

# Offsets keep constrained pairs within half of tau_attach * diagonal.
CLUSTER_OFFSETS = ((0.0, 0.0), (22.0, 0.0), (0.0, 18.0), (20.0, 16.0), (-20.0, 14.0))
PLACE_OFFSETS = ((24.0, 0.0), (0.0, 20.0), (-24.0, 8.0), (18.0, -16.0), (12.0, 22.0))

APPROACH_FRAMES = 8
GRASP_FRAMES = 8
TRANSPORT_FRAMES = 10
RETREAT_FRAMES = 8


def _bbox_size(label: str) -> tuple[float, float]:
    digest = zlib.crc32(label.encode("utf-8"))
    return (40.0 + digest % 41, 40.0 + (digest >> 8) % 41)


def _anchor_positions() -> list[tuple[float, float]]:
    return [(x, y) for y in ANCHOR_ROWS for x in ANCHOR_COLUMNS]


def _bin_positions() -> list[tuple[float, float]]:
    return [(x, y) for y in BIN_ROWS for x in BIN_COLUMNS]


def _initial_layout(graph: Subgraph) -> dict[str, tuple[float, float]]:
    """Place parts so that initial attach constraints already hold."""
    order: list[str] = []
    for unit in graph.units:
        for node in (*unit.inputs, *unit.outputs):
            if node.label not in order:
                order.append(node.label)

    parent = {label: label for label in order}

    def find(label: str) -> str:
        while parent[label] != label:
            parent[label] = parent[parent[label]]
            label = parent[label]
        return label

    def union(a: str, b: str):
        if a in parent and b in parent:
            parent[find(a)] = find(b)

    attach_states = {"attached to", "secured to", "inserted", "on", "aligned"}
    for node in graph.initial_nodes():
        for state in node.states:
            if state.related_object is not None and state.name in attach_states:
                union(node.label, state.related_object)

    clusters: dict[str, list[str]] = {}
    for label in order:
        clusters.setdefault(find(label), []).append(label)

    anchors = _anchor_positions()
    positions: dict[str, tuple[float, float]] = {}
    for i, root in enumerate(sorted(clusters, key=order.index)):
        ax, ay = anchors[i % len(anchors)]
        for j, label in enumerate(clusters[root]):
            ox, oy = CLUSTER_OFFSETS[j % len(CLUSTER_OFFSETS)]
            positions[label] = (ax + ox, ay + oy)
    return positions


def _moved_label_and_actor(unit: FunctionalUnit) -> tuple[str | None, str]:
    for hand_label, object_label in grasp_pairs(unit):
        if hand_label is not None:
            return object_label, hand_label
    labels = unit.input_labels()
    return (labels[0] if labels else None), "right-hand"


def _pick_target(
    unit: FunctionalUnit,
    moved: str,
    positions: dict[str, tuple[float, float]],
    used_bins: list[tuple[float, float]],
) -> tuple[float, float]:
    close_to = [r for label, r, must in relative_constraints(unit) if label == moved and must]
    away_from = [r for label, r, must in relative_constraints(unit) if label == moved and not must]

    if close_to:
        current = positions[moved]
        if all(
            r in positions and math.dist(current, positions[r]) <= 0.5 * 0.04 * DIAGONAL
            for r in close_to
        ):
            return current  # in-place action such as screwing
        anchor_label = close_to[0]
        anchor = positions.get(anchor_label, current)
        neighbours = sum(
            1
            for label, p in positions.items()
            if label != moved and math.dist(p, anchor) <= 0.04 * DIAGONAL
        )
        ox, oy = PLACE_OFFSETS[neighbours % len(PLACE_OFFSETS)]
        return (anchor[0] + ox, anchor[1] + oy)

    min_away = 2 * 0.12 * DIAGONAL
    for spot in _bin_positions():
        if spot in used_bins:
            continue
        if any(math.dist(spot, p) < 60.0 for p in positions.values()):
            continue
        if all(
            r not in positions or math.dist(spot, positions[r]) >= min_away
            for r in away_from
        ):
            used_bins.append(spot)
            return spot
    used_bins.append(REST["left-hand"])
    return REST["left-hand"]


def _lerp(a: tuple[float, float], b: tuple[float, float], fraction: float) -> tuple[float, float]:
    return (a[0] + (b[0] - a[0]) * fraction, a[1] + (b[1] - a[1]) * fraction)


class _FrameEmitter:
    def __init__(self, label_order, fps, sigma_px, rng):
        self.label_order = label_order
        self.fps = fps
        self.sigma_px = sigma_px
        self.rng = rng
        self.index = 0
        self.frames: list[DetectionFrame] = []

    def emit(self, positions: dict[str, tuple[float, float]], hand_positions: dict[str, tuple[float, float]]):
        detections = []
        for label in self.label_order:
            detections.append(self._detection(label, positions[label], _bbox_size(label), 0.99, False))
        for hand_label in ("left-hand", "right-hand"):
            detections.append(
                self._detection(hand_label, hand_positions[hand_label], HAND_SIZE, 0.95, True)
            )
        self.frames.append(
            DetectionFrame(
                t=self.index / self.fps,
                width=FRAME_WIDTH,
                height=FRAME_HEIGHT,
                detections=tuple(detections),
            )
        )
        self.index += 1

    def _detection(self, label, center, size, confidence, is_hand):
        cx, cy = center
        if self.sigma_px > 0:
            dx, dy = self.rng.normal(0.0, self.sigma_px, 2)
            cx, cy = cx + dx, cy + dy
        w, h = size
        return Detection(
            label=label,
            confidence=confidence,
            bbox=(round(cx - w / 2, 2), round(cy - h / 2, 2), w, h),
            is_hand=is_hand,
        )


def simulate_stream(
    graph: Subgraph,
    fps: float = 30.0,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> list[DetectionFrame]:
    """Generate a detection stream that enacts the subgraph's units in order."""
    if fps <= 0:
        raise ValueError("fps must be positive")
    rng = np.random.default_rng(seed)
    positions = _initial_layout(graph)
    label_order = list(positions)
    hand_positions = dict(REST)
    used_bins: list[tuple[float, float]] = []
    emitter = _FrameEmitter(label_order, fps, noise_sigma * DIAGONAL, rng)

    for unit in graph.units:
        moved, actor = _moved_label_and_actor(unit)
        if moved is None or moved not in positions:
            continue
        start = positions[moved]
        target = _pick_target(unit, moved, positions, used_bins)
        grasp_point = (start[0] + HAND_OFFSET[0], start[1] + HAND_OFFSET[1])
        hand_from = hand_positions[actor]

        for i in range(1, APPROACH_FRAMES + 1):
            hand_positions[actor] = _lerp(hand_from, grasp_point, i / APPROACH_FRAMES)
            emitter.emit(positions, hand_positions)
        for _ in range(GRASP_FRAMES):
            emitter.emit(positions, hand_positions)
        for i in range(1, TRANSPORT_FRAMES + 1):
            carried = _lerp(start, target, i / TRANSPORT_FRAMES)
            positions[moved] = carried
            hand_positions[actor] = (carried[0] + HAND_OFFSET[0], carried[1] + HAND_OFFSET[1])
            emitter.emit(positions, hand_positions)
        release_from = hand_positions[actor]
        for i in range(1, RETREAT_FRAMES + 1):
            hand_positions[actor] = _lerp(release_from, REST[actor], i / RETREAT_FRAMES)
            emitter.emit(positions, hand_positions)

    return emitter.frames
