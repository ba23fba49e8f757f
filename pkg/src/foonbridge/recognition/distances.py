"""Per-frame distance features.

For each frame we take bounding-box centroids (clamped into the frame so
no distance can exceed the diagonal), split detections into objects and
hands, and fill two matrices of pairwise Euclidean distances normalized by
the frame diagonal: object-to-object and object-to-hand. All entries land
in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stream import DetectionFrame


@dataclass(frozen=True, eq=False)
class DistanceMatrices:
    object_labels: tuple[str, ...]
    hand_labels: tuple[str, ...]
    o2o: np.ndarray
    o2h: np.ndarray

    def object_index(self) -> dict[str, int]:
        """Label -> row index; first occurrence wins on duplicates."""
        index: dict[str, int] = {}
        for i, label in enumerate(self.object_labels):
            index.setdefault(label, i)
        return index

    def hand_index(self) -> dict[str, int]:
        index: dict[str, int] = {}
        for i, label in enumerate(self.hand_labels):
            index.setdefault(label, i)
        return index


def _centroids(frame: DetectionFrame, detections) -> np.ndarray:
    if not detections:
        return np.zeros((0, 2))
    points = np.array([d.centroid for d in detections], dtype=float)
    points[:, 0] = np.clip(points[:, 0], 0.0, frame.width)
    points[:, 1] = np.clip(points[:, 1], 0.0, frame.height)
    return points


def _pairwise(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]))
    deltas = a[:, None, :] - b[None, :, :]
    return np.sqrt((deltas**2).sum(axis=2))


def distance_matrices(frame: DetectionFrame) -> DistanceMatrices:
    """Compute the normalized object-to-object and object-to-hand matrices."""
    objects = frame.objects()
    hands = frame.hands()
    obj_points = _centroids(frame, objects)
    hand_points = _centroids(frame, hands)
    diagonal = frame.diagonal

    o2o = _pairwise(obj_points, obj_points) / diagonal
    if o2o.size:
        np.fill_diagonal(o2o, 0.0)
    o2h = _pairwise(obj_points, hand_points) / diagonal

    return DistanceMatrices(
        object_labels=tuple(d.label for d in objects),
        hand_labels=tuple(d.label for d in hands),
        o2o=o2o,
        o2h=o2h,
    )
