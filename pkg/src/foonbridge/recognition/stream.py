"""Detection-stream wire format.

A stream is JSON Lines, one frame per line:

    {"t": 0.033, "width": 1280, "height": 720,
     "detections": [{"label": "bracket", "confidence": 0.97,
                     "bbox": [412, 300, 80, 52], "hand": false}, ...]}

This is the detector-agnostic boundary: anything that can emit labeled
boxes (with hands labeled ``left-hand``/``right-hand``) can drive the
recognizer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from ..errors import StreamError
from ..foon import normalize_label

HAND_LABELS = ("left-hand", "right-hand")


@dataclass(frozen=True)
class Detection:
    label: str
    confidence: float
    bbox: tuple[float, float, float, float]
    is_hand: bool = False

    def __post_init__(self):
        object.__setattr__(self, "label", normalize_label(self.label))
        object.__setattr__(self, "bbox", tuple(float(v) for v in self.bbox))
        if len(self.bbox) != 4:
            raise ValueError("bbox must be (x, y, w, h)")
        if self.bbox[2] <= 0 or self.bbox[3] <= 0:
            raise ValueError("bbox width and height must be positive")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must be in [0, 1]")
        if self.is_hand and self.label not in HAND_LABELS:
            raise ValueError(f"hand detections must be labeled {HAND_LABELS}")

    @property
    def centroid(self) -> tuple[float, float]:
        x, y, w, h = self.bbox
        return (x + w / 2.0, y + h / 2.0)


@dataclass(frozen=True)
class DetectionFrame:
    t: float
    width: float
    height: float
    detections: tuple[Detection, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "detections", tuple(self.detections))
        if not math.isfinite(self.t):
            raise ValueError("frame time must be finite")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("frame dimensions must be positive")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def objects(self) -> tuple[Detection, ...]:
        return tuple(d for d in self.detections if not d.is_hand)

    def hands(self) -> tuple[Detection, ...]:
        return tuple(d for d in self.detections if d.is_hand)


def frame_to_dict(frame: DetectionFrame) -> dict:
    return {
        "t": frame.t,
        "width": frame.width,
        "height": frame.height,
        "detections": [
            {
                "label": d.label,
                "confidence": d.confidence,
                "bbox": list(d.bbox),
                "hand": d.is_hand,
            }
            for d in frame.detections
        ],
    }


def frame_from_dict(record: dict) -> DetectionFrame:
    try:
        detections = tuple(
            Detection(
                label=d["label"],
                confidence=float(d["confidence"]),
                bbox=tuple(d["bbox"]),
                is_hand=bool(d.get("hand", False)),
            )
            for d in record.get("detections", ())
        )
        return DetectionFrame(
            t=float(record["t"]),
            width=float(record["width"]),
            height=float(record["height"]),
            detections=detections,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise StreamError(f"bad detection frame: {exc}") from exc


def write_jsonl(frames: Iterable[DetectionFrame]) -> str:
    return "".join(json.dumps(frame_to_dict(f), separators=(",", ":")) + "\n" for f in frames)


def read_jsonl(text: str) -> Iterator[DetectionFrame]:
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise StreamError(f"line {line_no}: invalid JSON: {exc}") from exc
        yield frame_from_dict(record)
