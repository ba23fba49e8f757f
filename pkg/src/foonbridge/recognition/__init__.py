"""Activity recognition: detection streams, distance features, sequential
matching against functional units, and a synthetic stream generator."""

from .distances import DistanceMatrices, distance_matrices
from .matcher import (
    Candidate,
    Hypothesis,
    PhaseEvidence,
    RecognizedUnit,
    RecognizerConfig,
    ThresholdMatcher,
    UnitClassifier,
    recognize_stream,
    segment_stream,
)
from .simulate import simulate_stream
from .stream import (
    HAND_LABELS,
    Detection,
    DetectionFrame,
    frame_from_dict,
    frame_to_dict,
    read_jsonl,
    write_jsonl,
)

__all__ = [
    "HAND_LABELS",
    "Candidate",
    "Detection",
    "DetectionFrame",
    "DistanceMatrices",
    "Hypothesis",
    "PhaseEvidence",
    "RecognizedUnit",
    "RecognizerConfig",
    "ThresholdMatcher",
    "UnitClassifier",
    "distance_matrices",
    "frame_from_dict",
    "frame_to_dict",
    "read_jsonl",
    "recognize_stream",
    "segment_stream",
    "simulate_stream",
    "write_jsonl",
]
