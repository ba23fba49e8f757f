"""Sequential matching of detection streams against functional units.

The recognizer tracks a world state (object identities currently true,
seeded from the subgraph's initial nodes) and offers every unit whose
inputs are satisfied as a candidate. A candidate confirms its grasp phase
when the minimum object-to-hand distance over its hand-annotated input
objects stays below ``tau_grasp`` for ``k_confirm`` consecutive frames.
Activities are sequential, so at most one unit is active at a time: when
several candidates confirm on the same frame, the one whose inputs were
produced most recently wins, ties broken by lower unit index. The active
unit completes when that distance rises above ``tau_release`` and the
unit's output relative states are corroborated by object-to-object
proximity (below ``tau_attach`` for attach-like states, above
``tau_release`` for detach-like ones). Completion emits the unit and
advances the world state by its outputs.

The classifier seam is deliberately narrow: anything implementing
``UnitClassifier`` (for instance a learned sequence model) can replace the
threshold matcher shipped here.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

from ..errors import StreamError
from ..foon import FunctionalUnit, Subgraph
from .distances import DistanceMatrices, distance_matrices
from .stream import HAND_LABELS, DetectionFrame

log = logging.getLogger(__name__)

ATTACH_STATES = frozenset({"attached to", "secured to", "inserted", "on", "aligned"})
DETACH_STATES = frozenset({"detached", "detached from"})


@dataclass(frozen=True)
class RecognizerConfig:
    tau_grasp: float = 0.05
    tau_release: float = 0.12
    tau_attach: float = 0.04
    k_confirm: int = 5
    min_confidence: float = 0.5

    def __post_init__(self):
        if not self.tau_grasp < self.tau_release:
            raise ValueError("tau_grasp must be smaller than tau_release")
        if self.tau_attach <= 0:
            raise ValueError("tau_attach must be positive")
        if self.k_confirm < 1:
            raise ValueError("k_confirm must be at least 1")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError("min_confidence must be in [0, 1]")


@dataclass(frozen=True)
class PhaseEvidence:
    """Threshold hits per matcher phase."""

    grasp_frames: int
    transport_frames: int
    release_checks: int

    def to_dict(self) -> dict:
        return {
            "grasp_frames": self.grasp_frames,
            "transport_frames": self.transport_frames,
            "release_checks": self.release_checks,
        }


@dataclass(frozen=True)
class RecognizedUnit:
    """A matched unit: reference into the subgraph, timing, confidence."""

    subgraph: str
    unit_index: int
    t_start: float
    t_end: float
    confidence: float
    evidence: PhaseEvidence | None = None

    def __post_init__(self):
        if self.t_start > self.t_end:
            raise ValueError("t_start must not exceed t_end")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must be in [0, 1]")

    def to_wire(self) -> dict:
        return {
            "subgraph": self.subgraph,
            "unit_index": self.unit_index,
            "t_start": self.t_start,
            "t_end": self.t_end,
            "confidence": self.confidence,
        }

    @classmethod
    def from_wire(cls, record: dict) -> "RecognizedUnit":
        return cls(
            subgraph=record["subgraph"],
            unit_index=int(record["unit_index"]),
            t_start=float(record["t_start"]),
            t_end=float(record["t_end"]),
            confidence=float(record["confidence"]),
        )


@dataclass(frozen=True)
class Candidate:
    """A unit whose preconditions hold, plus how recently they were produced."""

    unit: FunctionalUnit
    recency: int


@dataclass(frozen=True)
class Hypothesis:
    unit: FunctionalUnit
    t_start: float
    t_end: float
    confidence: float
    evidence: PhaseEvidence


class UnitClassifier(Protocol):
    """Per-frame strategy turning distance matrices into unit hypotheses."""

    def begin(self, cfg: RecognizerConfig) -> None: ...

    def step(
        self, t: float, matrices: DistanceMatrices, candidates: Sequence[Candidate]
    ) -> Hypothesis | None: ...


def grasp_pairs(unit: FunctionalUnit) -> tuple[tuple[str | None, str], ...]:
    """(hand label, object label) pairs whose proximity indicates a grasp.

    Hand annotations with a detectable actor pair that hand with its grasped
    object (or with every input when no object is named). Units without any
    detectable annotation fall back to any-hand against all inputs, encoded
    with hand label None.
    """
    pairs: list[tuple[str | None, str]] = []
    for hand in unit.hands:
        if hand.actor not in HAND_LABELS:
            continue
        if hand.grasped_object is not None:
            pairs.append((hand.actor, hand.grasped_object))
        else:
            pairs.extend((hand.actor, label) for label in unit.input_labels())
    if not pairs:
        pairs = [(None, label) for label in unit.input_labels()]
    return tuple(pairs)


def _pair_distance(
    matrices: DistanceMatrices, pairs: Iterable[tuple[str | None, str]]
) -> float:
    """Minimum o2h distance over the given pairs; inf when unresolvable."""
    objects = matrices.object_index()
    hands = matrices.hand_index()
    best = math.inf
    for hand_label, object_label in pairs:
        row = objects.get(object_label)
        if row is None:
            continue
        if hand_label is None:
            columns = range(len(matrices.hand_labels))
        else:
            column = hands.get(hand_label)
            columns = () if column is None else (column,)
        for column in columns:
            best = min(best, float(matrices.o2h[row, column]))
    return best


def relative_constraints(unit: FunctionalUnit) -> tuple[tuple[str, str, bool], ...]:
    """(object, related object, must_be_close) checks corroborating outputs."""
    constraints = []
    for node in unit.outputs:
        for state in node.states:
            if state.related_object is None:
                continue
            if state.name in ATTACH_STATES:
                constraints.append((node.label, state.related_object, True))
            elif state.name in DETACH_STATES:
                constraints.append((node.label, state.related_object, False))
    return tuple(constraints)


def _corroborated(
    matrices: DistanceMatrices, unit: FunctionalUnit, cfg: RecognizerConfig
) -> int | None:
    """Number of satisfied output constraints, or None if any one fails."""
    index = matrices.object_index()
    satisfied = 0
    for label, related, must_be_close in relative_constraints(unit):
        row, column = index.get(label), index.get(related)
        if row is None or column is None:
            return None
        distance = float(matrices.o2o[row, column])
        if must_be_close and distance >= cfg.tau_attach:
            return None
        if not must_be_close and distance <= cfg.tau_release:
            return None
        satisfied += 1
    return satisfied


@dataclass
class _Run:
    started_at: float
    frames: int = 0


@dataclass
class _Active:
    unit: FunctionalUnit
    t_start: float
    grasp_frames: int
    frames_seen: int = 0
    hold_frames: int = 0


class ThresholdMatcher:
    """The deterministic, graph-grounded classifier."""

    def __init__(self):
        self._cfg: RecognizerConfig | None = None
        self._runs: dict[tuple, _Run] = {}
        self._active: _Active | None = None

    def begin(self, cfg: RecognizerConfig) -> None:
        self._cfg = cfg
        self._runs = {}
        self._active = None

    def step(
        self, t: float, matrices: DistanceMatrices, candidates: Sequence[Candidate]
    ) -> Hypothesis | None:
        cfg = self._cfg
        if cfg is None:
            raise RuntimeError("begin() must be called before step()")

        if self._active is not None:
            if not any(c.unit == self._active.unit for c in candidates):
                log.debug(
                    "active unit %d invalidated by world change",
                    self._active.unit.unit_index,
                )
                self._active = None

        if self._active is None:
            self._accrue(t, matrices, candidates, cfg)
            return None
        return self._advance_active(t, matrices, cfg)

    def _accrue(self, t, matrices, candidates, cfg) -> None:
        live_keys = set()
        confirmable: list[Candidate] = []
        for candidate in candidates:
            key = candidate.unit.key()
            live_keys.add(key)
            distance = _pair_distance(matrices, grasp_pairs(candidate.unit))
            run = self._runs.get(key)
            if distance < cfg.tau_grasp:
                if run is None:
                    run = self._runs[key] = _Run(started_at=t)
                run.frames += 1
                if run.frames >= cfg.k_confirm:
                    confirmable.append(candidate)
            elif run is not None:
                del self._runs[key]
        for key in list(self._runs):
            if key not in live_keys:
                del self._runs[key]

        if not confirmable:
            return
        winner = min(
            confirmable, key=lambda c: (-c.recency, c.unit.unit_index)
        )
        run = self._runs[winner.unit.key()]
        self._active = _Active(
            unit=winner.unit,
            t_start=run.started_at,
            grasp_frames=run.frames,
            frames_seen=run.frames,
            hold_frames=run.frames,
        )
        # The hand is engaged; evidence accrued by losing candidates was
        # parasitic proximity, so their runs restart from zero.
        self._runs = {}

    def _advance_active(self, t, matrices, cfg) -> Hypothesis | None:
        active = self._active
        assert active is not None
        distance = _pair_distance(matrices, grasp_pairs(active.unit))

        if math.isfinite(distance) and distance > cfg.tau_release:
            checks = _corroborated(matrices, active.unit, cfg)
            if checks is not None:
                confidence = (
                    active.hold_frames / active.frames_seen if active.frames_seen else 0.0
                )
                hypothesis = Hypothesis(
                    unit=active.unit,
                    t_start=active.t_start,
                    t_end=t,
                    confidence=confidence,
                    evidence=PhaseEvidence(
                        grasp_frames=active.grasp_frames,
                        transport_frames=active.frames_seen - active.grasp_frames,
                        release_checks=checks,
                    ),
                )
                self._active = None
                return hypothesis

        active.frames_seen += 1
        if distance < cfg.tau_release:
            active.hold_frames += 1
        return None


def _world_state(foon: Subgraph) -> dict:
    return {node.identity(): -1 for node in foon.initial_nodes()}


def _candidates(foon: Subgraph, world: dict) -> list[Candidate]:
    found = []
    for unit in foon.units:
        identities = [node.identity() for node in unit.inputs]
        if identities and all(i in world for i in identities):
            recency = max(world[i] for i in identities)
            found.append(Candidate(unit=unit, recency=recency))
    return found


def recognize_stream(
    frames: Iterable[DetectionFrame],
    foon: Subgraph,
    cfg: RecognizerConfig | None = None,
    classifier: UnitClassifier | None = None,
) -> list[RecognizedUnit]:
    """Match a time-ordered stream against a subgraph's functional units.

    Raises StreamError when timestamps decrease. Frames the matcher cannot
    resolve score as misses and are logged, never fatal.
    """
    cfg = cfg or RecognizerConfig()
    classifier = classifier or ThresholdMatcher()
    classifier.begin(cfg)

    world = _world_state(foon)
    emitted: list[RecognizedUnit] = []
    previous_t: float | None = None

    for frame in frames:
        if previous_t is not None and frame.t < previous_t:
            raise StreamError(
                f"timestamps must be non-decreasing, got {frame.t} after {previous_t}"
            )
        previous_t = frame.t

        matrices = distance_matrices(frame)
        if not matrices.hand_labels:
            log.debug("frame at t=%.3f has no hands, skipped", frame.t)
        candidates = _candidates(foon, world)
        hypothesis = classifier.step(frame.t, matrices, candidates)
        if hypothesis is None:
            continue
        if hypothesis.confidence < cfg.min_confidence:
            log.warning(
                "discarding low-confidence hypothesis for unit %d (%.2f)",
                hypothesis.unit.unit_index,
                hypothesis.confidence,
            )
            continue

        stamp = len(emitted)
        for node in hypothesis.unit.inputs:
            world.pop(node.identity(), None)
        for node in hypothesis.unit.outputs:
            world[node.identity()] = stamp
        emitted.append(
            RecognizedUnit(
                subgraph=foon.name,
                unit_index=hypothesis.unit.unit_index,
                t_start=hypothesis.t_start,
                t_end=hypothesis.t_end,
                confidence=hypothesis.confidence,
                evidence=hypothesis.evidence,
            )
        )
    return emitted


def segment_stream(
    frames: Iterable[DetectionFrame], cfg: RecognizerConfig | None = None
) -> list[tuple[float, float, str]]:
    """Graph-free view of the matcher's segmentation.

    Tracks the closest (hand, object) pair globally: a sustained sub-grasp
    run emits a grasp interval, holding emits a transport interval, and the
    release crossing emits a release instant. Intervals are time-ordered and
    never overlap.
    """
    cfg = cfg or RecognizerConfig()
    phases: list[tuple[float, float, str]] = []

    run_pair: tuple[str, str] | None = None
    run_start = 0.0
    run_frames = 0
    held_pair: tuple[str, str] | None = None
    hold_start: float | None = None
    previous_t: float | None = None

    for frame in frames:
        if previous_t is not None and frame.t < previous_t:
            raise StreamError(
                f"timestamps must be non-decreasing, got {frame.t} after {previous_t}"
            )
        matrices = distance_matrices(frame)

        if held_pair is not None:
            if hold_start is None:
                hold_start = frame.t
            objects = matrices.object_index()
            hands = matrices.hand_index()
            row = objects.get(held_pair[1])
            column = hands.get(held_pair[0])
            distance = (
                float(matrices.o2h[row, column])
                if row is not None and column is not None
                else math.inf
            )
            if math.isfinite(distance) and distance > cfg.tau_release:
                if previous_t is not None and hold_start <= previous_t:
                    phases.append((hold_start, previous_t, "transport"))
                phases.append((frame.t, frame.t, "release"))
                held_pair = None
                hold_start = None
            previous_t = frame.t
            continue

        best_pair = None
        best = math.inf
        for column, hand_label in enumerate(matrices.hand_labels):
            for row, object_label in enumerate(matrices.object_labels):
                distance = float(matrices.o2h[row, column])
                pair = (hand_label, object_label)
                if distance < best or (distance == best and (best_pair is None or pair < best_pair)):
                    best = distance
                    best_pair = pair
        if best_pair is not None and best < cfg.tau_grasp:
            if best_pair != run_pair:
                run_pair = best_pair
                run_start = frame.t
                run_frames = 0
            run_frames += 1
            if run_frames >= cfg.k_confirm:
                phases.append((run_start, frame.t, "grasp"))
                held_pair = run_pair
                hold_start = None
                run_pair = None
                run_frames = 0
        else:
            run_pair = None
            run_frames = 0
        previous_t = frame.t

    return phases
