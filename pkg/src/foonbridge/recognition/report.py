"""Figure rendering for recognition runs.

Writes three PNGs next to the machine-readable outputs: hand-to-part
distance traces with the matcher thresholds, a phase/unit timeline, and
the object-to-object distance matrix of the final frame.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from ..foon import Subgraph
from .distances import distance_matrices
from .matcher import RecognizedUnit, RecognizerConfig
from .stream import DetectionFrame


def _distance_traces(frames: Sequence[DetectionFrame], labels: Sequence[str]):
    times = [f.t for f in frames]
    traces = {label: [] for label in labels}
    for frame in frames:
        matrices = distance_matrices(frame)
        index = matrices.object_index()
        for label in labels:
            row = index.get(label)
            if row is None or matrices.o2h.shape[1] == 0:
                traces[label].append(np.nan)
            else:
                traces[label].append(float(matrices.o2h[row].min()))
    return times, traces


def render_report(
    frames: Sequence[DetectionFrame],
    foon: Subgraph,
    cfg: RecognizerConfig,
    recognized: Sequence[RecognizedUnit],
    segments: Sequence[tuple[float, float, str]],
    out_dir: Path,
) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    labels = sorted(foon.object_labels())

    times, traces = _distance_traces(frames, labels)
    fig, ax = plt.subplots(figsize=(9, 4.5))
    for label in labels:
        ax.plot(times, traces[label], label=label, linewidth=1.2)
    ax.axhline(cfg.tau_grasp, color="grey", linestyle="--", linewidth=0.8)
    ax.axhline(cfg.tau_release, color="grey", linestyle=":", linewidth=0.8)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("min hand distance (normalized)")
    ax.set_title("hand-to-part distances")
    ax.legend(fontsize=8, ncol=2)
    path = out_dir / "distances.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(9, 3))
    phase_rows = {"grasp": 2, "transport": 1, "release": 0}
    colors = {"grasp": "tab:green", "transport": "tab:blue", "release": "tab:red"}
    for start, end, phase in segments:
        width = max(end - start, 0.03)
        ax.broken_barh([(start, width)], (phase_rows[phase], 0.8), color=colors[phase])
    for unit in recognized:
        ax.broken_barh(
            [(unit.t_start, max(unit.t_end - unit.t_start, 0.03))],
            (3.2, 0.8),
            color="tab:orange",
        )
        ax.text(
            unit.t_start,
            4.1,
            f"unit {unit.unit_index}",
            fontsize=8,
        )
    ax.set_yticks([0.4, 1.4, 2.4, 3.6])
    ax.set_yticklabels(["release", "transport", "grasp", "units"])
    ax.set_xlabel("time [s]")
    ax.set_title("segmentation and recognized units")
    path = out_dir / "timeline.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    if frames:
        matrices = distance_matrices(frames[-1])
        fig, ax = plt.subplots(figsize=(5, 4.5))
        image = ax.imshow(matrices.o2o, cmap="viridis", vmin=0.0, vmax=1.0)
        ax.set_xticks(range(len(matrices.object_labels)))
        ax.set_yticks(range(len(matrices.object_labels)))
        ax.set_xticklabels(matrices.object_labels, rotation=45, ha="right", fontsize=8)
        ax.set_yticklabels(matrices.object_labels, fontsize=8)
        fig.colorbar(image, ax=ax, label="normalized distance")
        ax.set_title("object-to-object distances (final frame)")
        path = out_dir / "o2o_matrix.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    return written
