"""Evaluation harness: bundle processing, prequential runs, memory tables.

Bundles model the device calling convention: an ordered batch of flagged
samples handed to one kernel invocation. Processing stays strictly
sequential, one infer-then-train step per sample, so a bundle is behaviorally
identical to the same sequence of single calls; batching only amortizes
transfer overhead.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .serialize import model_bytes
from .tree import Hyperparams, Sample, Tree

__all__ = [
    "Bundle",
    "PrequentialReport",
    "process_bundle",
    "split_into_bundles",
    "run_prequential",
    "mem_report",
]

DEFAULT_NODE_SWEEP = tuple(2**i for i in range(8))


@dataclass
class Bundle:
    """An ordered batch of samples processed by one kernel call."""

    samples: list[Sample]
    capacity: int

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError("capacity must be positive")
        if len(self.samples) > self.capacity:
            raise ValueError(
                f"{len(self.samples)} samples exceed capacity {self.capacity}"
            )
        dims = {len(s.features) for s in self.samples}
        if len(dims) > 1:
            raise ValueError(f"samples disagree on feature count: {sorted(dims)}")


def split_into_bundles(samples: Sequence[Sample], capacity: int) -> Iterator[Bundle]:
    """Chop a stream into maximal bundles, preserving order."""
    for start in range(0, len(samples), capacity):
        yield Bundle(list(samples[start : start + capacity]), capacity)


def process_bundle(tree: Tree, bundle: Bundle) -> list[int]:
    """Run one infer-then-train pass over a bundle.

    Output i is the model's answer for sample i: the pre-update prediction
    for train-flagged samples, a pure inference otherwise. The model seen by
    sample i reflects exactly the train-flagged samples before it.
    """
    if bundle.samples and len(bundle.samples[0].features) != tree.params.dims:
        raise ValueError(
            f"bundle has {len(bundle.samples[0].features)} features, "
            f"tree expects {tree.params.dims}"
        )
    out = []
    for sample in bundle.samples:
        if sample.train:
            out.append(tree.train(sample))
        else:
            out.append(tree.infer(sample.features))
    return out


@dataclass
class PrequentialReport:
    """Outcome of one prequential run."""

    total: int
    correct: int
    accuracy: float
    train_time: float
    infer_time: float
    final_node_count: int
    model_bytes: int
    windowed_accuracy: list[tuple[int, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "train_time": self.train_time,
            "infer_time": self.infer_time,
            "final_node_count": self.final_node_count,
            "model_bytes": self.model_bytes,
            "windowed_accuracy": [[end, acc] for end, acc in self.windowed_accuracy],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PrequentialReport":
        return cls(
            total=data["total"],
            correct=data["correct"],
            accuracy=data["accuracy"],
            train_time=data["train_time"],
            infer_time=data["infer_time"],
            final_node_count=data["final_node_count"],
            model_bytes=data["model_bytes"],
            windowed_accuracy=[(int(e), float(a)) for e, a in data["windowed_accuracy"]],
        )


def run_prequential(
    tree: Tree,
    stream: Sequence[Sample],
    window: int = 1000,
    time_inference: bool = False,
) -> PrequentialReport:
    """Feed a training stream through the tree, scoring each prediction first.

    Every sample must carry the train flag. Accuracy is interleaved
    test-then-train: the pre-update prediction is scored against the true
    label. windowed_accuracy holds one (end index, accuracy) entry per
    trailing window of the given size, the last window possibly partial.
    Wall-clock timing covers the train loop only; when time_inference is
    set, a second read-only pass over the stream measures inference time.
    """
    if not stream:
        raise ValueError("stream is empty")
    if window < 1:
        raise ValueError("window must be positive")
    for s in stream:
        if not s.train:
            raise ValueError("prequential streams must be fully train-flagged")

    correct = 0
    window_correct = 0
    window_seen = 0
    windows: list[tuple[int, float]] = []
    start = time.perf_counter()
    for i, sample in enumerate(stream):
        hit = tree.train(sample) == sample.label
        correct += hit
        window_correct += hit
        window_seen += 1
        if window_seen == window:
            windows.append((i + 1, window_correct / window))
            window_correct = 0
            window_seen = 0
    train_time = time.perf_counter() - start
    if window_seen:
        windows.append((len(stream), window_correct / window_seen))

    infer_time = 0.0
    if time_inference:
        start = time.perf_counter()
        for sample in stream:
            tree.infer(sample.features)
        infer_time = time.perf_counter() - start

    total = len(stream)
    return PrequentialReport(
        total=total,
        correct=correct,
        accuracy=correct / total,
        train_time=train_time,
        infer_time=infer_time,
        final_node_count=tree.node_count,
        model_bytes=model_bytes(tree.params),
        windowed_accuracy=windows,
    )


def mem_report(
    max_nodes_values: Sequence[int] = DEFAULT_NODE_SWEEP,
    dims_values: Sequence[int] = (3, 100),
    classes_values: Sequence[int] = (5, 10),
    n_quantiles: int = 16,
) -> list[tuple[int, int, int, int]]:
    """Serialized model size over a parameter grid.

    Rows are (max_nodes, dims, classes, bytes), swept with max_nodes
    innermost; the default capacity sweep is the powers of two 1..128.
    """
    if not (max_nodes_values and dims_values and classes_values):
        raise ValueError("grid must be non-empty")
    rows = []
    for dims in dims_values:
        for classes in classes_values:
            for max_nodes in max_nodes_values:
                params = Hyperparams(
                    dims=dims,
                    classes=classes,
                    n_quantiles=n_quantiles,
                    n_pt=min(10, n_quantiles),
                    max_nodes=max_nodes,
                )
                rows.append((max_nodes, dims, classes, model_bytes(params)))
    return rows
