"""Stream sources: synthetic Gaussian clusters and CSV files.

The synthetic generator draws cluster centers uniformly inside a box and
emits labeled points round-robin over the clusters, which keeps class
counts balanced to within one sample. Separability is controlled by the
single spread knob. The CSV loader is total: every row either becomes a
sample or raises an error that names its line.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .tree import Sample

__all__ = [
    "DatasetSpec",
    "generate_clusters",
    "CsvSchema",
    "load_csv",
    "write_samples_csv",
    "BANK_SCHEMA",
    "COVERTYPE_SCHEMA",
]


@dataclass(frozen=True)
class DatasetSpec:
    """Recipe for a synthetic clustered stream."""

    clusters: int
    dims: int
    samples: int
    cluster_spread: float = 0.1
    center_box: float = 2.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.clusters < 2:
            raise ValueError("clusters must be at least 2")
        if self.dims < 1:
            raise ValueError("dims must be positive")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if not self.cluster_spread > 0.0:
            raise ValueError("cluster_spread must be positive")


def generate_clusters(spec: DatasetSpec) -> list[Sample]:
    """Deterministic labeled stream of isotropic Gaussian clusters.

    Centers are drawn uniformly in [-center_box, center_box]^dims from the
    seed; sample i belongs to cluster i mod clusters. All samples carry the
    train flag.
    """
    rng = np.random.default_rng(spec.seed)
    centers = rng.uniform(-spec.center_box, spec.center_box, (spec.clusters, spec.dims))
    noise = rng.normal(0.0, spec.cluster_spread, (spec.samples, spec.dims))
    labels = np.arange(spec.samples) % spec.clusters
    features = (centers[labels] + noise).astype(np.float32)
    return [Sample(features[i], int(labels[i]), True) for i in range(spec.samples)]


@dataclass
class CsvSchema:
    """Names the label column and the feature columns of a CSV file.

    Columns are header names when header is true, else zero-based indices.
    Columns listed in categorical (and the label column always) are mapped
    to ordinal codes in order of first appearance; all other feature columns
    must parse as numbers. classes, when set, caps label cardinality.
    """

    features: Sequence[str | int]
    label: str | int
    categorical: Sequence[str | int] = ()
    header: bool = True
    classes: int | None = None
    delimiter: str = ","

    def __post_init__(self) -> None:
        if not self.features:
            raise ValueError("schema needs at least one feature column")
        unknown = set(self.categorical) - set(self.features)
        if unknown:
            raise ValueError(f"categorical columns not among features: {unknown}")


def _resolve_columns(schema: CsvSchema, header_row: list[str] | None) -> tuple[list[int], int, set[int]]:
    def resolve(col: str | int) -> int:
        if isinstance(col, int):
            return col
        if header_row is None:
            raise ValueError(f"column {col!r} needs a header row to resolve")
        try:
            return header_row.index(col)
        except ValueError:
            raise ValueError(f"column {col!r} not found in header") from None

    feature_idx = [resolve(c) for c in schema.features]
    label_idx = resolve(schema.label)
    categorical_idx = {resolve(c) for c in schema.categorical}
    return feature_idx, label_idx, categorical_idx


def load_csv(path, schema: CsvSchema) -> list[Sample]:
    """Parse a CSV file into samples, in file order, all train-flagged.

    Raises ValueError naming the offending line for short rows, non-numeric
    values in numeric columns, and label cardinality above schema.classes.
    """
    samples: list[Sample] = []
    label_codes: dict[str, int] = {}
    cat_codes: dict[int, dict[str, int]] = {}
    dims = len(schema.features)
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=schema.delimiter)
        header_row = next(reader, None) if schema.header else None
        if schema.header and header_row is None:
            raise ValueError("file is empty, expected a header row")
        feature_idx, label_idx, categorical_idx = _resolve_columns(schema, header_row)
        needed = max(max(feature_idx), label_idx) + 1
        for cat in categorical_idx:
            cat_codes[cat] = {}
        for row in reader:
            if not row:
                continue
            line = reader.line_num
            if len(row) < needed:
                raise ValueError(
                    f"line {line}: row has {len(row)} fields, need {needed}"
                )
            features = np.empty(dims, dtype=np.float32)
            for j, col in enumerate(feature_idx):
                cell = row[col]
                if col in categorical_idx:
                    codes = cat_codes[col]
                    features[j] = codes.setdefault(cell, len(codes))
                else:
                    try:
                        features[j] = float(cell)
                    except ValueError:
                        raise ValueError(
                            f"line {line}: non-numeric value {cell!r} "
                            f"in column {schema.features[j]!r}"
                        ) from None
            label = label_codes.setdefault(row[label_idx], len(label_codes))
            if schema.classes is not None and label >= schema.classes:
                raise ValueError(
                    f"line {line}: label {row[label_idx]!r} raises cardinality "
                    f"above {schema.classes}"
                )
            samples.append(Sample(features, label, True))
    return samples


def write_samples_csv(samples: Sequence[Sample], path, header: bool = True) -> None:
    """Write samples as CSV, feature columns first, label last.

    Feature values are written with shortest f32 round-trip precision so a
    reload reproduces the stream bit for bit.
    """
    if not samples:
        raise ValueError("nothing to write")
    dims = len(samples[0].features)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow([f"f{i}" for i in range(dims)] + ["label"])
        for s in samples:
            writer.writerow(
                [str(np.float32(v)) for v in s.features] + [int(s.label)]
            )


# Ready-made schemas for the two UCI benchmark files, as distributed:
# bank-full.csv (semicolon-separated, header) and covtype.data (54 numeric
# columns, cartographic label 1..7 in the last column, no header).
BANK_SCHEMA = CsvSchema(
    features=[
        "age", "job", "marital", "education", "default", "balance",
        "housing", "loan", "contact", "day", "month", "duration",
        "campaign", "pdays", "previous", "poutcome",
    ],
    label="y",
    categorical=[
        "job", "marital", "education", "default", "housing", "loan",
        "contact", "month", "poutcome",
    ],
    header=True,
    classes=2,
    delimiter=";",
)

COVERTYPE_SCHEMA = CsvSchema(
    features=list(range(54)),
    label=54,
    header=False,
    classes=7,
    delimiter=",",
)
