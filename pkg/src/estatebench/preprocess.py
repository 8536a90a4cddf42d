"""Preprocessing chain: column drops, dedup, missing handling, ordinal
encoding, and the seeded train/test split.

The pipeline order is fixed: drop identifier -> dedupe -> drop/patch missing
-> encode -> split. Every operation is a pure function of its inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .rng import STREAM_SPLIT, substream
from .tabular import Dataset, TableSchema


class PreprocessError(Exception):
    """Base class for preprocessing contract violations."""


class UnknownColumn(PreprocessError):
    pass


class TargetDropForbidden(PreprocessError):
    pass


class TargetHasMissing(PreprocessError):
    pass


class UnseenCategory(PreprocessError):
    """A category absent at fit time showed up at encode time."""

    def __init__(self, column: str, value: str):
        super().__init__(f"column {column!r}: category {value!r} was not seen at fit time")
        self.column = column
        self.value = value


@dataclass(frozen=True)
class EncodingMap:
    """Per text column, an ordered category -> ordinal code mapping.

    Codes are assigned by ascending lexicographic order of the category
    strings (for UTF-8 this equals byte order), so the mapping is
    deterministic across runs.
    """

    codes: dict[str, dict[str, int]]

    def to_json(self) -> str:
        doc = {col: [cat for cat, _ in sorted(m.items(), key=lambda kv: kv[1])] for col, m in self.codes.items()}
        return json.dumps(doc, ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "EncodingMap":
        doc = json.loads(text)
        return cls({col: {cat: i for i, cat in enumerate(cats)} for col, cats in doc.items()})


@dataclass(frozen=True)
class FeatureMatrix:
    """Fully numeric design matrix with its column names."""

    values: np.ndarray  # (n, p) float64
    feature_names: list[str]

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.values.ndim != 2:
            raise ValueError("feature matrix must be 2-dimensional")
        if self.values.shape[1] != len(self.feature_names):
            raise ValueError("feature_names length must match column count")
        if self.values.shape[1] < 1:
            raise ValueError("feature matrix needs at least one column")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("feature matrix entries must be finite")


@dataclass(frozen=True)
class SplitIndices:
    train: np.ndarray
    test: np.ndarray
    seed: int


def drop_columns(ds: Dataset, names: list[str]) -> Dataset:
    """Remove the named columns from schema and rows; the target is protected."""
    for name in names:
        if name not in ds.schema.names:
            raise UnknownColumn(name)
        if ds.schema.column(name).role == "target":
            raise TargetDropForbidden(name)
    if not names:
        return ds
    keep = [j for j, c in enumerate(ds.schema.columns) if c.name not in names]
    schema = TableSchema(ds.schema.columns[j] for j in keep)
    return Dataset(schema, (tuple(row[j] for j in keep) for row in ds.rows))


def dedupe_rows(ds: Dataset) -> Dataset:
    """Keep the first occurrence of each distinct row, preserving order."""
    seen: set[tuple] = set()
    kept = []
    for row in ds.rows:
        if row not in seen:
            seen.add(row)
            kept.append(row)
    return Dataset(ds.schema, kept)


def drop_missing_columns(ds: Dataset, max_missing_fraction: float = 0.0) -> tuple[Dataset, list[str]]:
    """Drop feature columns whose missing fraction exceeds the threshold.

    With a nonzero threshold, rows still containing missing cells afterwards
    are deleted (row-wise fallback). The target column must end up with no
    missing cells or TargetHasMissing is raised.
    """
    if not 0.0 <= max_missing_fraction < 1.0:
        raise ValueError("max_missing_fraction must be in [0, 1)")
    n = len(ds)
    dropped: list[str] = []
    if n > 0:
        for j, col in enumerate(ds.schema.columns):
            if col.role != "feature":
                continue
            missing = sum(1 for row in ds.rows if row[j] is None)
            if missing / n > max_missing_fraction:
                dropped.append(col.name)
    out = drop_columns(ds, dropped)
    if max_missing_fraction > 0.0:
        out = Dataset(out.schema, (row for row in out.rows if None not in row))
    target_j = out.schema.index_of(out.schema.target.name)
    if any(row[target_j] is None for row in out.rows):
        raise TargetHasMissing(out.schema.target.name)
    return out, dropped


def _require_complete(ds: Dataset) -> None:
    for i, row in enumerate(ds.rows):
        for cell, col in zip(row, ds.schema.columns):
            if col.role != "identifier" and cell is None:
                raise ValueError(f"row {i}: missing cell in column {col.name!r}; run drop_missing_columns first")


def fit_ordinal_encoding(ds: Dataset) -> EncodingMap:
    """Build one lexicographic category map per text-kind feature column."""
    _require_complete(ds)
    codes: dict[str, dict[str, int]] = {}
    for col in ds.schema.columns:
        if col.role == "feature" and col.kind == "text":
            categories = sorted(set(ds.column_values(col.name)))
            codes[col.name] = {cat: i for i, cat in enumerate(categories)}
    return EncodingMap(codes)


def encode(ds: Dataset, mapping: EncodingMap) -> tuple[FeatureMatrix, np.ndarray]:
    """Turn a complete Dataset into (FeatureMatrix, target vector).

    Numeric feature columns pass through as floats, text columns become their
    ordinal codes, the target column becomes the float target vector, and
    identifier columns are excluded.
    """
    _require_complete(ds)
    target = ds.schema.target
    if target.kind == "text":
        raise ValueError("target column must be numeric")
    feature_cols = [(j, c) for j, c in enumerate(ds.schema.columns) if c.role == "feature"]
    n = len(ds)
    x = np.empty((n, len(feature_cols)), dtype=np.float64)
    for out_j, (j, col) in enumerate(feature_cols):
        if col.kind == "text":
            col_map = mapping.codes.get(col.name)
            if col_map is None:
                raise UnseenCategory(col.name, "<entire column>")
            for i, row in enumerate(ds.rows):
                code = col_map.get(row[j])
                if code is None:
                    raise UnseenCategory(col.name, str(row[j]))
                x[i, out_j] = code
        else:
            col_j = [row[j] for row in ds.rows]
            x[:, out_j] = np.asarray(col_j, dtype=np.float64)
    target_j = ds.schema.index_of(target.name)
    y = np.asarray([row[target_j] for row in ds.rows], dtype=np.float64)
    return FeatureMatrix(x, [c.name for _, c in feature_cols]), y


def train_test_split(n: int, test_fraction: float = 0.25, seed: int = 0) -> SplitIndices:
    """Split 0..n-1 into disjoint test/train index sets by a seeded shuffle.

    The first round(n * test_fraction) positions of a uniformly random
    permutation form the test set; the rest form the train set. The same
    (n, test_fraction, seed) always yields the same split.
    """
    if n < 4:
        raise ValueError("need at least 4 samples to split")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    perm = substream(seed, STREAM_SPLIT).permutation(n)
    n_test = round(n * test_fraction)
    return SplitIndices(train=perm[n_test:], test=perm[:n_test], seed=seed)
