"""Tabular ensemble-regression engine and benchmark harness."""

from .bench import (
    BenchConfig,
    Report,
    SyntheticSpec,
    export_scatter,
    generate_synthetic,
    render_report,
    run_benchmark,
)
from .ensemble import FittedModel, ModelKind, fit_model
from .metrics import EvalResult, evaluate
from .preprocess import (
    EncodingMap,
    FeatureMatrix,
    SplitIndices,
    dedupe_rows,
    drop_columns,
    drop_missing_columns,
    encode,
    fit_ordinal_encoding,
    train_test_split,
)
from .tabular import DEFAULT_SCHEMA, ColumnSchema, Dataset, TableSchema, parse_csv, validate, write_csv
from .tree import RegressionTree, TreeConfig, fit_tree

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "ColumnSchema",
    "DEFAULT_SCHEMA",
    "Dataset",
    "EncodingMap",
    "EvalResult",
    "FeatureMatrix",
    "FittedModel",
    "ModelKind",
    "RegressionTree",
    "Report",
    "SplitIndices",
    "SyntheticSpec",
    "TableSchema",
    "TreeConfig",
    "dedupe_rows",
    "drop_columns",
    "drop_missing_columns",
    "encode",
    "evaluate",
    "export_scatter",
    "fit_model",
    "fit_ordinal_encoding",
    "fit_tree",
    "generate_synthetic",
    "parse_csv",
    "render_report",
    "run_benchmark",
    "train_test_split",
    "validate",
    "write_csv",
]
