"""Benchmark orchestration: synthetic data, full pipeline, report, scatter export.

The fixed pipeline is parse/generate -> drop identifier -> dedupe ->
drop-missing -> encode -> split -> fit each model on train -> predict test ->
evaluate. A failing model becomes an error row; it never aborts the others.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ensemble import ModelKind, fit_model
from .metrics import EvalResult, evaluate
from .preprocess import (
    dedupe_rows,
    drop_columns,
    drop_missing_columns,
    encode,
    fit_ordinal_encoding,
    train_test_split,
)
from .rng import STREAM_SYNTH, substream
from .tabular import DEFAULT_SCHEMA, Dataset, TableSchema, parse_csv


class InputNotFound(Exception):
    pass


class PipelineError(Exception):
    """A pipeline step failed; carries the step name."""

    def __init__(self, step: str, cause: Exception):
        super().__init__(f"pipeline step {step!r} failed: {cause}")
        self.step = step
        self.cause = cause


# ---------------------------------------------------------------------------
# Synthetic listing generator. The ground-truth price surface is
#   base = 700 * area^0.92 * repair * wall * market * decade
#   price = base - 0.05 * base [if first or top floor] + N(0, noise_sigma)
# rounded to whole dollars and clamped at 3000. realty_type, furniture, and
# heating carry no price signal. `bench describe-synth` prints these tables.
# ---------------------------------------------------------------------------

BASE_RATE = 700.0
AREA_EXPONENT = 0.92
EDGE_FLOOR_PENALTY = 0.05
MIN_PRICE = 3000
AREA_RANGE = (18.0, 120.0)
FLOORS_CHOICES = (1, 2, 5, 9, 10, 14, 16)
REALTY_TYPES = ("apartment", "room")
FURNITURE_CHOICES = ("yes", "no")
HEATING_CHOICES = ("central", "individual", "autonomous")

REPAIR_MULT = {
    "needs_repair": 0.82,
    "cosmetic": 0.95,
    "renovated": 1.08,
    "designer": 1.22,
}
WALL_MULT = {
    "brick": 1.06,
    "panel": 0.92,
    "block": 0.97,
}
MARKET_MULT = {
    "primary": 1.10,
    "secondary": 1.00,
}
DECADE_MULT = {
    "1960-1970": 0.85,
    "1970-1980": 0.90,
    "1980-1990": 0.95,
    "1990-2000": 1.00,
    "2000-2010": 1.10,
    "2010-2020": 1.22,
}


@dataclass(frozen=True)
class SyntheticSpec:
    n: int
    noise_sigma: float = 6000.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 20:
            raise ValueError("n must be >= 20")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """Emit a deterministic listing table with a known price surface."""
    rng = substream(spec.seed, STREAM_SYNTH)
    n = spec.n
    realty = rng.choice(REALTY_TYPES, size=n)
    area = rng.uniform(*AREA_RANGE, size=n)
    floors = rng.choice(FLOORS_CHOICES, size=n)
    floor = rng.integers(1, floors + 1)
    repair = rng.choice(list(REPAIR_MULT), size=n)
    wall = rng.choice(list(WALL_MULT), size=n)
    furniture = rng.choice(FURNITURE_CHOICES, size=n)
    heating = rng.choice(HEATING_CHOICES, size=n)
    decade = rng.choice(list(DECADE_MULT), size=n)
    market = rng.choice(list(MARKET_MULT), size=n)
    noise = rng.normal(0.0, spec.noise_sigma, size=n) if spec.noise_sigma > 0 else np.zeros(n)

    rows = []
    for i in range(n):
        base = (
            BASE_RATE
            * area[i] ** AREA_EXPONENT
            * REPAIR_MULT[repair[i]]
            * WALL_MULT[wall[i]]
            * MARKET_MULT[market[i]]
            * DECADE_MULT[decade[i]]
        )
        if floor[i] == 1 or floor[i] == floors[i]:
            base -= EDGE_FLOOR_PENALTY * base
        price = max(MIN_PRICE, round(base + noise[i]))
        rows.append((
            i + 1,
            str(realty[i]),
            float(area[i]),
            int(floor[i]),
            int(floors[i]),
            str(repair[i]),
            str(wall[i]),
            str(furniture[i]),
            str(heating[i]),
            str(decade[i]),
            str(market[i]),
            int(price),
        ))
    return Dataset(DEFAULT_SCHEMA, rows)


def describe_synthetic() -> str:
    """Human-readable dump of the ground-truth price function."""
    lines = [
        "Synthetic listing generator",
        "",
        f"price = {BASE_RATE:g} * total_area^{AREA_EXPONENT:g}"
        " * repair_mult * wall_mult * market_mult * decade_mult",
        f"        - {EDGE_FLOOR_PENALTY:.0%} of that base on the first or top floor,",
        f"        + Gaussian(0, noise_sigma), rounded, clamped at >= {MIN_PRICE} $.",
        "",
        f"total_area ~ uniform[{AREA_RANGE[0]:g}, {AREA_RANGE[1]:g}] m^2",
        f"floors in {FLOORS_CHOICES}, floor ~ uniform[1, floors]",
        f"realty_type in {REALTY_TYPES}, furniture in {FURNITURE_CHOICES},"
        f" heating in {HEATING_CHOICES} (no price effect)",
        "",
    ]
    for title, table in (("repair_state", REPAIR_MULT), ("wall_material", WALL_MULT),
                         ("market", MARKET_MULT), ("build_year", DECADE_MULT)):
        lines.append(f"{title} multipliers:")
        for key, mult in table.items():
            lines.append(f"  {key:<14} {mult:.2f}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Benchmark run
# ---------------------------------------------------------------------------

ALL_MODEL_KINDS = tuple(sorted(ModelKind, key=lambda k: k.display_name))


@dataclass(frozen=True)
class BenchConfig:
    input_path: str | None = None
    synth: SyntheticSpec | None = None
    schema: TableSchema = DEFAULT_SCHEMA
    seed: int = 42
    test_fraction: float = 0.25
    models: tuple[ModelKind, ...] = ALL_MODEL_KINDS
    model_overrides: dict = field(default_factory=dict)  # ModelKind -> config object
    delimiter: str = ","
    max_missing_fraction: float = 0.0

    def __post_init__(self):
        if (self.input_path is None) == (self.synth is None):
            raise ValueError("exactly one of input_path and synth must be set")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")
        if not self.models:
            raise ValueError("models must be nonempty")


@dataclass(frozen=True)
class PipelineSummary:
    rows_in: int
    duplicates_removed: int
    missing_rows_removed: int
    rows_out: int
    dropped_identifier_columns: tuple[str, ...]
    dropped_missing_columns: tuple[str, ...]


@dataclass
class ModelRow:
    kind: ModelKind
    result: EvalResult | None
    fit_seconds: float
    predict_seconds: float
    error: str | None
    actual: np.ndarray
    predicted: np.ndarray


@dataclass
class Report:
    provenance: dict
    seed: int
    test_fraction: float
    pipeline: PipelineSummary
    feature_names: list[str]
    n_train: int
    n_test: int
    rows: list[ModelRow]


def _step(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def run_benchmark(cfg: BenchConfig) -> Report:
    """Run the full fixed pipeline over every configured model."""
    if cfg.input_path is not None:
        path = Path(cfg.input_path)
        if not path.exists():
            raise InputNotFound(str(path))
        text = _step("read_input", path.read_text, encoding="utf-8")
        ds = _step("parse_csv", parse_csv, text, cfg.schema, cfg.delimiter)
        provenance = {"source": "csv", "path": str(path)}
    else:
        ds = _step("generate_synthetic", generate_synthetic, cfg.synth)
        provenance = {
            "source": "synthetic",
            "n": cfg.synth.n,
            "noise_sigma": cfg.synth.noise_sigma,
            "seed": cfg.synth.seed,
        }

    rows_in = len(ds)
    identifier_cols = tuple(c.name for c in ds.schema.columns if c.role == "identifier")
    if identifier_cols:
        ds = _step("drop_identifier", drop_columns, ds, list(identifier_cols))
    ds = _step("dedupe", dedupe_rows, ds)
    duplicates_removed = rows_in - len(ds)
    before_missing = len(ds)
    ds, dropped_missing = _step("drop_missing", drop_missing_columns, ds, cfg.max_missing_fraction)
    missing_rows_removed = before_missing - len(ds)

    encoding = _step("fit_encoding", fit_ordinal_encoding, ds)
    features, target = _step("encode", encode, ds, encoding)
    split = _step("split", train_test_split, len(ds), cfg.test_fraction, cfg.seed)
    x_train, y_train = features.values[split.train], target[split.train]
    x_test, y_test = features.values[split.test], target[split.test]

    rows = []
    for kind in sorted(cfg.models, key=lambda k: k.display_name):
        override = cfg.model_overrides.get(kind)
        try:
            t0 = time.perf_counter()
            model = fit_model(kind, x_train, y_train, seed=cfg.seed, config=override)
            t1 = time.perf_counter()
            predicted = model.predict(x_test)
            t2 = time.perf_counter()
            result = evaluate(y_test, predicted)
            rows.append(ModelRow(kind, result, t1 - t0, t2 - t1, None, y_test, predicted))
        except Exception as exc:
            rows.append(ModelRow(kind, None, 0.0, 0.0, f"{type(exc).__name__}: {exc}",
                                 y_test, np.array([])))

    return Report(
        provenance=provenance,
        seed=cfg.seed,
        test_fraction=cfg.test_fraction,
        pipeline=PipelineSummary(
            rows_in=rows_in,
            duplicates_removed=duplicates_removed,
            missing_rows_removed=missing_rows_removed,
            rows_out=len(ds),
            dropped_identifier_columns=identifier_cols,
            dropped_missing_columns=tuple(dropped_missing),
        ),
        feature_names=features.feature_names,
        n_train=len(split.train),
        n_test=len(split.test),
        rows=rows,
    )


# ---------------------------------------------------------------------------
# Rendering and export
# ---------------------------------------------------------------------------

def _fmt_r2(v: float) -> str:
    return f"{v:.3f}"


def _fmt_dollars(v: float) -> str:
    return f"{v:,.0f}".replace(",", " ")


def _format_cells(row: ModelRow) -> list[str]:
    if row.result is None:
        return [row.kind.display_name, "-", "-", "-"]
    return [
        row.kind.display_name,
        _fmt_r2(row.result.r2),
        _fmt_dollars(row.result.rmse),
        _fmt_dollars(row.result.mae),
    ]


def _provenance_line(report: Report) -> str:
    if report.provenance["source"] == "csv":
        return f"dataset: {report.provenance['path']}"
    p = report.provenance
    return f"dataset: synthetic n={p['n']} noise_sigma={p['noise_sigma']:g} seed={p['seed']}"


def render_report(report: Report, fmt: str = "markdown") -> str:
    """Render the comparison table as markdown, CSV, or full-precision JSON."""
    if fmt in ("markdown", "md"):
        s = report.pipeline
        lines = [
            "# Ensemble benchmark",
            "",
            _provenance_line(report),
            f"split: seed={report.seed} train={report.n_train} test={report.n_test}"
            f" (test fraction {report.test_fraction:g})",
            f"pipeline: rows_in={s.rows_in} duplicates_removed={s.duplicates_removed}"
            f" missing_rows_removed={s.missing_rows_removed} rows_out={s.rows_out}",
            "",
            "Model | R² | RMSE | MAE",
            "--- | --- | --- | ---",
        ]
        lines += [" | ".join(_format_cells(row)) for row in report.rows]
        errors = [row for row in report.rows if row.error]
        if errors:
            lines.append("")
            lines += [f"{row.kind.display_name} failed: {row.error}" for row in errors]
        lines += ["", "Model | fit s | predict s", "--- | --- | ---"]
        lines += [
            f"{row.kind.display_name} | {row.fit_seconds:.2f} | {row.predict_seconds:.2f}"
            for row in report.rows
        ]
        return "\n".join(lines) + "\n"

    if fmt == "csv":
        lines = ["Model,R²,RMSE,MAE"]
        lines += [",".join(_format_cells(row)) for row in report.rows]
        return "\n".join(lines) + "\n"

    if fmt == "json":
        doc = {
            "format_version": 1,
            "dataset": report.provenance,
            "seed": report.seed,
            "test_fraction": report.test_fraction,
            "pipeline": {
                "rows_in": report.pipeline.rows_in,
                "duplicates_removed": report.pipeline.duplicates_removed,
                "missing_rows_removed": report.pipeline.missing_rows_removed,
                "rows_out": report.pipeline.rows_out,
                "dropped_identifier_columns": list(report.pipeline.dropped_identifier_columns),
                "dropped_missing_columns": list(report.pipeline.dropped_missing_columns),
            },
            "features": report.feature_names,
            "n_train": report.n_train,
            "n_test": report.n_test,
            "models": [
                {
                    "model": row.kind.display_name,
                    "r2": None if row.result is None else row.result.r2,
                    "rmse": None if row.result is None else row.result.rmse,
                    "mae": None if row.result is None else row.result.mae,
                    "n_test": None if row.result is None else row.result.n,
                    "error": row.error,
                    "timings": {
                        "fit_seconds": row.fit_seconds,
                        "predict_seconds": row.predict_seconds,
                    },
                    "test_pairs": [
                        [float(a), float(p)] for a, p in zip(row.actual, row.predicted)
                    ],
                }
                for row in report.rows
            ],
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    raise ValueError(f"unknown report format {fmt!r}")


def export_scatter(report: Report, directory: str | Path) -> list[Path]:
    """Write one actual,predicted CSV per successful model; return the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for row in report.rows:
        if row.error is not None:
            continue
        path = directory / f"{row.kind.name}.csv"
        lines = ["actual,predicted"]
        lines += [f"{float(a)!r},{float(p)!r}" for a, p in zip(row.actual, row.predicted)]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(path)
    return paths
