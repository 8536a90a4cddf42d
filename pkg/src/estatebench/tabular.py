"""Listing-table data model and CSV ingestion.

A Dataset is a schema-typed table of cells. A cell is an int, a float, a str,
or None for a missing value; the cell state must match the declared column
kind, and missingness is always None, never a sentinel number or empty text.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, TextIO

Cell = int | float | str | None

KINDS = ("integer", "real", "text")
ROLES = ("identifier", "feature", "target")

_INT_RE = re.compile(r"[+-]?[0-9]+\Z")
_REAL_RE = re.compile(r"[+-]?([0-9]+\.?[0-9]*|\.[0-9]+)([eE][+-]?[0-9]+)?\Z")


class TabularError(Exception):
    """Base class for schema and CSV ingestion errors."""


class HeaderMismatch(TabularError):
    """CSV header names or order differ from the schema."""


class ArityError(TabularError):
    """A data row has the wrong number of cells."""

    def __init__(self, row: int, expected: int, got: int):
        super().__init__(f"row {row}: expected {expected} cells, got {got}")
        self.row = row
        self.expected = expected
        self.got = got


class ParseError(TabularError):
    """Non-numeric text in a numeric column."""

    def __init__(self, row: int, column: str, text: str):
        super().__init__(f"row {row}, column {column!r}: cannot parse {text!r}")
        self.row = row
        self.column = column
        self.text = text


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    kind: str  # "integer" | "real" | "text"
    role: str = "feature"  # "identifier" | "feature" | "target"

    def __post_init__(self):
        if not self.name:
            raise ValueError("column name must be nonempty")
        if self.kind not in KINDS:
            raise ValueError(f"unknown column kind {self.kind!r}")
        if self.role not in ROLES:
            raise ValueError(f"unknown column role {self.role!r}")


@dataclass(frozen=True)
class TableSchema:
    columns: tuple[ColumnSchema, ...]

    def __init__(self, columns: Iterable[ColumnSchema]):
        object.__setattr__(self, "columns", tuple(columns))
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("column names must be unique")
        targets = [c for c in self.columns if c.role == "target"]
        if len(targets) != 1:
            raise ValueError("schema needs exactly one target column")
        identifiers = [c for c in self.columns if c.role == "identifier"]
        if len(identifiers) > 1:
            raise ValueError("schema allows at most one identifier column")

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    @property
    def target(self) -> ColumnSchema:
        return next(c for c in self.columns if c.role == "target")

    def index_of(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise KeyError(name)

    def column(self, name: str) -> ColumnSchema:
        return self.columns[self.index_of(name)]


#: The 12-column listing schema the whole pipeline defaults to.
DEFAULT_SCHEMA = TableSchema([
    ColumnSchema("id", "integer", "identifier"),
    ColumnSchema("realty_type", "text"),
    ColumnSchema("total_area", "real"),
    ColumnSchema("floor", "integer"),
    ColumnSchema("floors", "integer"),
    ColumnSchema("repair_state", "text"),
    ColumnSchema("wall_material", "text"),
    ColumnSchema("furniture", "text"),
    ColumnSchema("heating", "text"),
    ColumnSchema("build_year", "text"),
    ColumnSchema("market", "text"),
    ColumnSchema("price", "integer", "target"),
])


def _check_cell(cell: Cell, col: ColumnSchema) -> bool:
    if cell is None:
        return True
    if col.kind == "integer":
        return isinstance(cell, int) and not isinstance(cell, bool)
    if col.kind == "real":
        return isinstance(cell, float) and math.isfinite(cell)
    return isinstance(cell, str)


@dataclass(frozen=True)
class Dataset:
    """Immutable table: a schema plus rows of kind-checked cells."""

    schema: TableSchema
    rows: tuple[tuple[Cell, ...], ...]

    def __init__(self, schema: TableSchema, rows: Iterable[Iterable[Cell]]):
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))
        width = len(schema.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ArityError(i + 1, width, len(row))
            for cell, col in zip(row, schema.columns):
                if not _check_cell(cell, col):
                    raise TabularError(
                        f"row {i + 1}, column {col.name!r}: cell {cell!r} does not match kind {col.kind!r}"
                    )

    def __len__(self) -> int:
        return len(self.rows)

    def column_values(self, name: str) -> list[Cell]:
        j = self.schema.index_of(name)
        return [row[j] for row in self.rows]


def _parse_cell(text: str, col: ColumnSchema, row_no: int) -> Cell:
    text = text.strip()
    if text == "":
        return None
    if col.kind == "integer":
        if not _INT_RE.match(text):
            raise ParseError(row_no, col.name, text)
        return int(text)
    if col.kind == "real":
        if not _REAL_RE.match(text):
            raise ParseError(row_no, col.name, text)
        return float(text)
    return text


def parse_csv(source: str | TextIO, schema: TableSchema = DEFAULT_SCHEMA, delimiter: str = ",") -> Dataset:
    """Parse CSV text into a Dataset.

    The first record must be a header matching the schema names in order.
    Empty fields parse to missing; surrounding whitespace is trimmed. Row
    numbers in errors are 1-based over data records (the header is row 0).
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    reader = csv.reader(stream, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise HeaderMismatch("input has no header record") from None
    names = [h.strip() for h in header]
    if names != schema.names:
        raise HeaderMismatch(f"header {names} does not match schema {schema.names}")
    rows: list[tuple[Cell, ...]] = []
    width = len(schema.columns)
    for row_no, record in enumerate(reader, start=1):
        if len(record) != width:
            raise ArityError(row_no, width, len(record))
        rows.append(tuple(_parse_cell(cell, col, row_no) for cell, col in zip(record, schema.columns)))
    return Dataset(schema, rows)


def write_csv(ds: Dataset, delimiter: str = ",") -> str:
    """Serialize a Dataset back to CSV; missing cells become empty fields."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    writer.writerow(ds.schema.names)
    for row in ds.rows:
        writer.writerow(["" if cell is None else cell for cell in row])
    return out.getvalue()


@dataclass(frozen=True)
class Violation:
    row: int
    rule: str


def validate(ds: Dataset) -> list[Violation]:
    """Report soft consistency violations; never raises, never rejects.

    Rules: nonpositive target price, nonpositive total_area, nonpositive
    floors, floor above floors. Rules whose columns are absent or whose
    cells are missing are skipped for that row.
    """
    schema = ds.schema
    target_j = schema.index_of(schema.target.name)

    def maybe_index(name: str) -> int | None:
        try:
            j = schema.index_of(name)
        except KeyError:
            return None
        return j if schema.columns[j].kind in ("integer", "real") else None

    area_j = maybe_index("total_area")
    floor_j = maybe_index("floor")
    floors_j = maybe_index("floors")

    violations: list[Violation] = []
    for i, row in enumerate(ds.rows):
        price = row[target_j]
        if price is not None and not isinstance(price, str) and price <= 0:
            violations.append(Violation(i, "nonpositive_price"))
        if area_j is not None and row[area_j] is not None and row[area_j] <= 0:
            violations.append(Violation(i, "nonpositive_area"))
        if floors_j is not None and row[floors_j] is not None and row[floors_j] <= 0:
            violations.append(Violation(i, "nonpositive_floors"))
        if (
            floor_j is not None
            and floors_j is not None
            and row[floor_j] is not None
            and row[floors_j] is not None
            and row[floor_j] > row[floors_j]
        ):
            violations.append(Violation(i, "floor_exceeds_floors"))
    return violations
