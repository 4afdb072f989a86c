"""Typed ingestion of mixed-type historical project tables.

A :class:`Dataset` is immutable after construction.  At construction time it
freezes everything the dissimilarity needs from the historical records:

* the range ``max - min`` of every interval feature (over non-missing values),
* the rank table ``level -> r`` of every ordinal feature, taken from the
  declared level order of the schema,
* a dense float encoding of the records used by the numeric kernels.

Missing cells are represented by ``None`` everywhere in the public API.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError

MISSING = None

Cell = float | str | None

# Kernel kind codes: nominal cells are compared for equality, numeric cells
# (interval, and ordinal after the unit-interval transform) by |a - b| / scale.
KIND_NOMINAL = 0
KIND_NUMERIC = 1

# Query-only code for a nominal level never seen in the historical records.
_UNSEEN_LEVEL = -1.0


class FeatureKind(str, enum.Enum):
    INTERVAL = "interval"
    NOMINAL = "nominal"
    ORDINAL = "ordinal"


@dataclass(frozen=True)
class Feature:
    name: str
    kind: FeatureKind
    levels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValidationError("feature name must be non-empty")
        object.__setattr__(self, "kind", FeatureKind(self.kind))
        object.__setattr__(self, "levels", tuple(self.levels))
        if self.kind is FeatureKind.ORDINAL:
            if not self.levels:
                raise ValidationError(f"ordinal feature {self.name!r} needs levels")
            if len(set(self.levels)) != len(self.levels):
                raise ValidationError(f"ordinal feature {self.name!r} has duplicate levels")
        elif self.levels:
            raise ValidationError(f"levels are only allowed on ordinal features ({self.name!r})")


@dataclass(frozen=True)
class Schema:
    """Ordered feature list plus the effort column.

    ``ignored`` lists CSV columns (project ids and the like) that are read
    past without validation.
    """

    features: tuple[Feature, ...]
    effort_column: str
    ignored: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "ignored", tuple(self.ignored))
        names = [f.name for f in self.features]
        if not names:
            raise ValidationError("schema declares no features")
        if len(set(names)) != len(names):
            raise ValidationError("feature names must be unique")
        if self.effort_column in names:
            raise ValidationError("effort column must not be listed among features")
        overlap = set(self.ignored) & (set(names) | {self.effort_column})
        if overlap:
            raise ValidationError(f"ignored columns overlap schema columns: {sorted(overlap)}")

    @property
    def names(self) -> list[str]:
        return [f.name for f in self.features]

    def index(self, name: str) -> int:
        for i, f in enumerate(self.features):
            if f.name == name:
                return i
        raise ValidationError(f"unknown feature {name!r}")

    def feature(self, name: str) -> Feature:
        return self.features[self.index(name)]


@dataclass(frozen=True)
class ProjectRecord:
    values: tuple[Cell, ...]
    effort: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))


def validate_cell(feature: Feature, cell) -> Cell:
    """Coerce ``cell`` to the canonical type of ``feature`` or raise."""
    if cell is None:
        return None
    if feature.kind is FeatureKind.INTERVAL:
        try:
            value = float(cell)
        except (TypeError, ValueError):
            raise ValidationError(
                f"feature {feature.name!r}: {cell!r} is not a number"
            ) from None
        if not math.isfinite(value):
            raise ValidationError(f"feature {feature.name!r}: {cell!r} is not finite")
        return value
    if isinstance(cell, float) and cell.is_integer():
        cell = str(int(cell))
    value = str(cell)
    if feature.kind is FeatureKind.ORDINAL and value not in feature.levels:
        raise ValidationError(
            f"feature {feature.name!r}: level {value!r} not in {list(feature.levels)}"
        )
    if not value:
        raise ValidationError(f"feature {feature.name!r}: empty level")
    return value


def validate_record(schema: Schema, record: ProjectRecord, *, historical: bool) -> ProjectRecord:
    if len(record.values) != len(schema.features):
        raise ValidationError(
            f"record has {len(record.values)} cells, schema has {len(schema.features)} features"
        )
    values = tuple(validate_cell(f, c) for f, c in zip(schema.features, record.values))
    effort = record.effort
    if effort is not None:
        try:
            effort = float(effort)
        except (TypeError, ValueError):
            raise ValidationError(f"effort {record.effort!r} is not a number") from None
        if not math.isfinite(effort) or effort <= 0:
            raise ValidationError(f"effort must be a positive finite number, got {record.effort!r}")
    elif historical:
        raise ValidationError("historical record has missing effort")
    return ProjectRecord(values, effort)


class Dataset:
    """Historical projects with frozen ranges, rank tables and encodings."""

    def __init__(self, schema: Schema, records: Iterable[ProjectRecord]):
        records = tuple(validate_record(schema, r, historical=True) for r in records)
        if len(records) < 2:
            raise ValidationError(f"a dataset needs at least 2 records, got {len(records)}")
        self._schema = schema
        self._records = records

        ranges: dict[str, tuple[float, float] | None] = {}
        ranks: dict[str, dict[str, int]] = {}
        vocab: dict[str, dict[str, int]] = {}
        for m, f in enumerate(schema.features):
            column = [r.values[m] for r in records if r.values[m] is not None]
            if f.kind is FeatureKind.INTERVAL:
                ranges[f.name] = (min(column), max(column)) if column else None
            elif f.kind is FeatureKind.ORDINAL:
                ranks[f.name] = {level: r for r, level in enumerate(f.levels, start=1)}
            else:
                codes: dict[str, int] = {}
                for v in column:
                    codes.setdefault(v, len(codes))
                vocab[f.name] = codes
        self._ranges = ranges
        self._ranks = ranks
        self._vocab = vocab

        kinds = np.empty(len(schema.features), dtype=np.intc)
        scales = np.zeros(len(schema.features), dtype=np.float64)
        for m, f in enumerate(schema.features):
            if f.kind is FeatureKind.NOMINAL:
                kinds[m] = KIND_NOMINAL
            else:
                kinds[m] = KIND_NUMERIC
                if f.kind is FeatureKind.ORDINAL:
                    scales[m] = 1.0
                else:
                    rng = ranges[f.name]
                    scales[m] = np.nan if rng is None else rng[1] - rng[0]
        kinds.flags.writeable = False
        scales.flags.writeable = False
        self._kinds = kinds
        self._scales = scales

        matrix = np.vstack([self.encode(r) for r in records])
        matrix.flags.writeable = False
        self._matrix = np.ascontiguousarray(matrix)
        efforts = np.array([r.effort for r in records], dtype=np.float64)
        efforts.flags.writeable = False
        self._efforts = efforts

    def __len__(self) -> int:
        return len(self._records)

    def __repr__(self) -> str:
        return f"Dataset(n={len(self)}, features={self._schema.names})"

    @property
    def schema(self) -> Schema:
        return self._schema

    @property
    def records(self) -> tuple[ProjectRecord, ...]:
        return self._records

    @property
    def n(self) -> int:
        return len(self._records)

    @property
    def efforts(self) -> np.ndarray:
        return self._efforts

    @property
    def feature_ranges(self) -> dict[str, tuple[float, float] | None]:
        """``(min, max)`` per interval feature; ``None`` when all cells are missing."""
        return dict(self._ranges)

    @property
    def ordinal_rank_tables(self) -> dict[str, dict[str, int]]:
        return {k: dict(v) for k, v in self._ranks.items()}

    @property
    def encoded(self) -> np.ndarray:
        """``n x p`` float matrix consumed by the kernels (NaN = missing)."""
        return self._matrix

    @property
    def kinds(self) -> np.ndarray:
        return self._kinds

    @property
    def scales(self) -> np.ndarray:
        """Per-feature divisor: range for interval, 1 for ordinal, 0 for nominal."""
        return self._scales

    def ordinal_to_unit_interval(self, feature: str, level: str) -> float:
        f = self._schema.feature(feature)
        if f.kind is not FeatureKind.ORDINAL:
            raise ValidationError(f"feature {feature!r} is not ordinal")
        table = self._ranks[feature]
        if level not in table:
            raise ValidationError(f"feature {feature!r}: unknown level {level!r}")
        levels = len(table)
        if levels == 1:
            return 0.0
        return (table[level] - 1) / (levels - 1)

    def encode(self, record: ProjectRecord) -> np.ndarray:
        """Float encoding of a (historical or query) record."""
        out = np.empty(len(self._schema.features), dtype=np.float64)
        for m, (f, cell) in enumerate(zip(self._schema.features, record.values)):
            if cell is None:
                out[m] = np.nan
            elif f.kind is FeatureKind.INTERVAL:
                out[m] = cell
            elif f.kind is FeatureKind.ORDINAL:
                out[m] = self.ordinal_to_unit_interval(f.name, cell)
            else:
                out[m] = self._vocab[f.name].get(cell, _UNSEEN_LEVEL)
        return out

    def validate_query(self, record: ProjectRecord) -> ProjectRecord:
        return validate_record(self._schema, record, historical=False)

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """New dataset over ``indices``; ranges are recomputed from that subset."""
        return Dataset(self._schema, [self._records[i] for i in indices])

    def without(self, index: int) -> "Dataset":
        return self.subset([i for i in range(self.n) if i != index])


def ordinal_to_unit_interval(dataset: Dataset, feature: str, level: str) -> float:
    """Map an ordinal level to ``(rank - 1) / (levels - 1)``; 0 for single-level features."""
    return dataset.ordinal_to_unit_interval(feature, level)


# ---------------------------------------------------------------------------
# Schema sidecar files

_KINDS = {k.value for k in FeatureKind}


def parse_schema(text: str) -> Schema:
    """Parse the plain-text schema format.

    One line per feature, ``name,kind[,level1|level2|...]``, plus one
    ``effort,<column>`` line.  ``ignore,<column>`` skips a CSV column.
    Blank lines and ``#`` comments are allowed.
    """
    features: list[Feature] = []
    effort: str | None = None
    ignored: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        head = parts[0]
        if head == "effort" and len(parts) == 2 and parts[1] not in _KINDS:
            if effort is not None:
                raise ValidationError(f"schema line {lineno}: effort column declared twice")
            effort = parts[1]
            continue
        if head == "ignore" and len(parts) == 2 and parts[1] not in _KINDS:
            ignored.append(parts[1])
            continue
        if len(parts) < 2 or parts[1] not in _KINDS:
            raise ValidationError(f"schema line {lineno}: expected name,kind[,levels] got {raw!r}")
        levels: tuple[str, ...] = ()
        if len(parts) == 3:
            levels = tuple(level.strip() for level in parts[2].split("|"))
        elif len(parts) > 3:
            raise ValidationError(f"schema line {lineno}: too many fields")
        try:
            features.append(Feature(head, FeatureKind(parts[1]), levels))
        except ValidationError as exc:
            raise ValidationError(f"schema line {lineno}: {exc}") from None
    if effort is None:
        raise ValidationError("schema has no effort,<column> line")
    return Schema(tuple(features), effort, tuple(ignored))


def load_schema(path: str | Path) -> Schema:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"schema file not found: {path}")
    return parse_schema(path.read_text(encoding="utf-8"))


def format_schema(schema: Schema) -> str:
    lines = []
    for f in schema.features:
        if f.levels:
            lines.append(f"{f.name},{f.kind.value},{'|'.join(f.levels)}")
        else:
            lines.append(f"{f.name},{f.kind.value}")
    lines.extend(f"ignore,{c}" for c in schema.ignored)
    lines.append(f"effort,{schema.effort_column}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CSV

def _read_table(path: Path) -> tuple[list[str], list[list[str]]]:
    if not path.is_file():
        raise ValidationError(f"data file not found: {path}")
    try:
        with path.open(newline="", encoding="utf-8-sig") as fh:
            rows = [row for row in csv.reader(fh, strict=True) if row]
    except (csv.Error, UnicodeDecodeError) as exc:
        raise ValidationError(f"malformed CSV {path}: {exc}") from None
    if not rows:
        raise ValidationError(f"CSV {path} is empty")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise ValidationError(f"CSV {path} has duplicate column names")
    return header, rows[1:]


def _column_map(header: list[str], schema: Schema, *, effort_required: bool) -> dict[str, int]:
    known = set(schema.names) | {schema.effort_column} | set(schema.ignored)
    unknown = [h for h in header if h not in known]
    if unknown:
        raise ValidationError(f"unknown column(s) {unknown}")
    required = list(schema.names) + ([schema.effort_column] if effort_required else [])
    absent = [c for c in required if c not in header]
    if absent:
        raise ValidationError(f"missing column(s) {absent}")
    return {h: i for i, h in enumerate(header)}


def _row_to_record(
    row: list[str], columns: Mapping[str, int], schema: Schema, missing_token: str, lineno: int
) -> ProjectRecord:
    if len(row) != len(columns):
        raise ValidationError(f"line {lineno}: expected {len(columns)} cells, got {len(row)}")

    def cell(name: str):
        raw = row[columns[name]].strip()
        return None if raw == "" or raw == missing_token else raw

    values = []
    for f in schema.features:
        try:
            values.append(validate_cell(f, cell(f.name)))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    effort = cell(schema.effort_column) if schema.effort_column in columns else None
    return ProjectRecord(tuple(values), effort)


def parse_csv(path: str | Path, schema: Schema, missing_token: str = "?") -> Dataset:
    """Read a historical dataset; columns are matched to the schema by name."""
    path = Path(path)
    header, rows = _read_table(path)
    columns = _column_map(header, schema, effort_required=True)
    records = []
    for lineno, row in enumerate(rows, start=2):
        record = _row_to_record(row, columns, schema, missing_token, lineno)
        try:
            records.append(validate_record(schema, record, historical=True))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    return Dataset(schema, records)


def parse_query_csv(path: str | Path, schema: Schema, missing_token: str = "?") -> ProjectRecord:
    """Read a single-row query file; the effort column is optional."""
    path = Path(path)
    header, rows = _read_table(path)
    columns = _column_map(header, schema, effort_required=False)
    if len(rows) != 1:
        raise ValidationError(f"query file must contain exactly one row, got {len(rows)}")
    record = _row_to_record(rows[0], columns, schema, missing_token, 2)
    return validate_record(schema, record, historical=False)


def record_from_mapping(
    schema: Schema, mapping: Mapping[str, str], missing_token: str = "?"
) -> ProjectRecord:
    """Build a query from ``name -> raw string``; unspecified features are missing."""
    known = set(schema.names) | {schema.effort_column}
    unknown = sorted(set(mapping) - known)
    if unknown:
        raise ValidationError(f"unknown column(s) {unknown}")

    def cell(name):
        raw = mapping.get(name)
        if raw is None:
            return None
        raw = raw.strip()
        return None if raw == "" or raw == missing_token else raw

    record = ProjectRecord(tuple(cell(n) for n in schema.names), cell(schema.effort_column))
    return validate_record(schema, record, historical=False)


def _format_cell(cell: Cell, missing_token: str) -> str:
    if cell is None:
        return missing_token
    if isinstance(cell, float):
        return repr(cell)
    return cell


def write_csv(dataset: Dataset, path: str | Path, missing_token: str = "?") -> None:
    """Write ``dataset`` so that :func:`parse_csv` reproduces it exactly."""
    schema = dataset.schema
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(schema.names + [schema.effort_column])
        for r in dataset.records:
            writer.writerow(
                [_format_cell(c, missing_token) for c in r.values] + [repr(r.effort)]
            )
