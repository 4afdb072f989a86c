"""Registry of the PROMISE datasets used for the method comparison.

Schemas ship with the package; CSV files are looked up in
``$DDEBA_DATA_DIR`` first and then in the package data directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import Dataset, load_schema, parse_csv
from .errors import ValidationError

DATA_DIR = Path(__file__).parent / "data"
MEASURES = ("MMRE", "MdMRE", "MMER", "MdMER", "MAE", "MdAE")


@dataclass(frozen=True)
class BundledDataset:
    name: str
    csv_name: str
    schema_name: str
    rows: int
    # Published global measures per method, and the Wilcoxon p-value.
    reference: dict[str, dict[str, float]] = field(default_factory=dict)
    reference_p: float | None = None


REGISTRY = {
    "desharnais": BundledDataset(
        "desharnais", "desharnais.csv", "desharnais.schema", 81,
        {
            "loocv": dict(zip(MEASURES, (0.5708, 0.4535, 0.4685, 0.3837, 2398.5, 1356.8))),
            "dd": dict(zip(MEASURES, (0.6480, 0.3708, 0.5075, 0.3693, 2342.9, 1556.8))),
        },
        0.60,
    ),
    "maxwell": BundledDataset(
        "maxwell", "maxwell.csv", "maxwell.schema", 62,
        {
            "loocv": dict(zip(MEASURES, (1.3429, 0.4983, 0.6519, 0.45539, 5042.4, 2537.4))),
            "dd": dict(zip(MEASURES, (1.2059, 0.5315, 0.6932, 0.6198, 4765.3, 3363.3))),
        },
        0.99,
    ),
    "cocomo_nasa": BundledDataset(
        "cocomo_nasa", "cocomo_nasa.csv", "cocomo_nasa.schema", 60,
        {
            "loocv": dict(zip(MEASURES, (0.6758, 0.3688, 1.0851, 0.4044, 264.31, 53.4))),
            "dd": dict(zip(MEASURES, (0.5493, 0.3504, 0.8741, 0.375, 241.14, 49.479))),
        },
        0.72,
    ),
    "demo": BundledDataset("demo", "demo.csv", "demo.schema", 12),
}


def search_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get("DDEBA_DATA_DIR")
    if env:
        dirs.append(Path(env))
    dirs.append(DATA_DIR)
    return dirs


def locate(name: str) -> tuple[Path, Path]:
    """``(csv_path, schema_path)`` for a registered dataset."""
    try:
        entry = REGISTRY[name]
    except KeyError:
        raise ValidationError(f"unknown bundled dataset {name!r}; known: {sorted(REGISTRY)}") from None
    schema = DATA_DIR / entry.schema_name
    for d in search_dirs():
        if (d / entry.schema_name).is_file():
            schema = d / entry.schema_name
        if (d / entry.csv_name).is_file():
            return d / entry.csv_name, schema
    raise FileNotFoundError(
        f"{entry.csv_name} not found in {[str(d) for d in search_dirs()]}; "
        "see src/ddeba/data/README.md for how to obtain it"
    )


def available() -> list[str]:
    out = []
    for name in REGISTRY:
        try:
            locate(name)
        except FileNotFoundError:
            continue
        out.append(name)
    return out


def load(name: str, missing_token: str = "?") -> Dataset:
    csv_path, schema_path = locate(name)
    dataset = parse_csv(csv_path, load_schema(schema_path), missing_token)
    expected = REGISTRY[name].rows
    if dataset.n != expected:
        raise ValidationError(f"{csv_path} has {dataset.n} projects, expected {expected}")
    return dataset
