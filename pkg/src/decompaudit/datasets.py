"""CSV ingestion and the registry of the six public benchmark datasets.

The registry documents where each dataset lives and its published summary
statistics; loaders only verify a locally supplied file against them (the
files are never downloaded here).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .series import TimeSeries


@dataclass(frozen=True)
class DatasetRegistryEntry:
    name: str
    description: str
    url: str
    expected_length: int
    expected_mean: float
    expected_std: float


DATASET_REGISTRY = {
    "hs": DatasetRegistryEntry(
        name="hs",
        description="significant wave height (m), 30-minute resolution",
        url="http://cdip.ucsd.edu/offline/wavecdf/wncbrowse.php?ARCHIVE/150p1/150p1",
        expected_length=70128,
        expected_mean=0.945,
        expected_std=0.414,
    ),
    "wspd": DatasetRegistryEntry(
        name="wspd",
        description="averaged wind speed (m/s), hourly resolution",
        url="https://www.ndbc.noaa.gov/",
        expected_length=32158,
        expected_mean=5.58,
        expected_std=3.18,
    ),
    "u": DatasetRegistryEntry(
        name="u",
        description="relative humidity (%), 15-minute resolution",
        url="https://www.kaggle.com/datasets/l3l1ff/electrical-grid-power-mw-20152021",
        expected_length=228526,
        expected_mean=74.2,
        expected_std=19.5,
    ),
    "ghi": DatasetRegistryEntry(
        name="ghi",
        description="daily global horizontal irradiation (kWh/m^2)",
        url="https://solargis.com/products/evaluate/useful-resources",
        expected_length=9952,
        expected_mean=5.14,
        expected_std=2.25,
    ),
    "p": DatasetRegistryEntry(
        name="p",
        description="air pressure (Pa) at 100 m, 15-minute resolution (simulated)",
        url="http://maps.nrel.gov/wind_prospector",
        expected_length=140160,
        expected_mean=100470.0,
        expected_std=555.0,
    ),
    "t": DatasetRegistryEntry(
        name="t",
        description="air temperature (degC) at 100 m, 15-minute resolution (simulated)",
        url="http://maps.nrel.gov/wind_prospector",
        expected_length=140160,
        expected_mean=13.1,
        expected_std=4.12,
    ),
}


def load_csv(path, column: str | int | None = None) -> TimeSeries:
    """Parse one numeric column of a CSV file into a series.

    ``column`` may be a header name or a 0-based index; it can be omitted for
    single-column files. Blank or non-numeric cells raise an error citing the
    offending row.
    """
    path = Path(path)
    if not path.is_file():
        raise InvalidInputError(f"no such file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidInputError(f"{path} is empty") from None
        header = [h.strip() for h in header]
        if column is None:
            if len(header) != 1:
                raise InvalidInputError(
                    f"{path} has {len(header)} columns {header}; specify one"
                )
            col_idx = 0
        elif isinstance(column, int):
            if not (0 <= column < len(header)):
                raise InvalidInputError(f"column index {column} out of range for {header}")
            col_idx = column
        else:
            if column not in header:
                raise InvalidInputError(f"column {column!r} not in header {header}")
            col_idx = header.index(column)

        values = []
        for row_num, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                raise InvalidInputError(f"{path}: blank row at line {row_num}")
            if col_idx >= len(row):
                raise InvalidInputError(f"{path}: row at line {row_num} is too short")
            cell = row[col_idx].strip()
            try:
                value = float(cell)
            except ValueError:
                raise InvalidInputError(
                    f"{path}: non-numeric cell {cell!r} at line {row_num}"
                ) from None
            if not math.isfinite(value):
                raise InvalidInputError(f"{path}: non-finite value {cell!r} at line {row_num}")
            values.append(value)
    if not values:
        raise InvalidInputError(f"{path}: column {header[col_idx]!r} has no data rows")
    return TimeSeries(np.asarray(values), name=header[col_idx] or path.stem)


def verify_against_registry(
    series: TimeSeries,
    entry_name: str,
    mean_tolerance: float = 0.01,
    rel_tolerance: float = 0.015,
) -> list[str]:
    """Compare a loaded series with its registry entry; returns discrepancies.

    Length must match exactly; mean and std must agree within
    ``max(mean_tolerance, rel_tolerance * |expected|)`` (the registry values
    are rounded to three significant digits or so).
    """
    key = entry_name.lower()
    if key not in DATASET_REGISTRY:
        raise InvalidInputError(
            f"unknown dataset {entry_name!r}; registry has {sorted(DATASET_REGISTRY)}"
        )
    entry = DATASET_REGISTRY[key]
    problems = []
    if len(series) != entry.expected_length:
        problems.append(
            f"length {len(series)} != expected {entry.expected_length}"
        )
    mean = float(series.values.mean())
    std = float(series.values.std())
    mean_tol = max(mean_tolerance, rel_tolerance * abs(entry.expected_mean))
    std_tol = max(mean_tolerance, rel_tolerance * abs(entry.expected_std))
    if abs(mean - entry.expected_mean) > mean_tol:
        problems.append(f"mean {mean:.6g} != expected {entry.expected_mean} (tol {mean_tol:.3g})")
    if abs(std - entry.expected_std) > std_tol:
        problems.append(f"std {std:.6g} != expected {entry.expected_std} (tol {std_tol:.3g})")
    return problems
