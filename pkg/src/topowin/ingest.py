"""Loading, splitting and standardizing labeled multivariate time series.

A series is a matrix of feature rows indexed by strictly increasing
timestamps, with one integer class label per row.  Splits are named,
disjoint row ranges listed in temporal order; standardization is the
per-channel zero-mean/unit-variance transform with population variance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
import numpy as np

from .errors import DataError, NumericalError

STANDARDIZE_MODES = ("fit_on_combined", "fit_on_train")


@dataclass(frozen=True)
class TimeSeries:
    """Labeled multivariate time series: one row of ``values`` per timestamp."""

    timestamps: np.ndarray  # (n,) float64, strictly increasing
    values: np.ndarray  # (n, d) float64, finite
    labels: np.ndarray  # (n,) int64
    channel_names: tuple[str, ...]

    def __post_init__(self) -> None:
        ts = np.asarray(self.timestamps, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        labs = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "labels", labs)
        if vals.ndim != 2 or vals.shape[1] < 1:
            raise DataError("feature matrix must be 2-D with at least one channel")
        n, d = vals.shape
        if ts.shape != (n,) or labs.shape != (n,):
            raise DataError(
                f"length mismatch: {ts.shape[0]} timestamps, {n} value rows, "
                f"{labs.shape[0]} labels"
            )
        if len(self.channel_names) != d:
            raise DataError(f"{len(self.channel_names)} channel names for {d} channels")
        if not np.all(np.isfinite(vals)):
            bad = int(np.argwhere(~np.isfinite(vals))[0][0])
            raise DataError(f"non-finite feature value at row {bad}")
        if n > 1:
            diffs = np.diff(ts)
            if np.any(diffs <= 0):
                bad = int(np.argmax(diffs <= 0)) + 1
                raise DataError(f"timestamps not strictly increasing at row {bad}")

    @property
    def length(self) -> int:
        return self.values.shape[0]

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    def slice(self, start: int, stop: int) -> "TimeSeries":
        """Row subrange [start, stop) as a new series."""
        if not (0 <= start < stop <= self.length):
            raise DataError(f"slice [{start}, {stop}) outside series of length {self.length}")
        return TimeSeries(
            timestamps=self.timestamps[start:stop].copy(),
            values=self.values[start:stop].copy(),
            labels=self.labels[start:stop].copy(),
            channel_names=self.channel_names,
        )


@dataclass(frozen=True)
class SplitRange:
    name: str
    start: int  # inclusive row index
    stop: int  # exclusive row index

    def __post_init__(self) -> None:
        if self.start < 0 or self.stop <= self.start:
            raise ValueError(f"split '{self.name}': empty or negative range [{self.start}, {self.stop})")


@dataclass(frozen=True)
class SplitSpec:
    """Named row ranges in temporal order; disjoint, each a contiguous block.

    Rows outside every range are unused.  Gaps between ranges are allowed.
    """

    boundaries: tuple[SplitRange, ...]

    def __post_init__(self) -> None:
        ranges = tuple(
            r if isinstance(r, SplitRange) else SplitRange(*r) for r in self.boundaries
        )
        object.__setattr__(self, "boundaries", ranges)
        if not ranges:
            raise ValueError("split spec needs at least one range")
        names = [r.name for r in ranges]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate split names: {names}")
        for prev, cur in zip(ranges, ranges[1:]):
            if cur.start < prev.stop:
                raise ValueError(
                    f"splits '{prev.name}' and '{cur.name}' overlap or break temporal order"
                )

    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.boundaries)

    def range_named(self, name: str) -> SplitRange:
        for r in self.boundaries:
            if r.name == name:
                return r
        raise ValueError(f"no split named '{name}' (have {list(self.names())})")

    def used_indices(self) -> np.ndarray:
        """All row indices covered by some range, ascending."""
        return np.concatenate([np.arange(r.start, r.stop) for r in self.boundaries])

    def validate_against(self, series: TimeSeries) -> None:
        last = self.boundaries[-1]
        if last.stop > series.length:
            raise DataError(
                f"split '{last.name}' ends at {last.stop} but series has {series.length} rows"
            )


@dataclass(frozen=True)
class StandardizationParams:
    """Per-channel means and population standard deviations."""

    means: np.ndarray  # (d,)
    standard_deviations: np.ndarray  # (d,), all > 0
    mode: str = "fit_on_combined"

    def __post_init__(self) -> None:
        object.__setattr__(self, "means", np.asarray(self.means, dtype=float))
        object.__setattr__(self, "standard_deviations", np.asarray(self.standard_deviations, dtype=float))
        if self.mode not in STANDARDIZE_MODES:
            raise ValueError(f"mode must be one of {STANDARDIZE_MODES}, got '{self.mode}'")
        if self.means.shape != self.standard_deviations.shape or self.means.ndim != 1:
            raise ValueError("means and standard deviations must be 1-D and the same length")
        if np.any(self.standard_deviations <= 0):
            bad = int(np.argmax(self.standard_deviations <= 0))
            raise NumericalError(f"non-positive standard deviation for channel {bad}")

    @property
    def dimension(self) -> int:
        return self.means.shape[0]


@dataclass(frozen=True)
class CsvSchema:
    """Column mapping for CSV ingestion: a timestamp column, one or more
    feature columns, and an integer label column."""

    timestamp: str
    features: tuple[str, ...]
    label: str
    delimiter: str = ","

    def __post_init__(self) -> None:
        object.__setattr__(self, "features", tuple(self.features))
        if not self.features:
            raise ValueError("schema needs at least one feature column")
        cols = (self.timestamp, *self.features, self.label)
        if len(set(cols)) != len(cols):
            raise ValueError(f"schema columns must be distinct, got {cols}")


_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def parse_timestamp(text: str) -> float:
    """Numeric or ISO-format timestamp to float seconds (naive = UTC)."""
    try:
        return float(text)
    except ValueError:
        pass
    dt = datetime.fromisoformat(text.strip())
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return (dt - _EPOCH).total_seconds()


def _parse_label(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"label '{text}' is not an integer")
    return int(value)


def load_csv(path: str | Path, schema: CsvSchema) -> TimeSeries:
    """Load and validate a labeled series from a headed CSV file.

    Rows with missing or unparseable cells are rejected; the error names the
    offending 1-based file line numbers.  Timestamps must come out strictly
    increasing.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=schema.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file (no header row)") from None
        header = [h.strip() for h in header]
        positions: dict[str, int] = {}
        for col in (schema.timestamp, *schema.features, schema.label):
            if col not in header:
                raise DataError(f"{path}: missing column '{col}' (header: {header})")
            positions[col] = header.index(col)
        needed = max(positions.values()) + 1

        timestamps: list[float] = []
        rows: list[list[float]] = []
        labels: list[int] = []
        bad: list[tuple[int, str]] = []
        for lineno, record in enumerate(reader, start=2):
            if not record or all(cell.strip() == "" for cell in record):
                continue
            if len(record) < needed:
                bad.append((lineno, f"expected at least {needed} columns, got {len(record)}"))
                continue
            try:
                ts = parse_timestamp(record[positions[schema.timestamp]])
                feats = [float(record[positions[c]]) for c in schema.features]
                lab = _parse_label(record[positions[schema.label]])
            except ValueError as exc:
                bad.append((lineno, str(exc)))
                continue
            if not all(np.isfinite(feats)) or not np.isfinite(ts):
                bad.append((lineno, "non-finite value"))
                continue
            timestamps.append(ts)
            rows.append(feats)
            labels.append(lab)

    if bad:
        shown = "; ".join(f"line {ln}: {why}" for ln, why in bad[:10])
        more = f" (+{len(bad) - 10} more)" if len(bad) > 10 else ""
        raise DataError(f"{path}: {len(bad)} malformed row(s): {shown}{more}")
    if not rows:
        raise DataError(f"{path}: no data rows")
    ts_arr = np.asarray(timestamps, dtype=float)
    if ts_arr.size > 1:
        diffs = np.diff(ts_arr)
        if np.any(diffs <= 0):
            bad_idx = int(np.argmax(diffs <= 0)) + 1
            raise DataError(
                f"{path}: timestamps not strictly increasing at data row {bad_idx + 1} "
                f"(file line {bad_idx + 2})"
            )
    return TimeSeries(
        timestamps=ts_arr,
        values=np.asarray(rows, dtype=float),
        labels=np.asarray(labels, dtype=np.int64),
        channel_names=schema.features,
    )


def _fit_rows(series: TimeSeries, split: SplitSpec, mode: str, train_name: str) -> np.ndarray:
    split.validate_against(series)
    if mode == "fit_on_combined":
        return split.used_indices()
    r = split.range_named(train_name)
    return np.arange(r.start, r.stop)


def fit_standardizer(
    series: TimeSeries,
    split: SplitSpec,
    mode: str = "fit_on_combined",
    train_name: str = "train",
) -> StandardizationParams:
    """Fit per-channel mean and population SD over the selected split rows.

    ``fit_on_combined`` uses every row covered by the split spec;
    ``fit_on_train`` uses only the range named ``train_name``.  A channel
    with zero variance over the fitted rows is an error.
    """
    if mode not in STANDARDIZE_MODES:
        raise ValueError(f"mode must be one of {STANDARDIZE_MODES}, got '{mode}'")
    idx = _fit_rows(series, split, mode, train_name)
    if idx.size == 0:
        raise DataError("empty row selection for standardization")
    sel = series.values[idx]
    means = sel.mean(axis=0)
    sds = sel.std(axis=0)  # ddof=0: population variance
    zero = np.flatnonzero(sds <= 0.0)
    if zero.size:
        names = ", ".join(series.channel_names[i] for i in zero)
        raise NumericalError(f"zero-variance channel(s) over fitted rows: {names}")
    return StandardizationParams(means=means, standard_deviations=sds, mode=mode)


def apply_standardizer(series: TimeSeries, params: StandardizationParams) -> TimeSeries:
    """Per-channel (x - mean) / sd; timestamps and labels pass through."""
    if params.dimension != series.dimension:
        raise DataError(
            f"standardizer has {params.dimension} channels, series has {series.dimension}"
        )
    transformed = (series.values - params.means) / params.standard_deviations
    return TimeSeries(
        timestamps=series.timestamps.copy(),
        values=transformed,
        labels=series.labels.copy(),
        channel_names=series.channel_names,
    )


def split_series(series: TimeSeries, split: SplitSpec) -> dict[str, TimeSeries]:
    """Slice the series into one sub-series per named range."""
    split.validate_against(series)
    return {r.name: series.slice(r.start, r.stop) for r in split.boundaries}
