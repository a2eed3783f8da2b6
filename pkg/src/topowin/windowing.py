"""Sliding windows over a time series.

A window of length ``w`` advanced by stride ``s`` turns consecutive rows
into a point cloud of ``w`` points in R^d; each window gets one class
label from the per-row labels it covers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError
from .ingest import TimeSeries

LABEL_RULES = ("any_positive", "majority")


@dataclass(frozen=True)
class WindowConfig:
    w: int  # points per window, >= 2
    s: int  # stride in time steps, >= 1
    label_rule: str = "any_positive"

    def __post_init__(self) -> None:
        if self.w < 2:
            raise ValueError(f"window length must be >= 2, got {self.w}")
        if self.s < 1:
            raise ValueError(f"stride must be >= 1, got {self.s}")
        if self.label_rule not in LABEL_RULES:
            raise ValueError(f"label rule must be one of {LABEL_RULES}, got '{self.label_rule}'")


@dataclass(frozen=True)
class LabeledWindow:
    """Window ``index`` (0-based) holds source rows s*index .. s*index+w-1."""

    index: int
    points: np.ndarray  # (w, d)
    label: int
    time_range: tuple[float, float]


def window_label(labels: Sequence[int], rule: str) -> int:
    """Collapse the per-row labels of one window to a single class label.

    ``any_positive``: 1 if any row is labeled 1, else 0.  ``majority``:
    most frequent label; among tied labels the one occurring earliest in
    the window wins, which keeps the rule deterministic.
    """
    labels = list(labels)
    if not labels:
        raise DataError("cannot label an empty window")
    if rule == "any_positive":
        return 1 if any(l == 1 for l in labels) else 0
    if rule == "majority":
        counts = Counter(labels)
        best = max(counts.values())
        tied = {lab for lab, c in counts.items() if c == best}
        for lab in labels:
            if lab in tied:
                return lab
        raise AssertionError("unreachable")
    raise ValueError(f"label rule must be one of {LABEL_RULES}, got '{rule}'")


def window_count(length: int, w: int, s: int) -> int:
    """Number of full windows over ``length`` rows; trailing remainder dropped."""
    if length < w:
        return 0
    return (length - w) // s + 1


def make_windows(series: TimeSeries, cfg: WindowConfig) -> list[LabeledWindow]:
    """Cut the series into labeled windows; a trailing partial window is dropped."""
    n = series.length
    if n < cfg.w:
        raise DataError(f"series has {n} rows, shorter than window length {cfg.w}")
    out: list[LabeledWindow] = []
    for i in range(window_count(n, cfg.w, cfg.s)):
        start = i * cfg.s
        stop = start + cfg.w
        points = series.values[start:stop].copy()
        label = window_label(series.labels[start:stop].tolist(), cfg.label_rule)
        out.append(
            LabeledWindow(
                index=i,
                points=points,
                label=label,
                time_range=(float(series.timestamps[start]), float(series.timestamps[stop - 1])),
            )
        )
    return out
