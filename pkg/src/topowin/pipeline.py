"""End-to-end run: series -> windows -> augmented clouds -> diagrams ->
distance matrix -> k-NN report, with content-addressed caching per stage.

Each stage's cache key hashes the previous stage's key plus the parameters
that stage depends on, so changing (say) only k reuses everything up to
the distance matrix and recomputes only the classification.  Artifacts
live under ``<runs_root>/<run_id>/<stage>/<key>.<ext>``; a provenance
record for the latest run is written next to them.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import io
from .classify import EvaluationReport, KnnConfig, evaluate, predict_all, render_report_table
from .distance import DistanceMatrix, WassersteinConfig, distance_matrix
from .errors import DataError, NumericalError
from .ingest import (
    CsvSchema,
    SplitSpec,
    apply_standardizer,
    fit_standardizer,
    load_csv,
    split_series,
)
from .persistence import rips_persistence_dim0, rips_persistence_dim1
from .pointcloud import AugmentConfig, augment, resolve_anchors, resolve_offset
from .windowing import WindowConfig, make_windows

CACHE_ROOT_ENV = "TOPOWIN_CACHE_DIR"
PROVENANCE_FILE = "provenance.json"


@dataclass(frozen=True)
class PipelineConfig:
    run_id: str
    schema: CsvSchema
    splits: SplitSpec
    window: WindowConfig
    standardize_mode: str = "fit_on_combined"
    offset: object = "auto"  # "auto" or explicit vector
    anchors: object = "origin"  # "origin", "none", or explicit vectors
    dimension: int = 0
    essential_policy: str = "dropped"
    maxscale: float | None = None
    p: float = 1.0
    k: int = 1
    tie_break: str = "nearest_neighbor_label"
    train_split: str = "train"
    test_split: str = "test"
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.run_id:
            raise ValueError("run_id must be nonempty")
        if self.dimension not in (0, 1):
            raise ValueError(f"homology dimension must be 0 or 1, got {self.dimension}")
        if self.dimension == 1 and self.maxscale is None:
            raise ValueError("dimension 1 needs a maxscale")
        if self.essential_policy not in ("dropped", "capped"):
            raise ValueError(f"essential policy must be 'dropped' or 'capped', got '{self.essential_policy}'")
        if self.essential_policy == "capped" and self.maxscale is None:
            raise ValueError("capped essential policy needs a maxscale")
        if self.standardize_mode not in ("fit_on_combined", "fit_on_train"):
            raise ValueError(f"unknown standardize mode '{self.standardize_mode}'")
        names = self.splits.names()
        if self.train_split not in names or self.test_split not in names:
            raise ValueError(
                f"train split '{self.train_split}' and test split '{self.test_split}' "
                f"must both be named in the split spec {list(names)}"
            )
        if self.train_split == self.test_split:
            raise ValueError("train and test splits must differ")
        KnnConfig(k=self.k, tie_break=self.tie_break)  # validate
        WassersteinConfig(p=self.p, dimension=self.dimension)

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "schema": {
                "timestamp": self.schema.timestamp,
                "features": list(self.schema.features),
                "label": self.schema.label,
                "delimiter": self.schema.delimiter,
            },
            "splits": [[r.name, r.start, r.stop] for r in self.splits.boundaries],
            "window": self.window.w,
            "stride": self.window.s,
            "label_rule": self.window.label_rule,
            "standardize": self.standardize_mode,
            "offset": list(self.offset) if not isinstance(self.offset, str) else self.offset,
            "anchors": (
                [list(a) for a in self.anchors]
                if not isinstance(self.anchors, str)
                else self.anchors
            ),
            "dimension": self.dimension,
            "essential_policy": self.essential_policy,
            "maxscale": self.maxscale,
            "p": self.p,
            "k": self.k,
            "tie_break": self.tie_break,
            "train_split": self.train_split,
            "test_split": self.test_split,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "PipelineConfig":
        schema = CsvSchema(
            timestamp=payload["schema"]["timestamp"],
            features=tuple(payload["schema"]["features"]),
            label=payload["schema"]["label"],
            delimiter=payload["schema"].get("delimiter", ","),
        )
        splits = SplitSpec(tuple((r[0], int(r[1]), int(r[2])) for r in payload["splits"]))
        window = WindowConfig(
            w=int(payload["window"]),
            s=int(payload.get("stride", payload["window"])),
            label_rule=payload.get("label_rule", "any_positive"),
        )
        return cls(
            run_id=payload["run_id"],
            schema=schema,
            splits=splits,
            window=window,
            standardize_mode=payload.get("standardize", "fit_on_combined"),
            offset=payload.get("offset", "auto"),
            anchors=payload.get("anchors", "origin"),
            dimension=int(payload.get("dimension", 0)),
            essential_policy=payload.get("essential_policy", "dropped"),
            maxscale=payload.get("maxscale"),
            p=float(payload.get("p", 1.0)),
            k=int(payload.get("k", 1)),
            tie_break=payload.get("tie_break", "nearest_neighbor_label"),
            train_split=payload.get("train_split", "train"),
            test_split=payload.get("test_split", "test"),
            seed=int(payload.get("seed", 0)),
        )


@dataclass(frozen=True)
class StageArtifact:
    stage: str
    key: str
    path: Path
    status: str  # "computed" or "cached"
    duration_s: float

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "key": self.key,
            "path": str(self.path),
            "status": self.status,
            "duration_s": self.duration_s,
        }


def default_runs_root(out: str | Path | None = None) -> Path:
    if out is not None:
        return Path(out)
    env = os.environ.get(CACHE_ROOT_ENV)
    return Path(env) if env else Path("runs")


class _StageRunner:
    def __init__(self, run_dir: Path, use_cache: bool) -> None:
        self.run_dir = run_dir
        self.use_cache = use_cache
        self.artifacts: list[StageArtifact] = []

    def run(self, stage: str, key: str, filename: str, compute: Callable, write: Callable, read: Callable):
        path = self.run_dir / stage / f"{key}.{filename}"
        started = time.perf_counter()
        if self.use_cache and path.exists():
            try:
                value = read(path)
                status = "cached"
            except DataError:
                value = None
                status = "computed"
        else:
            value = None
            status = "computed"
        if status == "computed":
            try:
                value = compute()
            except (DataError, NumericalError, ValueError) as exc:
                raise type(exc)(f"stage '{stage}': {exc}") from exc
            path.parent.mkdir(parents=True, exist_ok=True)
            write(value, path)
        self.artifacts.append(
            StageArtifact(
                stage=stage,
                key=key,
                path=path,
                status=status,
                duration_s=round(time.perf_counter() - started, 6),
            )
        )
        return value


def run(
    cfg: PipelineConfig,
    data: str | Path,
    runs_root: str | Path | None = None,
    use_cache: bool = True,
    workers: int = 1,
) -> EvaluationReport:
    """Execute every stage in order and return the evaluation report.

    Re-running with unchanged config and data reuses each stage's cached
    artifact; ``use_cache=False`` recomputes and rewrites everything.
    """
    data = Path(data)
    if not data.exists():
        raise DataError(f"stage 'ingest': no such data file: {data}")
    root = default_runs_root(runs_root)
    run_dir = root / cfg.run_id
    runner = _StageRunner(run_dir, use_cache)
    data_hash = io.sha256_file(data)
    cfg_dict = cfg.to_dict()

    k_ingest = io.stage_key("ingest", None, {"data": data_hash, "schema": cfg_dict["schema"]})
    series = runner.run(
        "ingest",
        k_ingest,
        "series.csv",
        lambda: load_csv(data, cfg.schema),
        lambda value, path: io.write_series_csv(value, path),
        io.read_series_csv,
    )

    k_std = io.stage_key(
        "standardize",
        k_ingest,
        {"splits": cfg_dict["splits"], "mode": cfg.standardize_mode, "train": cfg.train_split},
    )

    def _standardize():
        params = fit_standardizer(series, cfg.splits, cfg.standardize_mode, cfg.train_split)
        return apply_standardizer(series, params), params

    def _write_std(value, path):
        std, params = value
        io.write_series_csv(std, path)
        io.write_params_json(params, path.with_suffix(".params.json"))

    def _read_std(path):
        return io.read_series_csv(path), io.read_params_json(path.with_suffix(".params.json"))

    standardized, _params = runner.run(
        "standardize", k_std, "standardized.csv", _standardize, _write_std, _read_std
    )

    k_windows = io.stage_key(
        "windows",
        k_std,
        {"w": cfg.window.w, "s": cfg.window.s, "rule": cfg.window.label_rule},
    )

    def _windows():
        parts = split_series(standardized, cfg.splits)
        return {name: make_windows(sub, cfg.window) for name, sub in parts.items()}

    windows_by_split = runner.run(
        "windows",
        k_windows,
        "windows.csv",
        _windows,
        lambda value, path: io.write_windows_csv(value, standardized.channel_names, path),
        io.read_windows_csv,
    )

    d = standardized.dimension
    offset = resolve_offset(cfg.offset, d)
    anchors = resolve_anchors(cfg.anchors, d)
    aug_cfg = AugmentConfig(offset=offset, anchors=anchors)
    k_clouds = io.stage_key(
        "clouds",
        k_windows,
        {"offset": [repr(v) for v in offset], "anchors": [[repr(v) for v in a] for a in anchors]},
    )

    def _clouds():
        return {
            name: [augment(w, aug_cfg) for w in wins] for name, wins in windows_by_split.items()
        }

    clouds_by_split = runner.run(
        "clouds",
        k_clouds,
        "clouds.csv",
        _clouds,
        lambda value, path: io.write_clouds_csv(value, path),
        io.read_clouds_csv,
    )

    k_diagrams = io.stage_key(
        "diagrams",
        k_clouds,
        {
            "dimension": cfg.dimension,
            "essential_policy": cfg.essential_policy,
            "maxscale": None if cfg.maxscale is None else repr(float(cfg.maxscale)),
        },
    )

    def _diagrams():
        out = {}
        for name, clouds in clouds_by_split.items():
            if cfg.dimension == 0:
                out[name] = [
                    rips_persistence_dim0(c, cfg.essential_policy, cfg.maxscale) for c in clouds
                ]
            else:
                out[name] = [rips_persistence_dim1(c, cfg.maxscale) for c in clouds]
        return out

    window_counts = {name: len(wins) for name, wins in windows_by_split.items()}
    diagram_policy = cfg.essential_policy if cfg.dimension == 0 else "capped"
    diagrams_by_split = runner.run(
        "diagrams",
        k_diagrams,
        "diagrams.csv",
        _diagrams,
        lambda value, path: io.write_diagrams_csv(value, path),
        lambda path: io.read_diagrams_csv(path, window_counts, cfg.dimension, diagram_policy),
    )

    k_dist = io.stage_key(
        "distances",
        k_diagrams,
        {"p": repr(float(cfg.p)), "train": cfg.train_split, "test": cfg.test_split},
    )
    w_cfg = WassersteinConfig(p=cfg.p, dimension=cfg.dimension)

    def _distances():
        return distance_matrix(
            diagrams_by_split[cfg.test_split],
            diagrams_by_split[cfg.train_split],
            w_cfg,
            workers=workers,
        )

    def _write_dist(matrix, path):
        io.write_distmat_csv(matrix, path)
        io.write_json(
            path.with_suffix(".json"),
            {
                "p": cfg.p,
                "dimension": cfg.dimension,
                "train_split": cfg.train_split,
                "test_split": cfg.test_split,
                "train_hash": io.diagram_set_hash({cfg.train_split: diagrams_by_split[cfg.train_split]}),
                "test_hash": io.diagram_set_hash({cfg.test_split: diagrams_by_split[cfg.test_split]}),
            },
        )

    matrix = runner.run(
        "distances", k_dist, "distmat.csv", _distances, _write_dist, io.read_distmat_csv
    )

    k_classify = io.stage_key(
        "classify", k_dist, {"k": cfg.k, "tie_break": cfg.tie_break}
    )
    knn_cfg = KnnConfig(k=cfg.k, tie_break=cfg.tie_break)
    train_labels = [w.label for w in windows_by_split[cfg.train_split]]
    test_labels = [w.label for w in windows_by_split[cfg.test_split]]

    def _classify():
        predictions = predict_all(matrix, train_labels, knn_cfg)
        return evaluate(predictions, test_labels)

    report = runner.run(
        "classify",
        k_classify,
        "report.json",
        _classify,
        lambda value, path: io.write_report_json(value, path),
        io.read_report_json,
    )

    # Stable convenience copies of the final report.
    io.write_report_json(report, run_dir / "report.json")
    (run_dir / "report.txt").write_text(render_report_table(report) + "\n", encoding="utf-8")

    io.write_json(
        run_dir / PROVENANCE_FILE,
        {
            "run_id": cfg.run_id,
            "config": cfg_dict,
            "data": str(data),
            "data_sha256": data_hash,
            "seed": cfg.seed,
            "stages": [a.to_dict() for a in runner.artifacts],
            "report": str(run_dir / "report.json"),
        },
    )
    return report


def describe_run(run_id: str, runs_root: str | Path | None = None) -> dict:
    """Provenance of the most recent run under this id: config, per-stage
    content hashes, computed/cached status and timings."""
    root = default_runs_root(runs_root)
    path = root / run_id / PROVENANCE_FILE
    if not path.exists():
        raise DataError(f"unknown run '{run_id}' (no {path})")
    return io.read_json(path)
