"""Command-line interface.

One subcommand per pipeline stage plus ``run`` for the cached end-to-end
flow and ``plot-diagram`` for rendering.  Exit codes: 0 success, 1 usage
or configuration error, 2 data error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .classify import (
    KnnConfig,
    evaluate,
    predict_all,
    render_report_table,
    render_sweep_table,
    sweep_k,
)
from .distance import WassersteinConfig, distance_matrix
from .errors import DataError, NumericalError
from .ingest import apply_standardizer, fit_standardizer, load_csv, split_series
from .persistence import rips_persistence_dim0, rips_persistence_dim1
from .pipeline import PipelineConfig, default_runs_root, describe_run, run
from .plot import write_diagram_plot
from .pointcloud import AugmentConfig, augment, resolve_anchors, resolve_offset
from .windowing import make_windows

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 instead of argparse's 2
        self.print_usage(sys.stderr)
        print(f"usage error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="topowin", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=Path, help="pipeline config JSON")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("-w", "--window", type=int, default=None, help="window length")
        p.add_argument("-s", "--stride", type=int, default=None, help="window stride")
        p.add_argument("--label-rule", default=None, choices=("any_positive", "majority"))
        p.add_argument("--offset", default=None, help='comma list or "auto"')
        p.add_argument(
            "--anchor",
            action="append",
            default=None,
            help='comma list (repeatable), "origin", or "none"',
        )
        p.add_argument("--dimension", type=int, default=None, help="homology dimension (0 or 1)")
        p.add_argument("--maxscale", type=float, default=None, help="filtration cap for dimension 1")
        p.add_argument("--p", type=float, default=None, help="Wasserstein exponent")
        p.add_argument("--k", type=int, default=None, help="number of neighbors")
        p.add_argument("--seed", type=int, default=None, help="recorded in provenance")
        p.add_argument("--no-cache", action="store_true", help="recompute every stage")
        p.add_argument("--workers", type=int, default=1, help="processes for the distance stage")
        return p

    p = add("ingest", "load, validate and standardize a CSV series")
    p.add_argument("--data", type=Path, help="input CSV")

    p = add("windows", "cut a standardized series into labeled windows")
    p.add_argument("--series", type=Path, help="standardized series CSV")

    p = add("diagrams", "augment windows and compute persistence diagrams")
    p.add_argument("--windows", type=Path, help="windows CSV")

    p = add("distmat", "test x train Wasserstein distance matrix")
    p.add_argument("--diagrams", type=Path, help="diagrams CSV")
    p.add_argument("--windows", type=Path, help="windows CSV (window counts and labels)")
    p.add_argument("--train-split", default=None)
    p.add_argument("--test-split", default=None)

    p = add("classify", "k-NN prediction and evaluation report")
    p.add_argument("--matrix", type=Path, help="distance matrix CSV")
    p.add_argument("--windows", type=Path, help="windows CSV (labels)")
    p.add_argument("--train-split", default=None)
    p.add_argument("--test-split", default=None)
    p.add_argument("--tie-break", default=None, choices=("nearest_neighbor_label", "lowest_class_id"))

    p = add("sweep-k", "evaluate several k values against one distance matrix")
    p.add_argument("--matrix", type=Path, help="distance matrix CSV")
    p.add_argument("--windows", type=Path, help="windows CSV (labels)")
    p.add_argument("--train-split", default=None)
    p.add_argument("--test-split", default=None)
    p.add_argument("--ks", default=None, help="comma list of k values")

    p = add("run", "full cached pipeline: data CSV to evaluation report")
    p.add_argument("--data", type=Path, help="input CSV (overrides config)")
    p.add_argument("--describe", action="store_true", help="print provenance of the finished run")

    p = add("plot-diagram", "SVG scatter of a diagram file plus a CSV twin")
    p.add_argument("--diagram", type=Path, help="diagram CSV (dim,birth,death[, keyed by window])")
    p.add_argument("--split", default=None, help="split to select in a long-format file")
    p.add_argument("--index", type=int, default=None, help="window to select in a long-format file")

    return parser


def _config_dict(args) -> dict:
    payload: dict = {}
    if args.config is not None:
        payload = dict(io.read_json(args.config))
        payload.setdefault("run_id", Path(args.config).stem)
    overrides = {
        "window": args.window,
        "stride": args.stride,
        "label_rule": args.label_rule,
        "offset": args.offset,
        "anchors": args.anchor,
        "dimension": args.dimension,
        "maxscale": args.maxscale,
        "p": args.p,
        "k": args.k,
        "seed": args.seed,
    }
    for key, value in overrides.items():
        if value is not None:
            payload[key] = value
    return payload


def _out_dir(args) -> Path:
    out = args.out if args.out is not None else Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require(value, flag: str):
    if value is None:
        raise ValueError(f"missing required option {flag}")
    return value


def _cmd_ingest(args) -> int:
    cfg = PipelineConfig.from_dict(_config_dict(args))
    data = _require(args.data if args.data is not None else _config_dict(args).get("data"), "--data")
    out = _out_dir(args)
    series = load_csv(Path(data), cfg.schema)
    params = fit_standardizer(series, cfg.splits, cfg.standardize_mode, cfg.train_split)
    standardized = apply_standardizer(series, params)
    io.write_series_csv(series, out / "series.csv")
    io.write_series_csv(standardized, out / "standardized.csv")
    io.write_params_json(params, out / "params.json")
    print(f"wrote {out / 'standardized.csv'} ({series.length} rows, d={series.dimension})")
    return EXIT_OK


def _cmd_windows(args) -> int:
    cfg = PipelineConfig.from_dict(_config_dict(args))
    series_path = _require(args.series, "--series")
    out = _out_dir(args)
    series = io.read_series_csv(series_path)
    parts = split_series(series, cfg.splits)
    windows = {name: make_windows(sub, cfg.window) for name, sub in parts.items()}
    io.write_windows_csv(windows, series.channel_names, out / "windows.csv")
    counts = ", ".join(f"{name}: {len(wins)}" for name, wins in windows.items())
    print(f"wrote {out / 'windows.csv'} ({counts})")
    return EXIT_OK


def _stage_defaults(args) -> dict:
    payload = _config_dict(args)
    payload.setdefault("run_id", "cli")
    payload.setdefault("schema", {"timestamp": "timestamp", "features": ["x"], "label": "label"})
    payload.setdefault("splits", [["train", 0, 2], ["test", 2, 4]])
    payload.setdefault("window", 2)
    return payload


def _cmd_diagrams(args) -> int:
    payload = _stage_defaults(args)
    out = _out_dir(args)
    windows = io.read_windows_csv(_require(args.windows, "--windows"))
    dims = {w.points.shape[1] for wins in windows.values() for w in wins}
    if len(dims) != 1:
        raise DataError(f"windows file mixes dimensions {sorted(dims)}")
    d = dims.pop()
    offset = resolve_offset(payload.get("offset", "auto"), d)
    anchors = resolve_anchors(payload.get("anchors", "origin"), d)
    aug_cfg = AugmentConfig(offset=offset, anchors=anchors)
    clouds = {name: [augment(w, aug_cfg) for w in wins] for name, wins in windows.items()}
    dimension = int(payload.get("dimension", 0))
    essential = payload.get("essential_policy", "dropped")
    maxscale = payload.get("maxscale")
    diagrams = {}
    for name, cs in clouds.items():
        if dimension == 0:
            diagrams[name] = [rips_persistence_dim0(c, essential, maxscale) for c in cs]
        else:
            if maxscale is None:
                raise ValueError("dimension 1 needs --maxscale")
            diagrams[name] = [rips_persistence_dim1(c, maxscale) for c in cs]
    io.write_clouds_csv(clouds, out / "clouds.csv")
    io.write_diagrams_csv(diagrams, out / "diagrams.csv")
    print(f"wrote {out / 'diagrams.csv'} (dimension {dimension})")
    return EXIT_OK


def _split_names(args, payload) -> tuple[str, str]:
    train = args.train_split or payload.get("train_split", "train")
    test = args.test_split or payload.get("test_split", "test")
    return train, test


def _cmd_distmat(args) -> int:
    payload = _stage_defaults(args)
    out = _out_dir(args)
    windows = io.read_windows_csv(_require(args.windows, "--windows"))
    train_name, test_name = _split_names(args, payload)
    counts = {name: len(wins) for name, wins in windows.items()}
    dimension = int(payload.get("dimension", 0))
    essential = payload.get("essential_policy", "dropped")
    diagrams = io.read_diagrams_csv(_require(args.diagrams, "--diagrams"), counts, dimension, essential)
    for name in (train_name, test_name):
        if name not in diagrams:
            raise DataError(f"no split named '{name}' in diagrams file")
    w_cfg = WassersteinConfig(p=float(payload.get("p", 1.0)), dimension=dimension)
    matrix = distance_matrix(diagrams[test_name], diagrams[train_name], w_cfg, workers=args.workers)
    io.write_distmat_csv(matrix, out / "distmat.csv")
    io.write_json(
        out / "distmat.json",
        {
            "p": w_cfg.p,
            "dimension": dimension,
            "train_split": train_name,
            "test_split": test_name,
            "train_hash": io.diagram_set_hash({train_name: diagrams[train_name]}),
            "test_hash": io.diagram_set_hash({test_name: diagrams[test_name]}),
        },
    )
    print(f"wrote {out / 'distmat.csv'} ({len(matrix.row_ids)} x {len(matrix.col_ids)})")
    return EXIT_OK


def _labels_for(args, payload) -> tuple[list[int], list[int]]:
    windows = io.read_windows_csv(_require(args.windows, "--windows"))
    train_name, test_name = _split_names(args, payload)
    return (
        io.window_labels(windows, train_name),
        io.window_labels(windows, test_name),
    )


def _cmd_classify(args) -> int:
    payload = _stage_defaults(args)
    out = _out_dir(args)
    matrix = io.read_distmat_csv(_require(args.matrix, "--matrix"))
    train_labels, test_labels = _labels_for(args, payload)
    knn_cfg = KnnConfig(
        k=int(_require(payload.get("k"), "--k")),
        tie_break=args.tie_break or payload.get("tie_break", "nearest_neighbor_label"),
    )
    report = evaluate(predict_all(matrix, train_labels, knn_cfg), test_labels)
    io.write_report_json(report, out / "report.json")
    table = render_report_table(report)
    (out / "report.txt").write_text(table + "\n", encoding="utf-8")
    print(table)
    return EXIT_OK


def _cmd_sweep_k(args) -> int:
    payload = _stage_defaults(args)
    out = _out_dir(args)
    matrix = io.read_distmat_csv(_require(args.matrix, "--matrix"))
    train_labels, test_labels = _labels_for(args, payload)
    ks = [int(v) for v in _require(args.ks, "--ks").split(",") if v.strip()]
    entries = sweep_k(
        matrix,
        train_labels,
        test_labels,
        ks,
        payload.get("tie_break", "nearest_neighbor_label"),
    )
    rows = [
        [e.k, repr(float(e.accuracy)), "" if e.sensitivity is None else repr(float(e.sensitivity)),
         "" if e.specificity is None else repr(float(e.specificity))]
        for e in entries
    ]
    io._write_csv(out / "sweep.csv", ["k", "accuracy", "sensitivity", "specificity"], rows)
    table = render_sweep_table(entries)
    print(table)
    return EXIT_OK


def _cmd_run(args) -> int:
    payload = _config_dict(args)
    if not payload:
        raise ValueError("run needs --config")
    data = args.data if args.data is not None else payload.get("data")
    cfg = PipelineConfig.from_dict(payload)
    report = run(
        cfg,
        Path(_require(data, "--data")),
        runs_root=args.out,
        use_cache=not args.no_cache,
        workers=args.workers,
    )
    print(render_report_table(report))
    if args.describe:
        prov = describe_run(cfg.run_id, default_runs_root(args.out))
        for stage in prov["stages"]:
            print(f"{stage['stage']}: {stage['status']} key={stage['key']} ({stage['duration_s']}s)")
    return EXIT_OK


def _cmd_plot_diagram(args) -> int:
    out = _out_dir(args)
    path = _require(args.diagram, "--diagram")
    header, rows = io._read_csv(Path(path))
    if header[:3] == ["dim", "birth", "death"]:
        selected = [(int(r[0]), float(r[1]), float(r[2])) for r in rows]
        suffix = ""
    elif header == ["split", "window", "dim", "birth", "death"]:
        keys = sorted({(r[0], int(r[1])) for r in rows})
        split = args.split or (keys[0][0] if keys else None)
        candidates = [k for k in keys if k[0] == split]
        if args.index is not None:
            candidates = [k for k in candidates if k[1] == args.index]
        if len(candidates) > 1:
            raise ValueError(
                f"file holds {len(candidates)} windows for split '{split}'; pick one with --index"
            )
        if not candidates and args.index is not None:
            selected = []
            suffix = f"-{split}-{args.index}"
        else:
            key = candidates[0] if candidates else None
            selected = (
                [(int(r[2]), float(r[3]), float(r[4])) for r in rows if (r[0], int(r[1])) == key]
                if key
                else []
            )
            suffix = f"-{key[0]}-{key[1]}" if key else ""
    else:
        raise DataError(f"{path}: not a diagram file (header {header})")
    selected.sort(key=lambda r: (r[0], r[2], r[1]))
    svg = out / f"diagram{suffix}.svg"
    twin = out / f"diagram{suffix}.csv"
    write_diagram_plot(selected, svg, twin)
    print(f"wrote {svg} and {twin} ({len(selected)} points)")
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "windows": _cmd_windows,
    "diagrams": _cmd_diagrams,
    "distmat": _cmd_distmat,
    "classify": _cmd_classify,
    "sweep-k": _cmd_sweep_k,
    "run": _cmd_run,
    "plot-diagram": _cmd_plot_diagram,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
