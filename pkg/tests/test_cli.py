from pathlib import Path

import pytest

from topowin.cli import main
from topowin.io import read_json, write_json
from conftest import synthetic_config_dict


@pytest.fixture
def config_path(tmp_path, synth_csv):
    payload = synthetic_config_dict("cli-synth", synth_csv, n_windows=100)
    path = tmp_path / "cli-synth.json"
    write_json(path, payload)
    return path


def read_lines(path):
    return Path(path).read_text(encoding="utf-8")


class TestUsage:
    def test_no_arguments_prints_usage_nonzero(self, capsys):
        assert main([]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_flag(self, capsys):
        assert main(["run", "--bogus"]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_run_without_config(self, capsys):
        assert main(["run"]) == 1
        assert "error" in capsys.readouterr().err


class TestStageCommands:
    def test_ingest_windows_diagrams_distmat_classify(self, tmp_path, config_path, synth_csv, capsys):
        out = tmp_path / "stages"
        assert main(["ingest", "--config", str(config_path), "--data", str(synth_csv), "--out", str(out)]) == 0
        assert (out / "standardized.csv").exists()
        assert (out / "params.json").exists()

        assert main(["windows", "--config", str(config_path), "--series", str(out / "standardized.csv"), "--out", str(out)]) == 0
        assert (out / "windows.csv").exists()

        assert main(["diagrams", "--config", str(config_path), "--windows", str(out / "windows.csv"), "--out", str(out)]) == 0
        assert (out / "clouds.csv").exists()
        assert (out / "diagrams.csv").exists()

        assert main([
            "distmat",
            "--config", str(config_path),
            "--diagrams", str(out / "diagrams.csv"),
            "--windows", str(out / "windows.csv"),
            "--out", str(out),
        ]) == 0
        assert (out / "distmat.csv").exists()
        sidecar = read_json(out / "distmat.json")
        assert sidecar["p"] == 1.0
        assert "train_hash" in sidecar and "test_hash" in sidecar

        assert main([
            "classify",
            "--config", str(config_path),
            "--matrix", str(out / "distmat.csv"),
            "--windows", str(out / "windows.csv"),
            "--out", str(out),
        ]) == 0
        report = read_json(out / "report.json")
        assert report["accuracy"] >= 0.95
        assert "Accuracy" in capsys.readouterr().out

    def test_sweep_k(self, tmp_path, config_path, synth_csv, capsys):
        out = tmp_path / "stages"
        for cmd in (
            ["ingest", "--config", str(config_path), "--data", str(synth_csv), "--out", str(out)],
            ["windows", "--config", str(config_path), "--series", str(out / "standardized.csv"), "--out", str(out)],
            ["diagrams", "--config", str(config_path), "--windows", str(out / "windows.csv"), "--out", str(out)],
            ["distmat", "--config", str(config_path), "--diagrams", str(out / "diagrams.csv"),
             "--windows", str(out / "windows.csv"), "--out", str(out)],
        ):
            assert main(cmd) == 0
        assert main([
            "sweep-k",
            "--config", str(config_path),
            "--matrix", str(out / "distmat.csv"),
            "--windows", str(out / "windows.csv"),
            "--ks", "1,3,5",
            "--out", str(out),
        ]) == 0
        text = read_lines(out / "sweep.csv")
        assert text.splitlines()[0] == "k,accuracy,sensitivity,specificity"
        assert len(text.splitlines()) == 4

    def test_ingest_idempotent(self, tmp_path, config_path, synth_csv):
        out = tmp_path / "stages"
        args = ["ingest", "--config", str(config_path), "--data", str(synth_csv), "--out", str(out)]
        assert main(args) == 0
        first = (out / "standardized.csv").read_bytes()
        assert main(args) == 0
        assert (out / "standardized.csv").read_bytes() == first

    def test_data_error_exit_code(self, tmp_path, config_path, capsys):
        missing = tmp_path / "absent.csv"
        code = main(["ingest", "--config", str(config_path), "--data", str(missing), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "data error" in capsys.readouterr().err

    def test_numerical_error_exit_code(self, tmp_path, config_path, capsys):
        data = tmp_path / "flat.csv"
        data.write_text(
            "timestamp,f0,f1,f2,label\n" + "".join(
                f"{i},5.0,{i}.0,{i}.5,0\n" for i in range(1000)
            ),
            encoding="utf-8",
        )
        code = main(["ingest", "--config", str(config_path), "--data", str(data), "--out", str(tmp_path / "o")])
        assert code == 3
        assert "numerical error" in capsys.readouterr().err


class TestRunCommand:
    def test_run_and_describe(self, tmp_path, config_path, synth_csv, capsys):
        root = tmp_path / "runs"
        code = main(["run", "--config", str(config_path), "--out", str(root), "--describe"])
        assert code == 0
        out = capsys.readouterr().out
        assert "Accuracy" in out
        assert "classify: computed" in out
        assert (root / "cli-synth" / "report.json").exists()

    def test_run_cached_then_no_cache_identical(self, tmp_path, config_path, capsys):
        root = tmp_path / "runs"
        assert main(["run", "--config", str(config_path), "--out", str(root)]) == 0
        first = (root / "cli-synth" / "report.json").read_bytes()
        assert main(["run", "--config", str(config_path), "--out", str(root), "--no-cache"]) == 0
        assert (root / "cli-synth" / "report.json").read_bytes() == first

    def test_k_override_changes_config(self, tmp_path, config_path, capsys):
        root = tmp_path / "runs"
        assert main(["run", "--config", str(config_path), "--out", str(root), "--k", "3"]) == 0
        from topowin import describe_run

        assert describe_run("cli-synth", root)["config"]["k"] == 3


class TestPlotDiagram:
    def test_plain_diagram_file(self, tmp_path, capsys):
        src = tmp_path / "diag.csv"
        src.write_text("dim,birth,death\n0,0.0,1.0\n0,0.0,2.0\n", encoding="utf-8")
        out = tmp_path / "plots"
        assert main(["plot-diagram", "--diagram", str(src), "--out", str(out)]) == 0
        svg = read_lines(out / "diagram.svg")
        assert svg.count("<circle") == 2
        assert "stroke-dasharray" in svg  # the diagonal
        twin = read_lines(out / "diagram.csv")
        assert twin == "dim,birth,death\n0,0.0,1.0\n0,0.0,2.0\n"

    def test_empty_diagram_diagonal_only(self, tmp_path):
        src = tmp_path / "diag.csv"
        src.write_text("dim,birth,death\n", encoding="utf-8")
        out = tmp_path / "plots"
        assert main(["plot-diagram", "--diagram", str(src), "--out", str(out)]) == 0
        svg = read_lines(out / "diagram.svg")
        assert svg.count("<circle") == 0
        assert "stroke-dasharray" in svg

    def test_long_format_selection(self, tmp_path):
        src = tmp_path / "diagrams.csv"
        src.write_text(
            "split,window,dim,birth,death\n"
            "test,0,0,0.0,1.0\n"
            "test,1,0,0.0,2.0\n"
            "test,1,0,0.0,3.0\n",
            encoding="utf-8",
        )
        out = tmp_path / "plots"
        assert main([
            "plot-diagram", "--diagram", str(src), "--split", "test", "--index", "1", "--out", str(out)
        ]) == 0
        twin = read_lines(out / "diagram-test-1.csv")
        assert twin.count("\n") == 3  # header + two points

    def test_ambiguous_selection_is_usage_error(self, tmp_path, capsys):
        src = tmp_path / "diagrams.csv"
        src.write_text(
            "split,window,dim,birth,death\ntest,0,0,0.0,1.0\ntest,1,0,0.0,2.0\n",
            encoding="utf-8",
        )
        assert main(["plot-diagram", "--diagram", str(src), "--out", str(tmp_path / "p")]) == 1

    def test_unreadable_file(self, tmp_path, capsys):
        assert main(["plot-diagram", "--diagram", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "p")]) == 2

    def test_plot_twin_lossless_roundtrip(self, tmp_path):
        src = tmp_path / "diag.csv"
        rows = "dim,birth,death\n0,0.0,0.7071067811865476\n1,1.0,1.4142135623730951\n"
        src.write_text(rows, encoding="utf-8")
        out = tmp_path / "plots"
        assert main(["plot-diagram", "--diagram", str(src), "--out", str(out)]) == 0
        assert read_lines(out / "diagram.csv") == rows
