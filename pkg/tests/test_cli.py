import json

import numpy as np
import pytest

from specrange.cli import main
from specrange.planarsets import read_cloud_csv

GEO_C = {"kind": "diagonal", "rule": {"type": "geometric", "ratio": 0.5},
         "decay": {"type": "trace_class", "tail": "geometric"},
         "norm_bound": 0.5}
PHASE_T = {"kind": "diagonal", "rule": {"type": "phase_power", "q": 4.0, "p": 1.0},
           "decay": {"type": "null_sequence", "tail": "power"},
           "norm_bound": 1.0}
BOUNDED_T = {"kind": "diagonal", "rule": {"type": "power", "a": 1.0, "p": 0.0},
             "decay": {"type": "bounded"}, "norm_bound": 1.0}


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run(args):
    return main(args)


def test_range_command_writes_artifacts(tmp_path):
    cfg = write_config(tmp_path, "job.json",
                       {"C": GEO_C, "A": PHASE_T, "n": 10, "count": 300})
    out = tmp_path / "out"
    assert run(["range", "--config", cfg, "--seed", "7", "--out", str(out)]) == 0
    for name in ("cloud.csv", "hull.csv", "metadata.json", "range.svg", "range.png"):
        assert (out / name).exists(), name
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["seed"] == 7
    assert meta["count"] == 300
    cloud = read_cloud_csv(out / "cloud.csv")
    assert np.abs(cloud.points).max() <= meta["bound_radius"] + 1e-9


def test_range_command_deterministic_reruns(tmp_path):
    cfg = write_config(tmp_path, "job.json",
                       {"C": GEO_C, "A": PHASE_T, "n": 8, "count": 200, "seed": 3})
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run(["range", "--config", cfg, "--out", str(out1)]) == 0
    assert run(["range", "--config", cfg, "--out", str(out2)]) == 0
    for name in ("cloud.csv", "range.svg", "metadata.json", "range.png"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_range_command_rejects_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"C": {"kind": "diagonal"')
    out = tmp_path / "out"
    assert run(["range", "--config", str(path), "--out", str(out)]) == 2
    assert "malformed JSON" in capsys.readouterr().err


def test_range_command_names_missing_field(tmp_path, capsys):
    cfg = write_config(tmp_path, "job.json",
                       {"C": {"kind": "diagonal"}, "A": PHASE_T, "n": 4})
    out = tmp_path / "out"
    assert run(["range", "--config", cfg, "--out", str(out)]) == 2
    assert "rule" in capsys.readouterr().err


def test_spectrum_command(tmp_path):
    cfg = write_config(tmp_path, "job.json", {"C": GEO_C, "T": PHASE_T, "n": 6})
    out = tmp_path / "out"
    assert run(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["mode"] == "exhaustive"
    assert (out / "spectrum.csv").exists()
    assert (out / "spectrum.svg").exists()
    assert (out / "spectrum.png").exists()


def test_converge_command_reaches_tolerance(tmp_path):
    cfg = write_config(tmp_path, "job.json", {
        "C": GEO_C, "T": PHASE_T, "sizes": [8, 16, 32],
        "samples_per_size": 300, "hausdorff_tol": 0.08, "seed": 3})
    out = tmp_path / "out"
    assert run(["converge", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["converged"]
    for rec in report["records"]:
        assert (out / rec["cloud_file"]).exists()
    for rec in report["records"][1:]:
        assert rec["forward_defect"] < rec["tail_bound"]
    assert (out / "converge.png").exists()
    assert (out / "final.svg").exists()


def test_converge_command_flags_non_convergence(tmp_path):
    cfg = write_config(tmp_path, "job.json", {
        "C": GEO_C, "T": PHASE_T, "sizes": [4, 8],
        "samples_per_size": 100, "hausdorff_tol": 1e-9, "seed": 1})
    out = tmp_path / "out"
    assert run(["converge", "--config", cfg, "--out", str(out)]) == 3


def test_converge_projected_mode_refuses_non_compact(tmp_path, capsys):
    cfg = write_config(tmp_path, "job.json", {
        "C": GEO_C, "T": BOUNDED_T, "sizes": [4, 8], "mode": "projected",
        "samples_per_size": 50})
    out = tmp_path / "out"
    assert run(["converge", "--config", cfg, "--out", str(out)]) == 4
    assert "compact" in capsys.readouterr().err


def test_converge_projected_mode_runs_for_compact(tmp_path):
    cfg = write_config(tmp_path, "job.json", {
        "C": GEO_C, "T": PHASE_T, "sizes": [4, 8], "mode": "projected",
        "samples_per_size": 100, "hausdorff_tol": 1.0, "seed": 2})
    out = tmp_path / "out"
    assert run(["converge", "--config", cfg, "--out", str(out)]) == 0


def test_converge_spectrum_target(tmp_path):
    cfg = write_config(tmp_path, "job.json", {
        "C": GEO_C, "T": PHASE_T, "target": "spectrum", "sizes": [4, 6, 8],
        "samples_per_size": 100, "hausdorff_tol": 0.2, "seed": 5})
    out = tmp_path / "out"
    code = run(["converge", "--config", cfg, "--out", str(out)])
    assert code in (0, 3)
    report = json.loads((out / "report.json").read_text())
    assert report["target"] == "spectrum"


def test_dilate_command(tmp_path):
    cfg = write_config(tmp_path, "job.json", {
        "matrix": [[[0.4, 0.1], [0.2, 0.0]], [[0.0, 0.0], [0.3, -0.2]]]})
    out = tmp_path / "out"
    assert run(["dilate", "--config", cfg, "--out", str(out)]) == 0
    data = json.loads((out / "dilation.json").read_text())
    assert data["unitarity_defect"] <= 1e-12
    assert data["corner_exact"]


def test_essential_command(tmp_path):
    cfg = write_config(tmp_path, "job.json", {"T": PHASE_T, "prefix_len": 64})
    out = tmp_path / "out"
    assert run(["essential", "--config", cfg, "--out", str(out)]) == 0
    data = json.loads((out / "essential.json").read_text())
    assert data["candidates"] == [[0.0, 0.0]]  # compact spec


def test_verify_command(tmp_path):
    out = tmp_path / "out"
    assert run(["verify", "--seed", "5", "--out", str(out)]) == 0
    data = json.loads((out / "verify.json").read_text())
    assert data["passed"]
    assert len(data["checks"]) >= 10


def test_plot_command(tmp_path):
    cfg = write_config(tmp_path, "job.json",
                       {"C": GEO_C, "A": PHASE_T, "n": 6, "count": 100})
    src = tmp_path / "src"
    assert run(["range", "--config", cfg, "--out", str(src)]) == 0
    plot_cfg = write_config(tmp_path, "plot.json", {"source": str(src)})
    out = tmp_path / "plots"
    assert run(["plot", "--config", plot_cfg, "--out", str(out)]) == 0
    assert (out / "cloud_replot.png").exists()


def test_plot_command_rejects_empty_source(tmp_path):
    plot_cfg = write_config(tmp_path, "plot.json", {"source": str(tmp_path)})
    out = tmp_path / "plots"
    assert run(["plot", "--config", plot_cfg, "--out", str(out)]) == 2


def test_missing_config_is_input_error(tmp_path):
    out = tmp_path / "out"
    assert run(["range", "--out", str(out)]) == 2
    assert run(["range", "--config", str(tmp_path / "nope.json"),
                "--out", str(out)]) == 2
