import json
from pathlib import Path

import numpy as np
import pytest

from sparse_sysid.cli import main
from sparse_sysid.experiments import (
    ExperimentConfig,
    example1_truth,
    example1_zero_coords,
    example2_truth,
    example2_zero_coords,
    run_example1,
    run_example2,
)


def small_config(experiment: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment=experiment,
        seeds=(1, 2),
        horizon=400,
        checkpoint_schedule=(125, 250, 400),
    )


def read(path: Path) -> str:
    return path.read_text()


def test_example1_artifacts_and_summary(tmp_path):
    out = tmp_path / "ex1"
    summary = run_example1(small_config("example1"), out)
    for name in (
        "seed_1_checkpoints.csv",
        "seed_2_checkpoints.csv",
        "ls_vs_sparse.csv",
        "diagnostics.csv",
        "support_frequency.csv",
        "summary.json",
        "config.json",
    ):
        assert (out / name).exists(), name
    assert summary.failed_seeds == []
    assert summary.checkpoints == [125, 250, 400]
    # checkpoint CSV carries one row per coordinate per checkpoint
    lines = read(out / "seed_1_checkpoints.csv").splitlines()
    assert lines[0] == "N,coord_index,ls,modified,sparse,in_support_zero,truth"
    assert len(lines) == 1 + 3 * 14


def test_example1_summary_recomputable_from_csv(tmp_path):
    out = tmp_path / "ex1"
    summary = run_example1(small_config("example1"), out)
    # zero frequencies recomputed from the per-seed checkpoint files
    counts = {}
    for seed in (1, 2):
        for line in read(out / f"seed_{seed}_checkpoints.csv").splitlines()[1:]:
            n, coord, _ls, _mod, sparse, in_zero, _truth = line.split(",")
            if int(n) == 400:
                counts[int(coord)] = counts.get(int(coord), 0) + int(in_zero)
                assert (float(sparse) == 0.0) == bool(int(in_zero))
    for coord, count in counts.items():
        assert summary.zero_frequency["400"][str(coord)] == pytest.approx(count / 2)


def test_example1_rerun_byte_identical(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    run_example1(small_config("example1"), out_a)
    run_example1(small_config("example1"), out_b)
    for path_a in sorted(out_a.iterdir()):
        path_b = out_b / path_a.name
        assert path_a.read_bytes() == path_b.read_bytes(), path_a.name


def test_example2_artifacts(tmp_path):
    out = tmp_path / "ex2"
    summary = run_example2(small_config("example2"), out)
    assert (out / "seed_1_run.csv").exists()
    assert (out / "seed_1_checkpoints.csv").exists()
    assert summary.tracking_quantiles is not None
    assert summary.extras["stability"]
    lines = read(out / "seed_1_run.csv").splitlines()
    assert lines[0] == "k,y,y_star,u0,u,dither_scale,tracking_loss"
    assert len(lines) == 401


def test_example2_rerun_byte_identical(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    run_example2(small_config("example2"), out_a)
    run_example2(small_config("example2"), out_b)
    for path_a in sorted(out_a.iterdir()):
        path_b = out_b / path_a.name
        assert path_a.read_bytes() == path_b.read_bytes(), path_a.name


def test_config_json_round_trip():
    config = small_config("example1")
    clone = ExperimentConfig.from_json(config.to_json())
    assert clone.to_json() == config.to_json()


def test_config_validation():
    with pytest.raises(ValueError, match="unknown experiment"):
        ExperimentConfig(experiment="example3")
    with pytest.raises(ValueError, match="distinct"):
        ExperimentConfig(experiment="example1", seeds=(1, 1))
    with pytest.raises(ValueError, match="at least one seed"):
        ExperimentConfig(experiment="example1", seeds=())
    with pytest.raises(ValueError, match="below the largest checkpoint"):
        ExperimentConfig(experiment="example1", horizon=100, checkpoint_schedule=(125,))


def test_truth_vectors_and_zero_sets():
    assert example1_zero_coords() == frozenset({4, 6, 8, 10, 12, 14})
    assert example2_zero_coords() == frozenset({3})
    np.testing.assert_allclose(example2_truth(), [0.5, 2.0, 0.0, 2.0])
    assert len(example1_truth()) == 14


def test_cli_example1_and_diagnose(tmp_path, capsys):
    out = tmp_path / "cli_ex1"
    code = main([
        "example1", "--out", str(out), "--seeds", "1,2", "--horizon", "400",
    ])
    assert code == 0
    assert (out / "summary.json").exists()
    captured = capsys.readouterr()
    assert "2/2 seeds succeeded" in captured.out

    out2 = tmp_path / "cli_diag"
    code = main([
        "diagnose", "--experiment", "example1", "--out", str(out2),
        "--seeds", "1", "--horizon", "400",
    ])
    assert code == 0
    diag = (out2 / "diagnostics.csv").read_text().splitlines()
    assert diag[0].startswith("seed,n,a3_ratio")
    assert len(diag) > 1


def test_cli_simulate_estimate_round_trip(tmp_path):
    sim_out = tmp_path / "sim"
    code = main([
        "simulate", "--out", str(sim_out), "--experiment", "example1",
        "--n", "400", "--seed", "9",
    ])
    assert code == 0
    assert (sim_out / "dataset.csv").exists()
    assert (sim_out / "spec.json").exists()
    spec_payload = json.loads((sim_out / "spec.json").read_text())
    assert spec_payload["kind"] == "hammerstein"

    est_out = tmp_path / "est"
    code = main([
        "estimate", "--data", str(sim_out / "dataset.csv"), "--out", str(est_out),
        "--checkpoints", "125,250,399", "--lambda-exponent", "0.75",
    ])
    assert code == 0
    lines = (est_out / "checkpoints.csv").read_text().splitlines()
    assert lines[0] == "N,coord_index,ls,modified,sparse,in_support_zero"
    assert len(lines) == 1 + 3 * 14


def test_cli_reports_errors_as_json(tmp_path, capsys):
    code = main(["estimate", "--data", str(tmp_path / "missing.csv"), "--out", str(tmp_path)])
    assert code == 1
    err = capsys.readouterr().err.strip()
    payload = json.loads(err)
    assert payload["error"]
    assert payload["message"]


def test_cli_config_file_flow(tmp_path):
    config = small_config("example1")
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(config.to_json())
    out = tmp_path / "from_cfg"
    code = main(["example1", "--config", str(cfg_path), "--out", str(out)])
    assert code == 0
    assert (out / "summary.json").exists()
    # config echo is byte-identical to the input semantics
    echoed = ExperimentConfig.from_json((out / "config.json").read_text())
    assert echoed.to_json() == config.to_json()
