import json
import math

import pandas as pd
import pytest

from quantum_mlp.config.settings import RunConfig, load_run_config, read_config_file
from quantum_mlp.src.core import ConfigError, ExperimentError, TrainingTrace
from quantum_mlp.src.equivalence import EquivalenceReport
from quantum_mlp.src.experiments import (BENCH_COLUMNS, TrialSummary, bench_runtime, grid_beta, is_successful,
                                         main, parse_overrides, run_track, steps_to_threshold, summarize,
                                         summarize_dir, summarize_trial)
from quantum_mlp.src.experiments import tracks
from tests.conftest import CONFIG_DIR, MNIST_DIR, requires_mnist


def test_steps_to_threshold():
    assert steps_to_threshold([0.5, 0.6, 0.71, 0.9]) == 2
    assert steps_to_threshold([0.5, 0.70, 0.69]) is None
    assert steps_to_threshold([0.8, 0.9], steps=[3, 4]) == 3


def test_success_rule():
    assert is_successful([0.5] + [0.7] * 5)
    assert is_successful([0.55] + [0.65] * 5)
    assert not is_successful([0.6] + [0.68] * 5)
    assert not is_successful([0.4] + [0.6] * 5)
    assert not is_successful([0.5, float("nan"), 0.9])
    assert not is_successful([0.9])
    # chỉ tính 5 bước cuối
    assert is_successful([0.5, 0.0, 0.0, 0.9, 0.9, 0.9, 0.9, 0.9])


def test_summarize_trial_from_trace():
    trace = TrainingTrace(track="classical1", seed=5)
    for step, acc in enumerate([0.5, 0.65, 0.75, 0.8, 0.85, 0.9, 0.9]):
        trace.record(step, train_loss=0.1, test_accuracy=acc)
    summary = summarize_trial(trace, trial_index=2)
    assert summary.steps_to_70 == 2
    assert summary.successful
    assert summary.seed == 5
    assert summary.final_accuracy == 0.9


def test_summarize_examples():
    perfect = [TrialSummary("classical1", i, i, 1.0, 3, True) for i in range(4)]
    row = summarize(perfect)
    assert (row.mean_accuracy, row.median_steps_to_70, row.success_rate) == (1.0, 3.0, 100.0)

    failed = [TrialSummary("classical2", i, i, 0.5, None, False) for i in range(3)]
    row = summarize(failed)
    assert row.mean_accuracy is None
    assert row.median_steps_to_70 is None
    assert row.success_rate == 0.0

    mixed = [TrialSummary("quantum-sim", 0, 0, 0.9, 4, True),
             TrialSummary.failure("quantum-sim", 1, 1, "sampler")]
    row = summarize(mixed)
    assert row.successful == 1 and row.success_rate == 50.0

    with pytest.raises(ValueError):
        summarize([])


def test_bench_runtime(tmp_path):
    table = bench_runtime([10000, 10], repeats=3, batch=500, output_path=tmp_path / "bench.csv")
    assert list(table.columns) == BENCH_COLUMNS
    assert len(table) == 4
    for workload in ("mlp_forward", "gibbs_sweep"):
        rows = table[table["workload"] == workload].sort_values("size")
        assert rows["size"].tolist() == [10, 10000]
        assert rows["median_seconds"].is_monotonic_increasing
    assert (tmp_path / "bench.csv").is_file()
    with pytest.raises(ValueError):
        bench_runtime([0, 10], repeats=1)


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(
        "[run]\ntrack = classical2\ntrials = 3\n\n"
        "[training]\nsteps = 7\nlearning_rate = 0.05\n\n"
        "[sampler]\nbeta_sim = none\nreads = 200\n",
        encoding="utf-8",
    )
    assert read_config_file(path)["steps"] == "7"
    config = load_run_config(path, {"steps": "9", "store_db": "true"})
    assert config.track == "classical2"
    assert config.trials == 3
    assert config.steps == 9
    assert config.learning_rate == 0.05
    assert config.beta_sim is None
    assert config.store_db is True
    assert config.sampler_config(seed=4).reads == 200
    assert config.adam_config().learning_rate == 0.05


@pytest.mark.parametrize("overrides", [
    {"no_such_key": "1"},
    {"sizes": "10,0"},
    {"train_count": "7"},
    {"class_a": "3", "class_b": "3"},
    {"track": "classical1", "beta_grid": "4,16"},
    {"beta_start": "2", "beta_sim": "1"},
])
def test_invalid_config(overrides):
    with pytest.raises(ConfigError):
        load_run_config(None, overrides)


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "missing.ini")
    bad = tmp_path / "bad.ini"
    bad.write_text("[network]\nn_hidden = 4\n[training]\nn_hidden = 5\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        read_config_file(bad)
    unknown = tmp_path / "unknown.ini"
    unknown.write_text("[extra]\nsteps = 1\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        read_config_file(unknown)


def test_parse_overrides():
    assert parse_overrides(["--learning-rate", "0.1", "--store_db", "--steps=3"]) == {
        "learning_rate": "0.1", "store_db": "true", "steps": "3",
    }
    with pytest.raises(ConfigError):
        parse_overrides(["steps"])


def _synthetic(tmp_path, **kwargs) -> RunConfig:
    values = {
        "dataset": "synthetic", "synthetic_inputs": 4, "synthetic_samples": 60, "train_count": 20,
        "trials": 2, "steps": 5, "batch_size": 5, "n_hidden": 3, "output_dir": str(tmp_path),
        "reads": 30, "burn_in": 5, "num_sweeps": 20,
    }
    values.update(kwargs)
    return load_run_config(None, values)


@pytest.mark.parametrize("track", ["classical1", "classical2", "quantum-sim"])
def test_run_track_synthetic(tmp_path, track):
    result = run_track(_synthetic(tmp_path, track=track))
    out = tmp_path / track
    assert result.output_dir == out
    assert len(result.trials) == 2
    assert not any(t.failed for t in result.trials)
    frame = pd.read_csv(out / "trace_0.csv")
    assert frame["step"].tolist() == list(range(6))
    assert frame["seed"].iloc[0] == 0
    payload = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert payload["summary"]["trials"] == 2
    assert payload["trials"][1]["seed"] == 1


def test_run_track_is_deterministic(tmp_path):
    first = run_track(_synthetic(tmp_path / "a", track="classical2", trials=1))
    second = run_track(_synthetic(tmp_path / "b", track="classical2", trials=1))
    a = (first.output_dir / "trace_0.csv").read_text(encoding="utf-8")
    b = (second.output_dir / "trace_0.csv").read_text(encoding="utf-8")
    assert a == b


def test_run_track_equivalence_and_bqm_dump(tmp_path):
    config = _synthetic(tmp_path, track="equivalence", trials=1, equivalence_sampler="exact", dump_bqm=True)
    result = run_track(config)
    out = result.output_dir
    assert (out / "equivalence_0.csv").is_file()
    assert (out / "equivalence_0.json").is_file()
    header = (out / "bqm_dump.txt").read_text(encoding="utf-8").splitlines()[0]
    assert header.split()[0] == str(config.n_hidden + config.n_outputs)


def test_quantum_sim_dump_writes_ising_and_beta_estimate(tmp_path):
    config = _synthetic(tmp_path, track="quantum-sim", trials=1, steps=1, dump_bqm=True,
                        reads=200, num_sweeps=100, init_std=1.0)
    out = run_track(config).output_dir
    n = config.n_hidden + config.n_outputs
    ising_lines = (out / "ising_dump.txt").read_text(encoding="utf-8").splitlines()
    assert ising_lines[0].split()[0] == str(n)
    assert [line.split()[:2] for line in ising_lines[1:n + 1]] == [[str(i), str(i)] for i in range(n)]
    payload = json.loads((out / "beta_estimate.json").read_text(encoding="utf-8"))
    assert payload["beta_sim"] == config.beta_eff
    assert payload["reads"] == 200
    assert payload["beta_estimate"] > 0


def test_failed_trials_are_recorded(tmp_path, monkeypatch):
    def broken(*args, **kwargs):
        raise RuntimeError("sampler hỏng")

    monkeypatch.setattr(tracks, "run_trial", broken)
    result = run_track(_synthetic(tmp_path, track="classical2"))
    assert all(t.failed for t in result.trials)
    assert result.row.success_rate == 0.0
    assert result.trials[0].error == "sampler hỏng"
    assert math.isnan(result.trials[0].final_accuracy)


def test_missing_dataset_is_reported(tmp_path):
    config = load_run_config(None, {"dataset": "mnist", "data_dir": str(tmp_path / "none"),
                                    "output_dir": str(tmp_path)})
    with pytest.raises(ExperimentError, match="Đọc dữ liệu thất bại"):
        run_track(config)


def test_beta_grid(tmp_path):
    config = _synthetic(tmp_path, track="quantum-sim", trials=1, steps=2, beta_grid="4,16")
    table = grid_beta(config, config.beta_grid)
    assert table["beta_eff"].tolist() == [4.0, 16.0]
    assert (tmp_path / "quantum-sim" / "beta_grid.csv").is_file()
    assert (tmp_path / "quantum-sim" / "beta_4" / "summary.json").is_file()


def test_summarize_dir(tmp_path):
    run_track(_synthetic(tmp_path, track="classical1"))
    table = summarize_dir(tmp_path)
    assert table["track"].tolist() == ["classical1"]
    assert table["trials"].iloc[0] == 2
    with pytest.raises(FileNotFoundError):
        summarize_dir(tmp_path / "missing")


def test_cli_train_and_summarize(tmp_path, capsys):
    code = main(["train", "--track", "classical1", "--dataset", "synthetic", "--train_count", "20",
                 "--synthetic_samples", "60", "--synthetic_inputs", "3", "--trials", "1", "--steps", "3",
                 "--n_hidden", "2", "--output_dir", str(tmp_path)])
    assert code == 0
    assert "success_rate" in capsys.readouterr().out
    assert main(["summarize", str(tmp_path)]) == 0
    assert (tmp_path / "summary_table.csv").is_file()


@pytest.mark.parametrize("argv", [
    ["train", "--track", "classical1", "--no_such_key", "1"],
    ["train", "--track", "nope"],
    ["bench", "--sizes", "0,10"],
])
def test_cli_config_errors(argv, capsys):
    assert main(argv) == 2
    payload = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert payload["type"] in ("ConfigError", "CliArgumentError")
    assert payload["error"]


@pytest.mark.parametrize("name, track", [("classical2_mnist01.ini", "classical2"),
                                         ("quantum_sim_mnist01.ini", "quantum-sim"),
                                         ("equivalence_mnist01.ini", "equivalence")])
def test_shipped_configs_are_valid(name, track):
    config = load_run_config(CONFIG_DIR / name)
    assert config.track == track
    assert (config.class_a, config.class_b) == (0, 1)
    assert config.n_hidden == 32


@pytest.fixture(scope="module")
def mnist_tracks(tmp_path_factory):
    """Chạy ba nhánh trên MNIST 0/1 (20 ảnh, batch 5, lr 0.1, 20 bước, 5 lượt)."""
    output = tmp_path_factory.mktemp("mnist_tracks")
    overrides = {"data_dir": MNIST_DIR, "output_dir": str(output)}
    rows = {}
    for track in ("classical1", "classical2"):
        config = load_run_config(CONFIG_DIR / "classical2_mnist01.ini", {**overrides, "track": track})
        rows[track] = run_track(config).row
    config = load_run_config(CONFIG_DIR / "quantum_sim_mnist01.ini", overrides)
    rows["quantum-sim"] = run_track(config).row
    return rows


@pytest.mark.slow
@requires_mnist
@pytest.mark.parametrize("track", ["classical1", "classical2"])
def test_mnist_zero_one_classical_tracks(mnist_tracks, track):
    row = mnist_tracks[track]
    assert row.trials == 5
    assert row.successful >= 1
    assert row.mean_accuracy >= 0.95
    assert row.median_steps_to_70 is not None
    assert row.median_steps_to_70 <= 12


@pytest.mark.slow
@requires_mnist
def test_mnist_zero_one_quantum_sim_tracks_classical2(mnist_tracks):
    quantum, classical = mnist_tracks["quantum-sim"], mnist_tracks["classical2"]
    assert quantum.successful >= 1
    assert abs(quantum.mean_accuracy - classical.mean_accuracy) <= 0.05


@pytest.mark.slow
@requires_mnist
def test_mnist_equivalence_desk_scale(tmp_path):
    config = load_run_config(CONFIG_DIR / "equivalence_mnist01.ini",
                             {"data_dir": MNIST_DIR, "output_dir": str(tmp_path)})
    assert (config.n_hidden, config.train_count, config.steps) == (32, 200, 50)
    result = run_track(config)
    report = EquivalenceReport.from_json(result.output_dir / "equivalence_0.json")
    assert report.settings["n_inputs"] == 784
    assert len(report) == 51

    kl = report.series("kl_nats")
    assert kl[-1] < 0.5 * kl.max()
    final = report.rows[-1]
    assert abs(final["acc_mlp_ebm_weights"] - final["acc_mlp_mlp_weights"]) <= 0.05
