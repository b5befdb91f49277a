import json
import os

import pytest

from hdl.__main__ import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, main
from hdl.experiments.bias_sweep import BiasSweepExperiment, decreases_with_beta

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
SPLIT_INPUTS = [
    "--set", "annotations=%s" % os.path.join(FIXTURES, "records.jsonl"),
    "--set", "predictions=%s" % os.path.join(FIXTURES, "predictions.jsonl"),
]

RUNS = {
    'toy-sim': ("toy_sim.yaml", [ ], ["trace_case1_random_regression.csv", "trace_case4_near_gaussian_detection.csv", "snapshot_case2_far_gaussian_debiased_regression_010.csv", "trajectories.svg"]),
    'bias-sweep': ("bias_sweep.yaml", [ ], ["bias_sweep.csv", "bias_sweep.svg"]),
    'epe-verify': ("epe_verify.yaml", [ ], ["epe_trials.csv"]),
    'sigma-lab': ("sigma_lab.yaml", [ ], ["sigma_star.csv", "db_curves.csv", "db_curves.svg"]),
    'chi2': ("chi2.yaml", [ ], ["chi2.csv"]),
    'grad-check': ("grad_check.yaml", [ ], ["grad_check.csv"]),
    'split': ("split.yaml", SPLIT_INPUTS, ["split_records.csv", "split_joints_size.csv", "split_joints_occlusion.csv", "split_epe_joints_size.csv"]),
}


def run(command, out, *extra):
    name, inputs, _ = RUNS[command]
    return main([command, "--config", os.path.join(FIXTURES, name), "--out", str(out)] + inputs + list(extra))

def contents(d):
    return { name: open(os.path.join(d, name), 'rb').read() for name in sorted(os.listdir(d)) }

def summary(d):
    with open(os.path.join(d, "summary.json")) as f:
        return json.load(f)


def test_every_subcommand(tmp_path):
    for command, (_, _, files) in RUNS.items():
        out = tmp_path / command
        assert run(command, out) == EXIT_OK, command
        for name in files + ["summary.json"]:
            assert (out / name).is_file(), (command, name)
        assert not [ n for n in os.listdir(out) if n.endswith(".tmp") ]

def test_byte_identical_reruns(tmp_path):
    for command in RUNS:
        run(command, tmp_path / "a" / command, "--threads", "1")
        run(command, tmp_path / "b" / command, "--threads", "4")
        a, b = contents(tmp_path / "a" / command), contents(tmp_path / "b" / command)
        assert a.keys() == b.keys(), command
        for name in a:
            assert a[name] == b[name], (command, name)

def test_split_golden(tmp_path):
    assert run("split", tmp_path) == EXIT_OK
    golden = os.path.join(FIXTURES, "golden_split")
    for name in os.listdir(golden):
        with open(os.path.join(golden, name), 'rb') as f:
            assert (tmp_path / name).read_bytes() == f.read(), name
    s = summary(tmp_path)
    assert s['records'] == 3
    assert s['combined'] == {'easy': 1, 'medium': 1, 'hard': 1, 'unclassified': 0}
    assert s['mean_epe'] == pytest.approx(73 / 24.0)

def test_split_without_predictions(tmp_path):
    rc = main(["split", "--out", str(tmp_path), "--set", "annotations=%s" % os.path.join(FIXTURES, "records.jsonl")])
    assert rc == EXIT_OK
    assert not (tmp_path / "split_epe_joints_size.csv").exists()
    assert "mean_epe" not in summary(tmp_path)

def test_summaries(tmp_path):
    run("toy-sim", tmp_path / "toy")
    s = summary(tmp_path / "toy")
    assert s['case4_near_gaussian_detection']['iterations_to_argmax'] == 0
    assert s['case1_random_detection']['iterations_to_argmax'] <= 1
    assert s['case2_far_gaussian_regression']['iterations_run'] == 20
    assert set(s['case4_collapse']) >= {'a_s2_uncompensated', 'a_s2_compensated', 'uncompensated_more_localized'}
    run("epe-verify", tmp_path / "epe")
    s = summary(tmp_path / "epe")
    assert s['trials'] == 500 and s['violations'] == 0 and s['strict_failures'] == 0
    run("sigma-lab", tmp_path / "sigma")
    s = summary(tmp_path / "sigma")
    assert s['failures'] == []
    assert s['sigma_star']['sigma_true=2,delta_mu=0'] == 2.0
    run("bias-sweep", tmp_path / "bias")
    s = summary(tmp_path / "bias")
    assert s['compensated_worse_cells'] == 0
    assert s['raw_error_decreases_with_beta'] is True
    assert s['max_compensated_error'] < 0.05
    run("grad-check", tmp_path / "grad")
    s = summary(tmp_path / "grad")
    assert s['checks'] == 8 and s['failed'] == 0

def test_chi2_reads_heatmap_files(tmp_path):
    files = [ os.path.join(FIXTURES, "heatmap.csv"), os.path.join(FIXTURES, "heatmap.hmap") ]
    rc = main(["chi2", "--out", str(tmp_path), "--set", "heatmaps=%s" % json.dumps(files), "--set", "s=1"])
    assert rc == EXIT_OK
    lines = (tmp_path / "chi2.csv").read_text().splitlines()
    assert lines[0].startswith("heatmap,sigma=1,")
    assert lines[1].split(",")[0] == "heatmap.csv" and lines[2].split(",")[0] == "heatmap.hmap"
    assert lines[1].split(",")[1:] == lines[2].split(",")[1:]

def test_synthetic_chi2_prefers_narrow_templates(tmp_path):
    assert run("chi2", tmp_path) == EXIT_OK
    s = summary(tmp_path)
    assert set(s) == {"gaussian_sigma=1", "gaussian_sigma=2"}
    assert all(v['best_sigma'] <= 1.0 for v in s.values())

def test_usage_errors(tmp_path):
    assert main(["epe-verify", "--config", str(tmp_path / "missing.yaml"), "--out", str(tmp_path)]) == EXIT_USAGE
    assert main(["epe-verify", "--out", str(tmp_path), "--set", "gamma=0.5"]) == EXIT_USAGE
    assert main(["epe-verify", "--out", str(tmp_path), "--set", "trials"]) == EXIT_USAGE
    assert main(["split", "--out", str(tmp_path)]) == EXIT_USAGE
    assert main(["split", "--out", str(tmp_path), "--set", "annotations=%s" % (tmp_path / "none.jsonl")]) == EXIT_USAGE
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "a", "joints": [[1, 2, 7]], "bbox": [10, 10]}\n')
    assert main(["split", "--out", str(tmp_path), "--set", "annotations=%s" % bad]) == EXIT_USAGE
    assert main(["chi2", "--out", str(tmp_path), "--set", "heatmaps=[%s]" % (tmp_path / "none.csv")]) == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2

def test_verification_failure(tmp_path):
    assert run("grad-check", tmp_path, "--set", "tol=0") == EXIT_VERIFICATION
    assert summary(tmp_path)['failed'] == 8
    assert (tmp_path / "grad_check.csv").is_file()

def test_raw_error_trend():
    assert decreases_with_beta([1, 10, 20], [0.3, 0.1, 0.01])
    assert decreases_with_beta([20, 1, 10], [0.01, 0.3, 0.1])
    assert decreases_with_beta([1, 10, 10], [0.3, 0.1, 0.2])
    assert not decreases_with_beta([1, 10, 20], [0.3, 0.3, 0.01])
    assert not decreases_with_beta([1, 10, 20], [0.1, 0.3, 0.01])

def test_flat_raw_error_fails_bias_sweep(tmp_path, monkeypatch):
    def flat(self, sigma, beta, mu):
        return (sigma, beta, mu.x, mu.y, 0.0, 0.0, 0.0, 0.0, 1.0, 0.5)
    monkeypatch.setattr(BiasSweepExperiment, "cell", flat)
    assert run("bias-sweep", tmp_path) == EXIT_VERIFICATION
    s = summary(tmp_path)
    assert s['raw_error_decreases_with_beta'] is False
    assert s['compensated_worse_cells'] == 0

def test_flags_override_config(tmp_path):
    assert run("epe-verify", tmp_path, "--seed", "4", "--set", "trials=30") == EXIT_OK
    assert summary(tmp_path)['trials'] == 30
    a = (tmp_path / "epe_trials.csv").read_bytes()
    assert run("epe-verify", tmp_path, "--seed", "5", "--set", "trials=30") == EXIT_OK
    assert (tmp_path / "epe_trials.csv").read_bytes() != a


if __name__ == "__main__":
    import tempfile
    with tempfile.TemporaryDirectory() as d:
        test_every_subcommand(__import__("pathlib").Path(d))
