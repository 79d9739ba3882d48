import json
import subprocess
import sys

import pytest

from gesture_bartender.cli import main

CLI = [sys.executable, "-m", "gesture_bartender.cli"]


def run_cli(*args, **kwargs):
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, timeout=300, **kwargs
    )


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """generate -> train once for the whole module."""
    ws = tmp_path_factory.mktemp("cli")
    data = ws / "d.csv"
    model = ws / "m.json"
    r = run_cli("generate", "--seed", "1", "--out", str(data))
    assert r.returncode == 0, r.stderr
    r = run_cli("train", "--model", "knn", "--data", str(data), "--out", str(model))
    assert r.returncode == 0, r.stderr
    return {"dir": ws, "data": data, "model": model}


def test_pipeline_reaches_159_test_samples(workspace):
    r = run_cli(
        "evaluate",
        "--model-file", str(workspace["model"]),
        "--data", str(workspace["data"]),
        "--split", "0.3",
        "--format", "json",
        "--out-dir", str(workspace["dir"]),
    )
    assert r.returncode == 0, r.stderr
    report = json.loads(r.stdout)
    assert report["report"]["weighted_avg"]["support"] == 159
    assert (workspace["dir"] / "confusion_matrix.csv").exists()
    mis = (workspace["dir"] / "misclassification.csv").read_text().splitlines()
    assert mis[0] == "pc1,pc2,true,predicted,role,correct"
    assert len(mis) == 529


def test_evaluate_text_table(workspace):
    r = run_cli(
        "evaluate",
        "--model", "knn",
        "--data", str(workspace["data"]),
        "--out-dir", str(workspace["dir"]),
    )
    assert r.returncode == 0
    assert "Average / Total" in r.stdout
    assert "Precision" in r.stdout


def test_kfold_prints_folds_and_mean(workspace):
    r = run_cli("kfold", "--model", "knn", "--data", str(workspace["data"]), "--k", "5")
    assert r.returncode == 0, r.stderr
    lines = r.stdout.strip().splitlines()
    assert lines[0].split() == ["k-Fold", "1", "2", "3", "4", "5"]
    assert len(lines[1].split()) == 5
    assert lines[2].startswith("Average")
    r2 = run_cli(
        "kfold", "--model", "knn", "--data", str(workspace["data"]), "--k", "5",
        "--format", "json",
    )
    payload = json.loads(r2.stdout)
    assert len(payload["fold_accuracies"]) == 5


def test_classify_features_prints_label(workspace):
    r = run_cli(
        "classify",
        "--features", "0,1,1,1,1,0,1,1,1,1",
        "--model-file", str(workspace["model"]),
    )
    assert r.returncode == 0, r.stderr
    assert r.stdout.strip() == "Init"


def test_classify_frames_file(workspace, tmp_path):
    frames = tmp_path / "f.jsonl"
    r = run_cli(
        "generate", "--seed", "3", "--out", str(tmp_path / "x.csv"),
        "--frames-out", str(frames), "--noise-sigma", "0",
        "--counts", "Init=2,Cash=2",
    )
    assert r.returncode == 0, r.stderr
    r = run_cli(
        "classify", "--frames", str(frames), "--model-file", str(workspace["model"])
    )
    assert r.returncode == 0
    assert r.stdout.split() == ["Init", "Init", "Cash", "Cash"]


def test_generate_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli("generate", "--seed", "7", "--out", str(a)).returncode == 0
    assert run_cli("generate", "--seed", "7", "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_curve_writes_csv(workspace, tmp_path):
    out = tmp_path / "curve.csv"
    r = run_cli(
        "curve",
        "--data", str(workspace["data"]),
        "--models", "knn",
        "--sizes", "50,100",
        "--out", str(out),
    )
    assert r.returncode == 0, r.stderr
    lines = out.read_text().splitlines()
    assert lines[0] == "n,model,accuracy_mean,accuracy_std"
    assert len(lines) == 3


def test_pca_writes_projection(workspace, tmp_path):
    out = tmp_path / "proj.csv"
    r = run_cli("pca", "--data", str(workspace["data"]), "--out", str(out))
    assert r.returncode == 0, r.stderr
    lines = out.read_text().splitlines()
    assert lines[0] == "pc1,pc2,label"
    assert len(lines) == 529


def test_help_for_every_subcommand():
    commands = ["generate", "train", "evaluate", "kfold", "curve", "pca", "classify", "serve"]
    for cmd in commands:
        r = run_cli(cmd, "--help")
        assert r.returncode == 0, cmd
        assert "usage" in r.stdout.lower()
    # defaults are documented
    r = run_cli("train", "--help")
    assert "default: 0.01" in r.stdout
    assert "default: 42" in r.stdout


def test_usage_error_exits_2():
    r = run_cli("train", "--model", "bogus", "--data", "x", "--out", "y")
    assert r.returncode == 2
    assert r.stderr


def test_data_error_exits_1(tmp_path):
    r = run_cli("train", "--model", "knn", "--data", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "m.json"))
    assert r.returncode == 1
    assert "error" in r.stderr.lower()


def test_cross_interface_consistency(workspace):
    """CLI classify and the HTTP endpoint agree on the same input."""
    from fastapi.testclient import TestClient

    from gesture_bartender.service import create_app

    features = "0,1,1,1,1,0,1,0,0,0"
    r = run_cli("classify", "--features", features, "--model-file", str(workspace["model"]))
    cli_label = r.stdout.strip()
    app = create_app(model_path=str(workspace["model"]))
    with TestClient(app) as client:
        resp = client.post(
            "/api/classify", json={"features": [float(v) for v in features.split(",")]}
        )
        assert resp.json()["label"] == cli_label == "Alcohol"


def test_main_callable_direct(tmp_path):
    # the entry point is importable and returns exit codes rather than raising
    out = tmp_path / "d.csv"
    assert main(["generate", "--seed", "2", "--out", str(out)]) == 0
    assert main(["train", "--model", "knn", "--data", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "m.json")]) == 1
