import numpy as np
import pytest

from gesture_bartender import (
    GestureLabel,
    KFoldResult,
    generate_synthetic,
    round_half_up,
    run_kfold,
    run_learning_curve,
    run_split_validation,
)
from gesture_bartender.estimators import ModelKind

from helpers import REF_KFOLD_ACCURACIES


def test_split_validation_reference_support():
    ds, _ = generate_synthetic(seed=1, noise_sigma=0.05)
    result = run_split_validation("knn", ds, test_fraction=0.3, seed=1, model_params={"k": 2})
    assert result.report.total_support == 159
    assert result.matrix.total == 159
    # per-class supports follow the stratified split arithmetic
    assert result.report.by_label(GestureLabel.Credit)["support"] == 24
    assert result.report.by_label(GestureLabel.Init)["support"] == 20


def test_split_validation_perfect_at_sigma_zero():
    ds, _ = generate_synthetic(seed=2, noise_sigma=0.0)
    result = run_split_validation("knn", ds, seed=2)
    assert result.accuracy == 1.0
    assert np.all(result.matrix.counts == np.diag(result.matrix.row_sums()))


def test_split_validation_deterministic():
    ds, _ = generate_synthetic(seed=3, noise_sigma=0.1)
    a = run_split_validation("mlr", ds, seed=3, model_params={"epochs": 30, "learning_rate": 0.1})
    b = run_split_validation("mlr", ds, seed=3, model_params={"epochs": 30, "learning_rate": 0.1})
    np.testing.assert_array_equal(a.matrix.counts, b.matrix.counts)
    assert a.accuracy == b.accuracy


def test_split_validation_misclassification_rows(tmp_path):
    ds, _ = generate_synthetic(seed=4, noise_sigma=0.1)
    result = run_split_validation("knn", ds, seed=4)
    rows = result.misclassification
    assert len(rows) == len(ds)
    train_rows = [r for r in rows if r["role"] == "train"]
    test_rows = [r for r in rows if r["role"] == "test"]
    assert len(train_rows) == 369 and len(test_rows) == 159
    for r in test_rows:
        assert r["correct"] == str(r["true"] == r["predicted"]).lower()
    for r in train_rows:
        assert r["predicted"] == "" and r["correct"] == ""
    path = tmp_path / "mis.csv"
    result.misclassification_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "pc1,pc2,true,predicted,role,correct"
    assert len(lines) == len(ds) + 1


def test_kfold_reference_mean_display():
    result = KFoldResult(
        fold_accuracies=list(REF_KFOLD_ACCURACIES),
        mean_accuracy=float(np.mean(REF_KFOLD_ACCURACIES)),
    )
    assert round_half_up(result.mean_accuracy) == 0.84
    table = result.format_table()
    assert table.splitlines()[-1].startswith("Average")
    assert "0.84" in table.splitlines()[-1]


def test_kfold_mean_is_arithmetic_and_permutation_invariant():
    assert np.mean(REF_KFOLD_ACCURACIES) == pytest.approx(0.844)
    shuffled = list(reversed(REF_KFOLD_ACCURACIES))
    assert np.mean(shuffled) == pytest.approx(np.mean(REF_KFOLD_ACCURACIES))


def test_kfold_all_perfect():
    ds, _ = generate_synthetic(seed=5, noise_sigma=0.0)
    result = run_kfold("knn", ds, k=5, seed=5)
    assert len(result.fold_accuracies) == 5
    assert result.mean_accuracy == 1.0


def test_kfold_runs_each_fold_once():
    ds, _ = generate_synthetic(seed=6, noise_sigma=0.1)
    result = run_kfold("knn", ds, k=5, seed=6)
    assert len(result.fold_accuracies) == 5
    assert 0.9 <= result.mean_accuracy <= 1.0
    again = run_kfold("knn", ds, k=5, seed=6)
    assert result.fold_accuracies == again.fold_accuracies


def test_learning_curve_shape_and_determinism():
    ds, _ = generate_synthetic(seed=7, noise_sigma=0.1)
    curve = run_learning_curve(
        ds,
        ["knn", "mlr"],
        sizes=[50, 100],
        repeats=2,
        seed=7,
        model_params={ModelKind.MLR: {"epochs": 50, "learning_rate": 0.5}},
    )
    assert len(curve.points) == 4  # 2 sizes x 2 models
    assert len(curve.for_model(ModelKind.KNN)) == 2
    sizes = [p.n_samples for p in curve.for_model(ModelKind.KNN)]
    assert sizes == [50, 100]
    again = run_learning_curve(
        ds,
        ["knn", "mlr"],
        sizes=[50, 100],
        repeats=2,
        seed=7,
        model_params={ModelKind.MLR: {"epochs": 50, "learning_rate": 0.5}},
    )
    assert [(p.accuracy_mean, p.accuracy_std) for p in curve.points] == [
        (p.accuracy_mean, p.accuracy_std) for p in again.points
    ]


def test_learning_curve_csv(tmp_path):
    ds, _ = generate_synthetic(seed=8, noise_sigma=0.05)
    curve = run_learning_curve(
        ds,
        ["knn"],
        sizes=[50, 100],
        seed=8,
    )
    path = tmp_path / "curve.csv"
    curve.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,model,accuracy_mean,accuracy_std"
    assert len(lines) == 3
    assert lines[1].startswith("50,Knn,")


def test_learning_curve_size_errors():
    ds, _ = generate_synthetic(seed=9, noise_sigma=0.05)
    with pytest.raises(ValueError):
        run_learning_curve(ds, ["knn"], sizes=[600], seed=9)
    with pytest.raises(ValueError):
        run_learning_curve(ds, ["knn"], sizes=[], seed=9)
