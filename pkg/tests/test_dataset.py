import json

import numpy as np
import pytest

from gesture_bartender import (
    DEFAULT_CLASS_COUNTS,
    DatasetError,
    GestureLabel,
    GestureTemplate,
    LabeledDataset,
    default_templates,
    extract_features,
    generate_synthetic,
    kfold_partitions,
    load_dataset,
    load_templates,
    parse_label,
    save_dataset_csv,
    stratified_split,
    stratified_subset,
    write_frames_jsonl,
)

from helpers import frame_at_distances


def test_parse_label_variants():
    assert parse_label("Init") == GestureLabel.Init
    assert parse_label("non-alcohol") == GestureLabel.NonAlcohol
    assert parse_label("NON_ALCOHOL") == GestureLabel.NonAlcohol
    with pytest.raises(DatasetError):
        parse_label("Beer")


def test_label_codes_are_stable():
    codes = [int(label) for label in GestureLabel]
    assert codes == [1, 2, 3, 4, 5, 6, 7, 8]
    assert GestureLabel.Credit == 8


def test_csv_row_parse(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("label,f0,f1,f2,f3,f4,f5,f6,f7,f8,f9\nInit,0,0.5,1,0.5,0,0,0.5,1,0.5,0\n")
    ds = load_dataset(path)
    assert len(ds) == 1
    assert GestureLabel(int(ds.y[0])) == GestureLabel.Init
    np.testing.assert_allclose(ds.X[0], [0, 0.5, 1, 0.5, 0, 0, 0.5, 1, 0.5, 0])


def test_csv_range_error_names_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(
        "label,f0,f1,f2,f3,f4,f5,f6,f7,f8,f9\n"
        "Init,0,0.5,1,0.5,0,0,0.5,1,0.5,0\n"
        "Cash,0,0.5,1.2,0.5,0,0,0.5,1,0.5,0\n"
    )
    with pytest.raises(DatasetError, match="line 3"):
        load_dataset(path)


def test_csv_unknown_label(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("label,f0,f1,f2,f3,f4,f5,f6,f7,f8,f9\nBeer,0,0,0,0,1,0,0,0,0,1\n")
    with pytest.raises(DatasetError, match="unknown gesture"):
        load_dataset(path)


def test_jsonl_dataset_runs_extractor(tmp_path):
    # three hand-built frames with known distances; expected features by hand
    frames = [
        (frame_at_distances([1, 2, 3, 4, 5], [5, 4, 3, 2, 1]), "Init"),
        (frame_at_distances([10, 70, 90, 80, 30], [2, 2, 2, 2, 4]), "Cash"),
        (frame_at_distances([0, 8, 8, 8, 8], [0, 4, 4, 0, 0]), "Undo"),
    ]
    path = tmp_path / "frames.jsonl"
    write_frames_jsonl(path, frames)
    ds = load_dataset(path)
    assert len(ds) == 3
    assert [GestureLabel(int(c)).name for c in ds.y] == ["Init", "Cash", "Undo"]
    np.testing.assert_allclose(
        ds.X[0], [0, 0.25, 0.5, 0.75, 1, 1, 0.75, 0.5, 0.25, 0], atol=1e-9
    )
    np.testing.assert_allclose(ds.X[1], [0, 0.75, 1, 0.875, 0.25, 0, 0, 0, 0, 1], atol=1e-9)
    np.testing.assert_allclose(ds.X[2], [0, 1, 1, 1, 1, 0, 1, 1, 0, 0], atol=1e-9)


def test_jsonl_dataset_requires_labels(tmp_path):
    path = tmp_path / "frames.jsonl"
    write_frames_jsonl(path, [(frame_at_distances([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]), None)])
    with pytest.raises(DatasetError, match="no label"):
        load_dataset(path)


def test_default_template_constraints():
    templates = {t.label: np.array(t.extension) for t in default_templates()}
    assert set(templates) == set(GestureLabel)

    # Food and NonAlcohol differ in exactly one position: a ring finger
    diff = np.flatnonzero(templates[GestureLabel.Food] != templates[GestureLabel.NonAlcohol])
    assert diff.tolist() == [8]  # right-hand ring finger

    # Undo and Checkout differ in exactly one position: a thumb
    diff = np.flatnonzero(templates[GestureLabel.Undo] != templates[GestureLabel.Checkout])
    assert len(diff) == 1 and diff[0] in (0, 5)

    # all templates pairwise distinct, every hand spans [0, 1]
    vectors = list(templates.values())
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            assert not np.array_equal(vectors[i], vectors[j])
    for vec in vectors:
        for half in (vec[:5], vec[5:]):
            assert half.min() == 0.0 and half.max() == 1.0


def test_template_validation():
    with pytest.raises(DatasetError):
        GestureTemplate(label=GestureLabel.Init, extension=(0.5,) * 9)
    with pytest.raises(DatasetError):
        GestureTemplate(label=GestureLabel.Init, extension=(0.5,) * 9 + (1.5,))


def test_generate_counts_match_reference():
    ds, frames = generate_synthetic(seed=1, noise_sigma=0.05)
    assert len(ds) == 528
    assert len(frames) == 528
    counts = ds.class_counts()
    assert counts[GestureLabel.Credit] == 80
    assert [counts[l] for l in GestureLabel] == [66, 63, 63, 65, 64, 64, 63, 80]


def test_generate_sigma_zero_equals_templates():
    ds, _ = generate_synthetic(seed=9, noise_sigma=0.0)
    templates = {int(t.label): np.array(t.extension) for t in default_templates()}
    for x, code in zip(ds.X, ds.y):
        np.testing.assert_array_equal(x, templates[int(code)])


def test_generate_deterministic(tmp_path):
    a, frames_a = generate_synthetic(seed=7, noise_sigma=0.05)
    b, frames_b = generate_synthetic(seed=7, noise_sigma=0.05)
    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    save_dataset_csv(a, pa)
    save_dataset_csv(b, pb)
    assert pa.read_bytes() == pb.read_bytes()
    fa, fb = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_frames_jsonl(fa, frames_a)
    write_frames_jsonl(fb, frames_b)
    assert fa.read_bytes() == fb.read_bytes()


def test_generate_frames_consistent_at_sigma_zero():
    _, frames = generate_synthetic(seed=4, noise_sigma=0.0)
    templates = {t.label.name: np.array(t.extension) for t in default_templates()}
    for frame, label in frames:
        np.testing.assert_allclose(extract_features(frame), templates[label], atol=1e-9)


def test_generate_parameter_errors():
    with pytest.raises(DatasetError):
        generate_synthetic(seed=1, noise_sigma=0.5)
    with pytest.raises(DatasetError):
        generate_synthetic(seed=1, counts={GestureLabel.Init: 0})
    templates = [t for t in default_templates() if t.label != GestureLabel.Cash]
    with pytest.raises(DatasetError, match="missing template"):
        generate_synthetic(seed=1, counts={GestureLabel.Cash: 3}, templates=templates)


def test_csv_roundtrip_exact(tmp_path):
    ds, _ = generate_synthetic(seed=2, noise_sigma=0.08)
    path = tmp_path / "ds.csv"
    save_dataset_csv(ds, path)
    loaded = load_dataset(path)
    assert np.max(np.abs(loaded.X - ds.X)) < 1e-12
    np.testing.assert_array_equal(loaded.y, ds.y)


def test_split_sizes_like_reference():
    ds, _ = generate_synthetic(seed=1)
    train, test = stratified_split(ds, 0.30, seed=1)
    assert len(test) == 159
    assert len(train) == 369
    # per-class test sizes are round(count * fraction)
    expected = {1: 20, 2: 19, 3: 19, 4: 20, 5: 19, 6: 19, 7: 19, 8: 24}
    assert {int(l): c for l, c in test.class_counts().items()} == expected


def test_split_even():
    X = np.tile(np.linspace(0, 1, 10).reshape(-1, 1), (1, 10))
    ds = LabeledDataset(X, np.full(10, int(GestureLabel.Food)))
    train, test = stratified_split(ds, 0.5, seed=0)
    assert len(train) == 5 and len(test) == 5


def test_split_disjoint_union_deterministic():
    ds, _ = generate_synthetic(seed=3)
    t1 = stratified_split(ds, 0.3, seed=5)
    t2 = stratified_split(ds, 0.3, seed=5)
    np.testing.assert_array_equal(t1[0].X, t2[0].X)
    np.testing.assert_array_equal(t1[1].X, t2[1].X)
    # partition property: every original row appears exactly once
    stacked = np.vstack([t1[0].X, t1[1].X])
    assert stacked.shape == ds.X.shape
    order = np.lexsort(stacked.T)
    orig_order = np.lexsort(ds.X.T)
    np.testing.assert_array_equal(stacked[order], ds.X[orig_order])


def test_split_class_too_small():
    X = np.vstack([np.zeros(10), np.ones(10) * 0.5, np.ones(10)])
    ds = LabeledDataset(X, np.array([1, 1, 2]))
    with pytest.raises(DatasetError, match="too small"):
        stratified_split(ds, 0.5, seed=0)


def test_kfold_sizes_528():
    ds, _ = generate_synthetic(seed=1)
    folds = kfold_partitions(ds, 5, seed=1)
    sizes = sorted(len(test) for _, test in folds)
    assert sizes == [105, 105, 106, 106, 106]


def test_kfold_partition_property():
    ds, _ = generate_synthetic(seed=2, counts={l: 5 for l in GestureLabel}, noise_sigma=0.1)
    folds = kfold_partitions(ds, 4, seed=3)
    seen = np.zeros(len(ds), dtype=int)
    for train, test in folds:
        assert len(train) + len(test) == len(ds)
        # identify test rows by matching against the original matrix
        for row in test.X:
            matches = np.flatnonzero((ds.X == row).all(axis=1))
            assert len(matches) == 1
            seen[matches[0]] += 1
    assert np.all(seen == 1)


def test_kfold_small():
    X = np.tile(np.linspace(0, 1, 4).reshape(-1, 1), (1, 10))
    ds = LabeledDataset(X, np.array([1, 1, 2, 2]))
    folds = kfold_partitions(ds, 2, seed=0)
    assert [len(test) for _, test in folds] == [2, 2]
    with pytest.raises(DatasetError):
        kfold_partitions(ds, 5, seed=0)
    with pytest.raises(DatasetError):
        kfold_partitions(ds, 1, seed=0)


def test_stratified_subset_proportions():
    ds, _ = generate_synthetic(seed=6)
    sub = stratified_subset(ds, 50, seed=1)
    assert len(sub) == 50
    counts = sub.class_counts()
    assert all(c >= 5 for c in counts.values())  # 528/8 classes -> ~6 each at n=50
    with pytest.raises(DatasetError):
        stratified_subset(ds, 529, seed=1)


def test_templates_file_roundtrip(tmp_path):
    path = tmp_path / "templates.json"
    payload = [
        {"label": "Init", "extension": [0, 1, 1, 1, 1, 0, 1, 1, 1, 1]},
        {"label": "Cash", "extension": [1, 0, 0, 0, 0, 1, 0, 0, 0, 0]},
    ]
    path.write_text(json.dumps(payload))
    templates = load_templates(path)
    assert [t.label for t in templates] == [GestureLabel.Init, GestureLabel.Cash]
    ds, _ = generate_synthetic(
        seed=1,
        counts={GestureLabel.Init: 4, GestureLabel.Cash: 4},
        noise_sigma=0.0,
        templates=templates,
    )
    assert len(ds) == 8
