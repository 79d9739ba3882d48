"""Command-line entry point: one executable, one subcommand per workflow."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .dataset import (
    DEFAULT_CLASS_COUNTS,
    DatasetError,
    GestureLabel,
    generate_synthetic,
    load_dataset,
    load_templates,
    parse_label,
    save_dataset_csv,
)
from .estimators import (
    ModelFormatError,
    ModelKind,
    load_model,
    make_classifier,
    model_kind_of,
    save_model,
    train_model,
)
from .frames import InvalidFrameError, read_frames_jsonl, write_frames_jsonl, extract_features
from .harness import run_kfold, run_learning_curve, run_split_validation
from .metrics import round_half_up
from .projection import PlanarPca

DEFAULT_SEED = 42
DEFAULT_SIZES = "50,100,150,200,250,300,350,400,450,500"


def _add_seed(parser):
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")


def _parse_counts(text: str):
    counts = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        if not value:
            raise DatasetError(f"bad count spec {part!r}; expected Label=N")
        counts[parse_label(name)] = int(value)
    return counts


def _model_params_from_args(kind: ModelKind, args) -> dict:
    if kind == ModelKind.KNN:
        return {"k": args.neighbors}
    return {"learning_rate": args.learning_rate, "epochs": args.epochs, "seed": args.seed}


def _resolve_kind(args) -> tuple:
    """Model kind plus hyperparameters, from --model or from a model file."""
    if getattr(args, "model", None):
        kind = ModelKind.from_string(args.model)
        return kind, _model_params_from_args(kind, args)
    if getattr(args, "model_file", None):
        model = load_model(args.model_file)
        params = model.get_params()
        return model_kind_of(model), params
    raise DatasetError("give --model or --model-file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gesture-bartender",
        description="Two-hand gesture classification toolkit and bar-order service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = dict(formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    p = sub.add_parser("generate", help="generate a synthetic labeled dataset", **fmt)
    p.add_argument("--out", required=True, help="feature CSV output path")
    p.add_argument("--frames-out", help="also write matching raw frames (JSONL)")
    p.add_argument("--noise-sigma", type=float, default=0.05, help="template noise sigma")
    p.add_argument("--templates", help="template JSON file (default: built-in templates)")
    p.add_argument(
        "--counts",
        help="per-class sample counts, e.g. 'Init=66,Credit=80' (default: reference distribution, 528 total)",
    )
    _add_seed(p)

    p = sub.add_parser("train", help="train a model and save it as JSON", **fmt)
    p.add_argument("--model", required=True, choices=["knn", "mlp", "mlr"])
    p.add_argument("--data", required=True, help="feature CSV or labeled frame JSONL")
    p.add_argument("--out", required=True, help="model JSON output path")
    p.add_argument("--neighbors", type=int, default=2, help="k for the knn model")
    p.add_argument("--learning-rate", type=float, default=0.01, help="gradient-descent step length")
    p.add_argument("--epochs", type=int, default=500, help="full-batch epochs")
    _add_seed(p)

    p = sub.add_parser("evaluate", help="split validation: report + confusion matrix", **fmt)
    p.add_argument("--model", choices=["knn", "mlp", "mlr"], help="model kind to train")
    p.add_argument("--model-file", help="take kind and hyperparameters from a saved model")
    p.add_argument("--data", required=True)
    p.add_argument("--split", type=float, default=0.3, help="test fraction")
    p.add_argument("--neighbors", type=int, default=2, help="k for the knn model")
    p.add_argument("--learning-rate", type=float, default=0.01)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out-dir", default=".", help="where confusion/misclassification CSVs go")
    _add_seed(p)

    p = sub.add_parser("kfold", help="k-fold cross validation", **fmt)
    p.add_argument("--model", choices=["knn", "mlp", "mlr"], help="model kind to train")
    p.add_argument("--model-file", help="take kind and hyperparameters from a saved model")
    p.add_argument("--data", required=True)
    p.add_argument("--k", type=int, default=5, help="number of folds")
    p.add_argument("--neighbors", type=int, default=2, help="k for the knn model")
    p.add_argument("--learning-rate", type=float, default=0.01)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_seed(p)

    p = sub.add_parser("curve", help="accuracy vs training-set size", **fmt)
    p.add_argument("--data", required=True)
    p.add_argument("--models", default="knn,mlp,mlr", help="comma list of model kinds")
    p.add_argument("--sizes", default=DEFAULT_SIZES, help="comma list of subset sizes")
    p.add_argument("--repeats", type=int, default=5, help="runs per point for mlp/mlr")
    p.add_argument("--neighbors", type=int, default=2, help="k for the knn model")
    p.add_argument(
        "--learning-rate", type=float, default=0.5,
        help="step length for mlp/mlr; larger than the train default so they converge at small sizes",
    )
    p.add_argument("--epochs", type=int, default=1000, help="full-batch epochs for mlp/mlr")
    p.add_argument("--out", required=True, help="curve CSV output path")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_seed(p)

    p = sub.add_parser("pca", help="project the dataset to 2-d for plotting", **fmt)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="projection CSV output path (pc1,pc2,label)")

    p = sub.add_parser("classify", help="classify features or recorded frames", **fmt)
    p.add_argument("--model-file", required=True)
    p.add_argument("--features", help="10 comma-separated values in [0,1]")
    p.add_argument("--frames", help="frame JSONL file; classifies every frame")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("serve", help="run the HTTP service (and web UI, if built)", **fmt)
    p.add_argument("--model-file", help="model to serve at startup")
    p.add_argument(
        "--addr",
        default=os.environ.get("GESTURE_BARTENDER_ADDR", "127.0.0.1:8765"),
        help="listen address host:port (env GESTURE_BARTENDER_ADDR)",
    )
    p.add_argument("--static-dir", help="directory with the built web UI (default: ./frontend/dist if present)")
    p.add_argument("--min-confidence", type=float, default=0.0, help="reject predictions scoring below this")
    p.add_argument("--cors-origin", action="append", help="allowed CORS origin (repeatable)")
    return parser


def _cmd_generate(args) -> int:
    counts = _parse_counts(args.counts) if args.counts else dict(DEFAULT_CLASS_COUNTS)
    templates = load_templates(args.templates) if args.templates else None
    dataset, frames = generate_synthetic(
        seed=args.seed, counts=counts, noise_sigma=args.noise_sigma, templates=templates
    )
    save_dataset_csv(dataset, args.out)
    print(f"wrote {len(dataset)} samples to {args.out}")
    if args.frames_out:
        write_frames_jsonl(args.frames_out, frames)
        print(f"wrote {len(frames)} frames to {args.frames_out}")
    return 0


def _cmd_train(args) -> int:
    dataset = load_dataset(args.data)
    kind = ModelKind.from_string(args.model)
    model = train_model(kind, dataset, **_model_params_from_args(kind, args))
    save_model(model, args.out)
    print(f"trained {kind.value} on {len(dataset)} samples -> {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    dataset = load_dataset(args.data)
    kind, params = _resolve_kind(args)
    result = run_split_validation(
        kind, dataset, test_fraction=args.split, seed=args.seed, model_params=params
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cm_path = out_dir / "confusion_matrix.csv"
    mis_path = out_dir / "misclassification.csv"
    result.matrix.to_csv(cm_path)
    result.misclassification_csv(mis_path)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "report": result.report.to_dict(),
                    "accuracy": result.accuracy,
                    "confusion_matrix": result.matrix.counts.tolist(),
                }
            )
        )
    else:
        print(result.report.format_table())
        print(f"\naccuracy: {round_half_up(result.accuracy):.2f}")
        print(f"confusion matrix -> {cm_path}")
        print(f"misclassification map -> {mis_path}")
    return 0


def _cmd_kfold(args) -> int:
    dataset = load_dataset(args.data)
    kind, params = _resolve_kind(args)
    result = run_kfold(kind, dataset, k=args.k, seed=args.seed, model_params=params)
    if args.format == "json":
        print(
            json.dumps(
                {"fold_accuracies": result.fold_accuracies, "mean_accuracy": result.mean_accuracy}
            )
        )
    else:
        print(result.format_table())
    return 0


def _cmd_curve(args) -> int:
    dataset = load_dataset(args.data)
    kinds = [ModelKind.from_string(s) for s in args.models.split(",") if s.strip()]
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    nn_params = {"learning_rate": args.learning_rate, "epochs": args.epochs}
    overrides = {
        ModelKind.KNN: {"k": args.neighbors},
        ModelKind.MLP: dict(nn_params),
        ModelKind.MLR: dict(nn_params),
    }
    curve = run_learning_curve(
        dataset, kinds, sizes, repeats=args.repeats, seed=args.seed, model_params=overrides
    )
    curve.to_csv(args.out)
    if args.format == "json":
        print(
            json.dumps(
                [
                    {
                        "n": p.n_samples,
                        "model": p.model.value,
                        "accuracy_mean": p.accuracy_mean,
                        "accuracy_std": p.accuracy_std,
                    }
                    for p in curve.points
                ]
            )
        )
    else:
        for p in curve.points:
            print(f"n={p.n_samples:<5d} {p.model.value:<4s} {p.accuracy_mean:.3f} +/- {p.accuracy_std:.3f}")
        print(f"curve -> {args.out}")
    return 0


def _cmd_pca(args) -> int:
    dataset = load_dataset(args.data)
    pca = PlanarPca().fit(dataset.X)
    projected = pca.transform(dataset.X)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("pc1,pc2,label\n")
        for (px, py), code in zip(projected, dataset.y):
            fh.write(f"{px:.17g},{py:.17g},{GestureLabel(int(code)).name}\n")
    print(f"projected {len(dataset)} samples -> {args.out}")
    return 0


def _cmd_classify(args) -> int:
    model = load_model(args.model_file)
    predictions = []
    if args.features:
        values = [float(v) for v in args.features.split(",")]
        predictions.append(model.predict_one(np.array(values)))
    elif args.frames:
        for frame, _label in read_frames_jsonl(args.frames):
            predictions.append(model.predict_one(extract_features(frame)))
    else:
        raise DatasetError("give --features or --frames")
    if args.format == "json":
        print(
            json.dumps(
                [{"label": p.label.name, "scores": p.score_map()} for p in predictions]
            )
        )
    else:
        for p in predictions:
            print(p.label.name)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    static_dir = args.static_dir
    if static_dir is None:
        candidate = Path("frontend") / "dist"
        static_dir = str(candidate) if candidate.is_dir() else None
    app = create_app(
        model_path=args.model_file,
        static_dir=static_dir,
        min_confidence=args.min_confidence,
        cors_origins=args.cors_origin,
    )
    host, _, port = args.addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "kfold": _cmd_kfold,
    "curve": _cmd_curve,
    "pca": _cmd_pca,
    "classify": _cmd_classify,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DatasetError, InvalidFrameError, ModelFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
