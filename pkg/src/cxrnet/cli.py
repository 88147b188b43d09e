"""Command line entry points.

Subcommands:
    train    balance, split, and fit a model on a class-per-directory image tree
    eval     score a saved model against a directory tree, write a JSON report
    predict  classify a single image file
    serve    run the HTTP inference service

Host, port, and model path fall back to the CXR_HOST, CXR_PORT, and
CXR_MODEL_PATH environment variables when flags are omitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .dataset import (
    balance_classes,
    load_images,
    preprocess_image_bytes,
    scan_directory,
    stratified_split,
)
from .metrics import compute_metrics, confusion_matrix
from .model import Model, build_paper_model
from .serialization import load_model, model_file_checksum, save_model
from .training import TrainConfig, fit


def _predict_batches(model: Model, images: np.ndarray, batch_size: int = 32) -> np.ndarray:
    parts = [
        model.forward(images[start : start + batch_size])
        for start in range(0, images.shape[0], batch_size)
    ]
    return np.concatenate(parts, axis=0)


def _cmd_train(args: argparse.Namespace) -> int:
    manifest = scan_directory(args.data_dir)
    for line in manifest.warnings:
        print(f"warning: {line}", file=sys.stderr)
    print(f"scanned {len(manifest.entries)} images: {manifest.class_counts}")

    balanced = balance_classes(manifest, seed=args.seed)
    print(f"balanced to {balanced.class_counts}")
    split = stratified_split(balanced, test_fraction=args.test_fraction, seed=args.seed)
    print(f"split: {len(split.train)} train / {len(split.test)} test")

    train_x, train_y = load_images(split.root, split.train)
    model = build_paper_model(seed=args.seed)
    config = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        optimizer=args.optimizer,
        seed=args.seed,
        validation_fraction=args.validation_fraction,
    )
    history = fit(model, train_x, train_y, config)
    save_model(model, args.output)
    print(f"saved model to {args.output}")
    if args.history:
        history.to_csv(args.history)
        print(f"wrote history to {args.history}")

    if split.test:
        test_x, test_y = load_images(split.root, split.test)
        probs = _predict_batches(model, test_x, args.batch_size)
        pred = probs.argmax(axis=1)
        cm = confusion_matrix(test_y, pred, class_labels=model.class_labels)
        report = compute_metrics(cm)
        print(cm.format_table())
        print(report.format_table())
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    manifest = scan_directory(args.data_dir)
    for line in manifest.warnings:
        print(f"warning: {line}", file=sys.stderr)
    images, labels = load_images(manifest.root, manifest.entries)
    probs = _predict_batches(model, images, args.batch_size)
    pred = probs.argmax(axis=1)
    cm = confusion_matrix(labels, pred, class_labels=model.class_labels)
    report = compute_metrics(cm)
    print(cm.format_table())
    print(report.format_table())
    if args.report:
        payload = {
            "model": str(args.model),
            "data_dir": str(args.data_dir),
            "num_images": int(images.shape[0]),
            "confusion_matrix": cm.counts.tolist(),
            "class_labels": list(cm.class_labels),
            "metrics": report.to_dict(),
        }
        Path(args.report).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote report to {args.report}")
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    data = Path(args.image).read_bytes()
    pixels = preprocess_image_bytes(data, model.input_shape[0], model.input_shape[1])
    probs = model.forward(pixels[None])[0]
    index = int(probs.argmax())
    if args.json:
        payload = {
            "predicted_index": index,
            "predicted_label": model.class_labels[index],
            "probabilities": {
                label: float(p) for label, p in zip(model.class_labels, probs)
            },
            "model_version": model_file_checksum(args.model),
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"prediction: {model.class_labels[index]}")
        for label, p in zip(model.class_labels, probs):
            print(f"  {label:<22s} {float(p):.4f}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    model = None
    version = "unversioned"
    if args.model:
        model = load_model(args.model)
        version = model_file_checksum(args.model)
    app = create_app(
        model,
        model_version=version,
        max_body_bytes=args.max_body_bytes,
        static_dir=args.static_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cxrnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train a model on a directory tree")
    train.add_argument("--data-dir", required=True, help="root with one directory per class")
    train.add_argument("--output", required=True, help="path for the saved .cxrm model")
    train.add_argument("--epochs", type=int, default=10)
    train.add_argument("--batch-size", type=int, default=32)
    train.add_argument("--lr", type=float, default=1e-3)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--optimizer", choices=("adam", "sgd-momentum"), default="adam")
    train.add_argument("--test-fraction", type=float, default=0.2)
    train.add_argument("--validation-fraction", type=float, default=0.1)
    train.add_argument("--history", default=None, help="optional CSV path for per-epoch stats")
    train.set_defaults(func=_cmd_train)

    ev = sub.add_parser("eval", help="evaluate a saved model")
    ev.add_argument("--model", required=True)
    ev.add_argument("--data-dir", required=True)
    ev.add_argument("--report", default=None, help="optional JSON report path")
    ev.add_argument("--batch-size", type=int, default=32)
    ev.set_defaults(func=_cmd_eval)

    pred = sub.add_parser("predict", help="classify one image")
    pred.add_argument("--model", required=True)
    pred.add_argument("--image", required=True)
    pred.add_argument("--json", action="store_true", help="emit the service response shape")
    pred.set_defaults(func=_cmd_predict)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--model", default=os.environ.get("CXR_MODEL_PATH"))
    serve.add_argument("--host", default=os.environ.get("CXR_HOST", "127.0.0.1"))
    serve.add_argument("--port", type=int, default=int(os.environ.get("CXR_PORT", "8000")))
    serve.add_argument("--max-body-bytes", type=int, default=10 * 1024 * 1024)
    serve.add_argument("--static-dir", default=None, help="optional directory served at /")
    serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
