"""``dfnet`` command line: simulate, train, eval, predict, gradcheck.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import contextlib
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import gradcheck
from .classifier import classify, parameter_hash, train_baseline_dnn, train_dnn
from .config import ExperimentConfig, load_config, to_dict
from .dataset import class_center_deg, generate, load_csv, save_csv
from .evaluation import compare, evaluate
from .modelfile import load_model, save_model
from .preprocess import normalize_cycle
from .sdae import train_sdae

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


class NumericFailure(RuntimeError):
    pass


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    return cfg


def _print_trace(name: str, trace: list) -> None:
    if not trace:
        return
    step = max(1, len(trace) // 10)
    shown = sorted(set(range(0, len(trace), step)) | {len(trace) - 1})
    print(f"{name} loss:")
    for i in shown:
        print(f"  epoch {i + 1:4d}  {trace[i]:.6g}")
    if not np.all(np.isfinite(trace)):
        raise NumericFailure(f"{name} loss became non-finite")


def cmd_simulate(args) -> int:
    cfg = _config(args)
    ds = generate(cfg.gen_config(test=args.test, interference=args.interference))
    save_csv(ds, args.out)
    counts = ds.class_counts()
    print(f"wrote {len(ds)} cycles to {args.out}")
    for label, count in enumerate(counts):
        print(f"  class {label} ({class_center_deg(label, ds.q_classes):g} deg): {count}")
    print(f"mean SNR: {np.mean(ds.snr_db):.3f} dB")
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = _config(args)
    data = load_csv(args.data, cfg.dataset.q_classes, cfg.array.n_antennas)
    meta = {"seed": cfg.seed, "config_hash": cfg.digest(), "dataset": str(args.data),
            "n_samples": len(data)}
    if args.baseline:
        model = train_baseline_dnn(data, cfg.dnn_train(baseline=True))
    else:
        sdae = train_sdae(data.features, cfg.sparsity, cfg.corrupter, cfg.sdae_train())
        _print_trace("sdae", sdae.loss_trace)
        meta["sdae_loss_trace"] = sdae.loss_trace
        model = train_dnn(sdae, data, cfg.dnn_train())
    _print_trace(model.kind, model.loss_trace)
    meta["loss_trace"] = model.loss_trace
    save_model(model, args.out, meta)
    print(f"saved {model.kind} model ({model.n_params} parameters) to {args.out}")
    print(f"parameter hash: {parameter_hash(model.layers)}")
    return EXIT_OK


def _load_classifier(path):
    model, _ = load_model(path)
    if model.__class__.__name__ != "DfClassifier":
        raise ValueError(f"{path}: expected a classifier model, got an SDAE file")
    return model


def cmd_eval(args) -> int:
    model = _load_classifier(args.model)
    data = load_csv(args.data, model.n_classes)
    if data.n_antennas != model.n_inputs:
        raise ValueError(f"model expects {model.n_inputs} antennas but {args.data} has {data.n_antennas}")
    if args.baseline_model:
        base = _load_classifier(args.baseline_model)
        report = compare(model, base, data)
        print(report.render())
        doc = report.to_dict()
    else:
        cm = evaluate(model, data)
        print(cm.render(f"{model.kind} (row %)"))
        doc = cm.to_dict()
    Path(args.out).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    print(f"report written to {args.out}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model = _load_classifier(args.model)
    try:
        powers = [float(v) for v in args.powers.split(",")]
    except ValueError:
        raise ValueError(f"could not parse powers {args.powers!r}") from None
    if len(powers) != model.n_inputs:
        raise ValueError(f"expected {model.n_inputs} power values, got {len(powers)}")
    probs = classify(model, normalize_cycle(powers))
    label = int(np.argmax(probs))
    print(f"class: {label}")
    print(f"direction: {class_center_deg(label, model.n_classes):g} deg")
    print("probabilities: " + ",".join(f"{p:.6f}" for p in probs))
    return EXIT_OK


def cmd_gradcheck(args) -> int:
    results = gradcheck.run_all(args.seed, inject_error=args.inject_error)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: max rel. error {r.max_rel_error:.3e}")
    worst = max(r.max_rel_error for r in results)
    print(f"max relative error: {worst:.3e} (tolerance {gradcheck.TOLERANCE:g})")
    return EXIT_OK if worst < gradcheck.TOLERANCE else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dfnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic labelled CSV dataset")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--test", action="store_true", help="test split: test_per_class rows, seed + 1")
    p.add_argument("--interference", action="store_true",
                   help="apply the [interference] environment shift")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("train", help="train SDAE-DNN (or the baseline) on a CSV dataset")
    p.add_argument("--config")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--baseline", action="store_true", help="train the DNN-only baseline")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="confusion matrix and accuracy on a CSV dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--baseline-model")
    p.add_argument("--out", default="eval.json", help="JSON report path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="classify one power cycle")
    p.add_argument("--model", required=True)
    p.add_argument("--powers", required=True, help="N comma-separated linear powers")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("gradcheck", help="analytic vs finite-difference gradients")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-error", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_gradcheck)
    return parser


def _thread_limit():
    limit = os.environ.get("DFNET_THREADS")
    if not limit:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=int(limit))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _thread_limit():
            return args.func(args)
    except (NumericFailure, FloatingPointError) as exc:
        print(f"dfnet: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, IndexError) as exc:
        print(f"dfnet: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"dfnet: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
