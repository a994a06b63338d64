"""Paired SDAE-DNN vs baseline runs on clean and interference-shifted synthetic test sets.

    python scripts/paired_experiment.py --runs 5 [--config cfg.toml] [--inr-db 0 -6 3]

Prints one line per run and the two confusion matrices of the first run.
"""
import argparse
import dataclasses
import time

from dfnet.classifier import train_baseline_dnn, train_dnn
from dfnet.config import load_config
from dfnet.dataset import generate
from dfnet.evaluation import accuracy, compare, evaluate
from dfnet.sdae import train_sdae


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config")
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--inr-db", type=float, nargs="*", help="interference levels to test (default: config)")
    args = ap.parse_args()
    base = load_config(args.config)
    levels = args.inr_db if args.inr_db else [base.interference.inr_db]

    wins = {lvl: 0 for lvl in levels}
    for run in range(args.runs):
        t0 = time.perf_counter()
        cfg = dataclasses.replace(base, seed=base.seed + run)
        train = generate(cfg.gen_config())
        sdae = train_sdae(train.features, cfg.sparsity, cfg.corrupter, cfg.sdae_train())
        proposed = train_dnn(sdae, train, cfg.dnn_train())
        baseline = train_baseline_dnn(train, cfg.dnn_train(baseline=True))
        clean = generate(cfg.gen_config(test=True))
        parts = [f"clean {accuracy(evaluate(proposed, clean)):.1f}/{accuracy(evaluate(baseline, clean)):.1f}"]
        for lvl in levels:
            shifted_cfg = dataclasses.replace(cfg, interference=dataclasses.replace(cfg.interference, inr_db=lvl))
            shifted = generate(shifted_cfg.gen_config(test=True, interference=True))
            report = compare(proposed, baseline, shifted)
            wins[lvl] += report.delta >= 0
            parts.append(f"inr {lvl:+g} dB {accuracy(report.proposed):.1f}/{accuracy(report.baseline):.1f}")
            if run == 0 and lvl == levels[0]:
                first = report
        print(f"run {run} (seed {cfg.seed}, {time.perf_counter() - t0:.0f}s): " + "  ".join(parts), flush=True)
    print()
    print(first.render())
    print()
    for lvl, w in wins.items():
        print(f"SDAE-DNN >= baseline at inr {lvl:+g} dB: {w}/{args.runs} runs")


if __name__ == "__main__":
    main()
