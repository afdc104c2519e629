#!/usr/bin/env python3
"""
Command-line front end: synth -> preprocess -> train -> eval -> extract.

Exit codes: 0 success, 1 invalid input or configuration, 2 I/O failure.
"""

import argparse
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from .. import __version__
from ..common.configurations import CONDITIONS, PLACEMENTS, TlnnConfiguration, load_configuration
from ..common.errors import TlnnError
from ..extraction.extract import classic_robustness, extract, save_regions, strip_weights
from ..learner.training import evaluate, save_history, train
from ..logic.grammar import format_formula
from ..network.checkpoint import load_checkpoint, save_checkpoint
from ..signals.dataset import load_csv, save_csv
from ..signals.preprocessing import one_vs_rest_split, preprocess_dataset
from ..signals.synthetic import synth_dataset

# Event logging configuration
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def cmd_synth(args: argparse.Namespace, config: TlnnConfiguration) -> int:
    """Generate the synthetic bearing dataset"""
    synth = config.synth
    if args.count is not None:
        synth = replace(synth, count_per_condition=args.count)
    if args.seed is not None:
        synth = replace(synth, seed=args.seed)
    dataset = synth_dataset(synth)
    save_csv(dataset, args.out)
    for condition in CONDITIONS:
        print(f"{condition}: {dataset.conditions.count(condition)}")
    print(f"total: {len(dataset)}")
    return EXIT_OK


def cmd_preprocess(args: argparse.Namespace, config: TlnnConfiguration) -> int:
    """Feature extraction plus one-vs-rest train/test splits per condition"""
    preprocess = config.preprocess
    if args.target is not None:
        preprocess = replace(preprocess, target_length=args.target)
    if args.window is not None:
        preprocess = replace(preprocess, window=args.window)

    features = preprocess_dataset(load_csv(args.raw), preprocess)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_csv(features, out_dir / "features.csv")

    rng = np.random.default_rng(preprocess.seed)
    present = [c for c in CONDITIONS if c in features.conditions]
    for condition in present:
        training, test = one_vs_rest_split(
            features, condition, rng, preprocess.train_positive, preprocess.train_negative_per_condition
        )
        save_csv(training, out_dir / f"{condition}_train.csv")
        save_csv(test, out_dir / f"{condition}_test.csv")
        print(f"{condition}: train {len(training)}, test {len(test)}")
    return EXIT_OK


def cmd_train(args: argparse.Namespace, config: TlnnConfiguration) -> int:
    """Train one network and write its checkpoint and history"""
    settings = config.train
    overrides = {
        "epochs": args.epochs,
        "seed": args.seed,
        "learning_rate": args.learning_rate,
        "max_neurons": args.max_neurons,
        "placement": args.placement,
    }
    settings = replace(settings, **{k: v for k, v in overrides.items() if v is not None})

    dataset = load_csv(args.data)
    validation = load_csv(args.validation) if args.validation else None
    params, history = train(dataset, settings, validation, name=Path(args.data).stem)

    save_checkpoint(params, args.out, metadata={"seed": settings.seed, "train": asdict(settings)})
    history_path = args.history or str(Path(args.out).with_suffix(".history.csv"))
    save_history(history, history_path)
    if history:
        last = history[-1]
        print(f"epochs: {last.epoch}, neurons: {last.neurons}, error_rate: {last.error_rate:.3f}, "
              f"mean_robustness: {last.mean_robustness:.4f}")
    else:
        print(f"epochs: 0, neurons: {params.neuron_count}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, config: TlnnConfiguration) -> int:
    """Error rate and mean robustness of a checkpoint on a dataset"""
    params = load_checkpoint(args.checkpoint).params
    dataset = load_csv(args.data)
    metrics = evaluate(params, dataset)
    print(f"error_rate: {metrics.error_rate:.3f}")
    print(f"mean_robustness: {metrics.mean_robustness:.6f}")
    print(f"robustness_variance: {metrics.variance:.6f}")
    if args.out:
        frame = pd.DataFrame({
            "index": np.arange(len(dataset)),
            "label": dataset.labels,
            "robustness": metrics.robustness,
            "correct": metrics.predictions == dataset.labels,
        })
        frame.to_csv(args.out, index=False)
        logger.info(f"Wrote per-sample metrics to {args.out}")
    return EXIT_OK


def cmd_extract(args: argparse.Namespace, config: TlnnConfiguration) -> int:
    """Print the formula encoded by a checkpoint"""
    params = load_checkpoint(args.checkpoint).params
    calibration = load_csv(args.calibration)
    result = extract(params, calibration)
    formula = strip_weights(result.formula) if args.strip_weights else result.formula

    text = format_formula(formula, hide_below=None if args.strip_weights else args.hide_below)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    if args.export_regions:
        save_regions(formula, args.export_regions)

    logger.info(f"Formula agrees with the network on {result.fidelity(calibration):.1%} of calibration samples")
    robustness = classic_robustness(result.formula, calibration)
    logger.info(f"Unweighted formula robustness on calibration data: mean {robustness.mean():.4f}, "
                f"satisfied by {np.mean(robustness >= 0):.1%}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tlnn", description="Temporal logic neural network for fault diagnosis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON configuration file (defaults when omitted)")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="generate synthetic bearing signals")
    synth.add_argument("--out", required=True, help="dataset CSV to write")
    synth.add_argument("--count", type=int, help="signals per condition")
    synth.add_argument("--seed", type=int)
    synth.set_defaults(handler=cmd_synth)

    preprocess = commands.add_parser("preprocess", help="extract features and write one-vs-rest splits")
    preprocess.add_argument("raw", help="raw dataset CSV with a condition column")
    preprocess.add_argument("--out-dir", required=True)
    preprocess.add_argument("--target", type=int, help="feature length")
    preprocess.add_argument("--window", type=int, help="second-moment window")
    preprocess.set_defaults(handler=cmd_preprocess)

    training = commands.add_parser("train", help="train a network")
    training.add_argument("data", help="training dataset CSV")
    training.add_argument("--out", required=True, help="checkpoint to write")
    training.add_argument("--history", help="history CSV (default: <out>.history.csv)")
    training.add_argument("--validation", help="dataset for the history robustness columns")
    training.add_argument("--epochs", type=int)
    training.add_argument("--seed", type=int)
    training.add_argument("--learning-rate", type=float)
    training.add_argument("--max-neurons", type=int)
    training.add_argument("--placement", choices=PLACEMENTS, help="how new neurons are initialised")
    training.set_defaults(handler=cmd_train)

    evaluation = commands.add_parser("eval", help="error rate and robustness of a checkpoint")
    evaluation.add_argument("checkpoint")
    evaluation.add_argument("data")
    evaluation.add_argument("--out", help="per-sample metrics CSV")
    evaluation.set_defaults(handler=cmd_eval)

    extraction = commands.add_parser("extract", help="print the formula encoded by a checkpoint")
    extraction.add_argument("checkpoint")
    extraction.add_argument("calibration", help="calibration dataset CSV")
    extraction.add_argument("--strip-weights", action="store_true", help="print plain STL")
    extraction.add_argument("--export-regions", metavar="CSV", help="write one row per temporal sub-formula")
    extraction.add_argument("--hide-below", type=float, default=1e-3,
                            help="leave out sub-formulas weighted below this value")
    extraction.add_argument("--out", help="also write the formula to this file")
    extraction.set_defaults(handler=cmd_extract)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    try:
        config = load_configuration(args.config)
        return args.handler(args, config)
    except TlnnError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_INVALID
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
