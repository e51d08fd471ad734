"""Command-line entry points tying the modules into file-based workflows.

Subcommands: synth, preprocess, train, evaluate, predict, sensitivity,
grid, compare. Every command is deterministic for fixed inputs, flags and
seeds, and never mutates its input files; randomness always flows from an
explicit ``--seed`` fanned out to per-stage substreams.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import warnings
from pathlib import Path

from . import io, metrics
from .baselines import SynthSpec, generate_synthetic
from .errors import MeltviscError
from .network import TrainConfig, grid_search, init_network, train
from .pipeline import SplitSpec, Stage, preprocess
from .sensitivity import connection_weights, interpret_sign


def _load_processed(path):
    ds = io.parse_dataset_csv(path)
    if ds.stage is not Stage.PROCESSED:
        raise MeltviscError(
            f"{path}: expected a processed CSV (log10_viscosity column); "
            "run the preprocess command first"
        )
    return ds


def _add_train_flags(parser, prefix=""):
    parser.add_argument("--depth", type=int, default=3, help="hidden layers")
    parser.add_argument("--width", type=int, default=22, help="neurons per hidden layer")
    parser.add_argument(
        "--activation", choices=("relu", "sigmoid", "tanh"), default="relu"
    )
    parser.add_argument("--bias-init", choices=("zeros", "ones"), default="zeros")
    parser.add_argument("--epochs", type=int, default=10000, help="epoch budget")
    parser.add_argument("--batch-size", type=int, default=64)
    parser.add_argument("--lr", type=float, default=1e-3, help="Adam learning rate")
    parser.add_argument(
        "--patience", type=int, default=100,
        help="epochs without validation improvement before stopping",
    )


def _train_config(args) -> TrainConfig:
    return TrainConfig(
        depth=args.depth,
        width=args.width,
        activation=args.activation,
        bias_init=args.bias_init,
        max_epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        patience=args.patience,
        seed=args.seed,
    )


def cmd_synth(args) -> int:
    spec = SynthSpec(
        n_samples=args.samples,
        n_active_species=args.species,
        t_min=args.t_min,
        t_max=args.t_max,
        dirichlet_alpha=args.alpha,
        noise_std=args.noise,
        seed=args.seed,
    )
    dataset, truth = generate_synthetic(spec)
    io.write_dataset_csv(dataset, args.out)
    io.save_truth(truth, args.truth)
    print(f"wrote {len(dataset)} rows to {args.out}")
    print(f"wrote generating parameters to {args.truth}")
    return 0


def cmd_preprocess(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", io.RangeWarning)
        raw = io.parse_dataset_csv(
            args.input,
            strict_ranges=args.strict_ranges,
            sum_tolerance=args.sum_tolerance,
        )
    for warning in caught:
        print(f"warning: {warning.message}", file=sys.stderr)

    spec = SplitSpec(
        fractions=(args.train_frac, args.val_frac, args.test_frac), seed=args.seed
    )
    result = preprocess(raw, spec)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.write_dataset_csv(result.dataset, out_dir / "processed.csv")
    io.write_dataset_csv(result.train, out_dir / "train.csv")
    io.write_dataset_csv(result.val, out_dir / "val.csv")
    io.write_dataset_csv(result.test, out_dir / "test.csv")
    io.save_scaler(result.scaler, out_dir / "scaler.json")
    report_text = str(result.report)
    (out_dir / "report.txt").write_text(report_text + "\n")
    print(report_text)
    return 0


def cmd_train(args) -> int:
    train_ds = _load_processed(args.train)
    val_ds = _load_processed(args.val)
    scaler = io.load_scaler(args.scaler)
    config = _train_config(args)

    x_train = scaler.transform(train_ds.predictor_matrix())
    x_val = scaler.transform(val_ds.predictor_matrix())
    model = init_network(config, scaler=scaler)
    best, history = train(
        model, x_train, train_ds.target_vector(), x_val, val_ds.target_vector(), config
    )
    io.save_model(best, args.out)
    if args.history:
        io.write_history_csv(history, args.history)
    best_i = history.best_epoch - 1
    print(
        f"stopped after epoch {history.stop_epoch} "
        f"(best epoch {history.best_epoch}): "
        f"val_loss {history.val_loss[best_i]!r} val_mae {history.val_mae[best_i]!r}"
    )
    print(f"wrote model to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    model = io.load_model(args.model)
    test_ds = _load_processed(args.test)
    predictions = model.predict(test_ds.predictor_matrix())
    report = metrics.evaluate(test_ds.target_vector(), predictions)
    text = str(report)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return 0


def cmd_predict(args) -> int:
    model = io.load_model(args.model)
    features = io.parse_feature_csv(args.input)
    predictions = model.predict(features)
    io.write_predictions_csv(predictions, args.out)
    print(f"wrote {len(predictions)} predictions to {args.out}")
    return 0


def cmd_sensitivity(args) -> int:
    model = io.load_model(args.model)
    report = connection_weights(model)
    io.write_sensitivity_csv(report, args.out)
    directions = interpret_sign(report)
    for i in report.ordered_indices():
        print(
            f"{report.rank[i]:>2}  {report.inputs[i]:<14} "
            f"{report.relative_pct[i]:>9.4f} %  {directions[i].value}"
        )
    print(f"wrote report to {args.out}")
    return 0


#: grid config keys -> value parser; every key accepts a comma list
_GRID_KEYS = {
    "depth": int,
    "width": int,
    "activation": str,
    "bias_init": str,
    "epochs": int,
    "batch_size": int,
    "lr": float,
    "patience": int,
    "seed": int,
}

_GRID_FIELD = {
    "epochs": "max_epochs",
    "lr": "learning_rate",
}


def parse_grid_config(path) -> list[TrainConfig]:
    """Key/value grid file -> cartesian product of training configs.

    Lines look like ``width = 2, 22``; keys are the training axes (depth,
    width, activation, bias_init, epochs, batch_size, lr, patience, seed).
    ``#`` starts a comment. Keys left out fall back to the defaults.
    """
    axes: dict[str, list] = {}
    text = Path(path).read_text()
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MeltviscError(
                f"{path}:{line_number}: expected 'key = value[, value...]'"
            )
        key, _, value_list = line.partition("=")
        key = key.strip()
        if key not in _GRID_KEYS:
            raise MeltviscError(
                f"{path}:{line_number}: unknown key {key!r} "
                f"(valid: {', '.join(sorted(_GRID_KEYS))})"
            )
        caster = _GRID_KEYS[key]
        try:
            values = [caster(v.strip()) for v in value_list.split(",") if v.strip()]
        except ValueError as exc:
            raise MeltviscError(f"{path}:{line_number}: {exc}") from None
        if not values:
            raise MeltviscError(f"{path}:{line_number}: no values for {key!r}")
        axes[key] = values

    keys = sorted(axes)
    configs = []
    for combo in itertools.product(*(axes[k] for k in keys)):
        fields = {_GRID_FIELD.get(k, k): v for k, v in zip(keys, combo)}
        try:
            configs.append(TrainConfig(**fields))
        except ValueError as exc:
            raise MeltviscError(f"{path}: invalid config {fields}: {exc}") from None
    return configs


def cmd_grid(args) -> int:
    space = parse_grid_config(args.config)
    train_ds = _load_processed(args.train)
    val_ds = _load_processed(args.val)
    scaler = io.load_scaler(args.scaler)
    x_train = scaler.transform(train_ds.predictor_matrix())
    x_val = scaler.transform(val_ds.predictor_matrix())
    results = grid_search(
        space,
        x_train,
        train_ds.target_vector(),
        x_val,
        val_ds.target_vector(),
        jobs=args.jobs,
    )
    io.write_grid_csv(results, args.out)
    best = results[0]
    print(
        f"ran {len(results)} configs; best: depth {best.config.depth} "
        f"width {best.config.width} {best.config.activation} "
        f"val_loss {best.val_loss!r}"
    )
    print(f"wrote ranking to {args.out}")
    return 0


def cmd_compare(args) -> int:
    test_ds = _load_processed(args.test)
    named = []
    for item in args.pred:
        name, _, path = item.partition("=")
        if not path:
            raise MeltviscError(
                f"--pred expects NAME=FILE, got {item!r}"
            )
        named.append((name, io.parse_predictions_csv(path)))
    ranked = metrics.compare_models(named, test_ds.target_vector())
    print(metrics.comparison_table(ranked))
    if args.out:
        io.write_comparison_csv(ranked, args.out)
        print(f"wrote comparison to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meltvisc",
        description="Viscosity prediction toolkit for multicomponent oxide melts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset with known truth")
    p.add_argument("--out", required=True, help="output raw dataset CSV")
    p.add_argument("--truth", required=True, help="output ground-truth JSON")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--species", type=int, default=19, help="active species count")
    p.add_argument("--noise", type=float, default=0.0, help="log10 noise std")
    p.add_argument("--alpha", type=float, default=3.0, help="Dirichlet concentration")
    p.add_argument("--t-min", type=float, default=1400.0)
    p.add_argument("--t-max", type=float, default=2300.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser(
        "preprocess", help="raw CSV -> processed/train/val/test CSVs + scaler + report"
    )
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--train-frac", type=float, default=0.81)
    p.add_argument("--val-frac", type=float, default=0.09)
    p.add_argument("--test-frac", type=float, default=0.10)
    p.add_argument("--seed", type=int, default=0, help="shuffle seed for the split")
    p.add_argument("--sum-tolerance", type=float, default=1.0)
    p.add_argument(
        "--strict-ranges",
        action="store_true",
        help="warn when values exceed the reference-database bounds",
    )
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", help="train a network on processed CSVs")
    p.add_argument("--train", required=True, help="processed training CSV")
    p.add_argument("--val", required=True, help="processed validation CSV")
    p.add_argument("--scaler", required=True, help="scaler JSON from preprocess")
    p.add_argument("--out", required=True, help="output model JSON")
    p.add_argument("--history", help="optional per-epoch history CSV")
    _add_train_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="statistics of a model on a test CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True, help="processed test CSV")
    p.add_argument("--out", help="optional report text file")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="log10 viscosity for feature rows")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="feature CSV (target ignored)")
    p.add_argument("--out", required=True, help="output prediction CSV")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sensitivity", help="connection-weights importance report")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("grid", help="train every config in a grid file, ranked")
    p.add_argument("--config", required=True, help="key/value grid file")
    p.add_argument("--train", required=True)
    p.add_argument("--val", required=True)
    p.add_argument("--scaler", required=True)
    p.add_argument("--out", required=True, help="output ranking CSV")
    p.add_argument("--jobs", type=int, default=1, help="parallel trials")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("compare", help="rank prediction sets against a test CSV")
    p.add_argument("--test", required=True, help="processed test CSV")
    p.add_argument(
        "--pred",
        action="append",
        required=True,
        metavar="NAME=FILE",
        help="prediction CSV to include (repeatable)",
    )
    p.add_argument("--out", help="optional comparison CSV")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MeltviscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
