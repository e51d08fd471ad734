"""File formats: dataset CSVs, model and scaler files, report CSVs.

CSV column order is everywhere governed by the canonical species ordering,
followed by ``temperature_k`` and the target column (``viscosity_pa_s`` raw,
``log10_viscosity`` processed). Numbers are written with ``repr`` so every
value round-trips bit for bit; model and scaler files are versioned JSON
documents for the same reason.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from pathlib import Path

import numpy as np

from .baselines import SynthSpec, SynthTruth
from .chemistry import (
    SPECIES,
    SPECIES_MAX_MASS_PERCENT,
    TEMPERATURE_RANGE_K,
    Composition,
)
from .errors import (
    CorruptFileError,
    MeltviscError,
    SchemaError,
    VersionMismatchError,
)
from .network import ACTIVATIONS, MlpModel, TrainHistory
from .pipeline import Dataset, Sample, Scaler, Stage
from .sensitivity import SensitivityReport, interpret_sign

FORMAT_VERSION = 1

RAW_TARGET_COLUMN = "viscosity_pa_s"
PROCESSED_TARGET_COLUMN = "log10_viscosity"

RAW_HEADER = list(SPECIES) + ["temperature_k", RAW_TARGET_COLUMN]
PROCESSED_HEADER = list(SPECIES) + ["temperature_k", PROCESSED_TARGET_COLUMN]
FEATURE_HEADER = list(SPECIES) + ["temperature_k"]
PREDICTION_HEADER = ["sample_id", "log10_eta_pred"]


class RangeWarning(UserWarning):
    """A value exceeds the reference-database range (strict mode only)."""


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _read_rows(path, expected_header):
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(1, "", "file has no header row") from None
        if header != expected_header:
            raise SchemaError(
                1,
                "",
                f"header {header} does not match the expected columns "
                f"{expected_header}",
            )
        return list(reader)


def _cell_to_float(value, row_number, column):
    if value is None or value.strip() == "":
        raise SchemaError(row_number, column, "missing cell")
    try:
        number = float(value)
    except ValueError:
        raise SchemaError(row_number, column, f"not a number: {value!r}") from None
    if not math.isfinite(number):
        raise SchemaError(row_number, column, f"non-finite value: {value!r}")
    return number


def _parse_feature_cells(cells, row_number, strict_ranges, sum_tolerance):
    """Cells -> (Composition, temperature). Row numbers are 1-based with the
    header as row 1."""
    amounts = {}
    for name, cell in zip(SPECIES, cells):
        value = _cell_to_float(cell, row_number, name)
        if value < 0:
            raise SchemaError(row_number, name, "negative")
        if strict_ranges and value > SPECIES_MAX_MASS_PERCENT[name]:
            warnings.warn(
                f"row {row_number}: {name} = {value} %mass exceeds the "
                f"reference maximum {SPECIES_MAX_MASS_PERCENT[name]}",
                RangeWarning,
                stacklevel=3,
            )
        amounts[name] = value
    temperature = _cell_to_float(cells[len(SPECIES)], row_number, "temperature_k")
    if temperature <= 0:
        raise SchemaError(row_number, "temperature_k", "temperature must be > 0 K")
    if strict_ranges and not (
        TEMPERATURE_RANGE_K[0] <= temperature <= TEMPERATURE_RANGE_K[1]
    ):
        warnings.warn(
            f"row {row_number}: temperature {temperature} K is outside the "
            f"reference range {TEMPERATURE_RANGE_K}",
            RangeWarning,
            stacklevel=3,
        )
    try:
        comp = Composition(amounts, sum_tolerance=sum_tolerance)
    except MeltviscError:
        raise
    except ValueError as exc:
        raise SchemaError(row_number, "", str(exc)) from None
    return comp, temperature


def parse_dataset_csv(
    path, *, strict_ranges: bool = False, sum_tolerance: float = 1.0
) -> Dataset:
    """Read a raw or processed dataset CSV into a typed Dataset.

    The stage is inferred from the target column name. Hard violations
    (missing cells, non-numbers, negative amounts, temperatures <= 0,
    non-positive raw viscosities) raise :class:`SchemaError` with the row
    and column; ``strict_ranges`` additionally warns on values beyond the
    reference-database bounds.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        try:
            header = next(csv.reader(fh))
        except StopIteration:
            raise SchemaError(1, "", "file has no header row") from None
    if header == RAW_HEADER:
        stage = Stage.RAW
    elif header == PROCESSED_HEADER:
        stage = Stage.PROCESSED
    else:
        raise SchemaError(
            1,
            "",
            f"header does not match the raw schema {RAW_HEADER} or the "
            f"processed schema {PROCESSED_HEADER}",
        )

    target_column = RAW_TARGET_COLUMN if stage is Stage.RAW else PROCESSED_TARGET_COLUMN
    rows = _read_rows(path, header)
    samples = []
    for offset, cells in enumerate(rows):
        row_number = offset + 2
        if len(cells) != len(header):
            raise SchemaError(
                row_number, "", f"expected {len(header)} cells, got {len(cells)}"
            )
        comp, temperature = _parse_feature_cells(
            cells, row_number, strict_ranges, sum_tolerance
        )
        target = _cell_to_float(cells[-1], row_number, target_column)
        if stage is Stage.RAW and target <= 0:
            raise SchemaError(
                row_number, target_column, "raw viscosity must be > 0 Pa*s"
            )
        samples.append(Sample(comp, temperature, target))
    return Dataset(samples, stage, provenance=str(path))


def parse_feature_csv(
    path, *, strict_ranges: bool = False, sum_tolerance: float = 1.0
) -> np.ndarray:
    """Read prediction-input rows: the 20 feature columns, no target.

    A dataset CSV (with its target column) is accepted too; the target is
    ignored. Returns an (n, 20) feature matrix.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        try:
            header = next(csv.reader(fh))
        except StopIteration:
            raise SchemaError(1, "", "file has no header row") from None
    if header in (RAW_HEADER, PROCESSED_HEADER):
        ds = parse_dataset_csv(
            path, strict_ranges=strict_ranges, sum_tolerance=sum_tolerance
        )
        return ds.predictor_matrix()
    rows = _read_rows(path, FEATURE_HEADER)
    features = np.empty((len(rows), len(FEATURE_HEADER)))
    for offset, cells in enumerate(rows):
        row_number = offset + 2
        if len(cells) != len(FEATURE_HEADER):
            raise SchemaError(
                row_number,
                "",
                f"expected {len(FEATURE_HEADER)} cells, got {len(cells)}",
            )
        comp, temperature = _parse_feature_cells(
            cells, row_number, strict_ranges, sum_tolerance
        )
        features[offset, :-1] = comp.amounts
        features[offset, -1] = temperature
    return features


def write_dataset_csv(ds: Dataset, path) -> None:
    header = RAW_HEADER if ds.stage is Stage.RAW else PROCESSED_HEADER
    rows = (
        [float(v) for v in s.composition.amounts]
        + [float(s.temperature_k), float(s.viscosity)]
        for s in ds
    )
    _write_rows(path, header, rows)


def write_predictions_csv(predictions, path, sample_ids=None) -> None:
    """Predictions joined to the input rows by order: sample_id is the
    1-based data-row index unless explicit ids are given."""
    predictions = np.asarray(predictions, dtype=float).reshape(-1)
    if sample_ids is None:
        sample_ids = range(1, len(predictions) + 1)
    _write_rows(
        path,
        PREDICTION_HEADER,
        ([int(i), float(p)] for i, p in zip(sample_ids, predictions)),
    )


def parse_predictions_csv(path) -> np.ndarray:
    """Read an external prediction CSV (sample_id, log10_eta_pred), joined
    against the test set by row order."""
    rows = _read_rows(path, PREDICTION_HEADER)
    values = np.empty(len(rows))
    for offset, cells in enumerate(rows):
        row_number = offset + 2
        if len(cells) != 2:
            raise SchemaError(row_number, "", f"expected 2 cells, got {len(cells)}")
        values[offset] = _cell_to_float(cells[1], row_number, "log10_eta_pred")
    return values


def write_history_csv(history: TrainHistory, path) -> None:
    _write_rows(
        path,
        ["epoch", "loss", "mae", "val_loss", "val_mae"],
        (
            [epoch, float(l), float(m), float(vl), float(vm)]
            for epoch, l, m, vl, vm in history.rows()
        ),
    )


def write_sensitivity_csv(report: SensitivityReport, path) -> None:
    directions = interpret_sign(report)
    _write_rows(
        path,
        ["input", "raw_importance", "relative_importance_pct", "rank", "direction"],
        (
            [name, float(raw), float(rel), rank, direction.value]
            for name, raw, rel, rank, direction in zip(
                report.inputs, report.raw, report.relative_pct, report.rank, directions
            )
        ),
    )


def write_grid_csv(results, path) -> None:
    """Ranked grid-search results, one row per trial."""
    _write_rows(
        path,
        [
            "rank",
            "depth",
            "width",
            "activation",
            "bias_init",
            "batch_size",
            "lr",
            "val_loss",
            "val_mae",
            "best_epoch",
            "stop_epoch",
        ],
        (
            [
                rank,
                r.config.depth,
                r.config.width,
                r.config.activation,
                r.config.bias_init,
                r.config.batch_size,
                float(r.config.learning_rate),
                float(r.val_loss),
                float(r.val_mae),
                r.best_epoch,
                r.stop_epoch,
            ]
            for rank, r in enumerate(results, start=1)
        ),
    )


def write_comparison_csv(ranked, path) -> None:
    """One row per model, ranked by MAE (plot-ready tidy layout)."""
    _write_rows(
        path,
        [
            "model",
            "n",
            "mae",
            "std",
            "r2",
            "skewness",
            "kurtosis",
            "max_negative_error",
            "max_positive_error",
        ],
        (
            [
                name,
                r.n,
                float(r.mae),
                float(r.std),
                float(r.r2),
                float(r.skewness),
                float(r.kurtosis),
                float(r.max_negative_error),
                float(r.max_positive_error),
            ]
            for name, r in ranked
        ),
    )


# --- scaler / model / truth persistence -----------------------------------


def _load_json(path, kind):
    try:
        with open(path) as fh:
            document = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptFileError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(document, dict):
        raise CorruptFileError(f"{path}: expected a JSON object")
    version = document.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{path}: format version {version!r} is not supported "
            f"(this build reads version {FORMAT_VERSION})"
        )
    if document.get("kind") != kind:
        raise CorruptFileError(
            f"{path}: expected a {kind} file, found {document.get('kind')!r}"
        )
    return document


def save_scaler(scaler: Scaler, path) -> None:
    document = {
        "format_version": FORMAT_VERSION,
        "kind": "scaler",
        "feature_names": list(SPECIES) + ["temperature_k"],
        "mean": scaler.mean.tolist(),
        "std": scaler.std.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(document, fh, indent=1)
        fh.write("\n")


def load_scaler(path) -> Scaler:
    document = _load_json(path, "scaler")
    try:
        mean = np.asarray(document["mean"], dtype=float)
        std = np.asarray(document["std"], dtype=float)
        return Scaler(mean=mean, std=std)
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFileError(f"{path}: bad scaler payload ({exc})") from None


def save_model(model: MlpModel, path) -> None:
    """Write a model as a self-describing JSON document.

    Weights are stored row major (fan_in rows of fan_out entries) in
    decimal; ``repr``-based float serialization makes the roundtrip exact.
    """
    document = {
        "format_version": FORMAT_VERSION,
        "kind": "model",
        "species": list(SPECIES),
        "layer_dims": list(model.layer_dims),
        "activations": list(model.activations),
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "scaler": None
        if model.scaler is None
        else {"mean": model.scaler.mean.tolist(), "std": model.scaler.std.tolist()},
    }
    with open(path, "w") as fh:
        json.dump(document, fh, indent=1)
        fh.write("\n")


def load_model(path) -> MlpModel:
    document = _load_json(path, "model")
    try:
        dims = tuple(int(d) for d in document["layer_dims"])
        activations = tuple(document["activations"])
        weights = [np.asarray(w, dtype=float) for w in document["weights"]]
        biases = [np.asarray(b, dtype=float) for b in document["biases"]]
        raw_scaler = document["scaler"]
        scaler = (
            None
            if raw_scaler is None
            else Scaler(
                mean=np.asarray(raw_scaler["mean"], dtype=float),
                std=np.asarray(raw_scaler["std"], dtype=float),
            )
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFileError(f"{path}: bad model payload ({exc})") from None
    for name in activations:
        if name not in ACTIVATIONS:
            raise CorruptFileError(f"{path}: unknown activation {name!r}")
    try:
        return MlpModel(
            layer_dims=dims,
            activations=activations,
            weights=weights,
            biases=biases,
            scaler=scaler,
        )
    except ValueError as exc:
        raise CorruptFileError(f"{path}: inconsistent model ({exc})") from None


def save_truth(truth: SynthTruth, path) -> None:
    spec = truth.spec
    document = {
        "format_version": FORMAT_VERSION,
        "kind": "synthetic_truth",
        "active_species": list(truth.active_species),
        "a": list(truth.a),
        "b": list(truth.b),
        "c": list(truth.c),
        "spec": {
            "n_samples": spec.n_samples,
            "n_active_species": spec.n_active_species,
            "t_min": spec.t_min,
            "t_max": spec.t_max,
            "dirichlet_alpha": spec.dirichlet_alpha,
            "noise_std": spec.noise_std,
            "seed": spec.seed,
            "a_range": list(spec.a_range),
            "b_range": list(spec.b_range),
            "c_range": list(spec.c_range),
        },
    }
    with open(path, "w") as fh:
        json.dump(document, fh, indent=1)
        fh.write("\n")


def load_truth(path) -> SynthTruth:
    document = _load_json(path, "synthetic_truth")
    try:
        raw_spec = document["spec"]
        spec = SynthSpec(
            n_samples=raw_spec["n_samples"],
            n_active_species=raw_spec["n_active_species"],
            t_min=raw_spec["t_min"],
            t_max=raw_spec["t_max"],
            dirichlet_alpha=raw_spec["dirichlet_alpha"],
            noise_std=raw_spec["noise_std"],
            seed=raw_spec["seed"],
            a_range=tuple(raw_spec["a_range"]),
            b_range=tuple(raw_spec["b_range"]),
            c_range=tuple(raw_spec["c_range"]),
        )
        return SynthTruth(
            active_species=tuple(document["active_species"]),
            a=tuple(document["a"]),
            b=tuple(document["b"]),
            c=tuple(document["c"]),
            spec=spec,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFileError(f"{path}: bad truth payload ({exc})") from None
