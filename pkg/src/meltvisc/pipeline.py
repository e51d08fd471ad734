"""Dataset preprocessing: outlier fences, liquidus filtering, log transform,
deduplication, z-score standardization and the train/val/test split.

The full chain is exposed as :func:`preprocess`; the individual stages are
public so they can be applied (and tested) in isolation. All stages are pure
transformations that never reorder or modify retained samples, and the whole
chain is deterministic for a fixed split seed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chemistry import SPECIES, Composition, liquidus_temperature, nbo_t, to_mole_fractions
from .errors import (
    ConstantFeatureError,
    EmptyInputError,
    NonPositiveViscosityError,
    TooSmallError,
)

#: Names of the 20 predictor columns: the canonical species plus temperature.
FEATURE_NAMES: tuple[str, ...] = SPECIES + ("temperature_k",)

N_FEATURES = len(FEATURE_NAMES)


class Stage(enum.Enum):
    """Whether a dataset's target column is raw Pa*s or log10(Pa*s)."""

    RAW = "raw"
    PROCESSED = "processed"


@dataclass(frozen=True)
class Sample:
    """One (composition, temperature, viscosity) record.

    ``viscosity`` holds Pa*s for raw-stage datasets and log10(Pa*s) once the
    dataset has been log-transformed; the owning :class:`Dataset` carries the
    stage flag.
    """

    composition: Composition
    temperature_k: float
    viscosity: float


class Dataset:
    """An ordered, immutable collection of samples sharing one stage flag."""

    __slots__ = ("samples", "stage", "provenance")

    def __init__(self, samples, stage: Stage, provenance: str = ""):
        samples = tuple(samples)
        for i, s in enumerate(samples):
            if not (math.isfinite(s.temperature_k) and s.temperature_k > 0):
                raise ValueError(f"sample {i}: temperature must be > 0 K")
            if not math.isfinite(s.viscosity):
                raise ValueError(f"sample {i}: non-finite viscosity")
        self.samples = samples
        self.stage = stage
        self.provenance = provenance

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i) -> Sample:
        return self.samples[i]

    def replace(self, samples=None, stage=None, provenance=None) -> "Dataset":
        return Dataset(
            self.samples if samples is None else samples,
            self.stage if stage is None else stage,
            self.provenance if provenance is None else provenance,
        )

    def predictor_matrix(self) -> np.ndarray:
        """(N, 20) array of the species amounts plus temperature."""
        if not self.samples:
            return np.empty((0, N_FEATURES))
        comps = np.stack([s.composition.amounts for s in self.samples])
        temps = np.array([s.temperature_k for s in self.samples])
        return np.column_stack([comps, temps])

    def target_vector(self) -> np.ndarray:
        return np.array([s.viscosity for s in self.samples])


def sample_nbo_t(sample: Sample) -> float:
    """NBO/T of one sample's composition."""
    return nbo_t(to_mole_fractions(sample.composition))


@dataclass(frozen=True)
class Fences:
    """Outlier fences: 1.5 IQR below the first quartile, 1.0 IQR above the
    third. The asymmetry is deliberate and load-bearing."""

    lower: float
    upper: float


def iqr_fences(values) -> Fences:
    """Compute asymmetric interquartile fences over a list of finite values.

    Quartiles use linear interpolation between the closest order statistics.

    Raises
    ------
    EmptyInputError
        If ``values`` is empty.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise EmptyInputError("cannot compute fences of an empty list")
    if not np.all(np.isfinite(arr)):
        raise ValueError("fence input contains non-finite values")
    q1, q3 = np.quantile(arr, [0.25, 0.75])
    iqr = q3 - q1
    return Fences(lower=float(q1 - 1.5 * iqr), upper=float(q3 + 1.0 * iqr))


def filter_by_fences(
    ds: Dataset, key: Callable[[Sample], float], fences: Fences
) -> Dataset:
    """Keep samples with lower < key(sample) < upper, preserving order.

    Degenerate fences (IQR 0, lower == upper) keep every sample: the strict
    inequalities would otherwise empty the dataset.
    """
    if fences.lower == fences.upper:
        return ds
    kept = [s for s in ds if fences.lower < key(s) < fences.upper]
    return ds.replace(samples=kept)


def filter_liquidus(ds: Dataset) -> Dataset:
    """Keep samples measured strictly above their estimated liquidus."""
    if ds.stage is not Stage.RAW:
        raise ValueError("liquidus filtering applies to raw-stage datasets")
    kept = [
        s for s in ds if s.temperature_k > liquidus_temperature(s.composition)
    ]
    return ds.replace(samples=kept)


def log_transform(ds: Dataset) -> Dataset:
    """Replace viscosity in Pa*s with log10(viscosity); stage becomes processed.

    Raises
    ------
    NonPositiveViscosityError
        If any viscosity is zero or negative.
    """
    if ds.stage is not Stage.RAW:
        raise ValueError("dataset is already log-transformed")
    out = []
    for i, s in enumerate(ds):
        if s.viscosity <= 0:
            raise NonPositiveViscosityError(
                f"sample {i}: viscosity {s.viscosity} Pa*s is not positive"
            )
        out.append(Sample(s.composition, s.temperature_k, math.log10(s.viscosity)))
    return ds.replace(samples=out, stage=Stage.PROCESSED)


def deduplicate(ds: Dataset) -> Dataset:
    """Drop samples whose full predictor+target vector exactly repeats an
    earlier sample's; first occurrence wins. Idempotent."""
    seen = set()
    kept = []
    for s in ds:
        key = (tuple(s.composition.amounts), s.temperature_k, s.viscosity)
        if key not in seen:
            seen.add(key)
            kept.append(s)
    return ds.replace(samples=kept)


@dataclass(frozen=True)
class Scaler:
    """Per-feature z-score parameters over the 20 predictors.

    The target is never scaled; standardization applies to predictors only.
    """

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        if self.mean.shape != (N_FEATURES,) or self.std.shape != (N_FEATURES,):
            raise ValueError(f"scaler expects {N_FEATURES} features")
        if np.any(self.std <= 0):
            raise ValueError("scaler std entries must be positive")

    def transform(self, x: np.ndarray) -> np.ndarray:
        """z = (x - mean) / std, row-wise over a (N, 20) matrix."""
        return (np.asarray(x, dtype=float) - self.mean) / self.std

    def inverse_transform(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=float) * self.std + self.mean


def fit_scaler(ds: Dataset) -> Scaler:
    """Fit per-feature mean and sample standard deviation (N-1 divisor).

    Raises
    ------
    TooSmallError
        Fewer than 2 samples.
    ConstantFeatureError
        A predictor column is constant (zero standard deviation).
    """
    if ds.stage is not Stage.PROCESSED:
        raise ValueError("fit the scaler on a processed dataset")
    if len(ds) < 2:
        raise TooSmallError("need at least 2 samples to fit a scaler")
    x = ds.predictor_matrix()
    mean = x.mean(axis=0)
    std = x.std(axis=0, ddof=1)
    flat = np.flatnonzero(std == 0)
    if flat.size:
        raise ConstantFeatureError(
            f"constant predictor column(s): "
            f"{', '.join(FEATURE_NAMES[i] for i in flat)}"
        )
    return Scaler(mean=mean, std=std)


@dataclass(frozen=True)
class SplitSpec:
    """Seeded shuffle followed by a contiguous train/val/test partition."""

    fractions: tuple[float, float, float] = (0.81, 0.09, 0.10)
    seed: int = 0

    def __post_init__(self):
        if any(f <= 0 for f in self.fractions):
            raise ValueError("split fractions must be positive")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ValueError(f"split fractions sum to {sum(self.fractions)}, not 1")


def split(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset, Dataset]:
    """Partition a dataset into train/val/test.

    Sizes follow the floor rule: train = floor(f_train*N), val =
    floor(f_val*N), test = the remainder, so the stated fractions are
    honored to within two rows. The permutation depends only on the seed.

    Raises
    ------
    TooSmallError
        If the dataset has fewer than 10 rows.
    """
    n = len(ds)
    if n < 10:
        raise TooSmallError(f"dataset of {n} rows is too small to split")
    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(n)
    n_train = math.floor(spec.fractions[0] * n)
    n_val = math.floor(spec.fractions[1] * n)
    parts = (
        perm[:n_train],
        perm[n_train : n_train + n_val],
        perm[n_train + n_val :],
    )
    names = ("train", "val", "test")
    return tuple(
        ds.replace(
            samples=[ds[i] for i in idx],
            provenance=f"{ds.provenance}/{name}" if ds.provenance else name,
        )
        for idx, name in zip(parts, names)
    )


@dataclass
class PipelineReport:
    """Row counts and target moments recorded across the preprocessing chain."""

    stage_counts: list[tuple[str, int]] = field(default_factory=list)
    nbo_t_fences: Fences | None = None
    viscosity_fences: Fences | None = None
    target_mean_before: float = float("nan")
    target_std_before: float = float("nan")
    target_mean_after: float = float("nan")
    target_std_after: float = float("nan")
    split_sizes: tuple[int, int, int] | None = None

    def lines(self) -> list[str]:
        out = [f"rows_{name}: {count}" for name, count in self.stage_counts]
        if self.nbo_t_fences is not None:
            out.append(
                f"nbo_t_fences: ({self.nbo_t_fences.lower!r}, "
                f"{self.nbo_t_fences.upper!r})"
            )
        if self.viscosity_fences is not None:
            out.append(
                f"log10_viscosity_fences: ({self.viscosity_fences.lower!r}, "
                f"{self.viscosity_fences.upper!r})"
            )
        out.append(f"log10_viscosity_mean_before: {self.target_mean_before!r}")
        out.append(f"log10_viscosity_std_before: {self.target_std_before!r}")
        out.append(f"log10_viscosity_mean_after: {self.target_mean_after!r}")
        out.append(f"log10_viscosity_std_after: {self.target_std_after!r}")
        if self.split_sizes is not None:
            for name, size in zip(("train", "val", "test"), self.split_sizes):
                out.append(f"rows_{name}: {size}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


@dataclass(frozen=True)
class PreprocessResult:
    """Everything the preprocessing chain produces."""

    dataset: Dataset
    scaler: Scaler
    report: PipelineReport
    train: Dataset
    val: Dataset
    test: Dataset


def _log10_targets(ds: Dataset) -> np.ndarray:
    t = ds.target_vector()
    if np.any(t <= 0):
        raise NonPositiveViscosityError("raw viscosities must be positive")
    return np.log10(t)


def preprocess(raw: Dataset, split_spec: SplitSpec | None = None) -> PreprocessResult:
    """Run the full preprocessing chain on a raw dataset.

    Stages, in order: NBO/T outlier fences, liquidus filter, viscosity
    outlier fences on log10(viscosity), log transform, deduplication,
    scaler fit, split. Per-stage row counts and target moments land in the
    returned report. Deterministic for a fixed input and split seed.
    """
    if raw.stage is not Stage.RAW:
        raise ValueError("preprocess expects a raw-stage dataset")
    if split_spec is None:
        split_spec = SplitSpec()

    report = PipelineReport()
    report.stage_counts.append(("input", len(raw)))
    if len(raw):
        logv = _log10_targets(raw)
        report.target_mean_before = float(logv.mean())
        report.target_std_before = float(logv.std(ddof=1)) if len(raw) > 1 else 0.0

    ds = raw
    if len(ds):
        report.nbo_t_fences = iqr_fences([sample_nbo_t(s) for s in ds])
        ds = filter_by_fences(ds, sample_nbo_t, report.nbo_t_fences)
    report.stage_counts.append(("nbo_t_fence", len(ds)))

    ds = filter_liquidus(ds)
    report.stage_counts.append(("liquidus", len(ds)))

    if len(ds):
        report.viscosity_fences = iqr_fences(_log10_targets(ds))
        ds = filter_by_fences(
            ds, lambda s: math.log10(s.viscosity), report.viscosity_fences
        )
    report.stage_counts.append(("viscosity_fence", len(ds)))

    ds = log_transform(ds)
    report.stage_counts.append(("log10_transform", len(ds)))

    ds = deduplicate(ds)
    report.stage_counts.append(("deduplicate", len(ds)))

    # split preconditions checked before the scaler so short inputs fail
    # with the terminal stage's error
    if len(ds) < 10:
        raise TooSmallError(
            f"{len(ds)} rows remain after preprocessing; need at least 10 to split"
        )

    targets = ds.target_vector()
    report.target_mean_after = float(targets.mean())
    report.target_std_after = float(targets.std(ddof=1))

    scaler = fit_scaler(ds)
    train, val, test = split(ds, split_spec)
    report.split_sizes = (len(train), len(val), len(test))

    return PreprocessResult(
        dataset=ds, scaler=scaler, report=report, train=train, val=val, test=test
    )
