"""Viscosity prediction toolkit for multicomponent oxide melts.

Composition chemistry (mole fractions, NBO/T, liquidus estimate), a
preprocessing pipeline (outlier fences, liquidus filtering, log transform,
z-score standardization, splitting), a from-scratch feed-forward network
trained with Adam and early stopping, connection-weights sensitivity
analysis, evaluation statistics, closed-form viscosity relations and a
synthetic-data oracle, all behind a file-based CLI (``meltvisc``).
"""

from .baselines import (
    SuspensionParams,
    SynthSpec,
    SynthTruth,
    VftParams,
    arrhenius_log10_eta,
    generate_synthetic,
    roscoe_einstein,
    vft_log10_eta,
)
from .chemistry import (
    MOLAR_MASS_G_PER_MOL,
    SPECIES,
    SPECIES_MAX_MASS_PERCENT,
    SPECIES_ROLE,
    TEMPERATURE_RANGE_K,
    Composition,
    MoleFractions,
    SpeciesRole,
    liquidus_temperature,
    nbo_t,
    polymerization_degree,
    species_role,
    to_mole_fractions,
)
from .errors import MeltviscError
from .metrics import (
    EvalReport,
    compare_models,
    comparison_table,
    error_std,
    evaluate,
    excess_kurtosis,
    mae,
    mse,
    r2,
    shape_stats,
    skewness,
)
from .network import (
    AdamState,
    GridResult,
    MlpModel,
    TrainConfig,
    TrainHistory,
    adam_step,
    grid_search,
    init_network,
    loss_and_gradients,
    min_width_bound,
    train,
)
from .pipeline import (
    FEATURE_NAMES,
    Dataset,
    Fences,
    PipelineReport,
    PreprocessResult,
    Sample,
    Scaler,
    SplitSpec,
    Stage,
    deduplicate,
    filter_by_fences,
    filter_liquidus,
    fit_scaler,
    iqr_fences,
    log_transform,
    preprocess,
    sample_nbo_t,
    split,
)
from .sensitivity import (
    Direction,
    SensitivityReport,
    connection_weights,
    interpret_sign,
)

__all__ = [
    "AdamState",
    "Composition",
    "Dataset",
    "Direction",
    "EvalReport",
    "FEATURE_NAMES",
    "Fences",
    "GridResult",
    "MOLAR_MASS_G_PER_MOL",
    "MeltviscError",
    "MlpModel",
    "MoleFractions",
    "PipelineReport",
    "PreprocessResult",
    "SPECIES",
    "SPECIES_MAX_MASS_PERCENT",
    "SPECIES_ROLE",
    "Sample",
    "Scaler",
    "SensitivityReport",
    "SpeciesRole",
    "SplitSpec",
    "Stage",
    "SuspensionParams",
    "SynthSpec",
    "SynthTruth",
    "TEMPERATURE_RANGE_K",
    "TrainConfig",
    "TrainHistory",
    "VftParams",
    "adam_step",
    "arrhenius_log10_eta",
    "compare_models",
    "comparison_table",
    "connection_weights",
    "deduplicate",
    "error_std",
    "evaluate",
    "excess_kurtosis",
    "filter_by_fences",
    "filter_liquidus",
    "fit_scaler",
    "generate_synthetic",
    "grid_search",
    "init_network",
    "interpret_sign",
    "iqr_fences",
    "liquidus_temperature",
    "loss_and_gradients",
    "log_transform",
    "mae",
    "min_width_bound",
    "mse",
    "nbo_t",
    "polymerization_degree",
    "preprocess",
    "r2",
    "roscoe_einstein",
    "sample_nbo_t",
    "shape_stats",
    "skewness",
    "species_role",
    "split",
    "to_mole_fractions",
    "train",
    "vft_log10_eta",
]

__version__ = "0.1.0"
