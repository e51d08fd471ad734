"""Closed-form viscosity relations and the synthetic-dataset generator.

The VFT law log10(eta) = a + b / (T - c) and its Arrhenius reduction (c = 0)
describe the temperature dependence of fully liquid melts; the
Roscoe-Einstein relation eta * (1 - a*c)**b gives the effective viscosity
once solids are suspended in the liquid.

:func:`generate_synthetic` builds desk-scale datasets whose targets follow a
VFT surface with composition-weighted coefficients. The coefficient scheme
is an invention of this toolkit (no measured system is implied); it exists
so that training, sensitivity and statistics checks have exact ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chemistry import (
    N_SPECIES,
    SPECIES,
    TEMPERATURE_RANGE_K,
    Composition,
    liquidus_temperature,
)
from .errors import (
    InvalidSuspensionError,
    NonPositiveTemperatureError,
    SingularityError,
)
from .pipeline import Dataset, Sample, Stage


@dataclass(frozen=True)
class VftParams:
    """VFT constants: a in log10(Pa*s), b and c in kelvin.

    By convention c >= 0; the Arrhenius form is the special case c = 0.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.a, self.b, self.c))):
            raise ValueError("VFT parameters must be finite")
        if self.c < 0:
            raise ValueError("divergence temperature c must be >= 0")


def vft_log10_eta(params: VftParams, temperature_k: float) -> float:
    """log10 viscosity from the VFT law, a + b / (T - c).

    Raises
    ------
    SingularityError
        If the temperature is at or below the divergence temperature c.
    """
    if temperature_k <= params.c:
        raise SingularityError(
            f"T = {temperature_k} K is at or below the divergence "
            f"temperature c = {params.c} K"
        )
    return params.a + params.b / (temperature_k - params.c)


def arrhenius_log10_eta(a: float, b: float, temperature_k: float) -> float:
    """Arrhenius form: the VFT law with c = 0 exactly.

    Raises
    ------
    NonPositiveTemperatureError
        If the temperature is not strictly positive.
    """
    if temperature_k <= 0:
        raise NonPositiveTemperatureError(f"T = {temperature_k} K must be > 0")
    return vft_log10_eta(VftParams(a=a, b=b, c=0.0), temperature_k)


@dataclass(frozen=True)
class SuspensionParams:
    """Roscoe-Einstein constants: a, b system-dependent, c the volume
    fraction of suspended solids in [0, 1)."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.a, self.b, self.c))):
            raise ValueError("suspension parameters must be finite")
        if not 0.0 <= self.c < 1.0:
            raise ValueError("solid volume fraction c must lie in [0, 1)")


def roscoe_einstein(eta_pa_s: float, params: SuspensionParams) -> float:
    """Effective viscosity of a liquid-solid suspension: eta * (1 - a*c)**b.

    Raises
    ------
    InvalidSuspensionError
        If a*c >= 1, which would make the base non-positive.
    """
    if eta_pa_s <= 0:
        raise ValueError("liquid viscosity must be positive")
    base = 1.0 - params.a * params.c
    if base <= 0:
        raise InvalidSuspensionError(
            f"a*c = {params.a * params.c} >= 1 gives a non-positive base"
        )
    return eta_pa_s * base**params.b


# --- synthetic data -------------------------------------------------------


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic dataset.

    Samples are compositions on the simplex over the first
    ``n_active_species`` canonical species (scaled to 100 %mass), drawn from
    a symmetric Dirichlet with concentration ``dirichlet_alpha``.
    Temperatures are uniform between each composition's liquidus estimate
    and ``t_max``. Targets follow a VFT surface whose a, b, c are
    composition-weighted mixes of per-species coefficients, plus optional
    Gaussian noise on the log10 scale.
    """

    n_samples: int = 2000
    n_active_species: int = N_SPECIES
    t_min: float = 1400.0
    t_max: float = 2300.0
    dirichlet_alpha: float = 3.0
    noise_std: float = 0.0
    seed: int = 0
    a_range: tuple[float, float] = (-3.5, -1.5)
    b_range: tuple[float, float] = (5000.0, 7000.0)
    c_range: tuple[float, float] = (300.0, 500.0)

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if not 1 <= self.n_active_species <= N_SPECIES:
            raise ValueError(f"n_active_species must be in [1, {N_SPECIES}]")
        lo, hi = TEMPERATURE_RANGE_K
        if not (lo <= self.t_min < self.t_max <= hi):
            raise ValueError(
                f"temperature range must satisfy {lo} <= t_min < t_max <= {hi}"
            )
        if self.dirichlet_alpha <= 0:
            raise ValueError("dirichlet_alpha must be positive")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        if self.c_range[1] >= self.t_min:
            raise ValueError("c_range must stay below t_min")


@dataclass(frozen=True)
class SynthTruth:
    """Generating parameters of a synthetic dataset.

    Knowing these makes any learner's error floor exact: with zero noise the
    dataset targets are reproduced bit for bit by :meth:`log10_eta`.
    """

    active_species: tuple[str, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]
    c: tuple[float, ...]
    spec: SynthSpec

    def coefficients(self, comp: Composition) -> VftParams:
        """Composition-weighted VFT constants; weights are %mass / 100."""
        weights = [comp[s] / 100.0 for s in self.active_species]
        return VftParams(
            a=sum(w * a for w, a in zip(weights, self.a)),
            b=sum(w * b for w, b in zip(weights, self.b)),
            c=sum(w * c for w, c in zip(weights, self.c)),
        )

    def log10_eta(self, comp: Composition, temperature_k: float) -> float:
        return vft_log10_eta(self.coefficients(comp), temperature_k)


def generate_synthetic(spec: SynthSpec) -> tuple[Dataset, SynthTruth]:
    """Generate a raw-stage dataset plus its generating parameters.

    Deterministic per seed: the seed fans out to independent substreams for
    coefficients, compositions, temperatures and noise. Every temperature is
    strictly above the row's liquidus estimate, so the liquidus filter
    removes nothing by construction.
    """
    coeff_rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 0]))
    comp_rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 1]))
    temp_rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 2]))
    noise_rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 3]))

    k = spec.n_active_species
    active = SPECIES[:k]
    truth = SynthTruth(
        active_species=active,
        a=tuple(coeff_rng.uniform(*spec.a_range, k)),
        b=tuple(coeff_rng.uniform(*spec.b_range, k)),
        c=tuple(coeff_rng.uniform(*spec.c_range, k)),
        spec=spec,
    )

    alpha = np.full(k, spec.dirichlet_alpha)
    samples = []
    for _ in range(spec.n_samples):
        # rejection keeps the liquidus ceiling below t_max; compositions
        # that would leave no room for a temperature draw are redrawn
        for _attempt in range(1000):
            weights = comp_rng.dirichlet(alpha)
            amounts = np.zeros(N_SPECIES)
            amounts[:k] = weights * 100.0
            comp = Composition(amounts)
            t_floor = max(spec.t_min, liquidus_temperature(comp) + 1.0)
            if t_floor < spec.t_max:
                break
        else:
            raise ValueError(
                "could not draw a composition with liquidus below t_max"
            )
        temperature = float(temp_rng.uniform(t_floor, spec.t_max))
        log10_eta = truth.log10_eta(comp, temperature)
        if spec.noise_std > 0:
            log10_eta += float(noise_rng.normal(0.0, spec.noise_std))
        samples.append(Sample(comp, temperature, 10.0**log10_eta))

    dataset = Dataset(samples, Stage.RAW, provenance=f"synthetic(seed={spec.seed})")
    return dataset, truth
