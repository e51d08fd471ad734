"""Composition data model and melt-chemistry derived quantities.

Mass-percent compositions over a fixed set of 19 oxide/fluoride species are
converted to mole fractions and reduced to scalar structure descriptors: the
depolymerization ratio NBO/T (non-bridging oxygens per tetrahedral atom),
the polymerization degree Q = 4 - NBO/T, and a linear liquidus-temperature
estimate.

All functions here are pure and operate on immutable values, so they are
safe for concurrent use.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping

import numpy as np

from .errors import (
    UnknownSpeciesError,
    ZeroCompositionError,
    ZeroDenominatorError,
)

#: Canonical species ordering. CSV columns, predictor matrices and persisted
#: models all follow this order; temperature is appended after the species
#: wherever a full 20-feature vector is needed.
SPECIES: tuple[str, ...] = (
    "CaO",
    "SiO2",
    "MgO",
    "Al2O3",
    "TiO2",
    "MnO",
    "FeO",
    "CaF2",
    "Na2O",
    "Li2O",
    "B2O3",
    "K2O",
    "ZrO2",
    "Fe2O3",
    "P2O5",
    "NiO",
    "SO3",
    "Cr2O3",
    "V2O5",
)

N_SPECIES = len(SPECIES)

_SPECIES_INDEX = {name: i for i, name in enumerate(SPECIES)}

#: Molar masses in g/mol, derived from standard atomic weights and rounded
#: to 3 decimals. These constants are part of the numeric contract: tests
#: and any downstream reproduction must use the same table.
MOLAR_MASS_G_PER_MOL: dict[str, float] = {
    "CaO": 56.077,
    "SiO2": 60.084,
    "MgO": 40.304,
    "Al2O3": 101.961,
    "TiO2": 79.866,
    "MnO": 70.937,
    "FeO": 71.844,
    "CaF2": 78.075,
    "Na2O": 61.979,
    "Li2O": 29.881,
    "B2O3": 69.620,
    "K2O": 94.196,
    "ZrO2": 123.223,
    "Fe2O3": 159.688,
    "P2O5": 141.945,
    "NiO": 74.693,
    "SO3": 80.063,
    "Cr2O3": 151.990,
    "V2O5": 181.880,
}

_MOLAR_MASS_ARRAY = np.array([MOLAR_MASS_G_PER_MOL[s] for s in SPECIES])

#: Per-species maxima (mass %) observed in the reference database this
#: toolkit's defaults were calibrated against. Parsing in strict mode warns
#: when a value exceeds its species maximum; nothing is rejected.
SPECIES_MAX_MASS_PERCENT: dict[str, float] = {
    "CaO": 78.00,
    "SiO2": 100.00,
    "MgO": 55.58,
    "Al2O3": 100.00,
    "TiO2": 49.99,
    "MnO": 72.25,
    "FeO": 83.49,
    "CaF2": 34.60,
    "Na2O": 35.79,
    "Li2O": 20.00,
    "B2O3": 31.02,
    "K2O": 48.00,
    "ZrO2": 1.00,
    "Fe2O3": 85.10,
    "P2O5": 4.11,
    "NiO": 1.17,
    "SO3": 2.02,
    "Cr2O3": 3.43,
    "V2O5": 7.18,
}

#: Temperature range (K) covered by the same reference database.
TEMPERATURE_RANGE_K: tuple[float, float] = (1152.15, 2755.15)


class SpeciesRole(enum.Enum):
    """Structural role of a species in the oxide network.

    MO and M2O oxides act as network modifiers, MO2 as network formers,
    M2O3 as amphoterics; M2O5, fluoride and the remaining species are kept
    in their own buckets because the NBO/T expression excludes them.
    """

    MO = "MO"
    M2O = "M2O"
    M2O3 = "M2O3"
    MO2 = "MO2"
    M2O5 = "M2O5"
    FLUORIDE = "fluoride"
    OTHER = "other"


#: Fixed role classification for every canonical species. The mapping is
#: data, not code: an alternative taxonomy is a table edit.
SPECIES_ROLE: dict[str, SpeciesRole] = {
    "CaO": SpeciesRole.MO,
    "MgO": SpeciesRole.MO,
    "MnO": SpeciesRole.MO,
    "FeO": SpeciesRole.MO,
    "NiO": SpeciesRole.MO,
    "Na2O": SpeciesRole.M2O,
    "Li2O": SpeciesRole.M2O,
    "K2O": SpeciesRole.M2O,
    "Al2O3": SpeciesRole.M2O3,
    "B2O3": SpeciesRole.M2O3,
    "Fe2O3": SpeciesRole.M2O3,
    "Cr2O3": SpeciesRole.M2O3,
    "SiO2": SpeciesRole.MO2,
    "TiO2": SpeciesRole.MO2,
    "ZrO2": SpeciesRole.MO2,
    "P2O5": SpeciesRole.M2O5,
    "V2O5": SpeciesRole.M2O5,
    "CaF2": SpeciesRole.FLUORIDE,
    "SO3": SpeciesRole.OTHER,
}

_ROLE_MASK = {
    role: np.array([SPECIES_ROLE[s] is role for s in SPECIES])
    for role in SpeciesRole
}

# Liquidus coefficients (K per mass %). Fluorine enters through the mass
# fraction of F in CaF2 (2 * 18.998 / 78.075), so the CaF2 slot carries the
# chained coefficient.
_LIQUIDUS_INTERCEPT_K = 1473.0
LIQUIDUS_COEFF_K_PER_PCT: dict[str, float] = {
    "SiO2": -1.518,
    "CaO": 2.59,
    "Al2O3": 1.56,
    "MgO": -17.1,
    "Na2O": -9.06,
    "K2O": -6.0,
    "Li2O": 18.0,
    "FeO": -9.87,
    "MnO": -2.12,
}
FLUORINE_MASS_PER_CAF2 = 2 * 18.998 / 78.075
_LIQUIDUS_F_COEFF = 4.8

_LIQUIDUS_VECTOR = np.zeros(N_SPECIES)
for _name, _coeff in LIQUIDUS_COEFF_K_PER_PCT.items():
    _LIQUIDUS_VECTOR[_SPECIES_INDEX[_name]] = _coeff
_LIQUIDUS_VECTOR[_SPECIES_INDEX["CaF2"]] = _LIQUIDUS_F_COEFF * FLUORINE_MASS_PER_CAF2


def _coerce_species_vector(values, what: str) -> np.ndarray:
    """Normalize a mapping or sequence into a canonical-order float array."""
    if isinstance(values, Mapping):
        arr = np.zeros(N_SPECIES)
        for name, value in values.items():
            idx = _SPECIES_INDEX.get(name)
            if idx is None:
                raise UnknownSpeciesError(f"unknown species {name!r}")
            arr[idx] = float(value)
    else:
        arr = np.asarray(values, dtype=float).copy()
        if arr.shape != (N_SPECIES,):
            raise ValueError(
                f"{what} expects {N_SPECIES} values in canonical species "
                f"order, got shape {arr.shape}"
            )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    return arr


class Composition:
    """Mass-percent amounts over the canonical species set.

    Amounts are stored in canonical order as a read-only float array; species
    missing from a mapping default to 0. The total may fall short of 100 %
    (unlisted constituents) but may not exceed 100 % by more than
    ``sum_tolerance``.

    Parameters
    ----------
    amounts : mapping or sequence
        Either ``{species name: mass percent}`` or 19 values in canonical
        species order.
    sum_tolerance : float
        Allowed excess of the total over 100 %, in mass percent.
    """

    __slots__ = ("_amounts",)

    def __init__(self, amounts, *, sum_tolerance: float = 1.0):
        arr = _coerce_species_vector(amounts, "Composition")
        if np.any(arr < 0):
            bad = SPECIES[int(np.argmin(arr))]
            raise ValueError(f"negative amount for {bad}")
        total = float(arr.sum())
        if total > 100.0 + sum_tolerance:
            raise ValueError(
                f"amounts sum to {total:.4f} %mass, above 100 + "
                f"{sum_tolerance} tolerance"
            )
        arr.flags.writeable = False
        self._amounts = arr

    @property
    def amounts(self) -> np.ndarray:
        """Read-only array of mass percents in canonical species order."""
        return self._amounts

    def __getitem__(self, species: str) -> float:
        idx = _SPECIES_INDEX.get(species)
        if idx is None:
            raise UnknownSpeciesError(f"unknown species {species!r}")
        return float(self._amounts[idx])

    def as_dict(self) -> dict[str, float]:
        return {s: float(v) for s, v in zip(SPECIES, self._amounts)}

    def total(self) -> float:
        return float(self._amounts.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Composition):
            return NotImplemented
        return np.array_equal(self._amounts, other._amounts)

    def __repr__(self) -> str:
        nonzero = {s: round(v, 6) for s, v in self.as_dict().items() if v != 0.0}
        return f"Composition({nonzero})"


class MoleFractions:
    """Dimensionless mole fractions over the canonical species set.

    All fractions lie in [0, 1] and sum to 1 within 1e-12.
    """

    __slots__ = ("_fractions",)

    def __init__(self, fractions):
        arr = _coerce_species_vector(fractions, "MoleFractions")
        if np.any(arr < 0) or np.any(arr > 1):
            raise ValueError("mole fractions must lie in [0, 1]")
        if abs(float(arr.sum()) - 1.0) > 1e-12:
            raise ValueError(f"mole fractions sum to {arr.sum()!r}, not 1")
        arr.flags.writeable = False
        self._fractions = arr

    @property
    def fractions(self) -> np.ndarray:
        return self._fractions

    def __getitem__(self, species: str) -> float:
        idx = _SPECIES_INDEX.get(species)
        if idx is None:
            raise UnknownSpeciesError(f"unknown species {species!r}")
        return float(self._fractions[idx])

    def as_dict(self) -> dict[str, float]:
        return {s: float(v) for s, v in zip(SPECIES, self._fractions)}

    def __repr__(self) -> str:
        nonzero = {s: round(v, 6) for s, v in self.as_dict().items() if v != 0.0}
        return f"MoleFractions({nonzero})"


def species_role(species: str) -> SpeciesRole:
    """Return the structural role of a canonical species.

    Raises
    ------
    UnknownSpeciesError
        If ``species`` is not one of the 19 canonical names.
    """
    role = SPECIES_ROLE.get(species)
    if role is None:
        raise UnknownSpeciesError(f"unknown species {species!r}")
    return role


def to_mole_fractions(comp: Composition) -> MoleFractions:
    """Convert mass-percent amounts to mole fractions.

    fraction_i = (amount_i / M_i) / sum_j (amount_j / M_j) with the fixed
    molar-mass table ``MOLAR_MASS_G_PER_MOL``.

    Raises
    ------
    ZeroCompositionError
        If every amount is zero.
    """
    moles = comp.amounts / _MOLAR_MASS_ARRAY
    total = moles.sum()
    if total == 0.0:
        raise ZeroCompositionError("all amounts are zero")
    return MoleFractions(moles / total)


def nbo_t(mf: MoleFractions) -> float:
    """Depolymerization ratio NBO/T of a melt.

    NBO/T = 2 (sum X_MO + sum X_M2O - sum X_M2O3)
            / (sum X_MO2 + 2 sum X_M2O3)

    Species with role M2O5, fluoride or other contribute to neither the
    numerator nor the denominator. Alumina-rich systems can yield negative
    values; they are returned unclamped (outlier fences downstream are the
    mechanism for removing extremes).

    Raises
    ------
    ZeroDenominatorError
        If the composition contains no MO2 or M2O3 species.
    """
    x = mf.fractions
    mo = float(x[_ROLE_MASK[SpeciesRole.MO]].sum())
    m2o = float(x[_ROLE_MASK[SpeciesRole.M2O]].sum())
    m2o3 = float(x[_ROLE_MASK[SpeciesRole.M2O3]].sum())
    mo2 = float(x[_ROLE_MASK[SpeciesRole.MO2]].sum())
    denominator = mo2 + 2.0 * m2o3
    if denominator == 0.0:
        raise ZeroDenominatorError(
            "no network-forming species (MO2 or M2O3) in composition"
        )
    return 2.0 * (mo + m2o - m2o3) / denominator


def polymerization_degree(nbo_t_value: float) -> float:
    """Polymerization degree Q = 4 - NBO/T."""
    if not math.isfinite(nbo_t_value):
        raise ValueError("NBO/T must be finite")
    return 4.0 - nbo_t_value


def liquidus_temperature(comp: Composition) -> float:
    """Linear liquidus-temperature estimate in kelvin.

    An affine function of the mass percents of SiO2, CaO, Al2O3, MgO, Na2O,
    K2O, Li2O, FeO, MnO and fluorine; species without a coefficient
    contribute nothing. Fluorine is taken as the F mass carried by CaF2.
    """
    return _LIQUIDUS_INTERCEPT_K + float(comp.amounts @ _LIQUIDUS_VECTOR)
