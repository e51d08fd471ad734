import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meltvisc.baselines import (
    SuspensionParams,
    SynthSpec,
    VftParams,
    arrhenius_log10_eta,
    generate_synthetic,
    roscoe_einstein,
    vft_log10_eta,
)
from meltvisc.chemistry import liquidus_temperature
from meltvisc.errors import (
    InvalidSuspensionError,
    NonPositiveTemperatureError,
    SingularityError,
)
from meltvisc.pipeline import Stage, filter_liquidus

settings.register_profile("ci", deadline=None)
settings.load_profile("ci")


class TestVft:
    def test_flat_when_b_is_zero(self):
        p = VftParams(a=1.0, b=0.0, c=0.0)
        for t in (500.0, 1500.0, 2500.0):
            assert vft_log10_eta(p, t) == 1.0

    def test_hand_value(self):
        assert vft_log10_eta(VftParams(a=-3.0, b=6000.0, c=500.0), 1500.0) == 3.0

    def test_singularity(self):
        p = VftParams(a=0.0, b=1000.0, c=700.0)
        with pytest.raises(SingularityError):
            vft_log10_eta(p, 700.0)
        with pytest.raises(SingularityError):
            vft_log10_eta(p, 500.0)

    def test_negative_c_rejected(self):
        with pytest.raises(ValueError):
            VftParams(a=0.0, b=1.0, c=-1.0)

    def test_strictly_decreasing_in_temperature_for_positive_b(self):
        p = VftParams(a=-2.0, b=4000.0, c=400.0)
        temps = np.linspace(500.0, 2500.0, 200)
        values = [vft_log10_eta(p, t) for t in temps]
        assert all(b < a for a, b in zip(values, values[1:]))


class TestArrhenius:
    def test_hand_value(self):
        assert arrhenius_log10_eta(0.0, 1500.0, 1500.0) == 1.0

    def test_non_positive_temperature(self):
        with pytest.raises(NonPositiveTemperatureError):
            arrhenius_log10_eta(0.0, 1.0, 0.0)

    @given(
        st.floats(min_value=-5.0, max_value=5.0),
        st.floats(min_value=0.0, max_value=10000.0),
        st.floats(min_value=1.0, max_value=3000.0),
    )
    def test_equals_vft_with_zero_c(self, a, b, t):
        direct = arrhenius_log10_eta(a, b, t)
        via_vft = vft_log10_eta(VftParams(a=a, b=b, c=0.0), t)
        assert abs(direct - via_vft) <= 1e-15


class TestRoscoeEinstein:
    def test_pure_liquid(self):
        p = SuspensionParams(a=1.35, b=-2.5, c=0.0)
        assert roscoe_einstein(2.0, p) == 2.0

    def test_hand_value(self):
        assert roscoe_einstein(2.0, SuspensionParams(a=1.0, b=2.0, c=0.5)) == 0.5

    def test_invalid_suspension(self):
        with pytest.raises(InvalidSuspensionError):
            roscoe_einstein(1.0, SuspensionParams(a=2.0, b=1.0, c=0.5))

    def test_fraction_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            SuspensionParams(a=1.0, b=1.0, c=1.0)

    def test_negative_exponent_makes_solids_thicken(self):
        p_base = dict(a=1.35, b=-2.5)
        values = [
            roscoe_einstein(1.0, SuspensionParams(c=c, **p_base))
            for c in np.linspace(0.0, 0.7, 15)
        ]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestGenerateSynthetic:
    def test_zero_noise_targets_reproduce_exactly(self):
        spec = SynthSpec(n_samples=50, seed=4)
        ds, truth = generate_synthetic(spec)
        for s in ds:
            expected = 10.0 ** truth.log10_eta(s.composition, s.temperature_k)
            assert s.viscosity == expected

    def test_same_seed_same_dataset(self):
        a, _ = generate_synthetic(SynthSpec(n_samples=30, seed=9))
        b, _ = generate_synthetic(SynthSpec(n_samples=30, seed=9))
        assert np.array_equal(a.predictor_matrix(), b.predictor_matrix())
        assert np.array_equal(a.target_vector(), b.target_vector())

    def test_different_seed_differs(self):
        a, _ = generate_synthetic(SynthSpec(n_samples=30, seed=9))
        b, _ = generate_synthetic(SynthSpec(n_samples=30, seed=10))
        assert not np.array_equal(a.target_vector(), b.target_vector())

    def test_row_count_and_liquidus_margin(self):
        ds, _ = generate_synthetic(SynthSpec(n_samples=2000, seed=0))
        assert len(ds) == 2000
        assert ds.stage is Stage.RAW
        for s in ds:
            assert s.temperature_k > liquidus_temperature(s.composition)

    def test_liquidus_filter_removes_nothing(self):
        ds, _ = generate_synthetic(SynthSpec(n_samples=200, seed=2))
        assert len(filter_liquidus(ds)) == len(ds)

    def test_partial_species_simplex(self):
        spec = SynthSpec(n_samples=20, n_active_species=5, seed=1)
        ds, truth = generate_synthetic(spec)
        assert truth.active_species == ("CaO", "SiO2", "MgO", "Al2O3", "TiO2")
        for s in ds:
            amounts = s.composition.amounts
            assert np.all(amounts[5:] == 0.0)
            assert amounts[:5].sum() == pytest.approx(100.0, abs=1e-9)

    def test_noise_changes_targets(self):
        quiet, truth = generate_synthetic(SynthSpec(n_samples=40, seed=3))
        noisy, _ = generate_synthetic(SynthSpec(n_samples=40, seed=3, noise_std=0.1))
        assert np.array_equal(quiet.predictor_matrix(), noisy.predictor_matrix())
        assert not np.array_equal(quiet.target_vector(), noisy.target_vector())

    def test_temperatures_within_spec_range(self):
        spec = SynthSpec(n_samples=100, t_min=1500.0, t_max=1700.0, seed=6)
        ds, _ = generate_synthetic(spec)
        temps = [s.temperature_k for s in ds]
        assert min(temps) >= 1500.0
        assert max(temps) < 1700.0

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SynthSpec(n_samples=0)
        with pytest.raises(ValueError):
            SynthSpec(t_min=900.0)  # below the reference range
        with pytest.raises(ValueError):
            SynthSpec(t_min=2000.0, t_max=1500.0)
        with pytest.raises(ValueError):
            SynthSpec(n_active_species=25)
        with pytest.raises(ValueError):
            SynthSpec(noise_std=-0.1)
