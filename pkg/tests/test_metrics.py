import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as scipy_stats

from meltvisc.errors import (
    ConstantTargetError,
    EmptyInputError,
    LengthMismatchError,
    MisalignedPredictionsError,
    TooFewError,
    ZeroVarianceError,
)
from meltvisc.metrics import (
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

from oracles import (
    error_std_reference,
    excess_kurtosis_reference,
    mae_reference,
    mse_reference,
    r2_reference,
    skewness_reference,
)

settings.register_profile("ci", deadline=None)
settings.load_profile("ci")

vectors = st.lists(
    st.floats(min_value=-100.0, max_value=100.0), min_size=2, max_size=300
)


@st.composite
def paired_vectors(draw, min_size=2):
    t = draw(
        st.lists(
            st.floats(min_value=-100.0, max_value=100.0),
            min_size=min_size,
            max_size=300,
        )
    )
    p = draw(
        st.lists(
            st.floats(min_value=-100.0, max_value=100.0),
            min_size=len(t),
            max_size=len(t),
        )
    )
    return t, p


class TestMse:
    def test_identical_vectors(self):
        assert mse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_value(self):
        assert mse([0.0, 0.0], [1.0, -1.0]) == 1.0

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            mse([], [])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            mse([1.0], [1.0, 2.0])


class TestMae:
    def test_identical_vectors(self):
        assert mae([3.0, 4.0, 5.0], [3.0, 4.0, 5.0]) == 0.0

    def test_hand_value(self):
        assert mae([1.0, 2.0, 3.0], [2.0, 2.0, 2.0]) == pytest.approx(2.0 / 3.0)

    @given(paired_vectors())
    def test_mae_at_most_rmse(self, pair):
        t, p = pair
        assert mae(t, p) <= math.sqrt(mse(t, p)) + 1e-12


class TestErrorStd:
    def test_identical_vectors(self):
        assert error_std([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_value(self):
        # absolute errors {0, 2} with N-1 divisor
        assert error_std([0.0, 0.0], [0.0, 2.0]) == pytest.approx(math.sqrt(2.0))

    def test_single_pair(self):
        with pytest.raises(TooFewError):
            error_std([1.0], [2.0])


class TestR2:
    def test_perfect_prediction(self):
        assert r2([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 1.0

    def test_mean_predictor_is_zero(self):
        assert r2([1.0, 2.0, 3.0], [2.0, 2.0, 2.0]) == 0.0

    def test_hand_value(self):
        assert r2([1.0, 2.0, 3.0], [1.0, 2.0, 4.0]) == pytest.approx(0.5)

    def test_constant_target(self):
        with pytest.raises(ConstantTargetError):
            r2([2.0, 2.0], [1.0, 3.0])

    @given(paired_vectors(), st.floats(min_value=-50.0, max_value=50.0))
    def test_invariant_under_common_shift(self, pair, c):
        t, p = pair
        t = np.asarray(t)
        # a spread comparable to the shift, or the sum collapses in floats
        if np.ptp(t) < 1e-6 or np.ptp(t + c) == 0:
            return
        base = r2(t, p)
        shifted = r2(t + c, np.asarray(p) + c)
        assert shifted == pytest.approx(base, rel=1e-6, abs=1e-9)


class TestShapeStats:
    def test_symmetric_residuals_have_zero_skewness(self):
        assert skewness([-1.0, 0.0, 1.0]) == 0.0
        s = shape_stats([-5.0, 0.0, 0.0, 0.0, 5.0])
        assert s.skewness == 0.0
        assert s.max_negative_error == -5.0
        assert s.max_positive_error == 5.0

    def test_brute_force_moment_oracle(self):
        residuals = [0.0, 0.0, 0.0, 1.0]
        s = shape_stats(residuals)
        assert s.skewness == pytest.approx(skewness_reference(residuals), abs=1e-12)
        assert s.kurtosis == pytest.approx(
            excess_kurtosis_reference(residuals), abs=1e-12
        )

    def test_matches_scipy_conventions(self):
        rng = np.random.default_rng(1)
        r = rng.normal(size=500)
        s = shape_stats(r)
        assert s.skewness == pytest.approx(scipy_stats.skew(r), abs=1e-12)
        assert s.kurtosis == pytest.approx(
            scipy_stats.kurtosis(r, fisher=True, bias=True), abs=1e-12
        )

    def test_too_few(self):
        with pytest.raises(TooFewError):
            shape_stats([1.0, 2.0, 3.0])
        with pytest.raises(TooFewError):
            skewness([1.0, 2.0])

    def test_zero_variance(self):
        with pytest.raises(ZeroVarianceError):
            shape_stats([2.0, 2.0, 2.0, 2.0])

    def test_extremes_bracket_residuals(self):
        rng = np.random.default_rng(2)
        r = rng.normal(size=50)
        s = shape_stats(r)
        assert np.all(r >= s.max_negative_error)
        assert np.all(r <= s.max_positive_error)


class TestOracleEquivalence:
    @given(paired_vectors(min_size=4))
    def test_all_statistics_match_brute_force(self, pair):
        t, p = pair
        assert mse(t, p) == pytest.approx(mse_reference(t, p), rel=1e-12, abs=1e-12)
        assert mae(t, p) == pytest.approx(mae_reference(t, p), rel=1e-12, abs=1e-12)
        assert error_std(t, p) == pytest.approx(
            error_std_reference(t, p), rel=1e-9, abs=1e-12
        )
        if np.ptp(np.asarray(t)) > 0:
            assert r2(t, p) == pytest.approx(r2_reference(t, p), rel=1e-9, abs=1e-12)

    @given(paired_vectors())
    def test_mae_and_std_symmetric_in_arguments(self, pair):
        t, p = pair
        assert mae(t, p) == mae(p, t)
        assert error_std(t, p) == error_std(p, t)


class TestEvaluate:
    def test_perfect_model(self):
        t = [1.0, 2.0, 3.0, 4.0]
        report = evaluate(t, t)
        assert report.mae == 0.0
        assert report.std == 0.0
        assert report.r2 == 1.0
        assert math.isnan(report.skewness)  # undefined at zero variance
        assert math.isnan(report.kurtosis)
        assert report.max_negative_error == 0.0
        assert report.max_positive_error == 0.0

    def test_report_composes_individual_statistics(self):
        rng = np.random.default_rng(3)
        t = rng.normal(size=40)
        p = t + rng.normal(scale=0.5, size=40)
        report = evaluate(t, p)
        assert report.n == 40
        assert report.mae == mae(t, p)
        assert report.std == error_std(t, p)
        assert report.r2 == r2(t, p)
        s = shape_stats(p - t)
        assert report.skewness == s.skewness
        assert report.kurtosis == s.kurtosis
        assert report.max_negative_error == s.max_negative_error
        assert report.max_positive_error == s.max_positive_error

    def test_residual_sign_convention(self):
        # e = y_pred - y_true: under-prediction shows up in the negative tail
        t = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
        p = t + np.array([-2.0, 0.1, 0.2, 0.3, 1.0])
        report = evaluate(t, p)
        assert report.max_negative_error == -2.0
        assert report.max_positive_error == 1.0

    def test_text_rendering(self):
        rng = np.random.default_rng(4)
        t = rng.normal(size=10)
        report = evaluate(t, t + rng.normal(scale=0.1, size=10))
        text = str(report)
        assert "mae:" in text and "r2:" in text


class TestCompareModels:
    def fixture(self):
        rng = np.random.default_rng(5)
        t = rng.normal(size=30)
        good = t + rng.normal(scale=0.05, size=30)
        mid = t + rng.normal(scale=0.5, size=30)
        bad = np.full(30, t.mean()) + rng.normal(scale=2.0, size=30)
        return t, good, mid, bad

    def test_identical_sets_give_identical_rows(self):
        t, good, _, _ = self.fixture()
        ranked = compare_models([("a", good), ("b", good)], t)
        assert ranked[0][1] == ranked[1][1]

    def test_ranked_by_mae(self):
        t, good, mid, bad = self.fixture()
        ranked = compare_models(
            [("bad", bad), ("good", good), ("mid", mid)], t
        )
        assert [name for name, _ in ranked] == ["good", "mid", "bad"]
        maes = [r.mae for _, r in ranked]
        assert maes == sorted(maes)

    def test_misaligned_predictions(self):
        t, good, _, _ = self.fixture()
        with pytest.raises(MisalignedPredictionsError):
            compare_models([("short", good[:-1])], t)

    def test_accepts_mapping(self):
        t, good, mid, _ = self.fixture()
        ranked = compare_models({"good": good, "mid": mid}, t)
        assert ranked[0][0] == "good"

    def test_table_rendering(self):
        t, good, mid, _ = self.fixture()
        ranked = compare_models([("modelA", good), ("modelB", mid)], t)
        table = comparison_table(ranked)
        lines = table.splitlines()
        assert lines[0].split() == ["metric", "modelA", "modelB"]
        assert lines[1].startswith("mae")
