import numpy as np
import pytest

from meltvisc.errors import DegenerateModelError
from meltvisc.network import MlpModel, TrainConfig, init_network
from meltvisc.sensitivity import (
    Direction,
    SensitivityReport,
    connection_weights,
    interpret_sign,
)


def model_from(weights, activations=None):
    weights = [np.asarray(w, dtype=float) for w in weights]
    dims = tuple(w.shape[0] for w in weights) + (weights[-1].shape[1],)
    if activations is None:
        activations = ("relu",) * (len(dims) - 2)
    return MlpModel(
        layer_dims=dims,
        activations=activations,
        weights=weights,
        biases=[np.zeros(w.shape[1]) for w in weights],
    )


class TestConnectionWeights:
    def test_all_zero_weights_degenerate(self):
        model = model_from([np.zeros((2, 3)), np.zeros((3, 1))])
        with pytest.raises(DegenerateModelError):
            connection_weights(model)

    def test_single_hidden_layer_hand_product(self):
        # in->hidden [1, -1], hidden->out [2, 1]: raw = 1*2 + (-1)*1 = 1
        model = model_from([np.array([[1.0, -1.0]]), np.array([[2.0], [1.0]])])
        report = connection_weights(model)
        assert report.raw.tolist() == [1.0]
        assert report.relative_pct.tolist() == [100.0]

    def test_identity_hidden_layers_pass_output_weights_through(self):
        out = np.array([[3.0], [-4.0]])
        model = model_from([np.eye(2), np.eye(2), out])
        report = connection_weights(model)
        assert report.raw.tolist() == [3.0, -4.0]
        assert report.relative_pct.tolist() == [
            100.0 * 3.0 / 7.0,
            100.0 * -4.0 / 7.0,
        ]
        assert report.rank == (2, 1)

    def test_absolute_relative_importances_sum_to_100(self):
        model = init_network(TrainConfig(depth=3, width=22, seed=5))
        report = connection_weights(model)
        assert abs(np.abs(report.relative_pct).sum() - 100.0) <= 1e-9
        assert sorted(report.rank) == list(range(1, 21))

    def test_linear_network_score_equals_jacobian(self):
        rng = np.random.default_rng(8)
        weights = [rng.normal(size=(4, 6)), rng.normal(size=(6, 5)),
                   rng.normal(size=(5, 1))]
        model = model_from(weights, activations=("identity", "identity"))
        report = connection_weights(model)
        # finite-difference Jacobian of the (linear) network
        x0 = rng.normal(size=4)
        h = 1e-6
        for i in range(4):
            up, down = x0.copy(), x0.copy()
            up[i] += h
            down[i] -= h
            slope = (model.forward(up)[0, 0] - model.forward(down)[0, 0]) / (2 * h)
            assert slope == pytest.approx(report.raw[i], rel=1e-6, abs=1e-8)

    def test_invariance_under_compensated_layer_rescaling(self):
        rng = np.random.default_rng(9)
        weights = [rng.normal(size=(3, 4)), rng.normal(size=(4, 1))]
        base = connection_weights(model_from(weights))
        k = 3.7
        rescaled = connection_weights(
            model_from([weights[0] * k, weights[1] / k])
        )
        assert np.allclose(base.relative_pct, rescaled.relative_pct, atol=1e-9)
        assert np.allclose(base.raw, rescaled.raw, atol=1e-9)

    def test_default_input_names(self):
        model = init_network(TrainConfig(depth=1, width=4, seed=0))
        report = connection_weights(model)
        assert report.inputs[0] == "CaO"
        assert report.inputs[-1] == "temperature_k"
        small = init_network(TrainConfig(depth=1, width=4, seed=0), n_inputs=3)
        assert connection_weights(small).inputs == ("x0", "x1", "x2")

    def test_explicit_names_validated(self):
        model = init_network(TrainConfig(depth=1, width=4, seed=0), n_inputs=3)
        with pytest.raises(ValueError):
            connection_weights(model, input_names=("a", "b"))


class TestInterpretSign:
    def test_sign_mapping(self):
        report = SensitivityReport(
            inputs=("a", "b", "c"),
            raw=np.array([-3.2, 0.5, 0.0]),
            relative_pct=np.array([-86.5, 13.5, 0.0]),
            rank=(1, 2, 3),
        )
        assert interpret_sign(report) == (
            Direction.INVERSELY_PROPORTIONAL,
            Direction.DIRECTLY_PROPORTIONAL,
            Direction.NEUTRAL,
        )
