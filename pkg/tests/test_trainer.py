"""Tests for the training loop, proximal steps and pruning."""

import numpy as np
import pytest
from pydantic import ValidationError

from sparsid.errors import ConfigError, DataError, DisconnectedLayerError, NumericalError
from sparsid.mlp_core import LayerParams, Network, init_network, predict
from sparsid.narx_data import build_regressors, normalize, multisine, simulate_tank
from sparsid.narx_data import config as tank_config
from sparsid.narx_data.tank import default_tank_params
from sparsid.sparse_bayes import Granularity, init_hyper
from sparsid.trainer import (
    TrainConfig, group_soft_threshold, inner_optimize, latest_checkpoint, load_model, neuron_sparsity,
    outer_train, prune, resolve_config, save_model, soft_threshold, sparsity,
)
from utils import seed_stream


def _cfg(**overrides):
    values = dict(layer_widths=[6], n_a=1, n_b=1, t_max=3, inner_steps=20, batch_size=16, prune_start_iter=2)
    values.update(overrides)
    return TrainConfig(**values)


@pytest.fixture
def toy_ds(toy_signal):
    return normalize(build_regressors(toy_signal, 1, 1))[0]


# ── Config ──

@pytest.mark.unit
def test_config_lambda_alias_and_lists():
    """Test λ loads under its alias, as a scalar or one value per layer."""
    cfg = TrainConfig.model_validate({"layer_widths": [4, 4], "n_a": 1, "n_b": 1, "lambda": [0.1, 0.2, 0.3]})
    assert cfg.lambdas() == [0.1, 0.2, 0.3]
    assert cfg.snapshot()["lambda"] == [0.1, 0.2, 0.3]
    with pytest.raises(ValidationError, match="one value per layer"):
        TrainConfig.model_validate({"layer_widths": [4], "n_a": 1, "n_b": 1, "lambda": [0.1]})


@pytest.mark.unit
def test_config_rejects_bad_values():
    """Test out-of-range config values are rejected."""
    with pytest.raises(ValidationError, match="prune_start_iter"):
        _cfg(t_max=2, prune_start_iter=3)
    with pytest.raises(ValidationError):
        _cfg(step_size=0.0)
    with pytest.raises(ValidationError):
        TrainConfig.model_validate({"layer_widths": [4], "n_a": 1, "n_b": 1, "colour": "red"})


@pytest.mark.unit
def test_config_missing_key_is_named():
    """Test a missing required key is named in the error."""
    with pytest.raises(ValidationError, match="layer_widths"):
        TrainConfig.model_validate({"n_a": 1, "n_b": 1})


@pytest.mark.unit
def test_resolve_config_precedence(tmp_path):
    """Test flags override the file, which overrides the preset."""
    path = tmp_path / "cfg.json"
    path.write_text('{"lambda": 0.2, "seed": 4, "t_max": 9}')
    cfg = resolve_config("prediction", path, {"seed": 11, "method": None})
    assert cfg.layer_widths == [100, 100]
    assert (cfg.n_a, cfg.n_b) == (5, 5)
    assert cfg.lam == 0.2
    assert cfg.seed == 11
    assert cfg.method.value == "bayes"


@pytest.mark.unit
def test_resolve_config_errors(tmp_path):
    """Test unknown presets and nested config files are rejected."""
    with pytest.raises(ConfigError, match="unknown preset"):
        resolve_config("huge")
    nested = tmp_path / "nested.json"
    nested.write_text('{"trainer": {"lambda": 1}}')
    with pytest.raises(ConfigError, match="nested"):
        resolve_config(path=nested)


# ── Proximal steps ──

@pytest.mark.unit
def test_soft_threshold_scalar_example():
    """Test gradient step then prox on (w - 1)²/2 from w = 0 with step 1 and λω = 0.4."""
    w = 0.0 - 1.0 * (0.0 - 1.0)
    assert soft_threshold(np.array([w]), 0.4)[0] == pytest.approx(0.6, abs=1e-15)


@pytest.mark.unit
def test_soft_threshold_exact_zeros():
    """Test soft-thresholding yields exact zeros."""
    out = soft_threshold(np.array([0.3, -0.2, 0.05, -0.5]), 0.25)
    assert out[1] == 0.0 and out[2] == 0.0
    assert out.tolist()[0] == pytest.approx(0.05)
    assert out.tolist()[3] == pytest.approx(-0.25)


@pytest.mark.unit
def test_group_soft_threshold_rows():
    """Test group thresholding zeroes whole rows."""
    W = np.array([[3.0, 4.0], [0.1, 0.1]])
    out = group_soft_threshold(W, 1.0 / np.sqrt(2), Granularity.ROW)
    assert np.allclose(out[0], W[0] * (1 - 1.0 / 5.0))
    assert np.all(out[1] == 0.0)


@pytest.mark.unit
def test_prox_decreases_composite_objective(rng):
    """Test one prox step lowers E + λ|ω W| on a convex least-squares toy."""
    X = rng.normal(size=(50, 4))
    y = X @ np.array([1.0, 0.0, -2.0, 0.0]) + 0.01 * rng.normal(size=50)
    w = rng.normal(size=4)
    lam, omega, eta = 0.3, np.array([1.0, 2.0, 0.5, 1.0]), 0.05
    objective = lambda v: 0.5 * np.mean((X @ v - y) ** 2) + lam * np.sum(np.abs(omega * v))
    for _ in range(30):
        grad = X.T @ (X @ w - y) / len(y)
        new = soft_threshold(w - eta * grad, eta * lam * omega)
        assert objective(new) <= objective(w) + 1e-12
        w = new


# ── Inner optimization ──

@pytest.mark.unit
def test_inner_lambda_zero_matches_unregularized(toy_ds):
    """Test λ = 0 reproduces plain SGD bit for bit."""
    base = dict(lam=0.0, seed=3)
    net = init_network([3, 6, 1], "tanh", seed_stream(3, "init"))
    hyper = init_hyper([layer.shape for layer in net.layers])
    a = inner_optimize(net, hyper, toy_ds, _cfg(**base), seed_stream(3, "batching"))
    b = inner_optimize(net, hyper, toy_ds, _cfg(**base, method="none"), seed_stream(3, "batching"))
    for x, y in zip(a.layers, b.layers):
        assert np.array_equal(x.W, y.W)
        assert np.array_equal(x.b, y.b)


@pytest.mark.unit
def test_inner_huge_omega_zeroes_weights(toy_ds):
    """Test a huge ω drives every weight to zero."""
    net = init_network([3, 6, 1], "tanh", np.random.default_rng(0))
    hyper = init_hyper([layer.shape for layer in net.layers])
    hyper.omega[0] = np.full(hyper.omega[0].shape, 1e6)
    out = inner_optimize(net, hyper, toy_ds, _cfg(lam=1.0, inner_steps=3), np.random.default_rng(0))
    assert np.all(out.layers[0].W == 0.0)


@pytest.mark.unit
def test_inner_keeps_masked_entries_zero(toy_ds):
    """Test pruned entries stay zero through the inner loop."""
    net = init_network([3, 6, 1], "tanh", np.random.default_rng(0))
    net.layers[0].mask[0, :3] = False
    net.layers[0].W[0, :3] = 0.0
    hyper = init_hyper([layer.shape for layer in net.layers])
    out = inner_optimize(net, hyper, toy_ds, _cfg(), np.random.default_rng(0))
    assert np.all(out.layers[0].W[0, :3] == 0.0)
    assert not np.shares_memory(out.layers[0].W, net.layers[0].W)


@pytest.mark.unit
def test_inner_non_finite_loss_aborts(toy_ds):
    """Test an exploding step size raises a numerical error."""
    net = init_network([3, 6, 1], "tanh", np.random.default_rng(0))
    hyper = init_hyper([layer.shape for layer in net.layers])
    with pytest.raises(NumericalError) as excinfo:
        inner_optimize(net, hyper, toy_ds, _cfg(step_size=1e6, lam=0.0, inner_steps=200), np.random.default_rng(0))
    assert excinfo.value.step is not None


# ── Pruning ──

def _single_layer(W):
    W = np.asarray(W, dtype=float)
    return Network(layers=[LayerParams(W=W, b=np.zeros(W.shape[1]), mask=np.ones(W.shape, dtype=bool))])


@pytest.mark.unit
def test_prune_rule_example():
    """Test one entry pruned by υ and one by |W|, the third kept."""
    net = _single_layer([[0.5, 1e-9, 0.7]])
    hyper = init_hyper([(1, 3)])
    hyper.upsilon[0] = np.array([[1e-12, 1.0, 1.0]])
    pruned, hyper2, count = prune(net, hyper, 1e-8, 1e-6)
    assert count == 2
    assert pruned.layers[0].mask.tolist() == [[False, False, True]]
    assert pruned.layers[0].W.tolist() == [[0.0, 0.0, 0.7]]
    for arr in (hyper2.upsilon, hyper2.alpha, hyper2.omega):
        assert arr[0][0, 0] == 0.0 and arr[0][0, 1] == 0.0


@pytest.mark.unit
def test_prune_epsilon_thresholds_remove_only_zeros():
    """Test tiny thresholds remove only zero weights."""
    eps = np.finfo(float).eps
    net = _single_layer([[0.0, 0.3, -1e-3]])
    hyper = init_hyper([(1, 3)])
    pruned, _, count = prune(net, hyper, eps, eps)
    assert count == 1
    assert pruned.layers[0].mask.tolist() == [[False, True, True]]


@pytest.mark.unit
def test_prune_disconnected_layer():
    """Test pruning every weight of a layer is refused."""
    net = _single_layer([[1e-9, 1e-9]])
    with pytest.raises(DisconnectedLayerError, match="layer 0 disconnected"):
        prune(net, init_hyper([(1, 2)]), 1e-8, 1e-6)


@pytest.mark.unit
def test_prune_rejects_nonpositive_thresholds(tiny_net):
    """Test non-positive thresholds are rejected."""
    with pytest.raises(ConfigError):
        prune(tiny_net, init_hyper([layer.shape for layer in tiny_net.layers]), 0.0, 1e-3)


@pytest.mark.unit
def test_pruned_forward_equals_dense_with_zeros(tiny_net, rng):
    """Test a pruned network computes the same as the dense one with zeros."""
    hyper = init_hyper([layer.shape for layer in tiny_net.layers])
    tiny_net.layers[0].W[0, 0] = 1e-5
    tiny_net.layers[1].W[2, 1] = -1e-5
    pruned, _, count = prune(tiny_net, hyper, 1e-8, 1e-4)
    assert count >= 2
    dense = tiny_net.copy()
    for layer, p in zip(dense.layers, pruned.layers):
        layer.W = np.where(p.mask, layer.W, 0.0)
    Z = rng.normal(size=(10, 3))
    assert np.array_equal(predict(pruned, Z), predict(dense, Z))


@pytest.mark.unit
def test_sparsity_counts():
    """Test the active-weight fraction."""
    assert sparsity(_single_layer([[1.0, 2.0], [3.0, 4.0]])) == 1.0
    net = _single_layer([[1.0, 2.0], [3.0, 4.0]])
    net.layers[0].mask[:] = [[True, False], [False, False]]
    assert sparsity(net) == 0.25


@pytest.mark.unit
def test_neuron_sparsity(tiny_net):
    """Test the connected-neuron fraction."""
    assert neuron_sparsity(tiny_net) == 1.0
    tiny_net.layers[1].mask[1, :] = False  # hidden unit 1 of layer 0 loses all outputs
    assert neuron_sparsity(tiny_net) == pytest.approx(5 / 6)


# ── Outer loop ──

@pytest.mark.unit
def test_outer_t_max_zero_returns_initial(toy_signal):
    """Test t_max = 0 returns the initialized network with no history."""
    cfg = _cfg(t_max=0)
    model = outer_train(cfg, build_regressors(toy_signal, 1, 1))
    assert model.history == ()
    expected = init_network([3, 6, 1], "tanh", seed_stream(cfg.seed, "init"))
    assert all(np.array_equal(a.W, b.W) for a, b in zip(model.net.layers, expected.layers))


@pytest.mark.unit
def test_outer_history_and_monotone_mask(toy_signal):
    """Test one record per iteration and masks that only shrink."""
    cfg = _cfg(t_max=6, lam=0.05, kappa_w=0.05, granularity="row")
    model = outer_train(cfg, build_regressors(toy_signal, 1, 1), build_regressors(toy_signal, 1, 1))
    assert len(model.history) == model.iteration == 6
    active = [record.active_weights for record in model.history]
    assert active == sorted(active, reverse=True)
    assert model.history[-1].sparsity == sparsity(model.net)
    assert all(record.val_rmse is not None for record in model.history)
    assert all(len(record.layers) == 2 for record in model.history)
    for layer, omega, ups in zip(model.net.layers, model.hyper.omega, model.hyper.upsilon):
        for row in range(layer.mask.shape[0]):
            active = layer.mask[row]
            assert len(set(omega[row][active].tolist())) <= 1
            assert len(set(ups[row][active].tolist())) <= 1
    for layer, ups in zip(model.net.layers, model.hyper.upsilon):
        assert np.all(ups[~layer.mask] == 0.0)
        assert np.all(layer.W[~layer.mask] == 0.0)


@pytest.mark.unit
def test_outer_rejects_lag_mismatch(toy_signal):
    """Test data built with other lags is rejected."""
    with pytest.raises(ConfigError, match="lags"):
        outer_train(_cfg(n_a=2), build_regressors(toy_signal, 1, 1))


@pytest.mark.unit
def test_outer_is_deterministic(toy_signal):
    """Test the same seed gives identical models."""
    ds = build_regressors(toy_signal, 1, 1)
    a = outer_train(_cfg(seed=9), ds)
    b = outer_train(_cfg(seed=9), ds)
    for x, y in zip(a.net.layers, b.net.layers):
        assert np.array_equal(x.W, y.W)
    assert [r.train_rmse for r in a.history] == [r.train_rmse for r in b.history]


@pytest.mark.unit
def test_outer_ratio_one_equals_full(toy_signal):
    """Test ratio 1 trains on the full dataset."""
    ds = build_regressors(toy_signal, 1, 1)
    a = outer_train(_cfg(ratio=1.0), ds)
    b = outer_train(_cfg(), ds)
    assert all(np.array_equal(x.W, y.W) for x, y in zip(a.net.layers, b.net.layers))


@pytest.mark.unit
def test_outer_early_stopping(toy_signal):
    """Test training stops once patience runs out."""
    ds = build_regressors(toy_signal, 1, 1)
    model = outer_train(_cfg(t_max=30, patience=1, step_size=1e-300, method="none"), ds, ds)
    assert len(model.history) < 30


@pytest.mark.unit
def test_checkpoint_resume_is_bitwise(toy_signal, run_dir):
    """Test stopping at a checkpoint and resuming matches an uninterrupted run."""
    ds = build_regressors(toy_signal, 1, 1)
    full = outer_train(_cfg(t_max=4), ds)
    outer_train(_cfg(t_max=4, checkpoint_every=2), ds, checkpoint_dir=run_dir)
    assert latest_checkpoint(run_dir).name == "checkpoint_0004.json"
    midway = load_model(run_dir / "checkpoint_0002.json")
    assert midway.iteration == 2
    resumed = outer_train(_cfg(t_max=4), ds, resume=midway)
    for x, y in zip(full.net.layers, resumed.net.layers):
        assert np.array_equal(x.W, y.W)
        assert np.array_equal(x.mask, y.mask)
    assert [r.train_rmse for r in full.history] == [r.train_rmse for r in resumed.history]


@pytest.mark.unit
def test_model_round_trip(toy_signal, run_dir):
    """Test a trained model survives save and load."""
    model = outer_train(_cfg(), build_regressors(toy_signal, 1, 1))
    restored = load_model(save_model(run_dir / "model.json", model))
    assert restored.config == model.config
    assert restored.norm == model.norm
    assert restored.history == model.history
    Z = np.random.default_rng(0).normal(size=(5, 3))
    assert np.array_equal(predict(restored.net, Z), predict(model.net, Z))
    for a, b in zip(restored.hyper.upsilon, model.hyper.upsilon):
        assert np.array_equal(a, b)


@pytest.mark.unit
def test_load_model_errors(run_dir):
    """Test missing and malformed model files raise data errors."""
    with pytest.raises(DataError, match="not found"):
        load_model(run_dir / "missing.json")
    bad = run_dir / "bad.json"
    bad.write_text('{"config": {}}')
    with pytest.raises(DataError, match="not a valid model"):
        load_model(bad)


@pytest.mark.integration
@pytest.mark.slow
def test_end_to_end_tank_oracle():
    """Test noiseless tank data: accurate one-step fit, sparse when regularized, dense otherwise.

    Three periods of a 1000-sample multisine from the operating point; the
    first settles, the second trains and the third is held out.
    """
    level = (tank_config.TANK_K4 * tank_config.EXCITATION_MEAN / tank_config.TANK_K1) ** 2
    params = default_tank_params(x1_0=level, x2_0=level)
    u = np.tile(multisine(1000, 4.0, n_freqs=40), 3)
    signal = simulate_tank(params, u, 4.0)
    train = build_regressors(signal.slice(994, 2000), 5, 5)
    test = build_regressors(signal.slice(1994, 3000), 5, 5)
    assert len(train) == len(test) == 1000

    base = dict(
        layer_widths=[20, 20], n_a=5, n_b=5, t_max=50, inner_steps=400, batch_size=None, granularity="shape",
    )
    regularized = outer_train(TrainConfig(**base, lam=0.005, kappa_w=0.02), train)
    plain = outer_train(TrainConfig(**base, method="none"), train)

    scaled = normalize(test, regularized.norm)[0]
    yhat = regularized.norm.unscale_y(predict(regularized.net, scaled.rows))
    test_rmse = float(np.sqrt(np.mean((yhat - test.targets) ** 2)))
    assert test_rmse < 0.1 * np.std(test.targets)
    assert regularized.history[-1].train_rmse < 0.1 * np.std(train.targets)
    assert sparsity(regularized.net) < 0.5
    assert sparsity(plain.net) == 1.0
