"""Shared test fixtures."""

import numpy as np
import pytest

from sparsid.mlp_core import LayerParams, Network, init_network
from sparsid.narx_data import SignalPair, simulate_tank, multisine
from sparsid.narx_data.tank import default_tank_params
from sparsid.sparse_bayes import init_hyper
from sparsid.trainer import TrainConfig, TrainedModel

# y(t+1) = 0.3 u(t) + 0.2 u(t-1) + 0.5 y(t-1)
LINEAR_COEFS = np.array([0.3, 0.2, 0.5])


def linear_signal(n: int = 300, seed: int = 0) -> SignalPair:
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1.0, 1.0, n)
    y = np.zeros(n)
    y[:2] = rng.uniform(-0.5, 0.5, 2)
    for t in range(1, n - 1):
        y[t + 1] = LINEAR_COEFS[0] * u[t] + LINEAR_COEFS[1] * u[t - 1] + LINEAR_COEFS[2] * y[t - 1]
    return SignalPair(u=u, y=y, dt=1.0, name="linear")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_net(rng) -> Network:
    return init_network([3, 4, 2, 1], "tanh", rng)


@pytest.fixture
def toy_signal() -> SignalPair:
    """Noiseless linear NARX system with n_a = n_b = 1."""
    return linear_signal()


@pytest.fixture
def oracle_model() -> TrainedModel:
    """Single linear layer equal to the toy system, so one-step and free-run errors vanish."""
    layer = LayerParams(W=LINEAR_COEFS.reshape(3, 1).copy(), b=np.zeros(1), mask=np.ones((3, 1), dtype=bool))
    net = Network(layers=[layer])
    cfg = TrainConfig(layer_widths=[], n_a=1, n_b=1, t_max=0, normalize=False)
    return TrainedModel(net=net, hyper=init_hyper([(3, 1)]), history=(), norm=None, config=cfg)


@pytest.fixture(scope="session")
def tank_signal() -> SignalPair:
    """Noiseless cascaded-tank run on the default multisine."""
    return simulate_tank(default_tank_params(), multisine(1024, 4.0), 4.0, name="tank")


@pytest.fixture
def run_dir(tmp_path):
    path = tmp_path / "run"
    path.mkdir()
    return path
