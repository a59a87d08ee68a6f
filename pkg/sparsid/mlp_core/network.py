"""Fully-connected network: initialization, forward pass, loss and backpropagation."""

import logging
from typing import List, Sequence, Union

import numpy as np

from . import config
from .activations import activate, derivative
from .models import (
    Activation, CurvatureBundle, ForwardTrace, LayerDocument, LayerParams, Network, NetworkDocument,
)

logger = logging.getLogger(__name__)


def init_network(
    widths: Sequence[int],
    activation: Union[Activation, str] = config.DEFAULT_ACTIVATION,
    rng: np.random.Generator = None,
) -> Network:
    """Glorot-uniform weights, zero biases, all entries active.

    ``widths`` runs input -> hidden... -> output, e.g. [11, 100, 100, 1].
    """
    if len(widths) < 2 or any(int(w) < 1 for w in widths):
        raise ValueError(f"widths must list >= 2 positive sizes, got {list(widths)}")
    rng = rng if rng is not None else np.random.default_rng(0)
    layers = []
    for n_in, n_out in zip(widths[:-1], widths[1:]):
        limit = np.sqrt(6.0 / (n_in + n_out))
        W = rng.uniform(-limit, limit, size=(n_in, n_out))
        layers.append(LayerParams(W=W, b=np.zeros(n_out), mask=np.ones((n_in, n_out), dtype=bool)))
    return Network(layers=layers, activation=Activation(activation))


def effective_weights(layer: LayerParams) -> np.ndarray:
    return np.where(layer.mask, layer.W, 0.0)


def forward(net: Network, Z: np.ndarray) -> ForwardTrace:
    """h[l] = a[l] W[l] + b[l]; a[l+1] = f(h[l]) for hidden layers, linear output."""
    a = np.atleast_2d(np.asarray(Z, dtype=float))
    if a.shape[1] != net.n_inputs:
        raise ValueError(f"input has {a.shape[1]} columns, network expects {net.n_inputs}")
    hs: List[np.ndarray] = []
    acts: List[np.ndarray] = [a]
    last = len(net.layers) - 1
    for k, layer in enumerate(net.layers):
        h = a @ effective_weights(layer) + layer.b
        a = h if k == last else activate(net.activation, h)
        hs.append(h)
        acts.append(a)
    return ForwardTrace(h=hs, a=acts)


def predict(net: Network, Z: np.ndarray) -> np.ndarray:
    """Scalar-output convenience: ŷ as a flat vector."""
    return forward(net, Z).yhat[:, 0]


def _targets_matrix(targets, n: int, n_out: int) -> np.ndarray:
    y = np.asarray(targets, dtype=float).reshape(n, -1)
    if y.shape[1] != n_out:
        raise ValueError(f"targets have {y.shape[1]} columns, network outputs {n_out}")
    return y


def loss_value(yhat: np.ndarray, targets, sigma2: float) -> float:
    """E = (1 / 2σ²) · mean_t (y - ŷ)²; σ² is the batch-averaged noise scale."""
    y = _targets_matrix(targets, yhat.shape[0], yhat.shape[1])
    r = yhat - y
    return float(0.5 * np.mean(np.sum(r * r, axis=1)) / sigma2)


def _check_trace(net: Network, trace: ForwardTrace) -> None:
    if len(trace.h) != len(net.layers) or any(
        h.shape[1] != layer.W.shape[1] for h, layer in zip(trace.h, net.layers)
    ):
        raise ValueError("stale trace: shapes do not match the network")


def output_residual(net: Network, trace: ForwardTrace, targets, sigma2: float) -> np.ndarray:
    """Per-sample ∂e_t/∂ŷ = (ŷ - y)/σ² (not divided by the batch size)."""
    _check_trace(net, trace)
    yhat = trace.yhat
    y = _targets_matrix(targets, yhat.shape[0], yhat.shape[1])
    return (yhat - y) / sigma2


def backward(net: Network, trace: ForwardTrace, targets, sigma2: float) -> CurvatureBundle:
    """Batch-mean gradients of E by backpropagation; masked entries get exactly 0."""
    delta = output_residual(net, trace, targets, sigma2)
    n = delta.shape[0]
    delta = delta / n
    L = len(net.layers)
    grads: List[np.ndarray] = [None] * L
    bias_grads: List[np.ndarray] = [None] * L
    for k in range(L - 1, -1, -1):
        layer = net.layers[k]
        grads[k] = np.where(layer.mask, trace.a[k].T @ delta, 0.0)
        bias_grads[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ effective_weights(layer).T) * derivative(net.activation, trace.h[k - 1])
    return CurvatureBundle(
        grads=grads, bias_grads=bias_grads, loss=loss_value(trace.yhat, targets, sigma2), n_samples=n,
    )


def network_to_document(net: Network) -> NetworkDocument:
    return NetworkDocument(
        activation=net.activation,
        widths=net.widths,
        layers=[
            LayerDocument(W=layer.W.tolist(), b=layer.b.tolist(), mask=layer.mask.tolist())
            for layer in net.layers
        ],
    )


def network_from_document(doc: NetworkDocument) -> Network:
    layers = []
    for k, ld in enumerate(doc.layers):
        W = np.asarray(ld.W, dtype=float).reshape(doc.widths[k], doc.widths[k + 1])
        mask = np.asarray(ld.mask, dtype=bool).reshape(W.shape)
        layers.append(LayerParams(W=W, b=np.asarray(ld.b, dtype=float), mask=mask))
    return Network(layers=layers, activation=doc.activation)
