"""Layer curvature: pre-activation Hessians and their Kronecker lift.

For layer l with input a and pre-activation h:

    H[l] = B (W[l+1] H[l+1] W[l+1]ᵀ) B + D,  B = diag f'(h),  D = diag(f''(h) ∘ ∂e/∂a)
    layer Hessian = a aᵀ ⊗ H[l]

Gauss-Newton drops D, which keeps every H[l] positive semidefinite. With a
linear output and squared loss the output block is I/σ² per sample.
"""

import logging
from typing import List, Union

import numpy as np

from sparsid.errors import CurvatureError
from . import config
from .activations import derivative, second_derivative
from .models import CurvatureBundle, CurvatureMode, ForwardTrace, Network
from .network import backward, effective_weights, output_residual

logger = logging.getLogger(__name__)


def _gauss_newton_H(net: Network, trace: ForwardTrace, sigma2: float) -> List[np.ndarray]:
    """Batch-mean GN pre-activation Hessians via output Jacobians J[l] = ∂ŷ/∂h[l]."""
    L = len(net.layers)
    n, n_out = trace.yhat.shape
    J = np.broadcast_to(np.eye(n_out), (n, n_out, n_out))
    H: List[np.ndarray] = [None] * L
    for k in range(L - 1, -1, -1):
        if k < L - 1:
            W = effective_weights(net.layers[k + 1])
            J = (J @ W.T) * derivative(net.activation, trace.h[k])[:, None, :]
        H[k] = np.einsum("toi,toj->ij", J, J) / (n * sigma2)
    return H


def _exact_H(net: Network, trace: ForwardTrace, targets, sigma2: float) -> List[np.ndarray]:
    """Per-sample pre-activation Hessians (n, n_l, n_l), D term included."""
    L = len(net.layers)
    n, n_out = trace.yhat.shape
    Hs = np.broadcast_to(np.eye(n_out) / sigma2, (n, n_out, n_out)).copy()
    dh = output_residual(net, trace, targets, sigma2)  # per-sample ∂e/∂h at the output
    per_sample: List[np.ndarray] = [None] * L
    per_sample[L - 1] = Hs
    for k in range(L - 2, -1, -1):
        W = effective_weights(net.layers[k + 1])
        h = trace.h[k]
        da = dh @ W.T
        B = derivative(net.activation, h)
        Ha = np.einsum("ij,tjk,lk->til", W, per_sample[k + 1], W)
        Hk = B[:, :, None] * Ha * B[:, None, :]
        idx = np.arange(h.shape[1])
        Hk[:, idx, idx] += second_derivative(net.activation, h) * da
        per_sample[k] = Hk
        dh = da * B
    return per_sample


def curvature(
    net: Network,
    trace: ForwardTrace,
    targets,
    sigma2: float,
    mode: Union[CurvatureMode, str] = CurvatureMode.GAUSS_NEWTON_DIAG,
) -> CurvatureBundle:
    """Gradients plus per-layer H, M and the Kronecker-factored diagonal hdiag.

    exact_small additionally keeps the D term and materializes the exact layer
    block mean_t(a_t a_tᵀ ⊗ H_t) for layers with n_in·n_out <= EXACT_MAX_ENTRIES.
    """
    mode = CurvatureMode(mode)
    bundle = backward(net, trace, targets, sigma2)
    n = trace.yhat.shape[0]
    L = len(net.layers)

    if mode == CurvatureMode.EXACT_SMALL:
        for k, layer in enumerate(net.layers):
            if layer.W.size > config.EXACT_MAX_ENTRIES:
                raise CurvatureError(
                    f"exact_small curvature requested on layer {k} with {layer.W.size} weights "
                    f"(limit {config.EXACT_MAX_ENTRIES})"
                )
        per_sample = _exact_H(net, trace, targets, sigma2)
        H = [Hs.mean(axis=0) for Hs in per_sample]
        full = []
        for k in range(L):
            a = trace.a[k]
            n_in, n_out = net.layers[k].W.shape
            block = np.einsum("ti,tk,tjl->ijkl", a, a, per_sample[k]) / n
            full.append(block.reshape(n_in * n_out, n_in * n_out))
    else:
        H = _gauss_newton_H(net, trace, sigma2)
        full = None

    H = [0.5 * (Hk + Hk.T) for Hk in H]
    M = [trace.a[k].T @ trace.a[k] / n for k in range(L)]
    hdiag = [np.outer(np.diag(M[k]), np.diag(H[k])) for k in range(L)]

    bundle.H, bundle.M, bundle.hdiag, bundle.full, bundle.mode = H, M, hdiag, full, mode
    logger.debug(f"Curvature ({mode.value}) over {n} samples, {L} layers")
    return bundle


def full_layer_hessian(bundle: CurvatureBundle, k: int) -> np.ndarray:
    """Kronecker-factored layer Hessian M ⊗ H (dense; small layers only)."""
    return np.kron(bundle.M[k], bundle.H[k])
