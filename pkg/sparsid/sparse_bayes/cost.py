"""Marginal-likelihood cost under the diagonal curvature surrogate."""

import logging
from typing import List, Optional

import numpy as np

from sparsid.errors import NumericalError
from sparsid.mlp_core import CurvatureBundle
from .models import CostReport, HyperState

logger = logging.getLogger(__name__)


def layer_cost(
    W: np.ndarray,
    upsilon: np.ndarray,
    G: np.ndarray,
    hdiag: np.ndarray,
    w_star: Optional[np.ndarray] = None,
    layer: int = 0,
) -> CostReport:
    """Wᵀ𝐇W + 2Wᵀ(G - 𝐇W*) + WᵀΥ⁻¹W + log|Υ| + log|𝐇 + Υ⁻¹| over active entries."""
    w_star = W if w_star is None else w_star
    active = upsilon > 0
    W_a, u_a, G_a, h_a, ws_a = W[active], upsilon[active], G[active], hdiag[active], w_star[active]

    inner = h_a + 1.0 / u_a
    bad = ~(inner > 0)
    if bad.any():
        idx = tuple(int(v) for v in np.argwhere(active)[int(np.argmax(bad))])
        raise NumericalError(f"layer {layer}: nonpositive 𝐇 + Υ⁻¹ diagonal at {idx} ({inner[bad][0]:.3e})")

    return CostReport(
        data_term=float(np.sum(h_a * W_a * W_a) + 2.0 * np.sum(W_a * (G_a - h_a * ws_a))),
        reg_term=float(np.sum(W_a * W_a / u_a)),
        logdet_upsilon=float(np.sum(np.log(u_a))),
        logdet_H_plus_inv=float(np.sum(np.log(inner))),
    )


def marginal_cost(
    W: List[np.ndarray],
    hyper: HyperState,
    curv: CurvatureBundle,
    sigma2: float,
    w_star: Optional[List[np.ndarray]] = None,
) -> CostReport:
    """Sum of per-layer costs; W* defaults to W (expansion at the current weights).

    ``constant`` carries N·log(2πσ²) plus the W*-only Laplace term, which do
    not depend on (W, Υ) at fixed σ² and are left out of ``total``.
    """
    layers = []
    constant = 0.0
    for k, W_k in enumerate(W):
        ws = W_k if w_star is None else w_star[k]
        report = layer_cost(W_k, hyper.upsilon[k], curv.grads[k], curv.hdiag[k], ws, layer=k)
        layers.append(report)
        constant += float(-np.sum(ws * curv.hdiag[k] * ws) + 2.0 * np.sum(ws * curv.grads[k]))
        logger.debug(
            f"layer {k}: data={report.data_term:.4g} reg={report.reg_term:.4g} "
            f"logdetΥ={report.logdet_upsilon:.4g} logdet(𝐇+Υ⁻¹)={report.logdet_H_plus_inv:.4g}"
        )
    n = max(curv.n_samples, 1)
    constant += n * np.log(2.0 * np.pi * sigma2) + 2.0 * n * curv.loss
    return CostReport(
        data_term=sum(r.data_term for r in layers),
        reg_term=sum(r.reg_term for r in layers),
        logdet_upsilon=sum(r.logdet_upsilon for r in layers),
        logdet_H_plus_inv=sum(r.logdet_H_plus_inv for r in layers),
        constant=float(constant),
        layers=layers,
    )
