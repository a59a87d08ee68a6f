"""Reweighting updates: C, α, ω and υ.

One outer iteration, per layer:
    C     = (Υ⁻¹ + 𝐇)⁻¹                 from the previous υ and fresh curvature
    α_ij  = -C_ij / υ_ij² + 1 / υ_ij
    υ_ij  = ‖W_group‖₂ / ω_group        new weights, previous ω
    ω_o   = sqrt(Σ_group |α|)           broadcast over the group
"""

import logging
from typing import List, Optional, Tuple, Union

import numpy as np

from sparsid.errors import CurvatureError, NumericalError
from sparsid.mlp_core import CurvatureBundle, CurvatureMode
from . import config
from .groups import group_ids, group_max, group_sum
from .models import Granularity, HyperState

logger = logging.getLogger(__name__)


def _active(upsilon: np.ndarray, floor: float, layer: int) -> np.ndarray:
    """υ > 0 marks active entries; pruned entries are exactly 0 and skipped."""
    active = upsilon > 0
    low = active & (upsilon < floor)
    if low.any():
        idx = tuple(int(v) for v in np.argwhere(low)[0])
        raise NumericalError(
            f"layer {layer}: υ{idx} = {upsilon[idx]:.3e} below floor {floor:.1e}; prune it before inverting"
        )
    return active


def diag_covariance(upsilon: np.ndarray, hdiag: np.ndarray, active: np.ndarray) -> np.ndarray:
    """C_ij = 1 / (1/υ_ij + h_ij) on active entries, 0 elsewhere."""
    safe = np.where(active, upsilon, 1.0)
    return np.where(active, 1.0 / (1.0 / safe + hdiag), 0.0)


def _exact_covariance(upsilon: np.ndarray, full: np.ndarray, active: np.ndarray, layer: int) -> np.ndarray:
    flat = active.ravel()
    A = full[np.ix_(flat, flat)].copy()
    A[np.diag_indices_from(A)] += 1.0 / upsilon.ravel()[flat]
    C = np.zeros(upsilon.size)
    off = A - np.diag(np.diag(A))
    if not off.any():
        C[flat] = 1.0 / np.diag(A)
        return C.reshape(upsilon.shape)
    eig_min = float(np.linalg.eigvalsh(A)[0])
    if eig_min <= 0:
        raise CurvatureError(f"layer {layer}: Υ⁻¹ + 𝐇 is singular (smallest eigenvalue {eig_min:.3e})")
    C[flat] = np.diag(np.linalg.inv(A))
    return C.reshape(upsilon.shape)


def compute_C(
    hyper: HyperState,
    curv: CurvatureBundle,
    mode: Union[CurvatureMode, str] = CurvatureMode.GAUSS_NEWTON_DIAG,
) -> List[np.ndarray]:
    """Diagonal of (Υ⁻¹ + 𝐇)⁻¹ per layer.

    ``gauss_newton_diag`` (alias ``diag``) inverts elementwise with hdiag;
    ``exact_small`` inverts the materialized layer Hessian and logs the gap to the diagonal result.
    """
    mode = CurvatureMode.GAUSS_NEWTON_DIAG if mode == "diag" else CurvatureMode(mode)
    out = []
    for k, upsilon in enumerate(hyper.upsilon):
        active = _active(upsilon, hyper.floor_upsilon, k)
        C_diag = diag_covariance(upsilon, curv.hdiag[k], active)
        if mode == CurvatureMode.EXACT_SMALL:
            if curv.full is None:
                raise CurvatureError("exact_small covariance needs a bundle computed in exact_small mode")
            C = _exact_covariance(upsilon, curv.full[k], active, k)
            gap = float(np.max(np.abs(C - C_diag))) if C.size else 0.0
            logger.debug(f"layer {k}: exact vs diagonal C gap {gap:.3e}")
            out.append(C)
        else:
            out.append(C_diag)
    return out


def update_alpha(C: List[np.ndarray], hyper: HyperState) -> List[np.ndarray]:
    """α_ij = -C_ij/υ_ij² + 1/υ_ij; negative values (indefinite exact curvature) clamp to 0."""
    out = []
    for k, (C_k, upsilon) in enumerate(zip(C, hyper.upsilon)):
        active = upsilon > 0
        safe = np.where(active, upsilon, 1.0)
        alpha = np.where(active, -C_k / (safe * safe) + 1.0 / safe, 0.0)
        negative = alpha < 0
        if negative.any():
            logger.warning(f"layer {k}: clamped {int(negative.sum())} negative α to 0 (min {alpha.min():.3e})")
            alpha = np.where(negative, 0.0, alpha)
        out.append(alpha)
    return out


def update_omega(
    alpha: List[np.ndarray],
    granularity: Union[Granularity, str],
    block_shape: Tuple[int, int] = (1, 1),
) -> List[np.ndarray]:
    """ω_o = sqrt(Σ_group |α|), broadcast to every entry of the group."""
    out = []
    for a in alpha:
        ids = group_ids(a.shape, granularity, block_shape)
        out.append(np.sqrt(group_sum(np.abs(a), ids)))
    return out


def update_upsilon(
    W: List[np.ndarray],
    omega: List[np.ndarray],
    granularity: Union[Granularity, str],
    block_shape: Tuple[int, int] = (1, 1),
    previous: Optional[List[np.ndarray]] = None,
    masks: Optional[List[np.ndarray]] = None,
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """υ = ‖W_group‖₂ / ω_group (|W_ij| / ω_ij entrywise).

    Groups with ω below OMEGA_FLOOR keep their previous υ and are reported as
    frozen. Masked-out entries are set to exactly 0. Returns (upsilon, frozen).
    """
    upsilons, frozens = [], []
    for k, (W_k, omega_k) in enumerate(zip(W, omega)):
        ids = group_ids(W_k.shape, granularity, block_shape)
        norm = np.sqrt(group_sum(W_k * W_k, ids))
        omega_g = group_max(omega_k, ids)
        frozen = omega_g < config.OMEGA_FLOOR
        prev = previous[k] if previous is not None else np.ones_like(W_k)
        upsilon = np.where(frozen, prev, norm / np.where(frozen, 1.0, omega_g))
        if masks is not None:
            upsilon = np.where(masks[k], upsilon, 0.0)
            frozen = frozen & masks[k]
        if frozen.any():
            logger.debug(f"layer {k}: {int(frozen.sum())} entries unregularized this iteration (ω ≈ 0)")
        upsilons.append(upsilon)
        frozens.append(frozen)
    return upsilons, frozens


def regularizer(W: np.ndarray, omega: np.ndarray) -> Tuple[float, np.ndarray]:
    """Σ|ω_ij W_ij| and its subgradient ω ∘ sign(W) (sign(0) = 0).

    Every grouping shares this form; the grouping lives in how ω was built.
    """
    return float(np.sum(np.abs(omega * W))), omega * np.sign(W)


def posterior_moments(
    G: np.ndarray,
    hdiag: np.ndarray,
    upsilon: np.ndarray,
    w_star: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonal Laplace moments: Σ = (𝐇 + Υ⁻¹)⁻¹, μ = Σ (G + 𝐇 W*)."""
    active = _active(upsilon, config.UPSILON_FLOOR, 0)
    sigma = diag_covariance(upsilon, hdiag, active)
    w_star = np.zeros_like(G) if w_star is None else w_star
    mu = np.where(active, sigma * (G + hdiag * w_star), 0.0)
    return mu, sigma
