"""Outer reweighting loop, inner proximal SGD and irreversible pruning."""

import logging
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from utils import seed_stream
from sparsid.errors import ConfigError, DisconnectedLayerError, NumericalError
from sparsid.mlp_core import CurvatureMode, Network, backward, curvature, forward, init_network, predict
from sparsid.narx_data import NormStats, RegressorDataset, normalize, subset_ratio
from sparsid.sparse_bayes import (
    HyperState, compute_C, init_hyper, marginal_cost, posterior_moments, update_alpha, update_omega,
    update_upsilon,
)
from . import config
from .models import IterationRecord, LayerRecord, Method, TrainConfig, TrainedModel
from .prox import group_soft_threshold, soft_threshold
from .store import save_model

logger = logging.getLogger(__name__)


# ── Sparsity measures ──

def sparsity(net: Network) -> float:
    """Fraction of weights still active (1.0 = dense)."""
    return net.active_count() / net.weight_count()


def neuron_sparsity(net: Network) -> float:
    """Fraction of hidden neurons that still have an active input and an active output."""
    alive = total = 0
    for k in range(len(net.layers) - 1):
        incoming = net.layers[k].mask.any(axis=0)
        outgoing = net.layers[k + 1].mask.any(axis=1)
        alive += int((incoming & outgoing).sum())
        total += incoming.size
    return alive / total if total else 1.0


# ── Pruning ──

def _remove(net: Network, hyper: HyperState, remove: List[np.ndarray]) -> Tuple[Network, HyperState, int]:
    for k, (layer, r) in enumerate(zip(net.layers, remove)):
        if not (layer.mask & ~r).any():
            raise DisconnectedLayerError(k)
    net, hyper = net.copy(), hyper.copy()
    count = 0
    for k, (layer, r) in enumerate(zip(net.layers, remove)):
        count += int(r.sum())
        layer.mask = layer.mask & ~r
        layer.W = np.where(layer.mask, layer.W, 0.0)
        for arr in (hyper.upsilon, hyper.alpha, hyper.omega):
            arr[k] = np.where(layer.mask, arr[k], 0.0)
        if hyper.frozen:
            hyper.frozen[k] = hyper.frozen[k] & layer.mask
    return net, hyper, count


def prune(net: Network, hyper: HyperState, kappa_upsilon: float, kappa_w: float) -> Tuple[Network, HyperState, int]:
    """Deactivate weights with υ < κ_υ or |W| < κ_w. Irreversible.

    Returns the new network, hyper state and the number of weights removed.
    """
    if kappa_upsilon <= 0 or kappa_w <= 0:
        raise ConfigError(f"pruning thresholds must be positive (κ_υ={kappa_upsilon}, κ_w={kappa_w})")
    remove = [
        layer.mask & ((ups < kappa_upsilon) | (np.abs(layer.W) < kappa_w))
        for layer, ups in zip(net.layers, hyper.upsilon)
    ]
    return _remove(net, hyper, remove)


def floor_prune(net: Network, hyper: HyperState) -> Tuple[Network, HyperState, int]:
    """Remove active entries whose υ fell below the floor, so no later step inverts them."""
    remove = [layer.mask & (ups < hyper.floor_upsilon) for layer, ups in zip(net.layers, hyper.upsilon)]
    if not any(r.any() for r in remove):
        return net, hyper, 0
    return _remove(net, hyper, remove)


# ── Inner optimization ──

def _prox(method: Method, W: np.ndarray, threshold: float, omega: np.ndarray, cfg: TrainConfig) -> np.ndarray:
    if method == Method.BAYES:
        return soft_threshold(W, threshold * omega)
    if method == Method.L1:
        return soft_threshold(W, threshold)
    if method == Method.GROUP_LASSO:
        return group_soft_threshold(W, threshold, cfg.granularity, cfg.block_shape)
    return W


def inner_optimize(
    net: Network,
    hyper: HyperState,
    ds: RegressorDataset,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> Network:
    """``inner_steps`` proximal SGD steps on E + λ·Σ|ω∘W| with Υ fixed.

    Each step: gradient step on the data term, soft-threshold at step·λ·ω,
    then re-zero masked entries. Biases are not regularized.
    """
    method = Method(cfg.method)
    lams = cfg.lambdas()
    eta = cfg.step_size
    net = net.copy()
    n = len(ds)
    batch = n if cfg.batch_size is None else min(cfg.batch_size, n)
    order, pos = (None, 0) if batch == n else (rng.permutation(n), 0)

    for step in range(cfg.inner_steps):
        if order is None:
            Z, y = ds.rows, ds.targets
        else:
            if pos + batch > n:
                order, pos = rng.permutation(n), 0
            idx = order[pos:pos + batch]
            pos += batch
            Z, y = ds.rows[idx], ds.targets[idx]

        bundle = backward(net, forward(net, Z), y, cfg.sigma2)
        if not np.isfinite(bundle.loss):
            raise NumericalError(f"non-finite loss at inner step {step}", step=step)

        for k, layer in enumerate(net.layers):
            W = layer.W - eta * bundle.grads[k]
            if method != Method.NONE and lams[k] > 0:
                W = _prox(method, W, eta * lams[k], hyper.omega[k], cfg)
            if not np.all(np.isfinite(W)):
                raise NumericalError(f"non-finite weights in layer {k} at inner step {step}", step=step)
            layer.W = np.where(layer.mask, W, 0.0)
            layer.b = layer.b - eta * bundle.bias_grads[k]
    return net


# ── Outer loop ──

def prepare_data(
    cfg: TrainConfig,
    train: RegressorDataset,
    val: Optional[RegressorDataset] = None,
    norm: Optional[NormStats] = None,
) -> Tuple[RegressorDataset, Optional[RegressorDataset], Optional[NormStats]]:
    """Apply the data ratio and (optionally) z-score normalization fitted on the training subset."""
    if (train.n_a, train.n_b) != (cfg.n_a, cfg.n_b):
        raise ConfigError(f"dataset lags ({train.n_a}, {train.n_b}) differ from config ({cfg.n_a}, {cfg.n_b})")
    train = subset_ratio(train, cfg.ratio, cfg.ratio_mode, cfg.seed)
    if not cfg.normalize:
        return train, val, None
    if train.norm is None:
        train, norm = normalize(train, norm)
    else:
        norm = train.norm
    if val is not None and val.norm is None:
        val, _ = normalize(val, norm)
    return train, val, norm


def _rmse(net: Network, ds: RegressorDataset, norm: Optional[NormStats]) -> float:
    """One-step RMSE in raw output units."""
    r = predict(net, ds.rows) - ds.targets
    if norm is not None:
        r = r * norm.std_y
    return float(np.sqrt(np.mean(r * r)))


def _bayes_update(net: Network, hyper: HyperState, ds: RegressorDataset, cfg: TrainConfig):
    """Curvature on the full training set, cost under the current Υ, then α, υ and ω updates."""
    mode = CurvatureMode(cfg.curvature_mode)
    curv = curvature(net, forward(net, ds.rows), ds.targets, cfg.sigma2, mode)
    W = [layer.W for layer in net.layers]
    masks = [layer.mask for layer in net.layers]
    cost = marginal_cost(W, hyper, curv, cfg.sigma2)

    stds = []
    for k, ups in enumerate(hyper.upsilon):
        _, sigma = posterior_moments(curv.grads[k], curv.hdiag[k], ups, W[k])
        stds.append(np.sqrt(sigma[ups > 0]))
    stds = np.concatenate(stds) if stds else np.zeros(0)

    C = compute_C(hyper, curv, mode)
    alpha = update_alpha(C, hyper)
    upsilon, frozen = update_upsilon(W, hyper.omega, cfg.granularity, cfg.block_shape, hyper.upsilon, masks)
    omega = [np.where(m, o, 0.0) for m, o in zip(masks, update_omega(alpha, cfg.granularity, cfg.block_shape))]

    updated = HyperState(
        upsilon=upsilon, alpha=alpha, omega=omega, granularity=hyper.granularity,
        block_shape=hyper.block_shape, floor_upsilon=hyper.floor_upsilon, frozen=frozen,
    )
    return updated, cost, stds


def init_model(cfg: TrainConfig, n_inputs: int) -> Tuple[Network, HyperState]:
    widths = [n_inputs] + list(cfg.layer_widths) + [1]
    net = init_network(widths, cfg.activation, seed_stream(cfg.seed, "init"))
    hyper = init_hyper([layer.shape for layer in net.layers], cfg.granularity, cfg.block_shape)
    return net, hyper


def outer_train(
    cfg: TrainConfig,
    train: RegressorDataset,
    val: Optional[RegressorDataset] = None,
    resume: Optional[TrainedModel] = None,
    checkpoint_dir: Optional[Path] = None,
) -> TrainedModel:
    """Alternate inner optimization, hyper-parameter updates and pruning for up to t_max iterations.

    Per iteration: inner_optimize -> curvature -> C -> α -> υ (previous ω) -> ω ->
    floor pruning -> threshold pruning (from prune_start_iter on). ``resume``
    continues a checkpointed run bit-for-bit.
    """
    method = Method(cfg.method)
    train, val, norm = prepare_data(cfg, train, val, resume.norm if resume else None)
    rng = seed_stream(cfg.seed, "batching")

    if resume is not None:
        if resume.net.widths != [train.width] + list(cfg.layer_widths) + [1]:
            raise ConfigError(f"checkpoint widths {resume.net.widths} do not match the config")
        net, hyper, history = resume.net.copy(), resume.hyper.copy(), list(resume.history)
        if resume.rng_state is not None:
            rng.bit_generator.state = resume.rng_state
        logger.info(f"Resuming from iteration {resume.iteration}")
    else:
        net, hyper = init_model(cfg, train.width)
        history: List[IterationRecord] = []

    best, since_best = np.inf, 0
    for record in history:
        score = record.val_rmse if record.val_rmse is not None else record.train_rmse
        best, since_best = (score, 0) if score < best else (best, since_best + 1)

    start = history[-1].iteration if history else 0
    for t in range(start + 1, cfg.t_max + 1):
        net = inner_optimize(net, hyper, train, cfg, rng)
        cost, stds = None, np.zeros(0)
        pruned = 0
        if method == Method.BAYES:
            hyper, cost, stds = _bayes_update(net, hyper, train, cfg)
            net, hyper, pruned = floor_prune(net, hyper)
        if method != Method.NONE and t >= cfg.prune_start_iter:
            net, hyper, removed = prune(net, hyper, cfg.kappa_upsilon, cfg.kappa_w)
            pruned += removed

        layers = []
        if cost is not None:
            layers = [
                LayerRecord(
                    layer=k, cost_total=r.total, data_term=r.data_term, reg_term=r.reg_term,
                    logdet_upsilon=r.logdet_upsilon, logdet_Hinv=r.logdet_H_plus_inv,
                    active_weights=int(net.layers[k].mask.sum()),
                )
                for k, r in enumerate(cost.layers)
            ]
        record = IterationRecord(
            iteration=t,
            train_rmse=_rmse(net, train, norm),
            val_rmse=_rmse(net, val, norm) if val is not None else None,
            cost_total=cost.total if cost is not None else None,
            active_weights=net.active_count(),
            sparsity=sparsity(net),
            neuron_sparsity=neuron_sparsity(net),
            pruned=pruned,
            posterior_std_mean=float(stds.mean()) if stds.size else None,
            posterior_std_max=float(stds.max()) if stds.size else None,
            layers=layers,
        )
        history.append(record)
        cost_text = f"cost {record.cost_total:.6g} │ " if record.cost_total is not None else ""
        logger.info(
            f"Iter {t:>3}/{cfg.t_max} │ rmse {record.train_rmse:.4g} │ {cost_text}"
            f"active {record.active_weights}/{net.weight_count()} ({record.sparsity:.1%}) │ pruned {pruned}"
        )

        if checkpoint_dir is not None and cfg.checkpoint_every and t % cfg.checkpoint_every == 0:
            snapshot = TrainedModel(net, hyper, tuple(history), norm, cfg, rng.bit_generator.state)
            save_model(Path(checkpoint_dir) / config.CHECKPOINT_PATTERN.format(iteration=t), snapshot)

        score = record.val_rmse if record.val_rmse is not None else record.train_rmse
        if score < best:
            best, since_best = score, 0
        else:
            since_best += 1
        if cfg.patience is not None and since_best >= cfg.patience:
            logger.info(f"Early stop at iteration {t}: no improvement for {cfg.patience} iterations")
            break

    return TrainedModel(net, hyper, tuple(history), norm, cfg, rng.bit_generator.state)
