"""Cascaded two-tank simulator and excitation signal."""

import logging
from typing import Optional, Sequence

import numpy as np

from utils import seed_stream
from sparsid.errors import DataError
from . import config
from .models import SignalPair, TankParams

logger = logging.getLogger(__name__)


def multisine(
    steps: int,
    dt: float = config.TANK_DT,
    n_freqs: int = config.EXCITATION_FREQS,
    mean: float = config.EXCITATION_MEAN,
    amplitude: float = config.EXCITATION_AMPLITUDE,
    band: float = config.EXCITATION_BAND,
) -> np.ndarray:
    """Schroeder-phase multisine, deterministic (no seed), peak-scaled to ``amplitude``.

    Excited lines are k / (steps * dt) for k = 1..n_freqs, capped at ``band`` of Nyquist.
    """
    if steps < 1:
        raise DataError("steps must be >= 1")
    t = np.arange(steps) * dt
    f0 = 1.0 / (steps * dt)
    k_max = max(1, min(n_freqs, int(band * 0.5 / dt / f0)))
    k = np.arange(1, k_max + 1)
    phases = -np.pi * k * (k - 1) / k_max
    wave = np.sin(2 * np.pi * f0 * np.outer(t, k) + phases).sum(axis=1)
    peak = np.max(np.abs(wave))
    if peak > 0:
        wave = wave / peak
    return mean + amplitude * wave


def simulate_tank(params: TankParams, u: Sequence[float], dt: float, seed: int = 0, name: str = "tank") -> SignalPair:
    """Forward-Euler integration of the cascaded tanks.

    x1' = -k1 sqrt(x1) + k4 u + w1
    x2' =  k2 sqrt(x1) - k3 sqrt(x2) + w2
    y   =  x2 + e

    y[k] reads the state before input u[k] is applied. States are clamped to
    [0, overflow_cap] after every step (never negative under the square root).
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    if dt <= 0:
        raise DataError(f"dt must be > 0, got {dt}")
    if len(u) < 1 or not np.all(np.isfinite(u)):
        raise DataError("input u must be non-empty and finite")

    n = len(u)
    rng = seed_stream(seed, "tank")
    w1 = rng.normal(0.0, params.noise_std_w1, n) if params.noise_std_w1 > 0 else np.zeros(n)
    w2 = rng.normal(0.0, params.noise_std_w2, n) if params.noise_std_w2 > 0 else np.zeros(n)
    e = rng.normal(0.0, params.noise_std_e, n) if params.noise_std_e > 0 else np.zeros(n)
    cap: Optional[float] = params.overflow_cap
    hi = np.inf if cap is None else cap

    states = np.empty((n, 2))
    x1 = min(max(params.x1_0, 0.0), hi)
    x2 = min(max(params.x2_0, 0.0), hi)
    for k in range(n):
        states[k] = x1, x2
        s1 = np.sqrt(x1)
        dx1 = -params.k1 * s1 + params.k4 * u[k] + w1[k]
        dx2 = params.k2 * s1 - params.k3 * np.sqrt(x2) + w2[k]
        x1 = min(max(x1 + dt * dx1, 0.0), hi)
        x2 = min(max(x2 + dt * dx2, 0.0), hi)

    y = states[:, 1] + e
    logger.debug(f"Simulated {n} tank steps (dt={dt}, seed={seed})")
    return SignalPair(u=u, y=y, dt=dt, name=name, states=states)


def default_tank_params(**overrides) -> TankParams:
    values = dict(
        k1=config.TANK_K1, k2=config.TANK_K2, k3=config.TANK_K3, k4=config.TANK_K4,
        overflow_cap=config.TANK_CAP,
    )
    values.update({k: v for k, v in overrides.items() if v is not None})
    return TankParams(**values)
