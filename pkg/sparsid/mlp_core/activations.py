"""Activation functions with first and second derivatives."""

import numpy as np

from .models import Activation


def _sigmoid(h):
    return 0.5 * (1.0 + np.tanh(0.5 * h))


def activate(kind: Activation, h: np.ndarray) -> np.ndarray:
    if kind == Activation.TANH:
        return np.tanh(h)
    if kind == Activation.SIGMOID:
        return _sigmoid(h)
    return np.maximum(h, 0.0)


def derivative(kind: Activation, h: np.ndarray) -> np.ndarray:
    if kind == Activation.TANH:
        t = np.tanh(h)
        return 1.0 - t * t
    if kind == Activation.SIGMOID:
        s = _sigmoid(h)
        return s * (1.0 - s)
    return (h > 0).astype(float)


def second_derivative(kind: Activation, h: np.ndarray) -> np.ndarray:
    """f''(h); relu uses f''(0) = 0."""
    if kind == Activation.TANH:
        t = np.tanh(h)
        return -2.0 * t * (1.0 - t * t)
    if kind == Activation.SIGMOID:
        s = _sigmoid(h)
        return s * (1.0 - s) * (1.0 - 2.0 * s)
    return np.zeros_like(h)
