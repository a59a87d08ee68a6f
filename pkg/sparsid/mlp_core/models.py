"""Network, trace and curvature records."""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel


class Activation(str, Enum):
    SIGMOID = "sigmoid"
    TANH = "tanh"
    RELU = "relu"


class CurvatureMode(str, Enum):
    EXACT_SMALL = "exact_small"
    GAUSS_NEWTON_DIAG = "gauss_newton_diag"


@dataclass
class LayerParams:
    """W (n_in x n_out), bias b (n_out) and activity mask (True = active)."""
    W: np.ndarray
    b: np.ndarray
    mask: np.ndarray

    @property
    def shape(self):
        return self.W.shape

    def copy(self) -> "LayerParams":
        return LayerParams(self.W.copy(), self.b.copy(), self.mask.copy())


@dataclass
class Network:
    """Fully-connected net; hidden layers use ``activation``, the last layer is linear."""
    layers: List[LayerParams]
    activation: Activation = Activation.TANH

    @property
    def widths(self) -> List[int]:
        return [self.layers[0].W.shape[0]] + [layer.W.shape[1] for layer in self.layers]

    @property
    def n_inputs(self) -> int:
        return self.layers[0].W.shape[0]

    def copy(self) -> "Network":
        return Network([layer.copy() for layer in self.layers], self.activation)

    def active_count(self) -> int:
        return int(sum(layer.mask.sum() for layer in self.layers))

    def weight_count(self) -> int:
        return int(sum(layer.W.size for layer in self.layers))


@dataclass
class ForwardTrace:
    """Per-layer pre-activations h[l] and activations a[l] (a[0] is the input)."""
    h: List[np.ndarray]
    a: List[np.ndarray]

    @property
    def yhat(self) -> np.ndarray:
        return self.a[-1]


@dataclass
class CurvatureBundle:
    """Gradients and curvature of the loss, one entry per layer.

    H[l]     batch-mean pre-activation Hessian (n_out x n_out)
    M[l]     batch-mean input second moment a aᵀ (n_in x n_in)
    hdiag[l] Kronecker-factored diagonal, hdiag[l][i, j] == M[l][i, i] * H[l][j, j]
    full[l]  exact layer Hessian block (exact_small only)
    """
    grads: List[np.ndarray]
    bias_grads: List[np.ndarray]
    loss: float
    H: Optional[List[np.ndarray]] = None
    M: Optional[List[np.ndarray]] = None
    hdiag: Optional[List[np.ndarray]] = None
    full: Optional[List[np.ndarray]] = None
    mode: Optional[CurvatureMode] = None
    n_samples: int = 0


class LayerDocument(BaseModel):
    W: List[List[float]]
    b: List[float]
    mask: List[List[bool]]


class NetworkDocument(BaseModel):
    """JSON form of a Network; floats round-trip exactly."""
    activation: Activation
    widths: List[int]
    layers: List[LayerDocument]
