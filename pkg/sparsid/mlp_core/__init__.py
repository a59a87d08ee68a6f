"""Fully-connected network core with hand-written derivatives."""

from .models import (
    Activation, CurvatureMode, LayerParams, Network, ForwardTrace, CurvatureBundle, NetworkDocument,
)
from .network import (
    init_network, forward, predict, backward, loss_value, effective_weights,
    network_to_document, network_from_document,
)
from .curvature import curvature, full_layer_hessian

__all__ = [
    "Activation", "CurvatureMode", "LayerParams", "Network", "ForwardTrace", "CurvatureBundle",
    "NetworkDocument", "init_network", "forward", "predict", "backward", "loss_value",
    "effective_weights", "network_to_document", "network_from_document", "curvature",
    "full_layer_hessian",
]
