"""Training configuration, history and model documents."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sparsid.mlp_core import Activation, CurvatureMode, Network, NetworkDocument
from sparsid.narx_data import NormStats, SubsetMode
from sparsid.sparse_bayes import Granularity, HyperDocument, HyperState
from . import config


class Method(str, Enum):
    BAYES = "bayes"              # reweighted ℓ1 with evidence-driven ω
    GROUP_LASSO = "group_lasso"  # fixed unit weights, group soft-threshold
    L1 = "l1"                    # fixed unit weights, entrywise soft-threshold
    NONE = "none"                # plain SGD, no pruning


class TrainConfig(BaseModel):
    """Every knob of one training run. ``layer_widths`` lists hidden widths only."""
    model_config = ConfigDict(extra="forbid", populate_by_name=True, use_enum_values=False)

    layer_widths: List[int]
    n_a: int = Field(ge=0)
    n_b: int = Field(ge=0)

    lam: Union[float, List[float]] = Field(default=config.DEFAULT_LAMBDA, alias="lambda")
    kappa_upsilon: float = Field(default=config.DEFAULT_KAPPA_UPSILON, gt=0)
    kappa_w: float = Field(default=config.DEFAULT_KAPPA_W, gt=0)
    t_max: int = Field(default=config.DEFAULT_T_MAX, ge=0)
    inner_steps: int = Field(default=config.DEFAULT_INNER_STEPS, ge=1)
    step_size: float = Field(default=config.DEFAULT_STEP_SIZE, gt=0)
    batch_size: Optional[int] = Field(default=config.DEFAULT_BATCH_SIZE, ge=1)
    sigma2: float = Field(default=config.DEFAULT_SIGMA2, gt=0)
    granularity: Granularity = Granularity.SHAPE
    block_shape: Tuple[int, int] = (1, 1)
    seed: int = 0
    activation: Activation = Activation.TANH
    prune_start_iter: int = Field(default=config.DEFAULT_PRUNE_START, ge=1)
    patience: Optional[int] = Field(default=None, ge=1)
    method: Method = Method.BAYES
    curvature_mode: CurvatureMode = CurvatureMode.GAUSS_NEWTON_DIAG

    normalize: bool = True
    ratio: float = Field(default=1.0, gt=0, le=1)
    ratio_mode: SubsetMode = SubsetMode.PREFIX
    checkpoint_every: int = Field(default=0, ge=0)

    @field_validator("layer_widths")
    @classmethod
    def validate_widths(cls, v):
        if any(w < 1 for w in v):
            raise ValueError("hidden widths must be positive")
        return v

    @field_validator("lam")
    @classmethod
    def validate_lambda(cls, v):
        values = v if isinstance(v, list) else [v]
        if any(x < 0 for x in values):
            raise ValueError("lambda must be >= 0")
        return v

    @field_validator("block_shape")
    @classmethod
    def validate_block(cls, v):
        if v[0] < 1 or v[1] < 1:
            raise ValueError("block_shape entries must be >= 1")
        return v

    @model_validator(mode="after")
    def check_consistency(self):
        if self.t_max > 0 and self.prune_start_iter > self.t_max:
            raise ValueError(f"prune_start_iter ({self.prune_start_iter}) exceeds t_max ({self.t_max})")
        if isinstance(self.lam, list) and len(self.lam) != len(self.layer_widths) + 1:
            raise ValueError(
                f"lambda lists one value per layer: expected {len(self.layer_widths) + 1}, got {len(self.lam)}"
            )
        return self

    def lambdas(self) -> List[float]:
        n_layers = len(self.layer_widths) + 1
        return list(self.lam) if isinstance(self.lam, list) else [float(self.lam)] * n_layers

    def snapshot(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


class LayerRecord(BaseModel):
    layer: int
    cost_total: float
    data_term: float
    reg_term: float
    logdet_upsilon: float
    logdet_Hinv: float
    active_weights: int


class IterationRecord(BaseModel):
    """One completed outer iteration."""
    iteration: int
    train_rmse: float
    val_rmse: Optional[float] = None
    cost_total: Optional[float] = None
    active_weights: int
    sparsity: float
    neuron_sparsity: float
    pruned: int = 0
    posterior_std_mean: Optional[float] = None
    posterior_std_max: Optional[float] = None
    layers: List[LayerRecord] = []


@dataclass(frozen=True)
class TrainedModel:
    """Result of outer_train; never mutated after it is returned."""
    net: Network
    hyper: HyperState
    history: Tuple[IterationRecord, ...]
    norm: Optional[NormStats]
    config: TrainConfig
    rng_state: Optional[Dict[str, Any]] = None

    @property
    def iteration(self) -> int:
        return self.history[-1].iteration if self.history else 0

    @property
    def n_a(self) -> int:
        return self.config.n_a

    @property
    def n_b(self) -> int:
        return self.config.n_b


class ModelDocument(BaseModel):
    """Self-describing JSON document for final models and checkpoints alike."""
    format: str = "sparsid-model/1"
    config: Dict[str, Any]
    network: NetworkDocument
    hyper: HyperDocument
    norm: Optional[NormStats] = None
    history: List[IterationRecord] = []
    rng_state: Optional[Dict[str, Any]] = None
