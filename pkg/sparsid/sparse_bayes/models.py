"""Hyper-parameter state and cost records."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, computed_field

from . import config


class Granularity(str, Enum):
    SHAPE = "shape"
    ROW = "row"
    COLUMN = "column"


@dataclass
class HyperState:
    """Per-layer prior variances υ, evidence terms α and reweighting ω.

    Entries of pruned weights are exactly 0 in all three. ``frozen`` marks
    groups whose ω fell under the floor in the last update (υ carried over).
    Shape granularity groups contiguous blocks of ``block_shape``.
    """
    upsilon: List[np.ndarray]
    alpha: List[np.ndarray]
    omega: List[np.ndarray]
    granularity: Granularity = Granularity.SHAPE
    block_shape: Tuple[int, int] = (1, 1)
    floor_upsilon: float = config.UPSILON_FLOOR
    frozen: List[np.ndarray] = field(default_factory=list)

    def copy(self) -> "HyperState":
        return HyperState(
            upsilon=[u.copy() for u in self.upsilon],
            alpha=[a.copy() for a in self.alpha],
            omega=[o.copy() for o in self.omega],
            granularity=self.granularity,
            block_shape=self.block_shape,
            floor_upsilon=self.floor_upsilon,
            frozen=[f.copy() for f in self.frozen],
        )


def init_hyper(
    shapes: List[Tuple[int, int]],
    granularity: Granularity = Granularity.SHAPE,
    block_shape: Tuple[int, int] = (1, 1),
) -> HyperState:
    """υ(0) = ω(0) = 1 everywhere, α(0) = 0."""
    return HyperState(
        upsilon=[np.ones(s) for s in shapes],
        alpha=[np.zeros(s) for s in shapes],
        omega=[np.ones(s) for s in shapes],
        granularity=Granularity(granularity),
        block_shape=tuple(block_shape),
        frozen=[np.zeros(s, dtype=bool) for s in shapes],
    )


class CostReport(BaseModel):
    """Diagonal-surrogate marginal cost; ``constant`` is reported but not part of ``total``."""
    data_term: float = 0.0
    reg_term: float = 0.0
    logdet_upsilon: float = 0.0
    logdet_H_plus_inv: float = 0.0
    constant: Optional[float] = None
    layers: List["CostReport"] = []

    @computed_field
    @property
    def total(self) -> float:
        return self.data_term + self.reg_term + self.logdet_upsilon + self.logdet_H_plus_inv


CostReport.model_rebuild()


class HyperDocument(BaseModel):
    """JSON form of a HyperState."""
    granularity: Granularity
    block_shape: Tuple[int, int]
    floor_upsilon: float
    upsilon: List[List[List[float]]]
    alpha: List[List[List[float]]]
    omega: List[List[List[float]]]
    frozen: List[List[List[bool]]]

    @classmethod
    def from_state(cls, hyper: HyperState) -> "HyperDocument":
        return cls(
            granularity=hyper.granularity,
            block_shape=hyper.block_shape,
            floor_upsilon=hyper.floor_upsilon,
            upsilon=[u.tolist() for u in hyper.upsilon],
            alpha=[a.tolist() for a in hyper.alpha],
            omega=[o.tolist() for o in hyper.omega],
            frozen=[f.tolist() for f in hyper.frozen],
        )

    def to_state(self) -> HyperState:
        return HyperState(
            upsilon=[np.asarray(u, dtype=float) for u in self.upsilon],
            alpha=[np.asarray(a, dtype=float) for a in self.alpha],
            omega=[np.asarray(o, dtype=float) for o in self.omega],
            granularity=self.granularity,
            block_shape=tuple(self.block_shape),
            floor_upsilon=self.floor_upsilon,
            frozen=[np.asarray(f, dtype=bool) for f in self.frozen],
        )
