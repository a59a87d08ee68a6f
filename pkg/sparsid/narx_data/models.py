"""NARX data models."""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _as_vector(v) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(-1)


class SubsetMode(str, Enum):
    PREFIX = "prefix"
    RANDOM = "random"


class SignalPair(BaseModel):
    """Input/output series u(t), y(t) sampled every dt seconds."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    u: np.ndarray
    y: np.ndarray
    dt: float = Field(default=1.0, gt=0)
    name: str = "signal"
    states: Optional[np.ndarray] = None  # simulator only, shape (n, 2)

    @field_validator("u", "y", mode="before")
    @classmethod
    def validate_series(cls, v):
        return _as_vector(v)

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.u) != len(self.y):
            raise ValueError(f"u and y differ in length ({len(self.u)} vs {len(self.y)})")
        if len(self.u) < 1:
            raise ValueError("Signal must hold at least one sample")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.y))):
            raise ValueError("Signal contains non-finite values")
        return self

    def __len__(self) -> int:
        return len(self.u)

    def slice(self, start: int, stop: Optional[int] = None) -> "SignalPair":
        states = None if self.states is None else self.states[start:stop]
        return SignalPair(u=self.u[start:stop], y=self.y[start:stop], dt=self.dt, name=self.name, states=states)


class TankParams(BaseModel):
    """Cascaded two-tank constants, noise levels and initial levels."""
    k1: float = Field(ge=0)
    k2: float = Field(ge=0)
    k3: float = Field(ge=0)
    k4: float = Field(ge=0)
    noise_std_w1: float = Field(default=0.0, ge=0)
    noise_std_w2: float = Field(default=0.0, ge=0)
    noise_std_e: float = Field(default=0.0, ge=0)
    x1_0: float = Field(default=0.0, ge=0)
    x2_0: float = Field(default=0.0, ge=0)
    overflow_cap: Optional[float] = Field(default=None, gt=0)


class NormStats(BaseModel):
    """z-score statistics; u lags share the u pair, y lags and targets share the y pair."""
    mean_u: float
    std_u: float = Field(gt=0)
    mean_y: float
    std_y: float = Field(gt=0)

    def scale_u(self, x):
        return (np.asarray(x, dtype=float) - self.mean_u) / self.std_u

    def scale_y(self, x):
        return (np.asarray(x, dtype=float) - self.mean_y) / self.std_y

    def unscale_u(self, x):
        return np.asarray(x, dtype=float) * self.std_u + self.mean_u

    def unscale_y(self, x):
        return np.asarray(x, dtype=float) * self.std_y + self.mean_y


class RegressorDataset(BaseModel):
    """Lagged regressor rows z(t) paired with next outputs y(t+1).

    Row layout: [u(t), u(t-1), ..., u(t-n_a), y(t-1), ..., y(t-n_b)].
    ``times`` holds t for each row, so targets[k] == y[times[k] + 1].
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    rows: np.ndarray
    targets: np.ndarray
    n_a: int = Field(ge=0)
    n_b: int = Field(ge=0)
    times: np.ndarray
    norm: Optional[NormStats] = None

    @field_validator("targets", "times", mode="before")
    @classmethod
    def validate_vectors(cls, v):
        return np.asarray(v).reshape(-1)

    @field_validator("rows", mode="before")
    @classmethod
    def validate_rows(cls, v):
        return np.atleast_2d(np.asarray(v, dtype=float))

    @model_validator(mode="after")
    def check_shapes(self):
        n, width = self.rows.shape
        if width != self.n_a + self.n_b + 1:
            raise ValueError(f"Row width {width} != n_a + n_b + 1 = {self.n_a + self.n_b + 1}")
        if n < 1 or len(self.targets) != n or len(self.times) != n:
            raise ValueError(f"Dataset needs >= 1 row and matching targets/times (rows={n})")
        return self

    @property
    def width(self) -> int:
        return self.n_a + self.n_b + 1

    def __len__(self) -> int:
        return len(self.targets)

    def take(self, index) -> "RegressorDataset":
        return RegressorDataset(
            rows=self.rows[index], targets=self.targets[index], n_a=self.n_a, n_b=self.n_b,
            times=self.times[index], norm=self.norm,
        )
