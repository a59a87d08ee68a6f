"""Evaluation reports."""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class EvalMode(str, Enum):
    PREDICTION = "prediction"
    SIMULATION = "simulation"


class RepeatStats(BaseModel):
    """Statistics over restarts; diverged runs are excluded from best/mean/std."""
    best: float
    mean: float
    std: float
    capped_mean: float
    n_runs: int
    n_diverged: int = 0


class EvalReport(BaseModel):
    """Predictions against truth on raw units, indexed by target time.

    A diverged free run keeps the predictions made before the failing step
    and scores rmse = inf.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    rmse: float
    predictions: np.ndarray
    truth: np.ndarray
    times: np.ndarray
    mode: EvalMode
    repeats: Optional[RepeatStats] = None
    diverged: bool = False
    diverged_at: Optional[int] = None
    seed_outputs: int = 0

    @field_validator("predictions", "truth", "times", mode="before")
    @classmethod
    def validate_series(cls, v):
        return np.asarray(v).reshape(-1)

    @model_validator(mode="after")
    def check_consistency(self):
        if not (len(self.predictions) == len(self.truth) == len(self.times)):
            raise ValueError("predictions, truth and times differ in length")
        if self.diverged:
            if np.isfinite(self.rmse):
                raise ValueError("a diverged report must carry rmse = inf")
            return self
        r = self.predictions - self.truth
        expected = float(np.sqrt(np.mean(r * r)))
        if not abs(self.rmse - expected) <= 1e-12 * max(1.0, expected):
            raise ValueError(f"rmse {self.rmse} does not match its predictions ({expected})")
        return self

    def summary(self) -> dict:
        return self.model_dump(mode="json", exclude={"predictions", "truth", "times"})
