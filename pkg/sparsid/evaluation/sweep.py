"""Data-ratio and λ sweeps over independent, resumable training cells."""

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from utils import atomic_write_json, atomic_write_text, stream_key
from sparsid.errors import ConfigError, SparsidError
from sparsid.narx_data import SignalPair, build_regressors
from sparsid.trainer import TrainConfig, outer_train
from . import config
from .harness import predict_one_step, simulate_signal
from .metrics import repeat_stats
from .models import EvalMode

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["ratio", "repeat", "rmse", "sparsity", "seed"]
DETAIL_COLUMNS = SWEEP_COLUMNS + ["neuron_sparsity", "diverged", "status", "error"]
SUMMARY_COLUMNS = ["ratio", "best", "mean", "std"]
LAMBDA_COLUMNS = ["lambda", "rmse", "sparsity", "neuron_sparsity", "seed", "status", "error"]


def cell_seed(seed: int, label: str) -> int:
    """Seed of one sweep cell, reproducible in isolation."""
    return int(seed) ^ stream_key(label)


def cell_fingerprint(cfg: TrainConfig, mode: Union[EvalMode, str], train_signal: SignalPair, test_signal: SignalPair) -> str:
    """Digest of everything a cell result depends on besides its (ratio, repeat) key."""
    h = hashlib.sha256()
    h.update(json.dumps({"config": cfg.snapshot(), "mode": EvalMode(mode).value}, sort_keys=True).encode("utf-8"))
    for signal in (train_signal, test_signal):
        for values in (signal.u, signal.y):
            h.update(np.ascontiguousarray(values, dtype=float).tobytes())
    return h.hexdigest()


def log_grid(low: float, high: float, count: int) -> List[float]:
    """``count`` λ values spaced evenly in log10 between ``low`` and ``high``."""
    if low <= 0 or high < low or count < 1:
        raise ConfigError(f"log grid needs 0 < low <= high and count >= 1 (got {low}, {high}, {count})")
    return [float(v) for v in np.logspace(np.log10(low), np.log10(high), count)]


def run_cell(
    cfg: TrainConfig,
    train_signal: SignalPair,
    test_signal: SignalPair,
    mode: Union[EvalMode, str],
    key: Dict[str, Any],
) -> Dict[str, Any]:
    """Train on one configuration and score it on the full test signal.

    Errors are caught and recorded so the rest of the sweep continues.
    """
    record = {**key, "seed": cfg.seed, "rmse": float("nan"), "sparsity": float("nan"),
              "neuron_sparsity": float("nan"), "diverged": False, "status": "ok", "error": ""}
    try:
        train = build_regressors(train_signal, cfg.n_a, cfg.n_b)
        model = outer_train(cfg, train)
        if EvalMode(mode) == EvalMode.PREDICTION:
            report = predict_one_step(model, test_signal)
        else:
            report = simulate_signal(model, test_signal)
        last = model.history[-1] if model.history else None
        record.update(
            rmse=report.rmse,
            sparsity=last.sparsity if last else 1.0,
            neuron_sparsity=last.neuron_sparsity if last else 1.0,
            diverged=report.diverged,
        )
    except (SparsidError, ValueError, ArithmeticError) as e:
        logger.error(f"✗ Cell {key} failed: {e}")
        record.update(status="failed", error=str(e))
    return record


@dataclass
class SweepResult:
    cells: pd.DataFrame
    summary: pd.DataFrame
    summary_detail: pd.DataFrame

    def write(self, out_dir: Union[str, Path]) -> List[Path]:
        out_dir = Path(out_dir)
        return [
            atomic_write_text(out_dir / config.SWEEP_FILE, self.cells[SWEEP_COLUMNS].to_csv(index=False)),
            atomic_write_text(out_dir / config.SWEEP_DETAIL_FILE, self.cells[DETAIL_COLUMNS].to_csv(index=False)),
            atomic_write_text(out_dir / config.SUMMARY_FILE, self.summary.to_csv(index=False)),
            atomic_write_text(out_dir / config.SUMMARY_DETAIL_FILE, self.summary_detail.to_csv(index=False)),
        ]


def _cell_path(cells_dir: Path, ratio: float, repeat: int) -> Path:
    return cells_dir / f"ratio_{ratio:.6f}_repeat_{repeat:03d}.json"


def _summarize(cells: pd.DataFrame) -> SweepResult:
    summary, detail = [], []
    for ratio, group in cells.groupby("ratio", sort=True):
        ok = group[group["status"] == "ok"]
        stats = repeat_stats(ok["rmse"].to_numpy())
        summary.append({"ratio": ratio, "best": stats.best, "mean": stats.mean, "std": stats.std})
        detail.append({
            "ratio": ratio, "capped_mean": stats.capped_mean, "n_runs": stats.n_runs,
            "n_diverged": stats.n_diverged, "n_failed": int(len(group) - len(ok)),
            "mean_sparsity": float(ok["sparsity"].mean()) if len(ok) else float("nan"),
            "mean_neuron_sparsity": float(ok["neuron_sparsity"].mean()) if len(ok) else float("nan"),
        })
    return SweepResult(
        cells=cells, summary=pd.DataFrame(summary, columns=SUMMARY_COLUMNS), summary_detail=pd.DataFrame(detail),
    )


def ratio_sweep(
    cfg: TrainConfig,
    train_signal: SignalPair,
    test_signal: SignalPair,
    ratios: Sequence[float],
    repeats: int,
    seed: int,
    mode: Union[EvalMode, str] = EvalMode.PREDICTION,
    jobs: int = 1,
    out_dir: Optional[Union[str, Path]] = None,
) -> SweepResult:
    """Train and score every (ratio, repeat) cell; summarize best/mean/std per ratio.

    With ``out_dir`` every finished cell is stored under cells/ together with a
    fingerprint of its config, mode and signals; a rerun skips cells whose
    fingerprint still matches and reruns the rest. Results do not depend on ``jobs``.
    """
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    bad = [r for r in ratios if not (0 < r <= 1)]
    if bad or not ratios:
        raise ConfigError(f"ratios must be a non-empty subset of (0, 1], got {list(ratios)}")

    cells_dir = Path(out_dir) / config.CELLS_DIR if out_dir is not None else None
    done, todo, stale = [], [], 0
    for ratio in ratios:
        for repeat in range(repeats):
            cell_cfg = cfg.model_copy(update={
                "ratio": float(ratio), "seed": cell_seed(seed, f"{ratio:.6f}:{repeat}"),
            })
            fingerprint = cell_fingerprint(cell_cfg, mode, train_signal, test_signal)
            path = _cell_path(cells_dir, ratio, repeat) if cells_dir is not None else None
            if path is not None and path.is_file():
                stored = json.loads(path.read_text(encoding="utf-8"))
                if stored.get("fingerprint") == fingerprint:
                    done.append(stored)
                    continue
                stale += 1
            todo.append((cell_cfg, {"ratio": float(ratio), "repeat": repeat}, path, fingerprint))

    if stale:
        logger.warning(f"Ignoring {stale} stored cells from a different config, mode or data")

    if done:
        logger.info(f"Resuming sweep: {len(done)} cells already complete, {len(todo)} to run")
    logger.info(f"Sweep: {len(ratios)} ratios × {repeats} repeats ({len(todo)} cells, jobs={jobs})")

    results = Parallel(n_jobs=jobs)(
        delayed(run_cell)(cell_cfg, train_signal, test_signal, mode, key) for cell_cfg, key, _, _ in todo
    )
    for (_, _, path, fingerprint), record in zip(todo, results):
        if path is not None and record["status"] == "ok":
            atomic_write_json(path, {**record, "fingerprint": fingerprint})

    cells = pd.DataFrame(done + list(results), columns=DETAIL_COLUMNS)
    cells = cells.sort_values(["ratio", "repeat"], kind="mergesort").reset_index(drop=True)
    result = _summarize(cells)
    failed = int((cells["status"] != "ok").sum())
    logger.info(f"✓ Sweep finished: {len(cells) - failed} cells ok, {failed} failed")
    return result


def lambda_sweep(
    cfg: TrainConfig,
    train_signal: SignalPair,
    test_signal: SignalPair,
    lambdas: Sequence[float],
    seed: int,
    mode: Union[EvalMode, str] = EvalMode.PREDICTION,
    jobs: int = 1,
) -> pd.DataFrame:
    """rmse and sparsity for each λ (shared across layers) at the config's data ratio."""
    if not lambdas or any(lam < 0 for lam in lambdas):
        raise ConfigError(f"lambdas must be a non-empty list of values >= 0, got {list(lambdas)}")
    todo = [
        (cfg.model_copy(update={"lam": float(lam), "seed": cell_seed(seed, f"lambda:{lam:.6e}")}), {"lambda": float(lam)})
        for lam in lambdas
    ]
    logger.info(f"λ sweep: {len(todo)} values (jobs={jobs})")
    results = Parallel(n_jobs=jobs)(
        delayed(run_cell)(cell_cfg, train_signal, test_signal, mode, key) for cell_cfg, key in todo
    )
    table = pd.DataFrame(results, columns=LAMBDA_COLUMNS).sort_values("lambda", kind="mergesort")
    return table.reset_index(drop=True)
