"""Benchmark CSV ingestion and simulator CSV output."""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from sparsid.errors import DataError
from . import config
from .models import SignalPair

logger = logging.getLogger(__name__)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_benchmark_csv(path: Union[str, Path], dt: Optional[float] = None, name: Optional[str] = None) -> SignalPair:
    """Read a two-column (u, y) CSV with optional header into a SignalPair.

    A header naming ``u`` and ``y`` columns selects them by name (so simulator
    output with ``t,u,y,x1,x2`` loads too, dt inferred from ``t``); otherwise
    the first two columns are u and y. Errors name the file line and column.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")

    try:
        frame = pd.read_csv(
            path, header=None, dtype=str, skip_blank_lines=False,
            keep_default_na=False, encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: file is empty")
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: malformed CSV ({e})")

    if frame.shape[1] < 2:
        raise DataError(f"{path}: expected at least 2 columns (u, y), found {frame.shape[1]}")

    frame = frame.apply(lambda col: col.str.strip())
    first_line = 1
    header = None
    if not all(_is_number(c) for c in frame.iloc[0, :2]):
        header = [c.lower() for c in frame.iloc[0]]
        frame = frame.iloc[1:]
        first_line = 2

    # trailing blank lines are tolerated, blank lines inside the data are not
    blank = (frame.isna() | (frame == "")).all(axis=1).to_numpy()
    last = len(blank)
    while last > 0 and blank[last - 1]:
        last -= 1
    frame, blank = frame.iloc[:last], blank[:last]
    if last == 0:
        raise DataError(f"{path}: no data rows")
    if blank.any():
        line = first_line + int(np.argmax(blank))
        raise DataError(f"{path}: blank line at line {line}")

    if header is not None and "u" in header and "y" in header:
        columns = [header.index("u"), header.index("y")]
        labels = ["u", "y"]
    else:
        columns = [0, 1]
        labels = ["column 1", "column 2"]

    values = []
    for col, label in zip(columns, labels):
        raw = frame.iloc[:, col]
        parsed = pd.to_numeric(raw, errors="coerce")
        bad = parsed.isna().to_numpy() | ~np.isfinite(parsed.to_numpy(dtype=float, na_value=np.nan))
        if bad.any():
            k = int(np.argmax(bad))
            raise DataError(
                f"{path}: non-numeric value {raw.iloc[k]!r} at line {first_line + k}, {label}"
            )
        # astype(float) rounds correctly; to_numeric can be 1 ulp off
        values.append(raw.astype(float).to_numpy())

    if dt is None and header is not None and "t" in header:
        t = pd.to_numeric(frame.iloc[:, header.index("t")], errors="coerce").to_numpy(dtype=float)
        if len(t) > 1 and np.all(np.isfinite(t)):
            dt = float(np.median(np.diff(t)))
    if dt is None or dt <= 0:
        dt = config.DEFAULT_DT

    try:
        signal = SignalPair(u=values[0], y=values[1], dt=dt, name=name or path.stem)
    except ValidationError as e:
        raise DataError(f"{path}: {e.errors()[0]['msg']}")

    logger.info(f"✓ Loaded {path.name}: {len(signal)} samples, dt={signal.dt}")
    return signal


def write_signal_csv(signal: SignalPair, path: Union[str, Path]) -> Path:
    """Write ``t,u,y,x1,x2`` (state columns empty when the signal has no states)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = len(signal)
    states = signal.states if signal.states is not None else np.full((n, 2), np.nan)
    frame = pd.DataFrame({
        "t": np.arange(n) * signal.dt,
        "u": signal.u,
        "y": signal.y,
        "x1": states[:, 0],
        "x2": states[:, 1],
    })
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"✓ Wrote {path} ({n} samples)")
    return path
