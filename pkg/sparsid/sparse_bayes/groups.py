"""Weight groups of a 2-D matrix: entries/blocks, rows or columns."""

from typing import Tuple

import numpy as np

from .models import Granularity


def group_ids(shape: Tuple[int, int], granularity: Granularity, block_shape: Tuple[int, int] = (1, 1)) -> np.ndarray:
    """Integer group label for every entry of a matrix of ``shape``.

    Shape-wise blocks tile the matrix from the top-left corner; edge blocks may be smaller.
    """
    n_rows, n_cols = shape
    i, j = np.indices(shape)
    granularity = Granularity(granularity)
    if granularity == Granularity.ROW:
        return i
    if granularity == Granularity.COLUMN:
        return j
    br, bc = block_shape
    if br < 1 or bc < 1:
        raise ValueError(f"block_shape must be positive, got {block_shape}")
    blocks_per_row = -(-n_cols // bc)
    return (i // br) * blocks_per_row + j // bc


def group_sum(X: np.ndarray, ids: np.ndarray) -> np.ndarray:
    """Sum of X over each group, broadcast back to every member (exactly equal within a group)."""
    totals = np.bincount(ids.ravel(), weights=X.ravel(), minlength=int(ids.max()) + 1)
    return totals[ids]


def group_max(X: np.ndarray, ids: np.ndarray) -> np.ndarray:
    out = np.full(int(ids.max()) + 1, -np.inf)
    np.maximum.at(out, ids.ravel(), X.ravel())
    return out[ids]


def is_group_constant(X: np.ndarray, ids: np.ndarray) -> bool:
    return bool(np.all(group_max(X, ids) == -group_max(-X, ids)))
