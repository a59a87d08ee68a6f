"""Shared utilities."""

import hashlib
import json
import logging
import os
import tempfile
import zlib
from pathlib import Path
from typing import Union

import numpy as np
from tenacity import retry, wait_exponential, stop_after_attempt, retry_if_exception_type

logger = logging.getLogger(__name__)

WRITE_RETRY_ATTEMPTS = int(os.getenv("SPARSID_WRITE_RETRY_ATTEMPTS", "3"))


def file_digest(path: Union[str, Path]) -> str:
    """SHA-256 hex digest of a file."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@retry(
    wait=wait_exponential(multiplier=0.1, min=0.1, max=2),
    stop=stop_after_attempt(WRITE_RETRY_ATTEMPTS),
    retry=retry_if_exception_type(PermissionError),
    reraise=True,
)
def _replace_with_retry(src: str, dst: Path) -> None:
    """os.replace, retried while another process holds the target open."""
    os.replace(src, dst)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """Write text to a temp file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        _replace_with_retry(tmp, path)
    except Exception:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.debug(f"Wrote {path} ({len(text)} chars)")
    return path


def atomic_write_json(path: Union[str, Path], payload: dict) -> Path:
    return atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True))


def stream_key(name: str) -> int:
    """Stable 32-bit key for a named random stream (hash() is salted per process)."""
    return zlib.crc32(name.encode("utf-8"))


def seed_stream(seed: int, name: str, *keys: int) -> np.random.Generator:
    """Independent generator for a named sub-stream of a base seed.

    All randomness in a run flows from one seed through streams such as
    "init", "batching" and "sweep-cell".
    """
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(stream_key(name), *[int(k) for k in keys]))
    return np.random.default_rng(seq)
