"""Run manifest: everything needed to reproduce a CLI run."""

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from sparsid import __version__
from utils import atomic_write_text, file_digest

logger = logging.getLogger(__name__)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


class RunManifest(BaseModel):
    """Config snapshot, seed, code version, input digests, timestamps and outputs of one run."""
    command: str
    config: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    code_version: str = __version__
    inputs: Dict[str, str] = Field(default_factory=dict)
    outputs: Dict[str, str] = Field(default_factory=dict)
    started_at: str = Field(default_factory=_now)
    finished_at: Optional[str] = None

    def add_input(self, path: Path) -> None:
        self.inputs[str(path)] = file_digest(path)

    def add_outputs(self, paths: List[Path]) -> None:
        for p in paths:
            self.outputs[str(p)] = file_digest(p)

    def verify(self) -> Dict[str, bool]:
        """Recompute input and output digests; True where the file still matches."""
        checks = {}
        for path, digest in {**self.inputs, **self.outputs}.items():
            checks[path] = Path(path).exists() and file_digest(path) == digest
        return checks

    def finish(self, out_dir: Path) -> Path:
        """Stamp the end time and write manifest.json atomically."""
        self.finished_at = _now()
        path = atomic_write_text(Path(out_dir) / "manifest.json", self.model_dump_json(indent=2))
        logger.info(f"✓ Manifest written: {path}")
        return path
