"""Process-level configuration."""

import os
from pathlib import Path


class Config:
    """Process-level settings. Subpackage settings live in each subpackage's config.py."""

    LOG_LEVEL = os.getenv("SPARSID_LOG", "info").lower()
    OUTPUT_DIR = Path(os.getenv("SPARSID_OUTPUT_DIR", "./runs"))
    JOBS = int(os.getenv("SPARSID_JOBS", "1"))
