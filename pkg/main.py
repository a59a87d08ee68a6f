"""sparsid - command-line entry point.

Drop a subpackage with a commands.py into sparsid/ and its commands are auto-loaded.
Exit codes: 0 ok, 2 bad arguments or config, 3 data error, 4 numeric failure.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from config import Config
from sparsid import CommandLoader, __version__
from sparsid.errors import ConfigError, DataError, SparsidError

LOG_LEVELS = {
    "error": logging.ERROR,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

logging.basicConfig(
    level=LOG_LEVELS.get(Config.LOG_LEVEL, logging.INFO),
    format="%(asctime)s │ %(levelname)-7s │ %(name)-15s │ %(message)s",
    datefmt="%H:%M:%S"
)
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsid",
        description="Sparse Bayesian identification of NARX networks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command")

    loader = CommandLoader()
    commands = loader.load_all(subparsers)
    logger.debug(f"Loaded commands: {', '.join(commands)}")
    return parser


def _validation_message(error: ValidationError) -> str:
    first = error.errors()[0]
    key = ".".join(str(part) for part in first["loc"]) or "config"
    extra = f" (+{error.error_count() - 1} more)" if error.error_count() > 1 else ""
    return f"config key '{key}': {first['msg']}{extra}"


def _fail(error: SparsidError) -> int:
    logger.error(f"✗ {error}")
    logger.error(json.dumps(error.detail()))
    return error.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_help()
        return 2

    try:
        return handler(args)
    except ValidationError as e:
        return _fail(ConfigError(_validation_message(e)))
    except SparsidError as e:
        return _fail(e)
    except OSError as e:
        return _fail(DataError(f"{e.filename or 'file'}: {e.strerror or e}"))


if __name__ == "__main__":
    sys.exit(main())
