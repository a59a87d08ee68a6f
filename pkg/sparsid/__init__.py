"""sparsid - sparse Bayesian identification of NARX networks.

Command auto-loader: drop a subpackage with a commands.py exporting
``register(subparsers, docs)`` into sparsid/ and it becomes a CLI command.
"""

import argparse
import importlib
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

__version__ = "1.0.0"

logger = logging.getLogger(__name__)


class CommandLoader:
    """Command auto-loader with discovery and validation."""

    def __init__(self):
        self.package_dir = Path(__file__).parent
        self.loaded_commands: Dict[str, Dict[str, Any]] = {}
        self.failed_commands: Dict[str, str] = {}

    def discover(self) -> List[Path]:
        """Discover all subpackages that ship a commands.py."""
        found = []
        for item in self.package_dir.iterdir():
            if item.name.startswith(("_", ".")) or not item.is_dir():
                continue
            if not (item / "commands.py").exists():
                logger.debug(f"Skipping {item.name}: no commands.py")
                continue
            found.append(item)
        return found

    def _load_docs(self, name: str) -> Optional[Dict[str, list]]:
        """Auto-load docs.py from a subpackage (NOTES + EXAMPLES)."""
        try:
            docs_module = importlib.import_module(f"sparsid.{name}.docs")
        except ModuleNotFoundError:
            return None
        notes = getattr(docs_module, "NOTES", [])
        examples = getattr(docs_module, "EXAMPLES", [])
        if notes or examples:
            return {"notes": notes, "examples": examples}
        return None

    def load(self, path: Path, subparsers) -> Optional[List[str]]:
        """Import one subpackage's commands and register them on the parser."""
        name = path.name
        try:
            module = importlib.import_module(f"sparsid.{name}.commands")
            register: Optional[Callable] = getattr(module, "register", None)
            if not callable(register):
                msg = "No callable 'register' found in commands.py"
                logger.error(f"✗ {name}: {msg}")
                self.failed_commands[name] = msg
                return None

            docs = self._load_docs(name)
            names = register(subparsers, docs) or []
            self.loaded_commands[name] = {"name": name, "commands": names, "docs": docs}
            logger.debug(f"✓ {name:<12} │ {', '.join(names)}")
            return names
        except ImportError as e:
            msg = f"Import failed: {e}"
            logger.error(f"✗ {name}: {msg}")
            self.failed_commands[name] = msg
            return None

    def load_all(self, subparsers) -> List[str]:
        commands = []
        for path in sorted(self.discover()):
            names = self.load(path, subparsers)
            if names:
                commands.extend(names)
        if self.failed_commands:
            for name, error in self.failed_commands.items():
                logger.warning(f"  - {name}: {error}")
        return commands


def format_epilog(docs: Optional[Dict[str, list]]) -> Optional[str]:
    """Render a subpackage's NOTES/EXAMPLES as an argparse epilog."""
    if not docs:
        return None
    lines = []
    if docs.get("notes"):
        lines.append("notes:")
        lines.extend(f"  - {n}" for n in docs["notes"])
    if docs.get("examples"):
        lines.append("examples:")
        for ex in docs["examples"]:
            lines.append(f"  {ex['title']}:")
            lines.append(f"    {ex['command']}")
    return "\n".join(lines)


def add_command(subparsers, name: str, help_text: str, docs: Optional[Dict[str, list]] = None) -> argparse.ArgumentParser:
    """Add a subcommand whose epilog shows only the examples that mention it."""
    if docs:
        docs = {
            "notes": docs.get("notes", []),
            "examples": [ex for ex in docs.get("examples", []) if f" {name} " in f" {ex['command']} "],
        }
    return subparsers.add_parser(
        name,
        help=help_text,
        description=help_text,
        epilog=format_epilog(docs),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
