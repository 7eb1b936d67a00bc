"""
Report writer for riesz-lab.

Emits deterministic JSON: sorted keys, two-space indent, one trailing newline.
"""

from pathlib import Path
from typing import Any, Dict, Optional, TextIO
import logging
import os
import sys

from .utils import canonical_json, ensure_output_dir


logger = logging.getLogger("rieszlab")


class Emitter:
    """
    Writes reports to a file, into a directory, or to stdout.
    """

    def __init__(self, out: Optional[str] = None, stream: Optional[TextIO] = None):
        """
        Args:
            out: Report path; a directory receives <command>.json. Paths that
                end in a separator or have no suffix count as directories
                even before they exist
            stream: Destination when out is not given (default stdout)
        """
        self.out = Path(out) if out else None
        self.into_directory = bool(out) and (
            str(out).endswith(('/', os.sep)) or not self.out.suffix or self.out.is_dir()
        )
        self.stream = stream

    def target(self, command: str) -> Optional[Path]:
        if self.out is None:
            return None
        if self.into_directory:
            return self.out / f"{command.replace(' ', '-')}.json"
        return self.out

    def emit_report(self, report: Dict[str, Any]) -> Optional[Path]:
        """
        Write one report.

        Returns:
            The path written, or None when the report went to the stream
        """
        text = canonical_json(report) + "\n"
        path = self.target(report.get("command", "report"))
        if path is None:
            (self.stream or sys.stdout).write(text)
            return None
        ensure_output_dir(path.parent)
        self._write_text(path, text)
        logger.info(f"Wrote report to {path}")
        return path

    def _write_text(self, path: Path, text: str) -> None:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
