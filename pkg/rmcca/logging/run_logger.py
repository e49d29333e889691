"""Run logger for tracking analysis stages and diagnostics."""

import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from rmcca.logging.formats import EventType, LogEntry
from rmcca.core.utils import generate_run_id


class RunLogger:
    """Logger for analysis events.

    Keeps entries in memory, echoes each one as a single line to a text
    stream (standard error by default) and optionally appends JSON lines to
    a file.
    """

    def __init__(
        self,
        run_id: Optional[str] = None,
        log_file: Optional[Path] = None,
        stream: Optional[TextIO] = None,
        echo: bool = True,
        enabled: bool = True,
    ):
        """Initialize run logger.

        Args:
            run_id: Run identifier
            log_file: JSONL file to append entries to (None for memory-only)
            stream: Stream for the one-line echo (default: sys.stderr)
            echo: Whether to echo entries to the stream
            enabled: Whether logging is enabled
        """
        self.run_id = run_id or generate_run_id()
        self.log_file = Path(log_file) if log_file else None
        self.stream = stream
        self.echo = echo
        self.enabled = enabled

        self.entries: List[LogEntry] = []

        if self.log_file:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)

    def log(self, event_type: EventType, data: Dict[str, Any], **metadata) -> None:
        """Log an event.

        Args:
            event_type: Type of event
            data: Event data
            **metadata: Additional metadata
        """
        if not self.enabled:
            return

        entry = LogEntry(
            timestamp=datetime.now(),
            event_type=event_type,
            run_id=self.run_id,
            data=data,
            metadata=metadata,
        )
        self.entries.append(entry)

        if self.echo:
            stream = self.stream if self.stream is not None else sys.stderr
            print(entry.to_line(), file=stream)

        if self.log_file:
            self._write_to_file(entry)

    def _write_to_file(self, entry: LogEntry) -> None:
        try:
            with open(self.log_file, "a") as f:
                f.write(entry.to_json() + "\n")
        except OSError as e:
            print(f"warning: failed to write log entry: {e}", file=sys.stderr)

    def info(self, message: str, **data) -> None:
        """Log an informational message."""
        self.log(EventType.INFO, {"message": message, **data})

    def warning(self, message: str, **data) -> None:
        """Log a warning."""
        self.log(EventType.WARNING, {"message": message, **data})

    def error(self, message: str, **data) -> None:
        """Log an error."""
        self.log(EventType.ERROR, {"message": message, **data})

    def get_entries(self, event_type: Optional[EventType] = None) -> List[LogEntry]:
        """Get logged entries, optionally filtered by type."""
        if event_type is None:
            return list(self.entries)
        return [e for e in self.entries if e.event_type == event_type]
