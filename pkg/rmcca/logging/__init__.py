"""Run event logging for rmcca."""

from rmcca.logging.run_logger import RunLogger
from rmcca.logging.formats import LogEntry, EventType

__all__ = [
    "RunLogger",
    "LogEntry",
    "EventType",
]
