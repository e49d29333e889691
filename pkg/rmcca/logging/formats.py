"""Log formats and data structures."""

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum, auto
from typing import Any, Dict

from rmcca.core.utils import safe_json_dumps


class EventType(Enum):
    """Types of loggable events."""

    # Run lifecycle
    RUN_START = auto()
    RUN_END = auto()

    # Pipeline stages
    DATA_LOADED = auto()
    GRAM_BUILT = auto()
    BASIS_FIT = auto()
    SOLVER_DONE = auto()
    HOPKINS_DONE = auto()
    OUTPUT_WRITTEN = auto()
    CONVERGENCE_STEP = auto()

    # System events
    ERROR = auto()
    WARNING = auto()
    INFO = auto()


@dataclass
class LogEntry:
    """Single log entry."""

    timestamp: datetime
    event_type: EventType
    run_id: str
    data: Dict[str, Any] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "timestamp": self.timestamp.isoformat(),
            "event_type": self.event_type.name,
            "run_id": self.run_id,
            "data": self.data,
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        """Convert to JSON string."""
        return safe_json_dumps(self.to_dict())

    def to_line(self) -> str:
        """One-line human-readable rendering for the diagnostics stream."""
        parts = " ".join(f"{k}={v}" for k, v in self.data.items())
        return f"[{self.event_type.name.lower()}] {parts}".rstrip()
