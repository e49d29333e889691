#!/usr/bin/env python3
"""Command-line launcher for rmcca."""

import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from rmcca.cli import main


if __name__ == "__main__":
    sys.exit(main())
