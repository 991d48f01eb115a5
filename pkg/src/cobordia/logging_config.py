"Logging configuration helpers."

from __future__ import annotations

import logging
from typing import Final

from rich.console import Console
from rich.logging import RichHandler

DEFAULT_LOG_LEVEL: Final[str] = "INFO"
LEVELS: Final[frozenset[str]] = frozenset({"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"})


def configure_logging(level: str | None = None) -> None:
    """Configure application logging on stderr.

    Args:
        level: Optional log level override.

    Returns:
        None.

    Raises:
        ValueError: If level is invalid.
    """
    resolved = level or DEFAULT_LOG_LEVEL
    if not isinstance(resolved, str) or not resolved:
        raise ValueError("Log level must be a non-empty string.")
    if resolved.upper() not in LEVELS:
        raise ValueError(f"Unknown log level: {resolved}")
    logging.basicConfig(
        level=resolved.upper(),
        format="%(name)s: %(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
