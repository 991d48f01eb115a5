"File formats for complexes, point clouds and reports."

from __future__ import annotations


class FormatError(ValueError):
    """Raised when an input file cannot be read or parsed."""
