"""Exception hierarchy shared across the package."""


class QrHullError(Exception):
    """Base class for all domain errors raised by this package."""


class FormatError(QrHullError):
    """Malformed or unsupported input file format."""


class TruncationError(FormatError):
    """Stream ended mid-frame."""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(
            f"truncated frame: expected {expected} bytes, got {got} "
            f"({expected - got} short)"
        )


class GeometryError(QrHullError):
    """Plane or frame dimensions do not match."""


class ValidationError(QrHullError):
    """Configuration or argument outside its legal domain."""


class ToolError(QrHullError):
    """External tool failed or is missing."""


class FitError(QrHullError):
    """Least-squares fit cannot be computed (rank, dof, degenerate data)."""
