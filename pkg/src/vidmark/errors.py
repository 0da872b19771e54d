"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class VidmarkError(Exception):
    exit_code = 1


class ConfigurationError(VidmarkError):
    """Invalid parameters or mismatched inputs (CLI exit 2)."""

    exit_code = 2


class ShapeError(ConfigurationError):
    """Array or frame geometry does not satisfy an operation's contract."""


class DomainError(ConfigurationError):
    """Input is outside the mathematical domain of an operation."""


class IntegrityError(ConfigurationError):
    """Manifest does not line up with the sequences it is applied to."""


class CapacityError(VidmarkError):
    """Watermark payload does not fit the supplied blocks (CLI exit 3)."""

    exit_code = 3


class InsufficientMotionError(CapacityError):
    """Fewer motion blocks than the watermark needs; carries the count found."""

    def __init__(self, available, required=None):
        self.available = available
        self.required = required
        msg = f"only {available} motion blocks available"
        if required is not None:
            msg += f", {required} required"
        super().__init__(msg)


class NoCapacityError(CapacityError):
    """No frame in the sequence had enough motion blocks to embed into."""


class FormatError(VidmarkError):
    """Malformed video file (CLI exit 4)."""

    exit_code = 4


class TruncationError(FormatError):
    """File ended inside a frame payload; carries the frame index."""

    def __init__(self, frame_index, message=None):
        self.frame_index = frame_index
        super().__init__(message or f"truncated payload at frame {frame_index}")


class BoundsError(VidmarkError):
    """A displaced block falls outside the reference frame."""
