class BlameLogicError(Exception):
    """Base class for every error raised by this package."""


class ResourceLimitError(BlameLogicError):
    """A configured search or enumeration cap was exceeded."""
