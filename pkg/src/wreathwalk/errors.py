"""Exception types shared across the package."""


class WreathWalkError(Exception):
    """Base class for package errors."""


class SpecMismatchError(WreathWalkError, ValueError):
    """Elements from different group towers were combined."""


class DecodeError(WreathWalkError, ValueError):
    """Malformed canonical element text."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class ResourceError(WreathWalkError, RuntimeError):
    """An enumeration exceeded its configured size cap."""

    def __init__(self, message: str, size: int, cap: int):
        super().__init__(f"{message} (size {size} > cap {cap})")
        self.size = size
        self.cap = cap


class DomainError(WreathWalkError, ValueError):
    """Argument outside the domain of an iterated-log function."""


class EscapeError(WreathWalkError, KeyError):
    """A distribution's support left the enumerated ball."""

    def __init__(self, encoding: str):
        super().__init__(f"element outside the ball: {encoding}")
        self.encoding = encoding
