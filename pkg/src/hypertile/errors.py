"""Exception types shared across the package."""

import os


class HypertileError(Exception):
    """Base class for all errors raised by hypertile."""


class InvalidArgument(HypertileError, ValueError):
    """An argument violates a documented precondition."""


class SizeLimitError(HypertileError, RuntimeError):
    """An enumeration or search guard was exceeded.

    ``partial`` carries whatever best-effort result was available when the
    guard tripped (for the tiling solver: the best tiling found so far).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotApplicable(HypertileError, ValueError):
    """A construction or gadget does not apply to the given tile shape."""


class InfeasibleSize(HypertileError, ValueError):
    """No part size satisfies a construction's arithmetic constraints."""


def guard_limit(default):
    """Return the enumeration guard, honouring ``HYPERTILE_GUARD`` if set."""
    value = os.environ.get("HYPERTILE_GUARD")
    if not value:
        return default
    try:
        return int(float(value))
    except ValueError:
        raise InvalidArgument(f"HYPERTILE_GUARD must be a number, got {value!r}")
