"""Exception types shared across the package."""

from __future__ import annotations


class KoszulKitError(Exception):
    """Base class for all errors raised by koszulkit."""


class MalformedInput(KoszulKitError, ValueError):
    """An input file or parameter could not be parsed or is out of range."""


class AmbientMismatch(KoszulKitError, ValueError):
    """Two objects that must live in the same space do not."""


class RetriesExhausted(KoszulKitError, RuntimeError):
    """Random sampling failed to reach the requested rank."""


class PreconditionViolated(KoszulKitError, ValueError):
    """An operation was called on input outside its domain."""


class InvalidMultinet(KoszulKitError, ValueError):
    """A multinet candidate failed validation."""


class FlatTooSmall(KoszulKitError, ValueError):
    """A local component was requested for a flat with fewer than 3 members."""


class QTooSmall(KoszulKitError, ValueError):
    """A closed formula was evaluated below its range of validity."""


class RouteDisagreement(KoszulKitError, RuntimeError):
    """Two independent computations of the same number disagree."""
