"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class ModefError(Exception):
    """Base class for all package-specific errors."""


class FormulaSyntaxError(ModefError, ValueError):
    """Parse failure, carrying the byte offset and the expected-token set."""

    def __init__(self, message: str, offset: int, expected: frozenset[str]):
        super().__init__(f"{message} at offset {offset}; expected one of "
                         f"{{{', '.join(sorted(expected))}}}")
        self.offset = offset
        self.expected = expected


class VariableClash(ModefError, ValueError):
    """A freshness or disjointness precondition on variables failed."""


class FrameFormatError(ModefError, ValueError):
    """Malformed frame or galaxy file."""


class NotEuclidean(ModefError, ValueError):
    """Operation requires a Euclidean frame."""


class WorldNotFound(ModefError, KeyError):
    """A referenced world is not in the frame."""


class UncoveredVariable(ModefError, KeyError):
    """A valuation or assignment does not cover a needed variable."""


class InvalidIndex(ModefError, ValueError):
    """Flower index outside the allowed (m, n) range."""


class Overlap(ModefError, ValueError):
    """Disjoint union received frames with overlapping world sets."""


class InvalidBudget(ModefError, ValueError):
    """Reduction budget q below the minimum of 3."""


class PreconditionViolated(ModefError, ValueError):
    """A documented operation precondition does not hold."""


class ResourceLimit(ModefError, RuntimeError):
    """A configured resource ceiling was exceeded before completion."""


class NotACongruence(ModefError, ValueError):
    """Interpretation decoding failed: empty domain or incompatible relation."""


class ArityMismatch(ModefError, ValueError):
    """Parameter tuple length does not match the formula's parameters."""
