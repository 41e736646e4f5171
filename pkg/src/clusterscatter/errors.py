"""Exception types shared across the package.

Every error raised on bad user input derives from :class:`InputError`
(mapped to exit code 2 by the command line driver), while blown resource
ceilings raise :class:`ResourceLimitError` (exit code 3).  Internal
consistency failures use plain ``AssertionError`` so they are never
silently caught.
"""

from __future__ import annotations


class InputError(ValueError):
    """Malformed or out-of-contract input (schema violations included)."""


class GenericPositionError(InputError):
    """A base point or endpoint lies on a wall where genericity is required."""


class NonTransversalCrossingError(InputError):
    """A path segment meets a wall tangentially, so no crossing is defined."""


class TranslateUndefinedError(InputError):
    """The mesh translate was requested where it does not exist."""


class UnsupportedInputError(InputError):
    """Input is valid but outside the implemented classification."""


class InterpolationError(InputError):
    """Point counts over finite fields do not fit a single polynomial."""


class ResourceLimitError(RuntimeError):
    """A configured resource ceiling (cells, terms, depth) was exceeded."""
