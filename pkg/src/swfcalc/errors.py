"""Error hierarchy shared by every module; the CLI maps each class to an exit code."""

from __future__ import annotations


class SwfError(Exception):
    """Base class for all library errors."""


class ParseError(SwfError):
    """Malformed input document or structurally inconsistent data."""


class StructuralError(ParseError):
    """Data whose shape is inconsistent (mismatched lengths, d∘d != 0, ...)."""


class RangeError(SwfError):
    """Parameters outside the domain of an operation."""


class UnsupportedError(SwfError):
    """Well-formed request outside the supported registry."""


class GapError(SwfError):
    """A shift or count parameter is not strictly below the declared spectral gap."""
