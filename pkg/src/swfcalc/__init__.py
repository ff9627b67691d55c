"""Exact computation of unfolded Seiberg-Witten Floer spectra for Seifert-type manifolds."""

from .errors import GapError, ParseError, RangeError, StructuralError, SwfError, UnsupportedError

__all__ = ["SwfError", "ParseError", "StructuralError", "RangeError", "UnsupportedError", "GapError"]
