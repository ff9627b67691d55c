"""Rational grading arithmetic for circle bundles, nil and flat manifolds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Hashable, Iterable, Mapping

from .errors import RangeError

Rat = Fraction


@dataclass(frozen=True)
class GradingRational:
    value: Fraction
    provenance: str  # "eta-formula" | "symmetry" | "user"

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))
        if self.provenance not in ("eta-formula", "symmetry", "user"):
            raise RangeError(f"unknown provenance tag {self.provenance!r}")


@dataclass(frozen=True)
class RPoly:
    """Polynomial in r^2: coeffs[k] multiplies r^(2k)."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, x) -> "RPoly":
        return cls((Fraction(x),))

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "RPoly") -> "RPoly":
        if not isinstance(other, RPoly):
            other = RPoly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RPoly(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "RPoly":
        return RPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other: "RPoly") -> "RPoly":
        return self + (-other if isinstance(other, RPoly) else RPoly.const(-Fraction(other)))

    def __mul__(self, other) -> "RPoly":
        if isinstance(other, RPoly):
            out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
            for i, x in enumerate(self.coeffs):
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
            return RPoly(tuple(out))
        return RPoly(tuple(x * Fraction(other) for x in self.coeffs))

    __rmul__ = __mul__

    def evaluate(self, r) -> Fraction:
        r2 = Fraction(r) ** 2
        return sum((c * r2**k for k, c in enumerate(self.coeffs)), Fraction(0))

    @property
    def is_r_free(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def constant(self) -> Fraction:
        return self.coeff(0)


def _check_gdq(g: int, d: int, q: int, formal: bool = False) -> None:
    if d <= 0:
        raise RangeError(f"need d > 0, got d={d}")
    if formal:
        if not 0 <= q < d or g < 0:
            raise RangeError(f"need 0 <= q < d and g >= 0, got g={g}, d={d}, q={q}")
    elif not 0 < g <= q < d:
        raise RangeError(f"need 0 < g <= q < d, got g={g}, d={d}, q={q}")


def eta_dirac_tilde(g: int, d: int, q: int) -> Fraction:
    _check_gdq(g, d, q)
    return Fraction(d, 6) + Fraction((g - 1 - q) * (d + g - 1 - q), d)


def _r_poly(g: int, d: int) -> RPoly:
    # d^2 r^4 - (2 - 2g) r^2
    return RPoly((0, -(2 - 2 * g), d * d))


def p1_integral(g: int, d: int, r=None) -> RPoly:
    """(1/24) int p1 = (d/12)(d^2 r^4 - (2-2g) r^2); symbolic in r unless r is given."""
    if d <= 0:
        raise RangeError(f"need d > 0, got d={d}")
    poly = Fraction(d, 12) * _r_poly(g, d)
    return poly if r is None else RPoly.const(poly.evaluate(r))


def eta_sign_over8(g: int, d: int, r=None) -> RPoly:
    if d <= 0:
        raise RangeError(f"need d > 0, got d={d}")
    poly = RPoly.const(Fraction(d - 3, 24)) - Fraction(d, 12) * _r_poly(g, d)
    return poly if r is None else RPoly.const(poly.evaluate(r))


def _c_raw(g: int, d: int, q: int) -> Fraction:
    return Fraction(d - 1, 8) + Fraction((g - 1 - q) * (d + g - 1 - q), 2 * d)


def c_of_gdq(g: int, d: int, q: int, formal: bool = False) -> Fraction:
    """(d-1)/8 + (g-1-q)(d+g-1-q)/(2d).  ``formal`` relaxes the range to 0 <= q < d."""
    _check_gdq(g, d, q, formal)
    return _c_raw(g, d, q)


def circle_bundle_index(g: int, d: int, q: int) -> RPoly:
    """eta/2 + (1/24)int p1 + eta_sign/8 as a polynomial in r^2."""
    return RPoly.const(eta_dirac_tilde(g, d, q) / 2) + p1_integral(g, d) + eta_sign_over8(g, d)


def n_plus_m(g: int, d: int, q: int, ker_dim: int) -> Fraction:
    """c(g,d,q) corrected by the complex dimension of the Dirac kernel at the base connection."""
    if ker_dim < 0:
        raise RangeError("ker_dim must be nonnegative")
    _check_gdq(g, d, q, formal=ker_dim > 0)
    if ker_dim > 0 and (q - (g - 1)) % d:
        raise RangeError("a Dirac kernel only occurs in the class q = g - 1 mod d")
    return _c_raw(g, d, q) - ker_dim


def symmetric_n(ker_dim: int) -> GradingRational:
    """n = -dim ker / 2 when an orientation-reversing isometry kills both eta terms."""
    if ker_dim < 0:
        raise RangeError("ker_dim must be nonnegative")
    return GradingRational(Fraction(-ker_dim, 2), "symmetry")


def relative_grading(a: Hashable, b: Hashable, morse_index: Mapping[Hashable, int], sf: int) -> int:
    """ind(a) - ind(b) - 2*sf, with sf the spectral flow of the shifted family from b to a."""
    return morse_index[a] - morse_index[b] - 2 * sf


def expected_dimension(gr: int, count_neg: int, count_pos: int) -> int:
    if count_neg < 0 or count_pos < 0:
        raise RangeError("eigenvalue counts are nonnegative")
    return gr - 2 - 2 * count_neg - 2 * count_pos


def l_periodicity(pairings: Iterable[int]) -> int:
    out = 0
    for x in pairings:
        out = gcd(out, abs(int(x)))
    return out


def cosine_critical_points(rank: int, frequency: int) -> dict[tuple[Fraction, ...], int]:
    """Critical points in [0,1)^rank of -sum cos(2*pi*frequency*theta_i) and their Morse indices.

    Each coordinate sits at a multiple of 1/(2*frequency); it is a maximum
    direction exactly when frequency*theta_i is a half-integer.
    """
    import itertools

    if rank < 0 or frequency < 1:
        raise RangeError("need rank >= 0 and frequency >= 1")
    step = Fraction(1, 2 * frequency)
    pts = [step * k for k in range(2 * frequency)]
    out = {}
    for p in itertools.product(pts, repeat=rank):
        out[p] = sum((frequency * x).denominator == 2 for x in p)
    return out
