"""Exact eigenvalue families of Fourier-block Dirac operators.

Two kinds of family are modelled:

* ``AffineBranchFamily``: eigenvalues ``c0 + a.theta + l.v`` for lattice
  indices ``v``; used for the flat T^2-bundle (unit pi = 1).
* ``NilBlockFamily``: 2x2 blocks with eigenvalues ``+-|theta + v|``,
  ``v in Z^2`` (unit 2*sqrt(pi) = 1).  Values are quadratic surds, handled
  through ``SignedRoot`` so every comparison stays exact.

All counts and crossings only depend on signs, so the irrational global
scale of each family never enters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import ceil, floor, isqrt
from typing import Iterable, Protocol, Sequence

from .errors import GapError, RangeError, StructuralError

Rat = Fraction
Vec = tuple[Fraction, ...]

DEFAULT_GAP = Fraction(1, 2)
ITERATION_CAP = 200_000

# Spectral flow counts a branch as present once (lambda - shift) >= 0: an
# eigenvalue sitting exactly at the shift is nonnegative at both ends.
NONNEG_AT_ZERO = True


def _vec(theta: Iterable) -> Vec:
    return tuple(Fraction(x) for x in theta)


@total_ordering
@dataclass(frozen=True)
class SignedRoot:
    """The real number sign * sqrt(square), square >= 0."""

    sign: int
    square: Fraction

    @staticmethod
    def of(x: "SignedRoot | Fraction | int") -> "SignedRoot":
        if isinstance(x, SignedRoot):
            return x
        x = Fraction(x)
        return SignedRoot((x > 0) - (x < 0), x * x)

    def _key(self) -> tuple[int, Fraction]:
        s = 0 if self.square == 0 else self.sign
        return s, self.square

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (SignedRoot, Fraction, int)):
            return NotImplemented
        return self._key() == SignedRoot.of(other)._key()

    def __hash__(self) -> int:
        s, sq = self._key()
        return hash((s, sq))

    def __lt__(self, other: "SignedRoot | Fraction | int") -> bool:
        a, b = self._key(), SignedRoot.of(other)._key()
        if a[0] != b[0]:
            return a[0] < b[0]
        return a[1] > b[1] if a[0] < 0 else a[1] < b[1]

    def rational(self) -> Fraction | None:
        num, den = self.square.numerator, self.square.denominator
        rn, rd = isqrt(num), isqrt(den)
        if rn * rn == num and rd * rd == den:
            return self.sign * Fraction(rn, rd) if num else Fraction(0)
        return None


@dataclass(frozen=True)
class SpectralGap:
    gap: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "gap", Fraction(self.gap))
        if self.gap <= 0:
            raise RangeError("spectral gap must be positive")


@dataclass(frozen=True)
class PLPath:
    waypoints: tuple[Vec, ...]

    def __post_init__(self) -> None:
        pts = tuple(_vec(p) if not isinstance(p, (int, Fraction)) else (Fraction(p),) for p in self.waypoints)
        if len(pts) < 2:
            raise RangeError("a path needs at least two waypoints")
        if len({len(p) for p in pts}) != 1:
            raise StructuralError("waypoints have different dimensions")
        object.__setattr__(self, "waypoints", pts)

    def segments(self) -> Iterable[tuple[Vec, Vec]]:
        return zip(self.waypoints, self.waypoints[1:])

    def reversed(self) -> "PLPath":
        return PLPath(tuple(reversed(self.waypoints)))


class Family(Protocol):
    lattice_rank: int
    unit_note: str

    def count_in(self, theta: Vec, lo: Fraction, hi: Fraction) -> int: ...

    def eigenvalues_in_window(self, theta: Vec, window: tuple[Fraction, Fraction]) -> list: ...

    def nonneg_change(self, start: Vec, end: Vec, shift: Fraction) -> int: ...

    def scaled(self, s: Fraction) -> "Family": ...


@dataclass(frozen=True)
class BranchTemplate:
    c0: Fraction
    a: Vec
    l: Vec
    multiplicity: int = 1

    def value(self, theta: Vec, v: Sequence[int]) -> Fraction:
        return self.c0 + sum(x * t for x, t in zip(self.a, theta)) + sum(x * n for x, n in zip(self.l, v))


@dataclass(frozen=True)
class AffineBranchFamily:
    lattice_rank: int
    templates: tuple[BranchTemplate, ...]
    unit_note: str = ""

    def __post_init__(self) -> None:
        for t in self.templates:
            if len(t.a) != self.lattice_rank or len(t.l) != self.lattice_rank:
                raise StructuralError("template coefficient length differs from lattice rank")
            if t.multiplicity < 1:
                raise RangeError("multiplicity must be positive")

    def _solve(self, t: BranchTemplate, base: Fraction, lo: Fraction, hi: Fraction, tag: str) -> list[tuple[int, ...]]:
        """Lattice indices v with lo < base + l.v <= hi."""
        nonzero = [i for i, x in enumerate(t.l) if x != 0]
        if not nonzero:
            return [tuple([0] * self.lattice_rank)] if lo < base <= hi else []
        if len(nonzero) > 1:
            raise RangeError(f"template {tag} depends on several lattice directions: enumeration is unbounded")
        i = nonzero[0]
        coef = t.l[i]
        # lo < base + coef*n <= hi
        a, b = (lo - base) / coef, (hi - base) / coef
        if coef > 0:
            ns = range(floor(a) + 1, floor(b) + 1)
        else:
            ns = range(ceil(b), ceil(a))
        if len(ns) > ITERATION_CAP:
            raise RangeError(f"template {tag} produced more than {ITERATION_CAP} eigenvalues")
        out = []
        for n in ns:
            v = [0] * self.lattice_rank
            v[i] = n
            out.append(tuple(v))
        return out

    def eigenvalues_in_window(self, theta, window) -> list[Fraction]:
        theta = _vec(theta)
        lo, hi = Fraction(window[0]), Fraction(window[1])
        if hi <= lo:
            return []
        out: list[Fraction] = []
        for k, t in enumerate(self.templates):
            base = t.value(theta, [0] * self.lattice_rank)
            for v in self._solve(t, base, lo, hi, str(k)):
                out.extend([t.value(theta, v)] * t.multiplicity)
        return sorted(out)

    def count_in(self, theta, lo, hi) -> int:
        return len(self.eigenvalues_in_window(theta, (lo, hi)))

    def _closed(self, t: BranchTemplate, lo: Fraction, hi: Fraction, tag: str) -> list[tuple[int, ...]]:
        """Lattice indices v with lo <= l.v <= hi."""
        eps = Fraction(1, 2) * min((abs(x) for x in t.l if x != 0), default=Fraction(1))
        return [v for v in self._solve(t, Fraction(0), lo - eps, hi, tag)
                if lo <= sum(x * n for x, n in zip(t.l, v))]

    def nonneg_change(self, start, end, shift) -> int:
        """Net change of #{lambda - shift >= 0} along the straight segment."""
        start, end = _vec(start), _vec(end)
        shift = Fraction(shift)
        zero = [0] * self.lattice_rank
        total = 0
        for k, t in enumerate(self.templates):
            b0 = t.value(start, zero) - shift
            b1 = t.value(end, zero) - shift
            if b0 == b1:
                if start != end and self._closed(t, -b0, -b0, str(k)):
                    raise RangeError(f"template {k} vanishes identically along a segment")
                continue
            lo, hi = min(b0, b1), max(b0, b1)
            for v in self._closed(t, -hi, -lo, str(k)):
                lv = sum(x * n for x, n in zip(t.l, v))
                total += t.multiplicity * ((b1 + lv >= 0) - (b0 + lv >= 0))
        return total

    def scaled(self, s) -> "AffineBranchFamily":
        s = Fraction(s)
        return AffineBranchFamily(
            self.lattice_rank,
            tuple(
                BranchTemplate(t.c0 * s, tuple(x * s for x in t.a), tuple(x * s for x in t.l), t.multiplicity)
                for t in self.templates
            ),
            self.unit_note,
        )


def _dist2(theta: Vec, v: Sequence[int]) -> Fraction:
    return sum(((t + n) ** 2 for t, n in zip(theta, v)), Fraction(0))


@dataclass(frozen=True)
class NilBlockFamily:
    """Blocks V_v, v in Z^rank, each contributing eigenvalues +-scale*|theta+v|."""

    lattice_rank: int = 2
    scale: Fraction = Fraction(1)
    unit_note: str = "2*sqrt(pi) = 1"

    def _box(self, theta: Vec, radius: Fraction) -> Iterable[tuple[int, ...]]:
        ranges = [range(floor(-t - radius), ceil(-t + radius) + 1) for t in theta]
        size = 1
        for r in ranges:
            size *= len(r)
        if size > ITERATION_CAP:
            raise RangeError("nil block enumeration exceeds the iteration cap")
        return itertools.product(*ranges)

    def eigenvalues_in_window(self, theta, window) -> list[SignedRoot]:
        theta = _vec(theta)
        lo, hi = Fraction(window[0]), Fraction(window[1])
        if hi <= lo:
            return []
        bound = max(abs(lo), abs(hi)) / self.scale
        out = []
        for v in self._box(theta, bound):
            r2 = _dist2(theta, v) * self.scale**2
            for sign in (1, -1):
                lam = SignedRoot(sign, r2)
                if lo < lam and not hi < lam:
                    out.append(lam)
        return sorted(out)

    def count_in(self, theta, lo, hi) -> int:
        return len(self.eigenvalues_in_window(theta, (lo, hi)))

    def nonneg_change(self, start, end, shift) -> int:
        start, end = _vec(start), _vec(end)
        shift = Fraction(shift)
        if start == end:
            return 0
        # only blocks that come within |shift| of the segment can change sign;
        # the segment lies in the box spanned by its endpoints
        radius = abs(shift) / self.scale + 1
        lows = [min(a, b) for a, b in zip(start, end)]
        highs = [max(a, b) for a, b in zip(start, end)]
        ranges = [range(floor(-h - radius), ceil(-l + radius) + 1) for l, h in zip(lows, highs)]
        total = 0
        for v in itertools.product(*ranges):
            for sign in (1, -1):
                m0 = _shifted_sign(sign, _dist2(start, v) * self.scale**2, shift)
                m1 = _shifted_sign(sign, _dist2(end, v) * self.scale**2, shift)
                total += (m1 >= 0) - (m0 >= 0)
        return total

    def scaled(self, s) -> "NilBlockFamily":
        return NilBlockFamily(self.lattice_rank, self.scale * Fraction(s), self.unit_note)


def _shifted_sign(sign: int, r2: Fraction, shift: Fraction) -> int:
    """Sign of sign*sqrt(r2) - shift."""
    lam = SignedRoot(sign, r2)
    if lam == shift:
        return 0
    return 1 if SignedRoot.of(shift) < lam else -1


def flat_family() -> AffineBranchFamily:
    """Order-2 flat T^2-bundle, unit pi = 1: -2(n+theta) and 2n+1+2theta."""
    one = Fraction(1)
    return AffineBranchFamily(
        1,
        (
            BranchTemplate(Fraction(0), (-2 * one,), (-2 * one,)),
            BranchTemplate(one, (2 * one,), (2 * one,)),
        ),
        "pi = 1",
    )


def nil_family() -> NilBlockFamily:
    return NilBlockFamily()


def m_count(fam: Family, gap: SpectralGap, theta, delta) -> int:
    """Signed count: #eigs in (-delta, 0] for delta >= 0, else -#eigs in (0, -delta]."""
    delta = Fraction(delta)
    if abs(delta) >= gap.gap:
        raise GapError(f"|delta| = {abs(delta)} is not below the gap {gap.gap}")
    theta = _vec(theta)
    if delta >= 0:
        return fam.count_in(theta, -delta, Fraction(0))
    return -fam.count_in(theta, Fraction(0), -delta)


def spectral_flow(fam: Family, gap: SpectralGap, path: PLPath, shift) -> int:
    """Net number of eigenvalues of (L - shift) moving from negative to nonnegative."""
    shift = Fraction(shift)
    if abs(shift) >= gap.gap:
        raise GapError(f"|shift| = {abs(shift)} is not below the gap {gap.gap}")
    return sum(fam.nonneg_change(a, b, shift) for a, b in path.segments() if a != b)


def kernel_jump(fam: Family, gap: SpectralGap, theta, delta) -> int:
    """m(+delta) - m(-delta): the number of eigenvalues in (-delta, delta]."""
    delta = abs(Fraction(delta))
    return m_count(fam, gap, theta, delta) - m_count(fam, gap, theta, -delta)


def nil_block_kernel_locus(delta) -> Fraction:
    """Radius of the sphere |theta + v| = delta where the block -delta + |theta+v| vanishes."""
    delta = Fraction(delta)
    if delta <= 0:
        raise RangeError("the kernel locus needs delta > 0")
    return delta


def flat_elevated_interval(delta) -> tuple[Fraction, Fraction]:
    """Centre and radius of the theta-interval where D(theta) - delta has one extra negative mode.

    The n = 0 branch -2theta - delta turns negative at -delta/2 and the n = -1
    branch 2theta - 1 - delta turns nonnegative at 1/2 + delta/2.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise RangeError("needs delta > 0")
    fam = flat_family()
    t0, t1 = fam.templates
    start = -(t0.c0 - delta) / t0.a[0]
    end = -(t1.c0 - t1.l[0] - delta) / t1.a[0]
    return (start + end) / 2, (end - start) / 2
