"""Orbifold line bundles over oriented 2-orbifolds and torsion spin-c classes.

A base orbifold is a genus together with marked points ``(alpha_j, beta_j)``.
A line bundle is stored in normal form ``(b, beta_1..beta_n)`` with
``0 <= beta_j < alpha_j``; it corresponds to ``b*x + sum beta_j*e_j`` in the
group generated by ``x, e_1..e_n`` subject to ``alpha_j*e_j = x``.

Euler characteristic convention: chi = 2 - 2g - sum(1 - 1/alpha_j).  The
formula is sometimes printed with the opposite sign inside the sum,
2 - 2g - sum(1/alpha_j - 1); that version is not used here because it
disagrees with -chi/2 = g - 1 on smooth bases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd, lcm, prod
from typing import Iterator

from .errors import RangeError, StructuralError, UnsupportedError
from .snf import smith_normal_form

Rat = Fraction
INFINITE = None  # order of the Picard quotient when deg N = 0


@dataclass(frozen=True)
class SeifertData:
    genus: int
    markings: tuple[tuple[int, int], ...] = ()
    orientable: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "markings", tuple((int(a), int(b)) for a, b in self.markings))
        if not self.orientable:
            raise UnsupportedError("non-orientable base: pass the orientable double cover instead")
        if self.genus < 0:
            raise RangeError(f"genus must be >= 0, got {self.genus}")
        for alpha, beta in self.markings:
            if alpha < 2:
                raise RangeError(f"marking multiplicity must be >= 2, got {alpha}")
            if not 0 <= beta < alpha:
                raise RangeError(f"marking ({alpha},{beta}) needs 0 <= beta < alpha")
            if gcd(alpha, beta) != 1:
                raise RangeError(f"marking ({alpha},{beta}) is not coprime")

    @property
    def alphas(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.markings)

    @property
    def is_smooth(self) -> bool:
        return not self.markings


@dataclass(frozen=True)
class OrbLineBundle:
    b: int
    beta: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", tuple(int(x) for x in self.beta))


def _check(base: SeifertData, L: OrbLineBundle) -> None:
    if len(L.beta) != len(base.markings):
        raise StructuralError(
            f"bundle has {len(L.beta)} beta entries but the base has {len(base.markings)} markings"
        )
    for (alpha, _), beta in zip(base.markings, L.beta):
        if not 0 <= beta < alpha:
            raise RangeError(f"bundle entry beta={beta} outside [0, {alpha})")


def normalize(base: SeifertData, b: int, beta: tuple[int, ...] | list[int]) -> OrbLineBundle:
    """Bring arbitrary integers ``(b, beta)`` to normal form by carrying."""
    if len(beta) != len(base.markings):
        raise StructuralError("beta length does not match the markings")
    carry = sum(x // a for x, a in zip(beta, base.alphas))
    return OrbLineBundle(b + carry, tuple(x % a for x, a in zip(beta, base.alphas)))


def picard_add(base: SeifertData, L1: OrbLineBundle, L2: OrbLineBundle) -> OrbLineBundle:
    _check(base, L1)
    _check(base, L2)
    return normalize(base, L1.b + L2.b, [x + y for x, y in zip(L1.beta, L2.beta)])


def picard_scale(base: SeifertData, L: OrbLineBundle, k: int) -> OrbLineBundle:
    _check(base, L)
    return normalize(base, k * L.b, [k * x for x in L.beta])


def picard_neg(base: SeifertData, L: OrbLineBundle) -> OrbLineBundle:
    return picard_scale(base, L, -1)


def orb_degree(base: SeifertData, L: OrbLineBundle) -> Rat:
    _check(base, L)
    den = lcm(*base.alphas)  # lcm() of nothing is 1
    return Fraction(L.b * den + sum(x * (den // a) for x, a in zip(L.beta, base.alphas)), den)


def orb_euler(base: SeifertData) -> Rat:
    return 2 - 2 * base.genus - sum((1 - Fraction(1, a) for a in base.alphas), Fraction(0))


def printed_orb_euler(base: SeifertData) -> Rat:
    """The opposite-sign variant 2 - 2g - sum(1/alpha - 1), kept for comparison only."""
    return 2 - 2 * base.genus - sum((Fraction(1, a) - 1 for a in base.alphas), Fraction(0))


def _presentation(base: SeifertData, N: OrbLineBundle) -> list[list[int]]:
    """Relation rows over generators (x, e_1..e_n): alpha_j e_j - x, and N."""
    n = len(base.markings)
    rows = []
    for j, alpha in enumerate(base.alphas):
        row = [0] * (n + 1)
        row[0] = -1
        row[1 + j] = alpha
        rows.append(row)
    rows.append([N.b, *N.beta])
    return rows


def picard_quotient_order(base: SeifertData, N: OrbLineBundle) -> int | None:
    """Order of Pic^t / Z[N]; ``None`` when the quotient is infinite (deg N = 0)."""
    _check(base, N)
    rel = _presentation(base, N)
    snf = smith_normal_form(rel, len(rel), len(base.markings) + 1)
    if snf.rank < len(base.markings) + 1:
        return INFINITE
    return prod(snf.diagonal)


@dataclass(frozen=True)
class TorsionSpinC:
    """A class in Pic^t / Z[N].

    ``rep`` is the unique representative with degree in [0, |deg N|);
    ``coords`` are its coordinates in the cyclic decomposition of the quotient.
    """

    rep: OrbLineBundle
    coords: tuple[int, ...] = field(compare=False)


def _canonical_rep(base: SeifertData, N: OrbLineBundle, E: OrbLineBundle) -> OrbLineBundle:
    dN = orb_degree(base, N)
    k = floor(orb_degree(base, E) / abs(dN))
    shift = picard_scale(base, N, -k if dN > 0 else k)
    return picard_add(base, E, shift)


class _Quotient:
    """Coordinates of Z^{1+n} / relations via the Smith form."""

    def __init__(self, base: SeifertData, N: OrbLineBundle) -> None:
        rel = _presentation(base, N)
        ngen = len(base.markings) + 1
        snf = smith_normal_form(rel, len(rel), ngen)
        if snf.rank < ngen:
            raise UnsupportedError("deg N = 0: infinitely many torsion classes")
        # rows of rel span the relation lattice; with U*rel*V = D the change of
        # generator basis is y = V^{-1} x, i.e. coordinates c = x @ V
        self.V = snf.V
        self.Vinv = _unimodular_inverse(snf.V)
        self.diag = snf.diagonal
        self.ngen = ngen

    def coords(self, b: int, beta: tuple[int, ...]) -> tuple[int, ...]:
        vec = [b, *beta]
        c = [sum(vec[i] * self.V[i][j] for i in range(self.ngen)) for j in range(self.ngen)]
        return tuple(x % d for x, d in zip(c, self.diag))

    def element(self, coords: tuple[int, ...]) -> tuple[int, list[int]]:
        vec = [sum(coords[i] * self.Vinv[i][j] for i in range(self.ngen)) for j in range(self.ngen)]
        return vec[0], vec[1:]


def _unimodular_inverse(V: list[list[int]]) -> list[list[int]]:
    n = len(V)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(V)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = [[x for x in row[n:]] for row in aug]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise ArithmeticError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def torsion_class(base: SeifertData, N: OrbLineBundle, E0: OrbLineBundle) -> TorsionSpinC:
    _check(base, N)
    _check(base, E0)
    if orb_degree(base, N) == 0:
        raise UnsupportedError("deg N = 0: infinitely many torsion classes")
    q = _Quotient(base, N)
    rep = _canonical_rep(base, N, E0)
    return TorsionSpinC(rep, q.coords(rep.b, rep.beta))


def enumerate_torsion_spinc(base: SeifertData, N: OrbLineBundle) -> list[TorsionSpinC]:
    """One class per coset of Z[N], walking the cyclic decomposition of the quotient."""
    _check(base, N)
    if orb_degree(base, N) == 0:
        raise UnsupportedError("deg N = 0: infinitely many torsion classes")
    q = _Quotient(base, N)
    out = []
    for coords in itertools.product(*(range(d) for d in q.diag)):
        b, beta = q.element(coords)
        rep = _canonical_rep(base, N, normalize(base, b, beta))
        out.append(TorsionSpinC(rep, tuple(coords)))
    out.sort(key=lambda c: (orb_degree(base, c.rep), c.rep.beta))
    return out


@dataclass(frozen=True)
class Reducibility:
    all_reducible: bool
    kernel_free: bool


def degree_progression(base: SeifertData, N: OrbLineBundle, E0: OrbLineBundle) -> tuple[Rat, Rat]:
    """(offset, step): the degrees of bundles in the class of E0 are offset + step*Z, offset in [0, step)."""
    dN = abs(orb_degree(base, N))
    a = orb_degree(base, E0)
    return a - floor(a / dN) * dN, dN


def reducibility_check(base: SeifertData, N: OrbLineBundle, E0: OrbLineBundle) -> Reducibility:
    _check(base, N)
    _check(base, E0)
    if orb_degree(base, N) == 0:
        raise UnsupportedError("reducibility criterion needs deg N != 0")
    offset, step = degree_progression(base, N, E0)
    top = -orb_euler(base) / 2
    hits_interval = offset < top  # smallest nonnegative degree lies in [0, top)
    on_boundary = ((top - offset) / step).denominator == 1
    return Reducibility(all_reducible=not hits_interval, kernel_free=not on_boundary)


def smooth_base(genus: int) -> SeifertData:
    return SeifertData(genus, ())


def bundles_with_b(base: SeifertData, b_range: range) -> Iterator[OrbLineBundle]:
    for b in b_range:
        for beta in itertools.product(*(range(a) for a in base.alphas)):
            yield OrbLineBundle(b, beta)
