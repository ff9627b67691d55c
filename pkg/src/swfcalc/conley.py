"""Normal forms for Conley indices, their integer homology and the maps between them.

Descriptors record a non-equivariant homotopy type together with the group
(S1 or Pin2) of the representations involved.  Homology is reduced integer
homology of the underlying space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import RangeError, StructuralError, UnsupportedError
from .snf import Matrix, matmul, smith_normal_form

GROUPS = ("S1", "Pin2")


@dataclass(frozen=True)
class VirtualRep:
    """Formal sum r*R + rt*R~ + c*C (S1) or r*R + rt*R~ + c*H (Pin2)."""

    group: str = "S1"
    r: int = 0
    c: int = 0
    rt: int = 0

    def __post_init__(self) -> None:
        if self.group not in GROUPS:
            raise RangeError(f"unknown group {self.group!r}")
        if self.group == "S1" and self.rt:
            raise RangeError("R~ only exists for Pin2")

    @property
    def admissible(self) -> bool:
        return self.r >= 0 and self.c >= 0 and self.rt >= 0

    @property
    def real_dim(self) -> int:
        return self.r + self.rt + (2 if self.group == "S1" else 4) * self.c

    @property
    def is_zero(self) -> bool:
        return self.r == self.c == self.rt == 0

    def _same(self, other: "VirtualRep") -> None:
        if self.group != other.group:
            raise StructuralError(f"cannot combine {self.group} and {other.group} representations")

    def __add__(self, other: "VirtualRep") -> "VirtualRep":
        self._same(other)
        return VirtualRep(self.group, self.r + other.r, self.c + other.c, self.rt + other.rt)

    def __neg__(self) -> "VirtualRep":
        return VirtualRep(self.group, -self.r, -self.c, -self.rt)

    def __sub__(self, other: "VirtualRep") -> "VirtualRep":
        return self + (-other)

    def label(self) -> str:
        big = "C" if self.group == "S1" else "H"
        parts = []
        for n, sym in ((self.r, "R"), (self.rt, "R~"), (self.c, big)):
            if n:
                parts.append(sym if n == 1 else f"{n}{sym}")
        return " + ".join(parts) or "0"


def C(n: int = 1) -> VirtualRep:
    return VirtualRep("S1", c=n)


def H(n: int = 1) -> VirtualRep:
    return VirtualRep("Pin2", c=n)


def R(n: int = 1, group: str = "S1") -> VirtualRep:
    return VirtualRep(group, r=n)


# ---------------------------------------------------------------- descriptors


@dataclass(frozen=True)
class Sphere:
    rep: VirtualRep = VirtualRep()


@dataclass(frozen=True)
class WedgeOverS0:
    """k copies of cell^+ glued along S^0, i.e. the unreduced suspension of k copies of S(cell)."""

    k: int
    cell: VirtualRep = C(1)


@dataclass(frozen=True)
class PinOrbitWedge:
    """Unreduced suspension of k disjoint free Pin(2)-orbits."""

    k: int


@dataclass(frozen=True)
class PinTorusWedge:
    """S(H) with k copies of Z~2 x S(H) glued along a common Pin(2)-orbit."""

    k: int


REMOVED = ("circle", "pin2_orbit", "dm")


@dataclass(frozen=True)
class Complement:
    """ambient^+ minus a compact set E in S(ambient); E has k pieces of the given type."""

    k: int
    ambient: VirtualRep
    removed: str = "circle"

    def __post_init__(self) -> None:
        if self.removed not in REMOVED:
            raise RangeError(f"unknown removed set {self.removed!r}")


@dataclass(frozen=True)
class Suspended:
    base: "Descriptor"
    by: VirtualRep


Descriptor = Union[Sphere, WedgeOverS0, PinOrbitWedge, PinTorusWedge, Complement, Suspended]


def _check_k(d: Descriptor) -> None:
    k = getattr(d, "k", 0)
    if k < 0:
        raise RangeError("k must be nonnegative")


def group_of(d: Descriptor) -> str:
    if isinstance(d, Sphere):
        return d.rep.group
    if isinstance(d, WedgeOverS0):
        return d.cell.group
    if isinstance(d, Complement):
        return d.ambient.group
    if isinstance(d, Suspended):
        return d.by.group
    return "Pin2"


def describe(d: Descriptor) -> str:
    if isinstance(d, Sphere):
        return "S^0" if d.rep.is_zero else f"({d.rep.label()})^+"
    if isinstance(d, WedgeOverS0):
        return f"V^{d.k}_(S^0) ({d.cell.label()})^+"
    if isinstance(d, PinOrbitWedge):
        return f"Sigma(coprod^{d.k} Pin(2))"
    if isinstance(d, PinTorusWedge):
        return f"S(H) v_Pin(2) V^{d.k}(Z~2 x S(H))"
    if isinstance(d, Complement):
        piece = {"circle": f"coprod^{d.k} S^1", "pin2_orbit": f"coprod^{d.k} Pin(2)", "dm": f"D_{d.k}"}[d.removed]
        return f"({d.ambient.label()})^+ \\ {piece}"
    if isinstance(d, Suspended):
        inner = describe(d.base)
        if d.by == R(1, d.by.group):
            return f"Sigma({inner})"
        return f"Sigma^({d.by.label()})({inner})"
    raise StructuralError(f"unknown descriptor {d!r}")


# ---------------------------------------------------------------- chain complexes


@dataclass(frozen=True)
class GradedHom:
    """degree -> (betti, torsion); zero groups are omitted."""

    groups: tuple[tuple[int, int, tuple[int, ...]], ...] = ()

    @classmethod
    def from_dict(cls, data: dict[int, tuple[int, Sequence[int]]]) -> "GradedHom":
        items = []
        for deg in sorted(data):
            betti, tors = data[deg]
            tors = tuple(sorted(t for t in tors if t > 1))
            if betti or tors:
                items.append((deg, betti, tors))
        return cls(tuple(items))

    def as_dict(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        return {deg: (b, t) for deg, b, t in self.groups}

    def betti(self, deg: int) -> int:
        return self.as_dict().get(deg, (0, ()))[0]

    def torsion(self, deg: int) -> tuple[int, ...]:
        return self.as_dict().get(deg, (0, ()))[1]

    def shifted(self, a: int) -> "GradedHom":
        return GradedHom(tuple((deg + a, b, t) for deg, b, t in self.groups))

    def reduced(self) -> "GradedHom":
        d = self.as_dict()
        b0, t0 = d.get(0, (0, ()))
        if b0 < 1:
            raise StructuralError("reduced homology needs a nonempty space")
        d[0] = (b0 - 1, t0)
        return GradedHom.from_dict(d)

    def euler(self) -> int:
        return sum((-1) ** deg * b for deg, b, _ in self.groups)

    def table(self, top: int | None = None) -> list[list]:
        """[[betti, [torsion...]], ...] for degrees 0..top."""
        d = self.as_dict()
        top = max(d, default=-1) if top is None else top
        return [[d.get(i, (0, ()))[0], list(d.get(i, (0, ()))[1])] for i in range(top + 1)]


@dataclass(frozen=True)
class ChainComplex:
    """ranks[i] = rank of C_i; boundary[i] is the rank[i-1] x rank[i] matrix of d_i."""

    ranks: tuple[int, ...]
    boundary: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for i, m in self.boundary.items():
            if not 1 <= i < len(self.ranks):
                raise StructuralError(f"boundary in degree {i} has no target")
            rows, cols = self.ranks[i - 1], self.ranks[i]
            if len(m) != rows or any(len(row) != cols for row in m):
                raise StructuralError(f"boundary d_{i} has the wrong shape")
        for i in range(2, len(self.ranks)):
            a, b = self.d(i - 1), self.d(i)
            if self.ranks[i - 2] and self.ranks[i] and self.ranks[i - 1]:
                if any(any(x for x in row) for row in matmul(a, b)):
                    raise StructuralError(f"d_{i - 1} d_{i} != 0")

    def d(self, i: int) -> Matrix:
        if i in self.boundary:
            return self.boundary[i]
        rows = self.ranks[i - 1] if i >= 1 else 0
        cols = self.ranks[i] if 0 <= i < len(self.ranks) else 0
        return [[0] * cols for _ in range(rows)]


def homology(cx: ChainComplex) -> GradedHom:
    n = len(cx.ranks)
    forms = {}
    for i in range(1, n):
        forms[i] = smith_normal_form(cx.d(i), cx.ranks[i - 1], cx.ranks[i])
    out = {}
    for i in range(n):
        rank_out = forms[i].rank if i in forms else 0
        incoming = forms.get(i + 1)
        rank_in = incoming.rank if incoming else 0
        tors = [x for x in incoming.diagonal if x > 1] if incoming else []
        out[i] = (cx.ranks[i] - rank_out - rank_in, tors)
    return GradedHom.from_dict(out)


# ---------------------------------------------------------------- normal-form homology


def _pieces(k: int, removed: str) -> dict[int, int]:
    """Reduced cohomology ranks of the removed compact set E."""
    if k == 0:
        return {}
    if removed == "circle":
        return {0: k - 1, 1: k}
    if removed == "pin2_orbit":
        return {0: 2 * k - 1, 1: 2 * k}
    return {2: 2 * k, 3: 2 * k + 1}


def _susp_disjoint_spheres(count: int, dim: int) -> GradedHom:
    """Reduced homology of the unreduced suspension of ``count`` copies of S^dim."""
    if count == 0:
        return GradedHom.from_dict({0: (1, ())})
    if dim == 0:
        return GradedHom.from_dict({1: (2 * count - 1, ())})
    return GradedHom.from_dict({1: (count - 1, ()), dim + 1: (count, ())})


def descriptor_homology(d: Descriptor) -> GradedHom:
    _check_k(d)
    if isinstance(d, Sphere):
        if not d.rep.admissible:
            raise RangeError("virtual sphere: pair it with a dual or keep it as a formal shift")
        return GradedHom.from_dict({d.rep.real_dim: (1, ())})
    if isinstance(d, WedgeOverS0):
        if not d.cell.admissible or d.cell.real_dim < 1:
            raise RangeError("wedge cell must be a nonzero honest representation")
        return _susp_disjoint_spheres(d.k, d.cell.real_dim - 1)
    if isinstance(d, PinOrbitWedge):
        return _susp_disjoint_spheres(2 * d.k, 1)
    if isinstance(d, PinTorusWedge):
        return GradedHom.from_dict({2: (2 * d.k, ()), 3: (2 * d.k + 1, ())})
    if isinstance(d, Complement):
        if not d.ambient.admissible:
            raise RangeError("ambient representation must be honest")
        n = d.ambient.real_dim
        if d.k == 0:
            return GradedHom.from_dict({n: (1, ())})
        # Alexander duality in S^n: H~_i(S^n - E) = H~^{n-1-i}(E)
        return GradedHom.from_dict({n - 1 - j: (r, ()) for j, r in _pieces(d.k, d.removed).items()})
    if isinstance(d, Suspended):
        if not d.by.admissible:
            raise RangeError("virtual suspension: keep it in the (m, n) bookkeeping")
        return descriptor_homology(d.base).shifted(d.by.real_dim)
    raise StructuralError(f"unknown descriptor {d!r}")


# ---------------------------------------------------------------- suspension and duality


def suspend(d: Descriptor, E: VirtualRep) -> Descriptor:
    if E.is_zero:
        return d
    if group_of(d) != E.group:
        raise StructuralError("suspension by a representation of another group")
    if isinstance(d, Sphere):
        total = d.rep + E
        if total.admissible:
            return Sphere(total)
        return Suspended(Sphere(), total) if not d.rep.is_zero else Suspended(d, E)
    if isinstance(d, Suspended):
        by = d.by + E
        if by.is_zero:
            return d.base
        return Suspended(d.base, by)
    return Suspended(d, E)


def spanier_whitehead_dual(d: Descriptor, ambient: VirtualRep) -> Descriptor:
    """V-dual of ``d``: Sigma E and V^+ minus E are exchanged."""
    if group_of(d) != ambient.group:
        raise UnsupportedError("dual across different groups")
    if isinstance(d, Sphere):
        rest = ambient - d.rep
        if not rest.admissible:
            raise UnsupportedError("sphere does not fit in the ambient representation")
        return Sphere(rest)
    if isinstance(d, WedgeOverS0) and ambient == C(2) and d.cell == C(1):
        return Complement(d.k, ambient, "circle")
    if isinstance(d, PinOrbitWedge) and ambient == H(1):
        return Complement(d.k, ambient, "pin2_orbit")
    if isinstance(d, Suspended) and isinstance(d.base, PinTorusWedge) and d.by == R(1, "Pin2") and ambient == H(2):
        return Complement(d.base.k, ambient, "dm")
    if isinstance(d, Complement) and d.ambient == ambient:
        if d.removed == "circle":
            return WedgeOverS0(d.k, C(1))
        if d.removed == "pin2_orbit":
            return PinOrbitWedge(d.k)
        return Suspended(PinTorusWedge(d.k), R(1, "Pin2"))
    raise UnsupportedError(f"no dual recorded for {describe(d)} in {ambient.label()}")


# ---------------------------------------------------------------- maps


def _components(d: Descriptor) -> int:
    if isinstance(d, WedgeOverS0):
        return d.k
    if isinstance(d, PinOrbitWedge):
        return 2 * d.k
    if isinstance(d, Complement):
        return d.k if d.removed == "circle" else 2 * d.k
    raise StructuralError("no component structure")


@dataclass(frozen=True)
class MapDescriptor:
    """Map induced by inclusion.

    For wedge forms ``injection[i]`` is the target summand of source summand i.
    For complements (inverse direction) the map goes from the complement of
    the larger set to the complement of the smaller one and ``injection``
    embeds the summands of the smaller set (the target) into the larger one.
    """

    source: Descriptor
    target: Descriptor
    injection: tuple[int, ...]

    def _component_injection(self) -> tuple[int, ...]:
        small = self.target if isinstance(self.source, Complement) else self.source
        if isinstance(small, PinOrbitWedge) or (isinstance(small, Complement) and small.removed == "pin2_orbit"):
            return tuple(2 * j + e for j in self.injection for e in (0, 1))
        return self.injection

    def on_homology(self, degree: int) -> Matrix:
        """Matrix of the induced map on reduced homology in the standard bases."""
        src_h, tgt_h = descriptor_homology(self.source), descriptor_homology(self.target)
        cols, rows = src_h.betti(degree), tgt_h.betti(degree)
        m = [[0] * cols for _ in range(rows)]
        if not rows or not cols:
            return m
        s, t = self.source, self.target
        if isinstance(s, Suspended):
            return MapDescriptor(s.base, t.base, self.injection).on_homology(degree - s.by.real_dim)
        if isinstance(s, PinTorusWedge):
            # degree 3: base sphere then two spheres per pair; degree 2: two classes per pair
            if degree == 3:
                m[0][0] = 1
                for i, j in enumerate(self.injection):
                    for e in (0, 1):
                        m[1 + 2 * j + e][1 + 2 * i + e] = 1
            else:
                for i, j in enumerate(self.injection):
                    for e in (0, 1):
                        m[2 * j + e][2 * i + e] = 1
            return m
        if isinstance(s, Sphere):
            return [[int(i == j) for j in range(cols)] for i in range(rows)]
        inj = self._component_injection()
        top_wedge = isinstance(s, (WedgeOverS0, PinOrbitWedge)) and degree != 1
        if isinstance(s, (WedgeOverS0, PinOrbitWedge)):
            if top_wedge:
                for i, j in enumerate(inj):
                    m[j][i] = 1
            else:
                # basis c_i - c_0, i >= 1
                for i in range(1, len(inj)):
                    if inj[i]:
                        m[inj[i] - 1][i - 1] += 1
                    if inj[0]:
                        m[inj[0] - 1][i - 1] -= 1
            return m
        if isinstance(s, Complement):
            n = s.ambient.real_dim
            j_deg = n - 1 - degree
            if j_deg >= 1:
                # restriction of top cohomology of the pieces
                for i, j in enumerate(inj):
                    m[i][j] = 1
                return m
            # reduced H^0: functions on components modulo constants, basis e_1..e_{k-1}
            for j in range(1, _components(s)):
                g = [int(x == j) for x in inj]
                for i in range(1, len(g)):
                    m[i - 1][j - 1] = g[i] - g[0]
            return m
        raise StructuralError(f"no homology map recorded for {describe(s)}")


def compose(f: MapDescriptor, g: MapDescriptor) -> MapDescriptor:
    """g after f."""
    if f.target != g.source:
        raise StructuralError("maps are not composable")
    if isinstance(f.source, Complement) or (isinstance(f.source, Suspended) and isinstance(f.source.base, Complement)):
        # inverse direction: injections compose the other way round
        return MapDescriptor(f.source, g.target, tuple(f.injection[j] for j in g.injection))
    return MapDescriptor(f.source, g.target, tuple(g.injection[j] for j in f.injection))


def _summands(d: Descriptor) -> int:
    if isinstance(d, Suspended):
        return _summands(d.base)
    if isinstance(d, Sphere):
        return 0
    return d.k


def attractor_map(source: Descriptor, target: Descriptor, injection: Sequence[int] | None = None) -> MapDescriptor:
    """Inclusion of normal forms; defaults to the first-summands injection."""
    ks, kt = _summands(source), _summands(target)
    s_inner = source.base if isinstance(source, Suspended) else source
    t_inner = target.base if isinstance(target, Suspended) else target
    if type(s_inner) is not type(t_inner):
        raise UnsupportedError("attractor map between different normal forms")
    if isinstance(source, Suspended) != isinstance(target, Suspended) or (
        isinstance(source, Suspended) and source.by != target.by
    ):
        raise UnsupportedError("attractor map between differently suspended forms")
    if isinstance(s_inner, WedgeOverS0) and s_inner.cell != t_inner.cell:
        raise UnsupportedError("wedge cells differ")
    if isinstance(s_inner, Complement):
        if (s_inner.ambient, s_inner.removed) != (t_inner.ambient, t_inner.removed):
            raise UnsupportedError("complements live in different ambients")
        if kt > ks:
            raise UnsupportedError("complement maps go from more removed pieces to fewer")
        inj = tuple(range(kt)) if injection is None else tuple(injection)
        if len(inj) != kt or len(set(inj)) != kt or any(not 0 <= j < ks for j in inj):
            raise RangeError("injection does not embed the smaller set")
        return MapDescriptor(source, target, inj)
    if isinstance(s_inner, Sphere):
        if source != target:
            raise UnsupportedError("sphere maps must be identities")
        return MapDescriptor(source, target, ())
    if ks > kt:
        raise UnsupportedError("attractor maps go from fewer summands to more")
    inj = tuple(range(ks)) if injection is None else tuple(injection)
    if len(inj) != ks or len(set(inj)) != ks or any(not 0 <= j < kt for j in inj):
        raise RangeError("injection is not an embedding of summands")
    return MapDescriptor(source, target, inj)


# ---------------------------------------------------------------- exit sets

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class Window:
    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", tuple(Fraction(x) for x in self.lo))
        object.__setattr__(self, "hi", tuple(Fraction(x) for x in self.hi))
        if len(self.lo) != len(self.hi) or any(a >= b for a, b in zip(self.lo, self.hi)):
            raise RangeError("window must be a nonempty box")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def dist2(self, p: Point) -> Fraction:
        total = Fraction(0)
        for x, a, b in zip(p, self.lo, self.hi):
            gap = a - x if x < a else (x - b if x > b else Fraction(0))
            total += gap * gap
        return total

    def contains_ball(self, p: Point, rho: Fraction) -> bool:
        return all(a <= x - rho and x + rho <= b for x, a, b in zip(p, self.lo, self.hi))


def lattice_loci(window: Window, offset: Point, rho: Fraction) -> list[Point]:
    """Points of offset + Z^b whose closed rho-ball meets the window."""
    from math import ceil, floor

    ranges = [
        range(ceil(a - rho - o), floor(b + rho - o) + 1) for a, b, o in zip(window.lo, window.hi, offset)
    ]
    pts = [tuple(Fraction(o) + n for o, n in zip(offset, v)) for v in itertools.product(*ranges)]
    return [p for p in pts if window.dist2(p) <= rho * rho]


@dataclass(frozen=True)
class ExitSet:
    descriptor: Descriptor  # stable normal form
    desusp: VirtualRep  # W^-, the negative space at the base point
    net: VirtualRep  # desusp minus the suspension carried by the glued cells
    k: int  # number of jump loci in the window


def exit_set_descriptor(
    window: Window,
    loci: Iterable[Point],
    rho,
    base_excess: int,
    group: str = "S1",
    involution_center: Point | None = None,
) -> ExitSet:
    """Normal form of the exit set: one glued cell per jump locus.

    ``base_excess`` is how many more negative modes the base point has than a
    generic point of the window (0 or 1 in every registered case).
    """
    rho = Fraction(rho)
    if rho <= 0:
        raise RangeError("ball radius must be positive")
    pts = [tuple(Fraction(x) for x in p) for p in loci]
    if any(len(p) != window.dim for p in pts):
        raise StructuralError("locus dimension differs from the window")
    inside = []
    for p in pts:
        if window.dist2(p) > rho * rho:
            continue
        if not window.contains_ball(p, rho):
            raise RangeError(f"ball around {tuple(map(str, p))} crosses the window boundary")
        inside.append(p)
    for p, q in itertools.combinations(inside, 2):
        if sum(((a - b) ** 2 for a, b in zip(p, q)), Fraction(0)) <= 4 * rho * rho:
            raise RangeError("jump-locus balls overlap: the small-shift regime is violated")
    k = len(inside)
    if group == "S1":
        desc: Descriptor = WedgeOverS0(k, C(1)) if k else Sphere()
        return ExitSet(desc, C(k + base_excess), C(base_excess), k)
    if involution_center is None:
        raise RangeError("Pin2 exit sets need the involution centre")
    c = tuple(Fraction(x) for x in involution_center)
    keyset = set(inside)
    fixed = [p for p in inside if all(2 * ci - x == x for ci, x in zip(c, p))]
    for p in inside:
        if tuple(2 * ci - x for ci, x in zip(c, p)) not in keyset:
            raise RangeError("window is not invariant under the involution")
    pairs = (k - len(fixed)) // 2
    if len(fixed) == 1:
        desc = Suspended(PinTorusWedge(pairs), R(1, "Pin2"))
    elif not fixed:
        desc = PinOrbitWedge(pairs) if pairs else Sphere(VirtualRep("Pin2"))
    else:
        raise UnsupportedError("more than one involution-fixed jump locus")
    return ExitSet(desc, H(pairs + base_excess), H(base_excess), k)
