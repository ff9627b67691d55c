"""Ind- and pro-systems of (descriptor, m, n) triples and the assembly pipelines.

Every registry answer is assembled from the lower modules: the Dirac kernel
and net spectral flow come from ``spectral``, the rational normalization from
``grading``, the exit-set normal form and its dual from ``conley``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import conley as cy
from .errors import RangeError, StructuralError, UnsupportedError
from .grading import (
    circle_bundle_index,
    cosine_critical_points,
    expected_dimension,
    n_plus_m,
    relative_grading,
    symmetric_n,
)
from .manifolds import CircleBundle, FlatT2Bundle, HantzscheWendt, ManifoldSpec, Nil, S2xS1, SeifertGeneral
from .seifert import OrbLineBundle, reducibility_check, smooth_base
from .snf import smith_normal_form
from .spectral import (
    DEFAULT_GAP,
    PLPath,
    SpectralGap,
    flat_elevated_interval,
    flat_family,
    kernel_jump,
    m_count,
    nil_block_kernel_locus,
    nil_family,
    spectral_flow,
)

Rat = Fraction

# Small shift of the Dirac family, in family units.  Every gap passed to the
# pipelines must exceed it.
DELTA = Fraction(1, 20)


@dataclass(frozen=True)
class CObject:
    """(A, m, n); n is None when the normalization is not available."""

    descriptor: cy.Descriptor
    m: int = 0
    n: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.m % 2:
            raise RangeError(f"m must be even, got {self.m}")
        if self.n is not None:
            object.__setattr__(self, "n", Fraction(self.n))


def hom_nonempty(a: CObject, b: CObject) -> bool:
    if a.n is None or b.n is None:
        return a.n is b.n
    return (a.n - b.n).denominator == 1


@dataclass(frozen=True)
class Morphism:
    source: CObject
    target: CObject
    shadow: cy.MapDescriptor

    def __post_init__(self) -> None:
        if not hom_nonempty(self.source, self.target):
            raise StructuralError("morphism set is empty: n - n' is not an integer")
        if self.shadow.source != self.source.descriptor or self.shadow.target != self.target.descriptor:
            raise StructuralError("map descriptor does not match the objects")


DIRECTIONS = ("ind", "pro")


@dataclass
class SystemObject:
    """Infinite tower given by rules; ``map_rule(i)`` joins stages i and i+1.

    For ind-systems the map goes i -> i+1, for pro-systems i+1 -> i.
    """

    direction: str
    object_rule: Callable[[int], CObject]
    map_rule: Callable[[int], cy.MapDescriptor]
    start: int = 1
    _objects: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.direction not in DIRECTIONS:
            raise RangeError(f"direction must be 'ind' or 'pro', got {self.direction!r}")

    def obj(self, i: int) -> CObject:
        if i < self.start:
            raise RangeError(f"stage {i} precedes the first stage {self.start}")
        if i not in self._objects:
            self._objects[i] = self.object_rule(i)
        return self._objects[i]

    def morphism(self, i: int) -> Morphism:
        lo, hi = self.obj(i), self.obj(i + 1)
        src, tgt = (lo, hi) if self.direction == "ind" else (hi, lo)
        return Morphism(src, tgt, self.map_rule(i))

    def prefix(self, k: int) -> tuple[list[CObject], list[Morphism]]:
        if k < 1:
            raise RangeError("prefix length must be >= 1")
        idx = range(self.start, self.start + k)
        return [self.obj(i) for i in idx], [self.morphism(i) for i in list(idx)[:-1]]

    def agrees_with(self, other: "SystemObject", k: int) -> bool:
        if self.direction != other.direction:
            return False
        a_obj, a_map = self.prefix(k)
        b_obj, b_map = other.prefix(k)
        return a_obj == b_obj and [m.shadow for m in a_map] == [m.shadow for m in b_map]


def normalize(sys: SystemObject, n_shift) -> SystemObject:
    shift = Fraction(n_shift)

    def rule(i: int) -> CObject:
        o = sys.obj(i)
        return CObject(o.descriptor, o.m, None if o.n is None else o.n + shift)

    return SystemObject(sys.direction, rule, sys.map_rule, sys.start)


def subsystem(sys: SystemObject, indices: Callable[[int], int]) -> SystemObject:
    """Restrict to stages indices(1) < indices(2) < ..., composing connecting maps."""

    def idx(j: int) -> int:
        a, b = indices(j), indices(j + 1)
        if a < sys.start or b <= a:
            raise RangeError(f"indices must be strictly increasing from stage {sys.start}")
        return a

    def map_rule(j: int) -> cy.MapDescriptor:
        a, b = idx(j), indices(j + 1)
        steps = [sys.map_rule(i) for i in range(a, b)]
        if sys.direction == "pro":
            steps.reverse()
        out = steps[0]
        for nxt in steps[1:]:
            out = cy.compose(out, nxt)
        return out

    return SystemObject(sys.direction, lambda j: sys.obj(idx(j)), map_rule, 1)


@dataclass(frozen=True)
class ColimitReport:
    direction: str
    degree: int
    ranks: tuple[int, ...]
    maps: tuple[tuple[tuple[int, ...], ...], ...]
    split_injective: bool
    surjective: bool
    stable: bool
    pattern: str


def _unit_smith(m: list[list[int]], rows: int, cols: int) -> tuple[int, bool]:
    form = smith_normal_form(m, rows, cols)
    return form.rank, all(x == 1 for x in form.diagonal)


def homology_colimit(sys: SystemObject, degree: int, prefix: int) -> ColimitReport:
    """Finite-prefix probe of H_degree of the tower (colimit for ind, limit for pro)."""
    objs, maps = sys.prefix(prefix)
    ranks = tuple(cy.descriptor_homology(o.descriptor).betti(degree) for o in objs)
    mats, inj, surj = [], True, True
    for mo in maps:
        m = mo.shadow.on_homology(degree)
        rows, cols = len(m), (len(m[0]) if m else cy.descriptor_homology(mo.shadow.source).betti(degree))
        rk, unit = _unit_smith(m, rows, cols)
        inj &= rk == cols and unit
        surj &= rk == rows and unit
        mats.append(tuple(tuple(r) for r in m))
    stable = inj and surj
    if stable:
        pattern = f"stable rank {ranks[0]}"
    elif sys.direction == "ind":
        pattern = "split injections, ranks " + ", ".join(map(str, ranks)) if inj else "non-split"
    else:
        pattern = "split surjections, ranks " + ", ".join(map(str, ranks)) if surj else "non-split"
    return ColimitReport(sys.direction, degree, ranks, tuple(mats), inj, surj, stable, pattern)


# ---------------------------------------------------------------- registry pipelines


@dataclass(frozen=True)
class Assembly:
    system: SystemObject
    n: Optional[Fraction]
    family: str  # descriptor family text
    maps: str  # connecting-map family text
    trail: tuple[str, ...]

    @property
    def direction(self) -> str:
        return self.system.direction


def _constant(desc: cy.Descriptor, n: Optional[Fraction], direction: str) -> SystemObject:
    obj = CObject(desc, 0, n)
    return SystemObject(direction, lambda i: obj, lambda i: cy.MapDescriptor(desc, desc, ()))


def _sphere_assembly(group: str, flavor: str, n: Optional[Fraction], trail: list[str]) -> Assembly:
    direction = "ind" if flavor == "A" else "pro"
    desc = cy.Sphere(cy.VirtualRep(group))
    trail.append("only reducible critical points: sphere spectrum")
    return Assembly(_constant(desc, n, direction), n, "S⁰", "identity", tuple(trail))


def _stage_system(
    flavor: str,
    exit_at: Callable[[int], cy.ExitSet],
    ambient: cy.VirtualRep,
    n: Fraction,
) -> SystemObject:
    def desc(i: int) -> cy.Descriptor:
        d = exit_at(i).descriptor
        return d if flavor == "A" else cy.spanier_whitehead_dual(d, ambient)

    def rule(i: int) -> CObject:
        return CObject(desc(i), 0, n)

    def map_rule(i: int) -> cy.MapDescriptor:
        if flavor == "A":
            return cy.attractor_map(desc(i), desc(i + 1))
        return cy.attractor_map(desc(i + 1), desc(i))

    return SystemObject("ind" if flavor == "A" else "pro", rule, map_rule)


def _net_flow(fam, gap: SpectralGap, base: tuple, crit: dict) -> int:
    """Largest spectral flow from the base connection to a critical point of the Morse function."""
    return max(spectral_flow(fam, gap, PLPath((base, p)), DELTA) if p != base else 0 for p in crit)


_LABELS = {
    ("S1", "A"): ("⋁^∞ C⁺", "natural inclusions"),
    ("S1", "R"): ("(ℂ²)⁺∖⊔^∞S¹", "natural inclusions of complements"),
    ("free", "A"): ("Σ(∐^∞Pin(2))", "natural inclusions"),
    ("free", "R"): ("ℍ⁺∖∐^∞Pin(2)", "natural inclusions of complements"),
    ("fixed", "A"): ("Σ(S(ℍ) ∨_Pin(2) ⋁^∞(Z̃₂×S(ℍ)))", "natural inclusions"),
    ("fixed", "R"): ("(ℍ²)⁺∖D_∞", "natural inclusions of complements"),
}


@dataclass(frozen=True)
class _Linearized:
    """Data of a linearized flow: Dirac family, Morse data and jump-locus geometry."""

    fam: object
    base: tuple
    crit: dict
    offset: tuple  # jump loci are offset + Z^b
    rho: Fraction
    pad: Fraction  # window overhang around a locus-centred coordinate


def _nil_data() -> _Linearized:
    return _Linearized(
        nil_family(),
        (Fraction(0), Fraction(0)),
        cosine_critical_points(2, 1),
        (Fraction(0), Fraction(0)),
        nil_block_kernel_locus(DELTA),
        Fraction(1, 4),
    )


def _flat_data() -> _Linearized:
    centre, radius = flat_elevated_interval(DELTA)
    return _Linearized(
        flat_family(), (Fraction(0),), cosine_critical_points(1, 2), (centre,), radius, Fraction(1, 2)
    )


def _s1_pipeline(lin: _Linearized, gap: SpectralGap, flavor: str, base_n: Fraction, trail: list[str]):
    """Return (system, n) for the S1 invariant; base_n is n + m at the base connection."""
    ker = kernel_jump(lin.fam, gap, lin.base, DELTA)
    excess = _net_flow(lin.fam, gap, lin.base, lin.crit)
    trail.append(f"kernel jump at the base connection: {ker}")
    trail.append(f"net spectral flow to the Morse critical points: {excess}")

    def exit_at(m: int) -> cy.ExitSet:
        window = cy.Window(
            tuple(c - m - lin.pad for c in lin.offset), tuple(c + m + lin.pad for c in lin.offset)
        )
        loci = cy.lattice_loci(window, lin.offset, lin.rho)
        return cy.exit_set_descriptor(window, loci, lin.rho, excess, "S1")

    net = exit_at(1).net.c
    n = base_n + net if flavor == "A" else base_n + ker + net
    trail.append(f"desuspension by C^{net} adds {net} to n")
    if flavor == "R":
        trail.append(f"repeller side: m(delta_r + delta) = m(delta_r) + {ker}; dual taken in C^2")
    return _stage_system(flavor, exit_at, cy.C(2), n), n


def _pin_pipeline(
    lin: _Linearized, gap: SpectralGap, flavor: str, s1_n: Fraction, centre: tuple, trail: list[str]
):
    centre = tuple(Fraction(x) for x in centre)
    net = _net_flow(lin.fam, gap, centre, lin.crit)
    trail.append(f"net spectral flow from the spin connection: {net}")

    def exit_at(m: int) -> cy.ExitSet:
        half = [m + lin.pad if (c - o).denominator == 1 else Fraction(m) for c, o in zip(centre, lin.offset)]
        window = cy.Window(tuple(c - h for c, h in zip(centre, half)), tuple(c + h for c, h in zip(centre, half)))
        loci = cy.lattice_loci(window, lin.offset, lin.rho)
        return cy.exit_set_descriptor(window, loci, lin.rho, net, "Pin2", centre)

    first = exit_at(1).descriptor
    fixed = isinstance(first, cy.Suspended)
    if fixed != (net == 1):
        raise StructuralError("orbit structure of the jump loci disagrees with the spectral flow")
    kind = "fixed" if fixed else "free"
    ambient = cy.H(2) if fixed else cy.H(1)
    n = (s1_n + net) / 2
    trail.append(f"Pin(2) normalization: (S1 index {s1_n} + {net}) / 2")
    return _stage_system(flavor, exit_at, ambient, n), n, kind


_NIL_CENTRES = {
    0: (0, 0),
    1: (Fraction(1, 2), 0),
    2: (0, Fraction(1, 2)),
    3: (Fraction(1, 2), Fraction(1, 2)),
}


def _flat_centres() -> dict[int, tuple]:
    centre, radius = flat_elevated_interval(DELTA)
    # lift 0 sits at a jump-locus centre, lift 1 halfway between two of them
    return {0: (centre,), 1: (centre + Fraction(1, 2),)}


def _circle_bundle(g: int, d: int, q: int, group: str, flavor: str, trail: list[str]) -> Assembly:
    red = reducibility_check(smooth_base(g), OrbLineBundle(d), OrbLineBundle(q))
    if not (red.all_reducible and red.kernel_free):
        raise UnsupportedError("hypotheses of Theorem Morse-Bott reducible not met")
    trail.append("reducibility check passed: all critical points reducible, Dirac kernel free")
    if group == "Pin2":
        raise UnsupportedError("Pin(2) invariants of circle bundles are not in the registry")
    poly = circle_bundle_index(g, d, q)
    if not poly.is_r_free:
        raise StructuralError("r-terms failed to cancel")
    n = poly.constant
    trail.append(f"eta/2 + p1/24 + eta_sign/8 is r-free with constant term c({g},{d},{q}) = {n}")
    return _sphere_assembly(group, flavor, n, trail)


def assemble_swf(
    spec: ManifoldSpec, group: str = "S1", flavor: str = "A", gap: SpectralGap | None = None
) -> Assembly:
    if group not in cy.GROUPS:
        raise RangeError(f"group must be S1 or Pin2, got {group!r}")
    if flavor not in ("A", "R"):
        raise RangeError(f"flavor must be A or R, got {flavor!r}")
    gap = gap or SpectralGap(DEFAULT_GAP)
    trail: list[str] = []

    if isinstance(spec, S2xS1):
        n = symmetric_n(0).value
        trail.append("orientation-reversing symmetry: n = -dim ker / 2 = 0")
        return _sphere_assembly(group, flavor, n if group == "S1" else n / 2, trail)

    if isinstance(spec, CircleBundle):
        return _circle_bundle(spec.g, spec.d, spec.q, group, flavor, trail)

    if isinstance(spec, Nil):
        if spec.d < 0:
            raise UnsupportedError("nil manifolds with d < 0 are not in the registry")
        if spec.q != 0:
            trail.append("q != 0: circle bundle over the torus")
            return _circle_bundle(1, spec.d, spec.q, group, flavor, trail)
        lin = _nil_data()
        ker = kernel_jump(lin.fam, gap, lin.base, DELTA)
        excess = _net_flow(lin.fam, gap, lin.base, lin.crit)
        # n_plus_m evaluates n + m(delta_r) + 1 in the kernel case
        base_n = n_plus_m(1, spec.d, 0, ker) - excess
        trail.append(f"n + m(delta_r) = c(1,{spec.d},0) - {ker} - 1 = {base_n}")
        sys, n = _s1_pipeline(lin, gap, flavor, base_n, trail)
        if group == "S1":
            fam, maps = _LABELS[("S1", flavor)]
            return Assembly(sys, n, fam, maps, tuple(trail))
        if spec.spin_lift is None:
            raise RangeError("Pin(2) invariants need a spin_lift (0..3)")
        sys, n, kind = _pin_pipeline(lin, gap, flavor, n, _NIL_CENTRES[spec.spin_lift], trail)
        fam, maps = _LABELS[(kind, flavor)]
        return Assembly(sys, n, fam, maps, tuple(trail))

    if isinstance(spec, FlatT2Bundle):
        if spec.order != 2:
            trail.append(f"order-{spec.order} monodromy: eta terms not evaluated")
            return _sphere_assembly(group, flavor, None, trail)
        if spec.spinc != 0:
            n = symmetric_n(0).value
            trail.append("no harmonic spinor; orientation-reversing symmetry gives n = 0")
            return _sphere_assembly(group, flavor, n if group == "S1" else n / 2, trail)
        lin = _flat_data()
        ker = kernel_jump(lin.fam, gap, lin.base, DELTA)
        n0 = symmetric_n(ker).value
        m_minus = m_count(lin.fam, gap, lin.base, -DELTA)
        base_n = n0 + m_minus
        trail.append(f"orientation-reversing symmetry: n = -{ker}/2; m(-delta) = {m_minus}")
        sys, n = _s1_pipeline(lin, gap, flavor, base_n, trail)
        if group == "S1":
            fam, maps = _LABELS[("S1", flavor)]
            return Assembly(sys, n, fam, maps, tuple(trail))
        if spec.spin_lift is None:
            raise RangeError("Pin(2) invariants need a spin_lift (0 or 1)")
        sys, n, kind = _pin_pipeline(lin, gap, flavor, n, _flat_centres()[spec.spin_lift], trail)
        fam, maps = _LABELS[(kind, flavor)]
        return Assembly(sys, n, fam, maps, tuple(trail))

    if isinstance(spec, HantzscheWendt):
        trail.append("rational homology sphere: single reducible critical point; eta terms not evaluated")
        return _sphere_assembly(group, flavor, None, trail)

    if isinstance(spec, SeifertGeneral):
        raise UnsupportedError("general Seifert data supports reducibility and grading queries only")
    raise UnsupportedError(f"unknown manifold spec {spec!r}")


# ---------------------------------------------------------------- trajectory pairs


@dataclass(frozen=True)
class TrajectoryPair:
    source: tuple
    target: tuple
    gr: int
    edim: int
    energy_drop: Fraction  # f(source) - f(target); flow lines need a positive drop


def _cosine_value(p: tuple, frequency: int) -> Fraction:
    # -sum cos(2 pi frequency theta_i) at points of the half-period grid
    return -sum(Fraction((-1) ** int(2 * frequency * x)) for x in p)


def trajectory_pairs(kind: str, gap: SpectralGap | None = None) -> list[TrajectoryPair]:
    """Gradings and expected dimensions for ordered pairs of reducible critical points."""
    gap = gap or SpectralGap(DEFAULT_GAP)
    if kind == "nil":
        lin, freq = _nil_data(), 1
    elif kind == "flat":
        lin, freq = _flat_data(), 2
    else:
        raise RangeError(f"unknown family {kind!r}")
    out = []
    for a in lin.crit:
        for b in lin.crit:
            if a == b:
                continue
            sf = spectral_flow(lin.fam, gap, PLPath((b, a)), DELTA)
            gr = relative_grading(a, b, lin.crit, sf)
            out.append(
                TrajectoryPair(a, b, gr, expected_dimension(gr, 0, 0), _cosine_value(a, freq) - _cosine_value(b, freq))
            )
    return out
