from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as o
from swfcalc import conley as cy
from swfcalc.errors import RangeError, StructuralError, UnsupportedError
from swfcalc.manifolds import CircleBundle, FlatT2Bundle, HantzscheWendt, Nil, S2xS1
from swfcalc.systems import (
    CObject,
    Morphism,
    SystemObject,
    assemble_swf,
    hom_nonempty,
    homology_colimit,
    normalize,
    subsystem,
    trajectory_pairs,
)


def wedge_tower(direction="ind", n=F(0)):
    k = lambda i: (2 * i + 1) ** 2  # noqa: E731
    if direction == "ind":
        return SystemObject(
            "ind",
            lambda i: CObject(cy.WedgeOverS0(k(i)), 0, n),
            lambda i: cy.attractor_map(cy.WedgeOverS0(k(i)), cy.WedgeOverS0(k(i + 1))),
        )
    comp = lambda i: cy.Complement(k(i), cy.C(2))  # noqa: E731
    return SystemObject("pro", lambda i: CObject(comp(i), 0, n), lambda i: cy.attractor_map(comp(i + 1), comp(i)))


def test_cobject_validation():
    with pytest.raises(RangeError):
        CObject(cy.Sphere(cy.VirtualRep()), 1, F(0))
    assert CObject(cy.Sphere(cy.VirtualRep()), 2, 1).n == F(1)


@settings(max_examples=200)
@given(st.fractions(max_denominator=32), st.fractions(max_denominator=32))
def test_hom_nonempty_iff_integral_difference(a, b):
    s = cy.Sphere(cy.VirtualRep())
    assert hom_nonempty(CObject(s, 0, a), CObject(s, 0, b)) == ((a - b).denominator == 1)


def test_morphism_checks():
    s = cy.Sphere(cy.VirtualRep())
    ident = cy.MapDescriptor(s, s, ())
    Morphism(CObject(s, 0, F(1, 2)), CObject(s, 0, F(-1, 2)), ident)
    with pytest.raises(StructuralError):
        Morphism(CObject(s, 0, F(1, 2)), CObject(s, 0, F(0)), ident)
    with pytest.raises(StructuralError):
        Morphism(CObject(s, 0, 0), CObject(cy.WedgeOverS0(2), 0, 0), ident)
    assert hom_nonempty(CObject(s, 0, None), CObject(s, 0, None))
    assert not hom_nonempty(CObject(s, 0, None), CObject(s, 0, 0))


def test_direction_and_stage_checks():
    with pytest.raises(RangeError):
        SystemObject("sideways", lambda i: None, lambda i: None)
    with pytest.raises(RangeError):
        wedge_tower().obj(0)
    with pytest.raises(RangeError):
        wedge_tower().prefix(0)


@settings(max_examples=100)
@given(st.fractions(max_denominator=16), st.fractions(max_denominator=16))
def test_normalize_composes(a, b):
    base = wedge_tower(n=F(1, 8))
    once = normalize(normalize(base, a), b)
    direct = normalize(base, a + b)
    assert once.agrees_with(direct, 3)
    assert normalize(base, 0).agrees_with(base, 3)
    assert once.obj(2).n == F(1, 8) + a + b


def test_subsystem_identity_and_cofinal():
    sys = wedge_tower()
    assert subsystem(sys, lambda j: j).agrees_with(sys, 4)
    even = subsystem(sys, lambda j: 2 * j)
    assert [x.descriptor.k for x in even.prefix(3)[0]] == [25, 81, 169]
    full = homology_colimit(sys, 2, 6)
    sub = homology_colimit(even, 2, 3)
    assert sub.split_injective and full.split_injective
    assert sub.ranks == full.ranks[1::2]
    # composite map equals the product of the two steps
    comp = even.morphism(1).shadow.on_homology(2)
    assert comp == o.h2_inclusion_matrix(25, 81, list(range(25)))


def test_pro_subsystem():
    sys = wedge_tower("pro")
    odd = subsystem(sys, lambda j: 2 * j - 1)
    rep = homology_colimit(odd, 2, 3)
    assert rep.ranks == (9, 49, 121) and rep.surjective and not rep.split_injective
    m = odd.morphism(1).shadow.on_homology(2)
    assert m == o.h1_restriction_matrix(49, 9, list(range(9)))


def test_subsystem_requires_increasing_indices():
    with pytest.raises(RangeError):
        subsystem(wedge_tower(), lambda j: 3).obj(1)
    with pytest.raises(RangeError):
        subsystem(wedge_tower(), lambda j: 5 - j).obj(1)


def test_colimit_patterns():
    rep = homology_colimit(wedge_tower(), 2, 3)
    assert rep.ranks == (9, 25, 49)
    assert rep.split_injective and not rep.surjective and not rep.stable
    assert rep.pattern == "split injections, ranks 9, 25, 49"
    for mat, (a, b) in zip(rep.maps, ((9, 25), (25, 49))):
        assert o.rank_over([list(r) for r in mat]) == a
        assert all(o.rank_over([list(r) for r in mat], p) == a for p in o.PRIMES)
    pro = homology_colimit(wedge_tower("pro"), 2, 3)
    assert pro.surjective and pro.pattern == "split surjections, ranks 9, 25, 49"
    # corank of each restriction is the number of forgotten circles
    for mat, (big, small) in zip(pro.maps, ((25, 9), (49, 25))):
        assert len(mat[0]) - o.rank_over([list(r) for r in mat]) == big - small


def test_sphere_tower_is_stable():
    for flavor in "AR":
        a = assemble_swf(S2xS1(), "S1", flavor)
        rep = homology_colimit(a.system, 0, 4)
        assert rep.stable and rep.ranks == (1, 1, 1, 1) and rep.pattern == "stable rank 1"


# Independent closed forms: the nil S1 invariants sit at c(1,d,0) - 2 and c(1,d,0).
@pytest.mark.parametrize("d", range(1, 13))
def test_nil_s1_normalization(d):
    c = o.c_closed(1, d, 0)
    a, r = assemble_swf(Nil(d), "S1", "A"), assemble_swf(Nil(d), "S1", "R")
    assert (a.n, r.n) == (c - 2, c)
    assert a.direction == "ind" and r.direction == "pro"
    assert a.family == "⋁^∞ C⁺" and r.family == "(ℂ²)⁺∖⊔^∞S¹"
    assert homology_colimit(a.system, 2, 3).ranks == (9, 25, 49)
    assert homology_colimit(r.system, 2, 3).ranks == (9, 25, 49)


def test_registry_examples():
    assert assemble_swf(Nil(4), "S1", "A").n == F(-13, 8)
    assert assemble_swf(FlatT2Bundle(), "S1", "A").n == F(1, 2)
    assert assemble_swf(FlatT2Bundle(), "S1", "R").n == F(3, 2)
    assert assemble_swf(FlatT2Bundle(spin_lift=1), "Pin2", "A").n == F(1, 4)
    assert assemble_swf(FlatT2Bundle(spin_lift=0), "Pin2", "A").family == "Σ(S(ℍ) ∨_Pin(2) ⋁^∞(Z̃₂×S(ℍ)))"
    assert assemble_swf(FlatT2Bundle(spin_lift=1), "Pin2", "R").family == "ℍ⁺∖∐^∞Pin(2)"
    assert assemble_swf(Nil(4, spin_lift=0), "Pin2", "R").family == "(ℍ²)⁺∖D_∞"
    assert assemble_swf(CircleBundle(2, 7, 3)).n == F(1, 28)
    assert assemble_swf(Nil(3, 1)).n == o.c_closed(1, 3, 1)


@pytest.mark.parametrize("d", [1, 2, 4, 7])
@pytest.mark.parametrize("lift", range(4))
def test_nil_pin_is_half_of_s1_plus_net(d, lift):
    s1 = assemble_swf(Nil(d), "S1", "A").n
    pin = assemble_swf(Nil(d, spin_lift=lift), "Pin2", "A")
    net = 1 if lift == 0 else 0
    assert pin.n == (s1 + net) / 2
    assert pin.family == ("Σ(S(ℍ) ∨_Pin(2) ⋁^∞(Z̃₂×S(ℍ)))" if net else "Σ(∐^∞Pin(2))")


def test_pin_exit_homology_grows():
    sym = assemble_swf(Nil(2, spin_lift=0), "Pin2", "A")
    rep = homology_colimit(sym.system, 4, 3)
    assert rep.split_injective and rep.ranks[0] < rep.ranks[1] < rep.ranks[2]
    free = assemble_swf(FlatT2Bundle(spin_lift=1), "Pin2", "R")
    rep = homology_colimit(free.system, 2, 3)
    assert rep.surjective and rep.ranks[0] < rep.ranks[1]


@pytest.mark.parametrize(
    "spec", [S2xS1(), HantzscheWendt(), FlatT2Bundle(order=3), FlatT2Bundle(spinc=1), CircleBundle(1, 4, 2)]
)
def test_sphere_flavors_identical(spec):
    a, r = assemble_swf(spec, "S1", "A"), assemble_swf(spec, "S1", "R")
    assert a.n == r.n and a.family == r.family == "S⁰"
    assert [x.descriptor for x in a.system.prefix(3)[0]] == [x.descriptor for x in r.system.prefix(3)[0]]


def test_unspecified_normalizations():
    assert assemble_swf(HantzscheWendt()).n is None
    assert assemble_swf(FlatT2Bundle(order=6), "Pin2", "R").n is None


def test_assembly_errors():
    with pytest.raises(UnsupportedError):
        assemble_swf(Nil(-3))
    with pytest.raises(UnsupportedError):
        assemble_swf(CircleBundle(1, 4, 2), "Pin2")
    with pytest.raises(RangeError):
        assemble_swf(Nil(4), "Pin2")
    with pytest.raises(RangeError):
        assemble_swf(Nil(4), "U1")
    with pytest.raises(RangeError):
        assemble_swf(Nil(4), "S1", "B")
    with pytest.raises(UnsupportedError):
        assemble_swf(_general())


def _general():
    from swfcalc.manifolds import parse_spec

    return parse_spec('{"family": "seifert_general", "genus": 0, "markings": [[2, 1], [3, 1], [5, 1]], '
                      '"N": {"b": 1, "beta": [1, 1, 1]}, "E0": {"b": 0, "beta": [0, 0, 0]}, "orientable": true}')


def test_trajectory_pairs():
    flat = trajectory_pairs("flat")
    assert len(flat) == 12
    nonneg = [p for p in flat if p.edim >= 0]
    assert [(p.source, p.target) for p in nonneg] == [((F(1, 4),), (F(3, 4),))]
    assert nonneg[0].gr == 2 and nonneg[0].edim == 0 and nonneg[0].energy_drop == 0
    nil = trajectory_pairs("nil")
    assert len(nil) == 12
    assert all(p.edim < 0 for p in nil if p.energy_drop > 0)
    with pytest.raises(RangeError):
        trajectory_pairs("torus")
