from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import coset_representatives, degree, picard_add as oracle_add, same_coset
from swfcalc.errors import RangeError, StructuralError, UnsupportedError
from swfcalc.seifert import (
    OrbLineBundle,
    SeifertData,
    degree_progression,
    enumerate_torsion_spinc,
    normalize,
    orb_degree,
    orb_euler,
    picard_add,
    picard_neg,
    picard_quotient_order,
    picard_scale,
    printed_orb_euler,
    reducibility_check,
    smooth_base,
    torsion_class,
)


def base_of(alphas, genus=0):
    return SeifertData(genus, tuple((a, 1) for a in alphas))


def test_degree_examples():
    assert orb_degree(smooth_base(1), OrbLineBundle(5)) == 5
    b = SeifertData(0, ((2, 1), (3, 2)))
    assert orb_degree(b, OrbLineBundle(0, (1, 2))) == Fraction(7, 6)
    assert orb_degree(b, OrbLineBundle(0, (0, 0))) == 0


def test_degree_mismatch_is_structural():
    with pytest.raises(StructuralError):
        orb_degree(SeifertData(0, ((2, 1),)), OrbLineBundle(0, ()))


def test_seifert_data_validation():
    with pytest.raises(RangeError):
        SeifertData(0, ((1, 0),))
    with pytest.raises(RangeError):
        SeifertData(0, ((4, 2),))
    with pytest.raises(RangeError):
        SeifertData(0, ((3, 3),))
    with pytest.raises(UnsupportedError):
        SeifertData(1, (), orientable=False)


def test_euler_examples():
    assert orb_euler(smooth_base(1)) == 0
    assert orb_euler(smooth_base(0)) == 2
    assert orb_euler(base_of((2, 3, 6))) == 0
    # the opposite-sign variant disagrees as soon as there are markings
    assert printed_orb_euler(base_of((2, 3, 6))) == 4


def test_quotient_order_examples():
    assert picard_quotient_order(smooth_base(2), OrbLineBundle(5)) == 5
    assert picard_quotient_order(smooth_base(2), OrbLineBundle(0)) is None
    b = base_of((2, 3))
    N = OrbLineBundle(1, (1, 1))
    assert picard_quotient_order(b, N) == len(coset_representatives((2, 3), (1, (1, 1)))) == 11


def test_enumeration_examples():
    classes = enumerate_torsion_spinc(smooth_base(1), OrbLineBundle(3))
    assert [orb_degree(smooth_base(1), c.rep) for c in classes] == [0, 1, 2]
    assert len(enumerate_torsion_spinc(smooth_base(1), OrbLineBundle(1))) == 1
    with pytest.raises(UnsupportedError):
        enumerate_torsion_spinc(smooth_base(1), OrbLineBundle(0))


def test_reducibility_examples():
    r = reducibility_check(smooth_base(1), OrbLineBundle(5), OrbLineBundle(1))
    assert r.all_reducible and r.kernel_free
    assert not reducibility_check(smooth_base(1), OrbLineBundle(4), OrbLineBundle(0)).kernel_free
    # 1 + 7Z misses [0, 1), so every critical point is reducible
    assert reducibility_check(smooth_base(2), OrbLineBundle(7), OrbLineBundle(1)).all_reducible
    assert not reducibility_check(smooth_base(2), OrbLineBundle(7), OrbLineBundle(0)).all_reducible


small_bases = st.lists(st.integers(2, 6), min_size=0, max_size=3)


@settings(max_examples=80, deadline=None)
@given(small_bases, st.data())
def test_degree_additive_under_carrying(alphas, data):
    b = base_of(alphas)
    bundle = st.builds(
        OrbLineBundle, st.integers(-5, 5), st.tuples(*(st.integers(0, a - 1) for a in alphas))
    )
    L1, L2 = data.draw(bundle), data.draw(bundle)
    s = picard_add(b, L1, L2)
    assert orb_degree(b, s) == orb_degree(b, L1) + orb_degree(b, L2)
    assert (s.b, s.beta) == oracle_add(alphas, (L1.b, L1.beta), (L2.b, L2.beta))
    assert picard_add(b, L1, picard_neg(b, L1)) == OrbLineBundle(0, (0,) * len(alphas))
    assert picard_scale(b, L1, 3) == picard_add(b, L1, picard_add(b, L1, L1))


def test_normalize_carries():
    b = base_of((2, 3))
    assert normalize(b, 0, [5, -1]) == OrbLineBundle(1, (1, 2))


@pytest.mark.parametrize("d", [d for d in range(-20, 21) if d])
def test_smooth_order_is_abs_degree(d):
    assert picard_quotient_order(smooth_base(3), OrbLineBundle(d)) == abs(d)


def _all_alpha_lists(bound):
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for lst in frontier:
            lo = lst[-1] if lst else 2
            prod = 1
            for a in lst:
                prod *= a
            for a in range(lo, bound + 1):
                if prod * a <= bound:
                    nxt.append(lst + (a,))
        out += nxt
        frontier = nxt
    return out


def _bundles_with_degree(alphas, bound):
    for beta in itertools.product(*(range(a) for a in alphas)):
        frac = sum(Fraction(s, a) for s, a in zip(beta, alphas))
        for b in range(-bound - 1, bound + 1):
            dg = b + frac
            if 0 < abs(dg) <= bound:
                yield OrbLineBundle(b, beta)


@pytest.mark.parametrize("alphas", [a for a in _all_alpha_lists(12) if a])
def test_enumeration_matches_brute_force(alphas):
    base = base_of(alphas)
    for N in _bundles_with_degree(alphas, 2):
        classes = enumerate_torsion_spinc(base, N)
        reps = {(c.rep.b, c.rep.beta) for c in classes}
        assert reps == coset_representatives(alphas, (N.b, N.beta))
        assert len(classes) == len(reps) == picard_quotient_order(base, N)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(2, 5), max_size=2), st.data())
def test_torsion_class_is_a_coset_invariant(alphas, data):
    base = base_of(alphas)
    beta = st.tuples(*(st.integers(0, a - 1) for a in alphas))
    N = OrbLineBundle(data.draw(st.integers(-3, 3)), data.draw(beta))
    if orb_degree(base, N) == 0:
        return
    E = OrbLineBundle(data.draw(st.integers(-4, 4)), data.draw(beta))
    k = data.draw(st.integers(-5, 5))
    moved = picard_add(base, E, picard_scale(base, N, k))
    assert torsion_class(base, N, E) == torsion_class(base, N, moved)
    assert torsion_class(base, N, E).coords == torsion_class(base, N, moved).coords
    rep = torsion_class(base, N, E).rep
    assert 0 <= orb_degree(base, rep) < abs(orb_degree(base, N))
    assert same_coset(alphas, (N.b, N.beta), (E.b, E.beta), (rep.b, rep.beta))
    assert reducibility_check(base, N, E) == reducibility_check(base, N, moved)


def test_progression_offset():
    assert degree_progression(smooth_base(2), OrbLineBundle(7), OrbLineBundle(-6)) == (1, 7)
    assert degree_progression(smooth_base(2), OrbLineBundle(-7), OrbLineBundle(8)) == (1, 7)
