import random

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import brute_fiber, brute_lattice, fraction_rank, minimal_gens
from taylorres.core import GeneratorSet, LinearRealization, divides, join, strictly_divides
from taylorres.errors import DomainError, IncompleteOracleError, LatticeError, RealizationError
from taylorres.lattice import LcmLattice, FinitePoset, is_flat, linear_flats, project, saturated_sets


def test_zigzag_size(zigzag):
    assert len(zigzag) == len(brute_lattice(zigzag.gens.gens)) == 12


def test_small_lattices():
    lat = LcmLattice(GeneratorSet.from_monomials("x", ["x"]))
    assert lat.elements == ((0,), (1,))
    lat = LcmLattice(GeneratorSet.from_monomials("xy", ["x", "y"]))
    assert set(lat.elements) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    assert lat.top == 3 and lat.bottom == 0


def test_zigzag_fibers(zigzag):
    alpha = zigzag.gens.alphabet
    q = alpha.parse_monomial("x y z u")
    assert zigzag.fiber(q).members() == [(2, 3), (1, 2, 3)]
    q = alpha.parse_monomial("x y z u v")
    assert zigzag.fiber(q).members() == [(1, 2, 4), (2, 3, 4), (1, 2, 3, 4)]
    # the third multi-element fiber: lcm(xy, uv) = xyuv
    q = alpha.parse_monomial("x y u v")
    assert zigzag.fiber(q).members() == [(1, 4), (1, 3, 4)]
    assert zigzag.fiber(0).sets == (0,)


def test_fibers_match_bruteforce(fixture_lattice):
    lat = fixture_lattice
    for q, e in enumerate(lat.elements):
        assert lat.fiber(q).members() == brute_fiber(lat.gens.gens, e)


@settings(max_examples=40, deadline=None)
@given(minimal_gens())
def test_lattice_properties(gens):
    lat = LcmLattice(gens)
    assert set(lat.elements) == brute_lattice(gens.gens)
    assert sorted(lat.elements[a] for a in lat.atoms) == sorted(gens.gens)
    minimal_nonbottom = [i for i in range(1, len(lat)) if not any(lat.leq[j, i] for j in range(1, len(lat)) if j != i)]
    assert sorted(minimal_nonbottom) == sorted(lat.atoms)
    assert sum(len(f) for f in lat.fibers().values()) == 2**gens.m
    for e in lat.elements:
        for g in gens.gens:
            assert join(e, g) in lat.index
    ids = lat.subset_ids()
    rng = random.Random(0)
    for _ in range(20):
        s = rng.randrange(2**gens.m)
        t = s | rng.randrange(2**gens.m)
        assert divides(lat.elements[ids[s]], lat.elements[ids[t]])


def test_lower_interval(zigzag):
    alpha = zigzag.gens.alphabet
    atom = zigzag.atoms[0]
    assert len(zigzag.lower_interval(atom)) == 0
    q = alpha.parse_monomial("x y z u")
    got = {zigzag.elements[i] for i in zigzag.lower_interval(q).items}
    expect = {e for e in zigzag.elements if any(e) and strictly_divides(e, q)}
    assert got == expect
    assert {alpha.monomial(e) for e in got} == {"x*y", "x*z", "y*u", "x*y*z", "x*y*u"}
    lat = LcmLattice(GeneratorSet.from_monomials("xy", ["x", "y"]))
    iv = lat.lower_interval(3)
    assert len(iv) == 2 and not iv.strict().any()


def test_project():
    assert project((1, 2, 3), {0, 1, 2}) == (1, 2, 3)
    assert project((1, 2, 3), set()) == (0, 0, 0)
    assert project((1, 1, 1, 1, 1), {0, 1, 2}) == (1, 1, 1, 0, 0)


@settings(max_examples=30, deadline=None)
@given(minimal_gens())
def test_project_monotone_idempotent(gens):
    lat = LcmLattice(gens)
    G = {i for i in range(gens.r) if i % 2 == 0}
    for a in lat.elements:
        pa = project(a, G)
        assert project(pa, G) == pa
        for b in lat.elements:
            if divides(a, b):
                assert divides(pa, project(b, G))


def test_strict_sublevel(zigzag):
    full = range(zigzag.gens.r)
    top = zigzag.elements[zigzag.top]
    assert len(zigzag.strict_sublevel(full, top)) == 10
    for q in range(1, len(zigzag)):
        assert zigzag.strict_sublevel(full, zigzag.elements[q]).items == zigzag.lower_interval(q).items
    atom = zigzag.elements[zigzag.atoms[0]]
    G = {0, 1}
    P = project(atom, G)
    assert len(zigzag.strict_sublevel(G, P)) == len([e for e in zigzag.elements if any(e) and strictly_divides(project(e, G), P)])
    with pytest.raises(LatticeError):
        zigzag.strict_sublevel(full, (5, 0, 0, 0, 0))


def test_saturated_sets():
    g = GeneratorSet.from_monomials("xyz", ["x", "y", "z"])
    assert len(saturated_sets(g, "monomial")) == 8
    rl = LinearRealization(((1, 0), (0, 1), (1, 1)))
    flats = saturated_sets(g, "linear", realization=rl)
    assert flats == [frozenset(), frozenset({0}), frozenset({1}), frozenset({2}), frozenset({0, 1, 2})]
    with pytest.raises(RealizationError):
        saturated_sets(g, "linear")
    with pytest.raises(IncompleteOracleError):
        saturated_sets(g, "table")
    with pytest.raises(DomainError):
        saturated_sets(g, "other")


def _brute_flats(rows):
    r = len(rows)
    out = set()
    for m in range(1 << r):
        S = [i for i in range(r) if m >> i & 1]
        rk = fraction_rank([rows[i] for i in S]) if S else 0
        if all(fraction_rank([rows[i] for i in S + [j]]) > rk for j in range(r) if j not in S):
            out.add(frozenset(S))
    return out


def test_flats_match_bruteforce():
    rows = ((1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 2, 3))
    rl = LinearRealization(rows)
    flats = linear_flats(rl)
    assert set(flats) == _brute_flats(rows)
    assert all(is_flat(rl, f) for f in flats)


def test_generic_flats():
    rl = LinearRealization(((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)))
    flats = linear_flats(rl)
    # every set of at most 2 rows is a flat, the only rank-3 flat is everything
    assert sum(1 for f in flats if len(f) <= 2) == 1 + 4 + 6
    assert [f for f in flats if rl.rank(sorted(f)) == 3] == [frozenset(range(4))]


def test_max_m_cap():
    g = GeneratorSet.from_exponents([tuple(int(i == j) for j in range(5)) for i in range(5)])
    with pytest.raises(DomainError):
        LcmLattice(g, max_m=4)


def test_finite_poset():
    p = FinitePoset.from_covers("abcd", [(0, 1), (1, 2), (0, 3)])
    assert p.is_valid()
    assert p.leq[0, 2]
    assert p.minimal() == [0] and sorted(p.maximal()) == [2, 3]
    assert sorted(p.hasse()) == [(0, 1), (0, 3), (1, 2)]
    bad = FinitePoset("ab", np.array([[True, True], [True, True]]))
    assert not bad.is_valid()


def test_lattice_meet(zigzag):
    a, b = zigzag.atoms[0], zigzag.atoms[1]
    assert zigzag.meet(a, b) == 0
    assert zigzag.join(a, b) == zigzag.index[(1, 1, 1, 0, 0)]
