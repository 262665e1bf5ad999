import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURES, brute_lattice, brute_reduced_homology_of_chains, fraction_rank, minimal_gens, random_minimal_gens
from taylorres.acyclicity import (
    DepthOracle,
    avatar_comparison,
    check,
    fast_coatomic_bound,
    generic_linear_reduction,
    sufficient_squarefree_test,
)
from taylorres.core import GeneratorSet, LinearRealization, divides
from taylorres.errors import DomainError, IncompleteOracleError, RealizationError
from taylorres.io import read_generators
from taylorres.lattice import LcmLattice


def _lattice(name):
    parsed = read_generators(FIXTURES / name)
    return LcmLattice(parsed.gens), parsed.realization


def _random_realization(rng, r, n):
    while True:
        rows = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(r)]
        try:
            return LinearRealization(tuple(rows))
        except RealizationError:
            continue


def _brute_flats(rows):
    r = len(rows)
    rank = lambda S: fraction_rank([rows[i] for i in S]) if S else 0  # noqa: E731
    out = []
    for m in range(1, 1 << r):
        S = [i for i in range(r) if m >> i & 1]
        rk = rank(S)
        if all(rank(S + [j]) > rk for j in range(r) if j not in S):
            out.append((frozenset(S), rk))
    return out


def _brute_verdict(gens, rows):
    """The criterion evaluated from scratch: chains of divisibility, plain Fraction ranks."""
    elems = [e for e in brute_lattice(gens.gens) if any(e)]
    for G, depth in _brute_flats(rows):
        proj = lambda e: tuple(x if i in G else 0 for i, x in enumerate(e))  # noqa: E731
        for P in {proj(e) for e in elems}:
            if not any(P):
                continue
            below = [e for e in elems if proj(e) != P and divides(proj(e), P)]
            dims = brute_reduced_homology_of_chains(below, lambda a, b: a != b and divides(a, b))
            if any(d and p >= depth - 1 for p, d in dims.items()):
                return False
    return True


def test_monomial_mode_always_passes(fixture_lattice):
    for fp in (True, False):
        cert = check(fixture_lattice, fast_paths=fp)
        assert cert.verdict and cert.witness is None


@settings(max_examples=30, deadline=None)
@given(minimal_gens())
def test_monomial_mode_random(gens):
    lat = LcmLattice(gens)
    assert check(lat).verdict
    assert check(lat, fast_paths=False).verdict


def test_dependent_fixture_fails():
    lat, rl = _lattice("dependent.txt")
    oracle = DepthOracle("linear", rl)
    for fp in (True, False):
        cert = check(lat, oracle, fast_paths=fp)
        assert not cert.verdict
        assert cert.witness.as_dict() == {"G": [0, 1, 2], "P": [1, 1, 1], "p": 1, "dim": 1}
    assert _brute_verdict(lat.gens, rl.matrix) is False


def test_generic_forms_passes_all_routes():
    lat, rl = _lattice("generic_forms.txt")
    oracle = DepthOracle("linear", rl)
    fast = check(lat, oracle)
    assert fast.verdict and fast.fast_path_hits["squarefree"] == 1
    slow = check(lat, oracle, fast_paths=False)
    assert slow.verdict and slow.checked_pairs > 0
    assert sufficient_squarefree_test(lat.gens, rl) == "pass"
    ok, b = avatar_comparison(lat, rl.n)
    assert ok and b == [1, 3, 2]
    assert _brute_verdict(lat.gens, rl.matrix)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fast_paths_do_not_change_verdict(seed):
    rng = random.Random(seed)
    gens = random_minimal_gens(rng, max_m=4, max_r=4, max_exp=2)
    rl = _random_realization(rng, gens.r, rng.randint(2, 3))
    lat = LcmLattice(gens)
    oracle = DepthOracle("linear", rl)
    fast = check(lat, oracle)
    slow = check(lat, oracle, fast_paths=False)
    assert fast.verdict == slow.verdict == _brute_verdict(gens, rl.matrix)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_generic_reduction_matches_full_check(seed):
    rng = random.Random(seed)
    gens = random_minimal_gens(rng, max_m=4, max_r=4, max_exp=2)
    n = min(gens.r, rng.randint(2, 3))
    rl = _random_realization(rng, gens.r, n)
    lat = LcmLattice(gens)
    red = generic_linear_reduction(lat, rl)
    full = check(lat, DepthOracle("linear", rl), fast_paths=False)
    if rl.is_generic():
        assert red.verdict == full.verdict
    else:
        assert red.verdict is None


def test_coatomic_bound():
    assert fast_coatomic_bound(2, (1, 1, 0)) == "skip"
    assert fast_coatomic_bound(1, (1, 1, 0)) == "unknown"


def test_table_mode():
    lat, rl = _lattice("dependent.txt")
    full = frozenset({0, 1, 2})
    flats = {frozenset(): 0, frozenset({0}): 1, frozenset({1}): 1, frozenset({2}): 1, full: 2}
    cert = check(lat, DepthOracle("table", table=flats))
    assert not cert.verdict and cert.witness.G == full
    # depth 3 on the whole set is what an independent triple would give
    cert = check(lat, DepthOracle("table", table={**flats, full: 3}))
    assert cert.verdict
    with pytest.raises(IncompleteOracleError):
        check(lat, DepthOracle("table", table={frozenset({0}): 1}))
    with pytest.raises(IncompleteOracleError):
        DepthOracle("table", table={frozenset({0}): 0})
    with pytest.raises(IncompleteOracleError):
        DepthOracle("table", table={full: 2}).depth({0})


def test_table_mode_reproduces_monomial(fivechain):
    import itertools

    r = fivechain.gens.r
    table = {frozenset(c): len(c) for k in range(r + 1) for c in itertools.combinations(range(r), k)}
    a = check(fivechain, DepthOracle("table", table=table), fast_paths=False)
    b = check(fivechain, fast_paths=False)
    assert a.verdict == b.verdict and a.checked_pairs == b.checked_pairs


def test_oracle_errors():
    with pytest.raises(DomainError):
        DepthOracle("nope")
    with pytest.raises(RealizationError):
        DepthOracle("linear")
    with pytest.raises(IncompleteOracleError):
        DepthOracle("table")


def test_certificate_dict():
    g = GeneratorSet.from_monomials("xy", ["x", "y"])
    d = check(LcmLattice(g)).as_dict()
    assert d["verdict"] == "pass" and d["witness"] is None and d["mode"] == "monomial"
    assert set(d["fast_path_hits"]) == {"coatomic", "generic", "squarefree"}
