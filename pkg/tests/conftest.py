import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from taylorres.core import GeneratorSet, divides
from taylorres.lattice import LcmLattice

FIXTURES = Path(__file__).parent / "fixtures"

NONBOOLEAN = ("xyzw", ["x^2 y z", "x y^2 w", "x^2 z w", "x y^2 z"])
ZIGZAG = ("xyzuv", ["x y", "x z", "y u", "u v"])
FIVECHAIN = ("xyzw", ["x^2", "x y", "y z", "z w", "w^2"])


def gens_of(spec):
    return GeneratorSet.from_monomials(*spec).checked()


@pytest.fixture
def nonboolean():
    return LcmLattice(gens_of(NONBOOLEAN))


@pytest.fixture
def zigzag():
    return LcmLattice(gens_of(ZIGZAG))


@pytest.fixture
def fivechain():
    return LcmLattice(gens_of(FIVECHAIN))


@pytest.fixture(params=["nonboolean", "zigzag", "fivechain"])
def fixture_lattice(request):
    return LcmLattice(gens_of({"nonboolean": NONBOOLEAN, "zigzag": ZIGZAG, "fivechain": FIVECHAIN}[request.param]))


def mask(*members):
    """Bitmask from 1-based generator indices."""
    out = 0
    for i in members:
        out |= 1 << (i - 1)
    return out


def random_minimal_gens(rng: random.Random, max_m=6, max_r=5, max_exp=3) -> GeneratorSet:
    while True:
        r = rng.randint(1, max_r)
        m = rng.randint(1, max_m)
        found = []
        for _ in range(200):
            if len(found) == m:
                break
            g = tuple(rng.randint(0, max_exp) for _ in range(r))
            if any(g) and not any(divides(g, h) or divides(h, g) for h in found):
                found.append(g)
        if all(any(g[k] for g in found) for k in range(r)):
            return GeneratorSet.from_exponents(found).checked()


@st.composite
def minimal_gens(draw, max_m=5, max_r=4, max_exp=3):
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    return random_minimal_gens(rng, max_m, max_r, max_exp)


# -- brute-force oracles (deliberately independent of the library) ----------------


def brute_lcm(gens, sub):
    r = len(gens[0])
    return tuple(max([gens[i][k] for i in sub], default=0) for k in range(r))


def brute_lattice(gens):
    m = len(gens)
    return {brute_lcm(gens, sub) for k in range(m + 1) for sub in itertools.combinations(range(m), k)}


def brute_fiber(gens, q):
    m = len(gens)
    out = []
    for k in range(m + 1):
        for sub in itertools.combinations(range(m), k):
            if brute_lcm(gens, sub) == q:
                out.append(tuple(i + 1 for i in sub))
    return sorted(out, key=lambda s: sum(1 << (i - 1) for i in s))


def fraction_rank(rows):
    """Plain Gauss-Jordan rank over Q with Fractions."""
    a = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def brute_reduced_homology_of_chains(elements, less):
    """Reduced Betti numbers (over Q) of the order complex, straight from chains."""
    n = len(elements)
    chains = [()]
    frontier = [(i,) for i in range(n)]
    while frontier:
        chains.extend(frontier)
        frontier = [c + (j,) for c in frontier for j in range(n) if less(elements[c[-1]], elements[j])]
    by_dim = {}
    for c in chains:
        by_dim.setdefault(len(c) - 1, []).append(c)
    top = max(by_dim)

    def bd_rank(d):
        if d not in by_dim or d - 1 not in by_dim:
            return 0
        rows = {c: i for i, c in enumerate(by_dim[d - 1])}
        mat = [[0] * len(by_dim[d]) for _ in rows]
        for j, c in enumerate(by_dim[d]):
            for i in range(len(c)):
                mat[rows[c[:i] + c[i + 1 :]]][j] = (-1) ** i
        return fraction_rank(mat)

    return {d: len(by_dim[d]) - bd_rank(d) - bd_rank(d + 1) for d in range(-1, top + 1)}


# -- acceptance report ----------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def report(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
