"""End-to-end acceptance criteria; each test records one PASS/FAIL line."""

import json
import random
import time

from conftest import (
    NONBOOLEAN,
    ZIGZAG,
    FIVECHAIN,
    FIXTURES,
    gens_of,
    mask,
    random_minimal_gens,
    report,
)
from test_homology import preimage_poset, random_decreasing_subset
from taylorres import cli
from taylorres.acyclicity import DepthOracle, avatar_comparison, check
from taylorres.fields import QQ
from taylorres.homology import atomic_complex, chain_complex, coatomic_complex, homology_dims, nonzero_dims, reduced_poset_homology
from taylorres.io import read_generators
from taylorres.lattice import LcmLattice, saturated_sets
from taylorres.minres import _simplex_boundary, minimal_resolution, verify_resolution
from taylorres.scarf import minimal_elements, scarf_report
from taylorres.taylor import betti_numbers, evaluation_identity_sides
from taylorres.tor import GradedLattice, atomic_dga, leibniz_check, tor_algebra

FIXTURE_FILES = ["nonboolean.txt", "zigzag.txt", "fivechain.txt", "generic_forms.txt", "koszul2.txt", "dependent.txt"]


def _cli(argv):
    ns = cli.build_parser().parse_args(argv)
    payload, code, raw = cli.compute(cli.config_from_args(ns))
    return payload, code, raw


def _sets(vec):
    return {tuple(i + 1 for i in range(s.bit_length()) if s >> i & 1): int(c) for s, c in vec.items()}


def test_criterion_1_zigzag():
    t0 = time.perf_counter()
    betti, _, _ = _cli(["betti", str(FIXTURES / "zigzag.txt")])
    res = minimal_resolution(LcmLattice(gens_of(ZIGZAG)))
    elapsed = time.perf_counter() - t0
    m2 = sorted(next(iter(_sets(v))) for v in res.generators[2])
    d = {k: int(v) for k, v in _simplex_boundary(res.generators[3][0], QQ).items()}
    expect = {mask(1, 2): 1, mask(2, 4): 1, mask(1, 3): -1, mask(3, 4): -1}
    ok = (
        betti["betti"] == [1, 4, 4, 1]
        and m2 == [(1, 2), (1, 3), (2, 4), (3, 4)]
        and all(len(v) == 1 for v in res.generators[2])
        and (d == expect or d == {k: -v for k, v in expect.items()})
        and verify_resolution(res).ok
        and elapsed < 1.0
    )
    assert report(1, "{xy, xz, yu, uv}: Betti, M_2 basis and d(M_3)", ok, f"{elapsed:.3f}s")


def test_criterion_2_fivechain():
    t0 = time.perf_counter()
    betti, _, _ = _cli(["betti", str(FIXTURES / "fivechain.txt")])
    lat = LcmLattice(gens_of(FIVECHAIN))
    res = minimal_resolution(lat)
    elapsed = time.perf_counter() - t0
    a = lat.gens.alphabet
    expected_fibers = {
        "x^2 y z": [(1, 3), (1, 2, 3)],
        "x y z w": [(2, 4), (2, 3, 4)],
        "y z w^2": [(3, 5), (3, 4, 5)],
        "x^2 y z w": [(1, 2, 4), (1, 3, 4), (1, 2, 3, 4)],
        "x y z w^2": [(2, 3, 5), (2, 4, 5), (2, 3, 4, 5)],
        "x^2 y z w^2": [(1, 3, 5), (1, 2, 3, 5), (1, 2, 4, 5), (1, 3, 4, 5), (1, 2, 3, 4, 5)],
    }
    big = {f.element: sorted(f.members()) for f in lat.fibers().values() if len(f) > 1}
    fibers_ok = big == {a.parse_monomial(k): sorted(v) for k, v in expected_fibers.items()}
    pairs = {next(iter(_sets(v))) for v in res.generators[2]}
    all_pairs = {(i, j) for i in range(1, 6) for j in range(i + 1, 6)}
    ok = (
        betti["betti"] == [1, 5, 7, 4, 1]
        and fibers_ok
        and pairs == all_pairs - {(1, 3), (2, 4), (3, 5)}
        and elapsed < 1.0
    )
    assert report(2, "{x^2, xy, yz, zw, w^2}: Betti, fibers and M_2", ok, f"{elapsed:.3f}s")


def test_criterion_3_nonboolean():
    lat = LcmLattice(gens_of(NONBOOLEAN))
    rep = scarf_report(lat)
    fib = lat.fiber(lat.gens.alphabet.parse_monomial("x^2 y^2 z w"))
    ok = rep.coincides and len(minimal_elements(fib)) == 3 and rep.sizes == rep.betti
    assert report(3, "{x^2yz, xy^2w, x^2zw, xy^2z}: Scarf coincidence", ok, f"sizes {rep.sizes}")


def test_criterion_4_monomial_universality():
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    failures = 0
    for _ in range(200):
        gens = random_minimal_gens(rng, max_m=6, max_r=5)
        lat = LcmLattice(gens)
        b = {route: betti_numbers(lat, QQ, route) for route in ("lattice", "fibers", "evaluation")}
        res = minimal_resolution(lat)
        v = verify_resolution(res, seed=rng.randrange(2**32))
        if not (check(lat).verdict and v.ok and len({tuple(x) for x in b.values()}) == 1):
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 60
    assert report(4, "monomial universality on 200 random inputs", ok, f"{failures} failures, {elapsed:.1f}s")


def test_criterion_5_homotopy_properties():
    bad = 0
    for spec in (NONBOOLEAN, ZIGZAG, FIVECHAIN):
        lat = LcmLattice(gens_of(spec))
        for q in range(1, len(lat)):
            iv = lat.lower_interval(q)
            flag = nonzero_dims(reduced_poset_homology(iv))
            atom = nonzero_dims(homology_dims(chain_complex(atomic_complex(iv))))
            coat = nonzero_dims(homology_dims(chain_complex(coatomic_complex(iv))))
            bad += not (flag == atom == coat)
    rng = random.Random(55)
    tried = 0
    while tried < 50:
        lat = LcmLattice(random_minimal_gens(rng, max_m=5, max_r=4))
        if len(lat) < 2:
            continue
        F = random_decreasing_subset(lat, rng)
        lhs = nonzero_dims(reduced_poset_homology(preimage_poset(lat, F)))
        bad += lhs != nonzero_dims(reduced_poset_homology(lat.poset(F)))
        tried += 1
    assert report(5, "flag/atomic/coatomic agreement and decreasing-subset preimages", bad == 0, f"{bad} mismatches")


def test_criterion_6_evaluation_identity():
    bad = 0
    total = 0
    for spec in (NONBOOLEAN, ZIGZAG, FIVECHAIN):
        lat = LcmLattice(gens_of(spec))
        for G in saturated_sets(lat.gens):
            lhs, rhs = evaluation_identity_sides(lat, G)
            bad += lhs != rhs
            total += 1
    assert report(6, "evaluation identity for every saturated set", bad == 0, f"{total} sets")


def test_criterion_7_generic_forms():
    parsed = read_generators(FIXTURES / "generic_forms.txt")
    lat = LcmLattice(parsed.gens)
    rl = parsed.realization
    oracle = DepthOracle("linear", rl)
    fast, slow = check(lat, oracle), check(lat, oracle, fast_paths=False)
    vanishes, b = avatar_comparison(lat, rl.n)
    payload, code, _ = _cli(["check", str(FIXTURES / "generic_forms.txt"), "--mode", "linear"])
    ok = rl.n == 3 and rl.r == 4 and rl.is_generic() and fast.verdict and slow.verdict and vanishes and code == 0
    assert report(7, "four generic forms in 3-space: linear check and avatar comparison", ok, f"avatar Betti {b}")


def test_criterion_8_tor_algebra():
    t = tor_algebra(LcmLattice(gens_of(("xy", ["x", "y"]))))
    c = t.constants
    cross = c[((1, 0), (1, 1))]
    exterior = (
        t.dims() == [1, 2, 1]
        and len(cross) == 1
        and cross[0][:2] == (2, 0)
        and cross[0][2] in (1, -1)
        and not c[((1, 0), (1, 0))]
        and not c[((1, 1), (1, 1))]
    )
    leib = all(
        leibniz_check(atomic_dga(GradedLattice.from_lcm_lattice(LcmLattice(gens_of(spec)))))
        for spec in (NONBOOLEAN, ZIGZAG, FIVECHAIN)
    )
    assert report(8, "exterior Tor of {x, y} and Leibniz on fixture DGAs", exterior and leib)


def test_criterion_9_determinism():
    bad = []
    for name in FIXTURE_FILES:
        for cmd in cli.SUBCOMMANDS:
            outs = []
            for _ in range(2):
                ns = cli.build_parser().parse_args([cmd, str(FIXTURES / name), "--seed", "99"])
                payload, code, raw = cli.compute(cli.config_from_args(ns))
                outs.append(json.dumps(cli.envelope(payload, raw, 99), indent=2).encode())
            if outs[0] != outs[1]:
                bad.append(f"{cmd} {name}")
    assert report(9, "byte-identical JSON for repeated seeded runs", not bad, ", ".join(bad) or "all fixtures")
