import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from taylorres import kernels

needs_numba = pytest.mark.skipif(not kernels.USE_JIT, reason="numba disabled or missing")


def test_subset_join_table_matches_bruteforce():
    gens = np.array([[2, 1, 0], [0, 1, 3], [1, 0, 1], [0, 2, 0]])
    table = kernels.subset_join_table(gens, jit=False)
    for mask in range(16):
        rows = [gens[i] for i in range(4) if mask >> i & 1]
        expect = np.max(rows, axis=0) if rows else np.zeros(3, dtype=np.int64)
        assert (table[mask] == expect).all()


@needs_numba
@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(1, 5), st.integers(0, 2**31))
def test_subset_join_table_backends_agree(m, r, seed):
    gens = np.random.default_rng(seed).integers(0, 5, size=(m, r))
    assert np.array_equal(kernels.subset_join_table(gens, jit=True), kernels.subset_join_table(gens, jit=False))


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.sampled_from([2, 3, 101, 32003]), st.integers(0, 2**31))
def test_rref_backends_agree(nr, nc, p, seed):
    a = np.random.default_rng(seed).integers(-50, 50, size=(nr, nc))
    r1, p1 = kernels.rref_modp(a, p, jit=True)
    r2, p2 = kernels.rref_modp(a, p, jit=False)
    assert p1 == p2
    assert np.array_equal(r1, r2)


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**31))
def test_matmul_backends_agree(a_, b_, c_, seed):
    rng = np.random.default_rng(seed)
    p = 2**31 - 1
    a = rng.integers(0, p, size=(a_, b_))
    b = rng.integers(0, p, size=(b_, c_))
    got = kernels.matmul_modp(a, b, p, jit=True)
    assert np.array_equal(got, kernels.matmul_modp(a, b, p, jit=False))
    exact = [[sum(int(a[i, k]) * int(b[k, j]) for k in range(b_)) % p for j in range(c_)] for i in range(a_)]
    assert got.tolist() == exact


def test_rref_is_reduced():
    a = np.array([[2, 4, 1], [1, 2, 3], [0, 0, 5]])
    r, piv = kernels.rref_modp(a, 7, jit=False)
    assert piv == (0, 2)
    for i, c in enumerate(piv):
        col = r[:, c]
        assert col[i] == 1 and all(col[k] == 0 for k in range(3) if k != i)


def test_bad_prime_rejected():
    with pytest.raises(ValueError):
        kernels.rref_modp(np.eye(2, dtype=np.int64), 2**31)


def test_env_flag_selects_numpy():
    env = dict(os.environ, **{kernels.ENV_FLAG: "1"})
    out = subprocess.run(
        [sys.executable, "-c", "from taylorres import kernels; print(kernels.backend())"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_betti_identical_across_backends():
    code = (
        "from taylorres import GeneratorSet, LcmLattice, PrimeField, betti_numbers;"
        "g = GeneratorSet.from_monomials('xyzw', ['x^2','x y','y z','z w','w^2']);"
        "print(betti_numbers(LcmLattice(g), PrimeField(3), 'evaluation'))"
    )
    outs = set()
    for flag in ("0", "1"):
        env = dict(os.environ, **{kernels.ENV_FLAG: flag})
        res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
        outs.add(res.stdout.strip())
    assert outs == {"[1, 5, 7, 4, 1]"}
