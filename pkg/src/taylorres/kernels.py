"""Hot numeric kernels.

Each kernel exists twice: a loop-level version compiled with numba's ``njit``
and a vectorised pure-numpy version.  The compiled path is used when numba is
importable, the environment variable ``TAYLORRES_DISABLE_JIT`` is unset (or
set to ``0``/``false``) and the input is large enough to repay loading it.  Both paths return identical results; the test-suite
runs them against each other and ``benchmarks/bench_kernels.py`` times them.

All prime-field kernels assume ``p < 2**31`` so that a product of two reduced
residues fits in a signed 64-bit integer.
"""

from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "TAYLORRES_DISABLE_JIT"
MAX_KERNEL_PRIME = 2**31
# below this many inner-loop steps the automatic choice stays on numpy, since
# loading the compiled kernel costs more than the whole computation
JIT_MIN_WORK = 1 << 14


def _jit_requested() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("", "0", "false", "no", "off")


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and _jit_requested()


# ---------------------------------------------------------------------------
# subset join table: row ``mask`` holds the componentwise max over the
# generators whose bits are set in ``mask``.


def _subset_join_table_loops(gens):
    m, r = gens.shape
    n = 1 << m
    out = np.zeros((n, r), dtype=np.int64)
    for mask in range(1, n):
        low = mask & (-mask)
        bit = 0
        while (low >> bit) != 1:
            bit += 1
        prev = mask ^ low
        for k in range(r):
            a = out[prev, k]
            b = gens[bit, k]
            out[mask, k] = a if a > b else b
    return out


def _subset_join_table_numpy(gens):
    gens = np.asarray(gens, dtype=np.int64)
    m, r = gens.shape
    table = np.zeros((1, r), dtype=np.int64)
    for i in range(m):
        table = np.concatenate([table, np.maximum(table, gens[i])], axis=0)
    return table


# ---------------------------------------------------------------------------
# reduced row echelon form over F_p, in place.  Returns the number of pivots;
# ``pivots[:rank]`` receives the pivot columns.


def _rref_modp_loops(a, p, pivots):
    nrows, ncols = a.shape
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        piv = -1
        for i in range(row, nrows):
            if a[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            for k in range(ncols):
                t = a[row, k]
                a[row, k] = a[piv, k]
                a[piv, k] = t
        # modular inverse by extended Euclid
        x = a[row, col]
        t0, t1, r0, r1 = 0, 1, p, x
        while r1 != 0:
            q = r0 // r1
            t0, t1 = t1, t0 - q * t1
            r0, r1 = r1, r0 - q * r1
        inv = t0 % p
        for k in range(col, ncols):
            a[row, k] = (a[row, k] * inv) % p
        for i in range(nrows):
            if i != row:
                f = a[i, col]
                if f != 0:
                    for k in range(col, ncols):
                        a[i, k] = (a[i, k] - f * a[row, k]) % p
        pivots[row] = col
        row += 1
    return row


def _rref_modp_numpy(a, p, pivots):
    nrows, ncols = a.shape
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), -1, int(p))
        a[row, col:] = (a[row, col:] * inv) % p
        f = a[:, col].copy()
        f[row] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            a[np.ix_(hit, np.arange(col, ncols))] = (
                a[np.ix_(hit, np.arange(col, ncols))] - np.outer(f[hit], a[row, col:]) % p
            ) % p
        pivots[row] = col
        row += 1
    return row


# ---------------------------------------------------------------------------
# matrix product over F_p


def _matmul_modp_loops(a, b, p):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            x = a[i, t]
            if x != 0:
                for j in range(m):
                    out[i, j] = (out[i, j] + x * b[t, j]) % p
    return out


def _matmul_modp_numpy(a, b, p):
    n, k = a.shape
    out = np.zeros((n, b.shape[1]), dtype=np.int64)
    for t in range(k):
        out = (out + np.outer(a[:, t], b[t, :]) % p) % p
    return out


if USE_JIT:
    _subset_join_table_jit = njit(cache=True)(_subset_join_table_loops)
    _rref_modp_jit = njit(cache=True)(_rref_modp_loops)
    _matmul_modp_jit = njit(cache=True)(_matmul_modp_loops)


def _use_jit(jit: bool | None, work: int) -> bool:
    if jit is None:
        return USE_JIT and work >= JIT_MIN_WORK
    return jit and USE_JIT


def backend() -> str:
    """Name of the active kernel backend: ``"numba"`` or ``"numpy"``."""
    return "numba" if USE_JIT else "numpy"


def subset_join_table(gens: np.ndarray, *, jit: bool | None = None) -> np.ndarray:
    """Componentwise max of every subset of the rows of ``gens`` (``2**m`` rows)."""
    gens = np.ascontiguousarray(gens, dtype=np.int64)
    if gens.ndim != 2:
        raise ValueError("gens must be a 2-d array")
    if _use_jit(jit, (1 << gens.shape[0]) * gens.shape[1]):
        return _subset_join_table_jit(gens)
    return _subset_join_table_numpy(gens)


def rref_modp(a: np.ndarray, p: int, *, jit: bool | None = None) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form of ``a`` over F_p; returns ``(R, pivot_columns)``."""
    if not 2 <= p < MAX_KERNEL_PRIME:
        raise ValueError(f"kernel prime must lie in [2, 2**31), got {p}")
    a = np.array(a, dtype=np.int64, copy=True) % p
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    pivots = np.zeros(min(a.shape) if a.size else 0, dtype=np.int64)
    if a.size == 0:
        return a, ()
    use = _use_jit(jit, a.shape[0] * a.shape[1] * min(a.shape))
    rank = (_rref_modp_jit if use else _rref_modp_numpy)(a, np.int64(p), pivots)
    return a, tuple(int(c) for c in pivots[:rank])


def matmul_modp(a: np.ndarray, b: np.ndarray, p: int, *, jit: bool | None = None) -> np.ndarray:
    """Matrix product over F_p without int64 overflow."""
    a = np.ascontiguousarray(a, dtype=np.int64) % p
    b = np.ascontiguousarray(b, dtype=np.int64) % p
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if _use_jit(jit, a.shape[0] * a.shape[1] * b.shape[1]) and a.size and b.size:
        return _matmul_modp_jit(a, b, np.int64(p))
    return _matmul_modp_numpy(a, b, p)
