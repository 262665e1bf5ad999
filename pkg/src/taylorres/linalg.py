"""Exact linear algebra on top of the field objects.

Dense helpers (null spaces, basis extension, left inverses) work with numpy
arrays produced by ``field.matrix``.  :class:`SparseMatrix` stores a matrix by
columns and is the carrier for boundary maps; its :meth:`SparseMatrix.rank`
runs a sparse column reduction that stays fraction-free over Q.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .fields import PrimeField, Rationals


def pivot_columns(a: np.ndarray, field) -> tuple[int, ...]:
    if a.size == 0:
        return ()
    return field.rref(a)[1]


def nullspace(a: np.ndarray, field) -> list[np.ndarray]:
    """Basis of ``{x : a @ x = 0}``, one vector per free column of the RREF."""
    nrows, ncols = a.shape
    if ncols == 0:
        return []
    if nrows == 0:
        eye = field.identity(ncols)
        return [eye[:, j].copy() for j in range(ncols)]
    r, piv = field.rref(a)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = field.zeros(ncols, 1)[:, 0]
        v[free] = field.one
        for i, pc in enumerate(piv):
            v[pc] = field.neg(r[i, free])
        basis.append(field.reduce(v) if isinstance(field, PrimeField) else v)
    return basis


def stack_columns(vectors: Iterable[np.ndarray], nrows: int, field) -> np.ndarray:
    vectors = list(vectors)
    out = field.zeros(nrows, len(vectors))
    for j, v in enumerate(vectors):
        out[:, j] = v
    return out


def independent_subset(vectors: list[np.ndarray], nrows: int, field) -> list[int]:
    """Indices of the first-pivot maximal independent subfamily."""
    if not vectors:
        return []
    return list(pivot_columns(stack_columns(vectors, nrows, field), field))


def extend_basis(base: list[np.ndarray], candidates: list[np.ndarray], nrows: int, field) -> list[int]:
    """Indices of candidates that extend ``base`` (assumed independent), greedily in order."""
    cols = pivot_columns(stack_columns(list(base) + list(candidates), nrows, field), field)
    nb = len(base)
    return [j - nb for j in cols if j >= nb]


def left_inverse(a: np.ndarray, field) -> np.ndarray:
    """``L`` with ``L @ a = I`` for a matrix of full column rank."""
    n, k = a.shape
    if k == 0:
        return field.zeros(0, n)
    aug = field.zeros(n, k + n)
    aug[:, :k] = a
    aug[:, k:] = field.identity(n)
    r, piv = field.rref(aug)
    if tuple(piv[:k]) != tuple(range(k)):
        raise ValueError("matrix does not have full column rank")
    return r[:k, k:].copy()


def is_zero_array(a: np.ndarray) -> bool:
    return not any(x != 0 for x in np.ravel(a))


def _int_scale(col: dict) -> dict:
    den = 1
    for v in col.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
    if den == 1:
        return {k: int(v) for k, v in col.items()}
    return {k: int(v * den) for k, v in col.items()}


class SparseMatrix:
    """Column-major sparse matrix; ``cols[j]`` maps row index to a nonzero entry.

    Entries may be field scalars or any ring element supporting ``+``/``*``
    (e.g. :class:`~taylorres.core.MonomialCombo`).
    """

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: list[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [dict() for _ in range(ncols)]
        if len(self.cols) != ncols:
            raise ValueError("column count mismatch")

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    @classmethod
    def from_dense(cls, a: np.ndarray) -> "SparseMatrix":
        nrows, ncols = a.shape
        cols = []
        for j in range(ncols):
            cols.append({i: a[i, j] for i in range(nrows) if a[i, j] != 0})
        return cls(nrows, ncols, cols)

    @classmethod
    def from_triplets(cls, nrows: int, ncols: int, triplets: Iterable[tuple[int, int, object]]):
        out = cls(nrows, ncols)
        for i, j, v in triplets:
            if v != 0:
                out.cols[j][i] = v
        return out

    def triplets(self) -> list[tuple[int, int, object]]:
        return [(i, j, self.cols[j][i]) for j in range(self.ncols) for i in sorted(self.cols[j])]

    def to_dense(self, field) -> np.ndarray:
        out = field.zeros(self.nrows, self.ncols)
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i, j] = v
        return out

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def map_entries(self, fn: Callable) -> "SparseMatrix":
        cols = []
        for col in self.cols:
            new = {}
            for i, v in col.items():
                w = fn(v)
                if w != 0:
                    new[i] = w
            cols.append(new)
        return SparseMatrix(self.nrows, self.ncols, cols)

    def apply(self, vec: dict, field=None) -> dict:
        """Image of a sparse column vector ``{col: coeff}``."""
        add = _py_add if field is None else field.add
        mul = _py_mul if field is None else field.mul
        out: dict = {}
        for j, c in vec.items():
            for i, v in self.cols[j].items():
                t = mul(v, c)
                out[i] = add(out[i], t) if i in out else t
        return {i: v for i, v in out.items() if v != 0}

    def compose(self, other: "SparseMatrix", field=None) -> "SparseMatrix":
        """``self @ other``; with ``field=None`` the entries' own operators are used."""
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [self.apply(col, field) for col in other.cols]
        return SparseMatrix(self.nrows, other.ncols, cols)

    def rank(self, field) -> int:
        """Rank by sparse column reduction (pivot on the largest row index)."""
        if isinstance(field, Rationals):
            return _sparse_rank_q(self.cols)
        return _sparse_rank_p(self.cols, field.p)


def _sparse_rank_q(columns) -> int:
    pivots: dict[int, dict] = {}
    for col in columns:
        if not col:
            continue
        c = _int_scale(col)
        while c:
            low = max(c)
            pc = pivots.get(low)
            if pc is None:
                pivots[low] = c
                break
            a, b = pc[low], c[low]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * v for k, v in c.items()} if a != 1 else dict(c)
            for k, v in pc.items():
                w = new.get(k, 0) - b * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            if new:
                g = 0
                for v in new.values():
                    g = math.gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    new = {k: v // g for k, v in new.items()}
            c = new
    return len(pivots)


def _sparse_rank_p(columns, p: int) -> int:
    pivots: dict[int, dict] = {}
    for col in columns:
        c = {k: int(v) % p for k, v in col.items() if int(v) % p}
        while c:
            low = max(c)
            pc = pivots.get(low)
            if pc is None:
                inv = pow(c[low], -1, p)
                pivots[low] = {k: v * inv % p for k, v in c.items()}
                break
            f = c[low]
            for k, v in pc.items():
                w = (c.get(k, 0) - f * v) % p
                if w:
                    c[k] = w
                else:
                    c.pop(k, None)
    return len(pivots)


def _py_add(a, b):
    return a + b


def _py_mul(a, b):
    return a * b
