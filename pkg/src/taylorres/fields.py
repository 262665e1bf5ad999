"""Exact scalar fields: the rationals and prime fields F_p.

A field object owns scalar arithmetic and dense matrix elimination.  Matrices
are numpy arrays: ``dtype=object`` holding ``int``/``Fraction`` for the
rationals, ``int64`` residues for F_p.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import FieldError


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _qdiv(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
    return _normalize(Fraction(a) / b)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


class Rationals:
    """The field Q with arbitrary-precision exact arithmetic."""

    characteristic = 0
    name = "q"
    dtype = object

    zero = 0
    one = 1

    def __repr__(self):
        return "Rationals()"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("q")

    def coerce(self, x):
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"not an exact rational: {x!r}") from exc
        if isinstance(x, (bool, np.bool_)):
            return int(x)
        if isinstance(x, (int, np.integer)):
            return int(x)
        if isinstance(x, Fraction):
            return _normalize(x)
        raise FieldError(f"cannot coerce {x!r} to a rational")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return _qdiv(a, b)

    def inv(self, a):
        return self.div(1, a)

    def format(self, a) -> str:
        return str(_normalize(a))

    def random_nonzero(self, rng: random.Random):
        x = rng.randint(1, 10**6)
        return x if rng.random() < 0.5 else -x

    # -- matrices ---------------------------------------------------------

    def matrix(self, rows, ncols: int | None = None) -> np.ndarray:
        rows = [[self.coerce(x) for x in row] for row in rows]
        if not rows:
            return np.zeros((0, ncols or 0), dtype=object)
        out = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, row in enumerate(rows):
            out[i, :] = row
        return out

    def zeros(self, nrows: int, ncols: int) -> np.ndarray:
        out = np.empty((nrows, ncols), dtype=object)
        out.fill(0)
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = 1
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        out = a.dot(b)
        return out

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
        """Gauss-Jordan with first-nonzero pivoting, column by column."""
        nrows, ncols = a.shape
        m = [list(row) for row in a]
        pivots = []
        row = 0
        for col in range(ncols):
            if row == nrows:
                break
            piv = next((i for i in range(row, nrows) if m[i][col] != 0), None)
            if piv is None:
                continue
            m[row], m[piv] = m[piv], m[row]
            pr = m[row]
            x = pr[col]
            if x != 1:
                pr[col:] = [_qdiv(v, x) if v != 0 else 0 for v in pr[col:]]
            for i in range(nrows):
                if i == row:
                    continue
                ri = m[i]
                f = ri[col]
                if f != 0:
                    for k in range(col, ncols):
                        v = pr[k]
                        if v != 0:
                            ri[k] = _normalize(ri[k] - f * v)
            pivots.append(col)
            row += 1
        out = self.zeros(nrows, ncols)
        for i, r in enumerate(m):
            out[i, :] = r
        return out, tuple(pivots)

    def rank(self, a: np.ndarray) -> int:
        """Rank by fraction-free (Bareiss) elimination on integer-scaled rows."""
        rows = []
        for row in a:
            den = 1
            for v in row:
                if isinstance(v, Fraction):
                    den = den * v.denominator // math.gcd(den, v.denominator)
            r = [int(v * den) for v in row]
            if any(r):
                rows.append(r)
        return bareiss_rank(rows)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix via fraction-free Gaussian elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 0
    c = len(m[0])
    prev = 1
    r = 0
    for col in range(c):
        if r == n:
            break
        piv = next((i for i in range(r, n) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        pr = m[r]
        for i in range(r + 1, n):
            ri = m[i]
            f = ri[col]
            for j in range(col + 1, c):
                ri[j] = (p * ri[j] - f * pr[j]) // prev
            ri[col] = 0
        prev = p
        r += 1
    return r


class PrimeField:
    """The field F_p; matrix work is delegated to the compiled kernels."""

    name = "fp"
    dtype = np.int64
    zero = 0
    one = 1

    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p >= kernels.MAX_KERNEL_PRIME:
            raise FieldError(f"prime must be below 2**31, got {p}")
        self.p = p
        self.characteristic = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def coerce(self, x):
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"not an exact rational: {x!r}") from exc
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise FieldError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return pow(int(a), -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def format(self, a) -> str:
        # symmetric representative keeps signs readable: p-1 prints as -1
        a = int(a) % self.p
        return str(a - self.p if a > self.p // 2 else a)

    def random_nonzero(self, rng: random.Random):
        return rng.randint(1, self.p - 1)

    def matrix(self, rows, ncols: int | None = None) -> np.ndarray:
        rows = [[self.coerce(x) for x in row] for row in rows]
        if not rows:
            return np.zeros((0, ncols or 0), dtype=np.int64)
        return np.array(rows, dtype=np.int64).reshape(len(rows), -1)

    def zeros(self, nrows: int, ncols: int) -> np.ndarray:
        return np.zeros((nrows, ncols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return kernels.matmul_modp(a, b, self.p)

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
        return kernels.rref_modp(a, self.p)

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return len(kernels.rref_modp(a, self.p)[1])

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=np.int64) % self.p


QQ = Rationals()

Field = Rationals | PrimeField


def parse_field(spec: str) -> Rationals | PrimeField:
    """Parse ``q`` or ``fp:<prime>``."""
    s = spec.strip().lower()
    if s in ("q", "qq", "rationals"):
        return QQ
    if s.startswith("fp:"):
        try:
            p = int(s[3:])
        except ValueError as exc:
            raise FieldError(f"bad prime in field spec {spec!r}") from exc
        return PrimeField(p)
    raise FieldError(f"unknown field {spec!r}; expected 'q' or 'fp:<prime>'")


def field_name(field) -> str:
    return "q" if isinstance(field, Rationals) else f"fp:{field.p}"
