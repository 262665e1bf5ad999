"""The lcm lattice of a generator set, its fibers, projections and sublevel posets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .core import (
    Exponents,
    GeneratorSet,
    LinearRealization,
    join,
    members_mask,
    strictly_divides,
    support,
)
from .errors import DomainError, IncompleteOracleError, LatticeError, RealizationError

DEFAULT_MAX_M = 24

SaturatedSet = frozenset  # a set of factor indices


@dataclass(frozen=True)
class FinitePoset:
    """A finite poset given by its reflexive-transitive order matrix.

    ``items[i]`` is an arbitrary label for element ``i``; ``leq[i, j]`` is true
    iff element ``i`` lies below element ``j``.
    """

    items: tuple
    leq: np.ndarray

    def __len__(self) -> int:
        return len(self.items)

    @classmethod
    def from_relation(cls, items: Sequence, le: Callable[[object, object], bool]) -> "FinitePoset":
        items = tuple(items)
        n = len(items)
        leq = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(items):
            for j, b in enumerate(items):
                leq[i, j] = i == j or le(a, b)
        return cls(items, leq)

    @classmethod
    def from_covers(cls, items: Sequence, covers: Iterable[tuple[int, int]]) -> "FinitePoset":
        """Transitive closure of a cover list ``(lower, upper)`` given by index."""
        items = tuple(items)
        n = len(items)
        leq = np.eye(n, dtype=bool)
        for a, b in covers:
            leq[a, b] = True
        for k in range(n):
            leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
        return cls(items, leq)

    def less(self, i: int, j: int) -> bool:
        return i != j and bool(self.leq[i, j])

    def strict(self) -> np.ndarray:
        return self.leq & ~np.eye(len(self), dtype=bool)

    def minimal(self) -> list[int]:
        s = self.strict()
        return [j for j in range(len(self)) if not s[:, j].any()]

    def maximal(self) -> list[int]:
        s = self.strict()
        return [i for i in range(len(self)) if not s[i, :].any()]

    def upper_bounds(self, subset: Iterable[int]) -> np.ndarray:
        mask = np.ones(len(self), dtype=bool)
        for i in subset:
            mask &= self.leq[i, :]
        return mask

    def lower_bounds(self, subset: Iterable[int]) -> np.ndarray:
        mask = np.ones(len(self), dtype=bool)
        for i in subset:
            mask &= self.leq[:, i]
        return mask

    def subposet(self, indices: Iterable[int]) -> "FinitePoset":
        idx = list(indices)
        return FinitePoset(tuple(self.items[i] for i in idx), self.leq[np.ix_(idx, idx)].copy())

    def dual(self) -> "FinitePoset":
        return FinitePoset(self.items, self.leq.T.copy())

    def is_valid(self) -> bool:
        n = len(self)
        if n == 0:
            return True
        leq = self.leq
        if not np.all(np.diag(leq)):
            return False
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            return False
        closure = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        return bool(np.all(closure <= leq))

    def hasse(self) -> list[tuple[int, int]]:
        s = self.strict().astype(np.int64)
        two = (s @ s) > 0
        cov = (s > 0) & ~two
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cov))]


@dataclass(frozen=True)
class Fiber:
    """All generator subsets (as bitmasks, ascending) whose lcm is a given element."""

    q: int
    element: Exponents
    sets: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.sets)

    def members(self) -> list[tuple[int, ...]]:
        """Subsets as 1-based index tuples, for display."""
        return [tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1) for mask in self.sets]

    def by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for s in self.sets:
            out.setdefault(s.bit_count(), []).append(s)
        return out


def _element_key(e: Exponents) -> tuple:
    return (sum(e), e)


class LcmLattice:
    """Join-closure of the generators plus the bottom element.

    Elements are sorted by total degree, then lexicographically, which is a
    linear extension of divisibility; element 0 is the bottom.
    """

    def __init__(self, gens: GeneratorSet, *, max_m: int = DEFAULT_MAX_M):
        if gens.m > max_m:
            raise DomainError(f"{gens.m} generators exceeds the cap of {max_m}; raise --max-m")
        self.gens = gens
        self.max_m = max_m
        r = gens.r
        bottom = (0,) * r
        found = {bottom}
        queue = [bottom]
        while queue:
            e = queue.pop()
            for g in gens.gens:
                j = join(e, g)
                if j not in found:
                    found.add(j)
                    queue.append(j)
        self.elements: tuple[Exponents, ...] = tuple(sorted(found, key=_element_key))
        self.index: dict[Exponents, int] = {e: i for i, e in enumerate(self.elements)}
        self.atoms: tuple[int, ...] = tuple(self.index[g] for g in gens.gens)
        self.bottom = 0
        self.top = self.index[gens.lcm((1 << gens.m) - 1)]
        arr = np.array(self.elements, dtype=np.int64).reshape(len(self.elements), r)
        self._array = arr
        self.leq = np.all(arr[:, None, :] <= arr[None, :, :], axis=2)
        self._subset_ids: np.ndarray | None = None
        self._fibers: dict[int, Fiber] | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"LcmLattice(|D|={len(self)}, m={self.gens.m})"

    def resolve(self, q) -> int:
        """Element id from an id or an exponent vector."""
        if isinstance(q, (int, np.integer)):
            if not 0 <= q < len(self):
                raise LatticeError(f"element id {q} out of range")
            return int(q)
        q = tuple(q)
        if q not in self.index:
            raise LatticeError(f"{q} is not an element of the lcm lattice")
        return self.index[q]

    def join(self, i: int, j: int) -> int:
        return self.index[join(self.elements[i], self.elements[j])]

    def meet(self, i: int, j: int) -> int:
        """Lattice meet: the largest element below both (not the gcd in general)."""
        below = self.leq[:, i] & self.leq[:, j]
        cand = np.nonzero(below)[0]
        return int(max(cand, key=lambda k: int(self.leq[cand, k].sum())))

    def poset(self, ids: Iterable[int] | None = None) -> FinitePoset:
        ids = list(range(len(self))) if ids is None else sorted(ids)
        return FinitePoset(tuple(ids), self.leq[np.ix_(ids, ids)].copy())

    def hasse(self) -> list[tuple[int, int]]:
        return self.poset().hasse()

    # -- fibers ------------------------------------------------------------

    def subset_ids(self) -> np.ndarray:
        """Element id of ``lcm(sigma)`` for every bitmask ``sigma`` in ``0..2^m-1``."""
        if self._subset_ids is None:
            gens = np.array(self.gens.gens, dtype=np.int64).reshape(self.gens.m, self.gens.r)
            table = kernels.subset_join_table(gens)
            self._subset_ids = self._ids_of_rows(table)
        return self._subset_ids

    def _ids_of_rows(self, table: np.ndarray) -> np.ndarray:
        bases = self._array.max(axis=0) + 1
        total = 1
        for b in bases:
            total *= int(b)
        if total < 2**62:
            weights = np.ones(len(bases), dtype=np.int64)
            for k in range(1, len(bases)):
                weights[k] = weights[k - 1] * bases[k - 1]
            keys = self._array @ weights
            order = np.argsort(keys, kind="stable")
            pos = np.searchsorted(keys[order], table @ weights)
            return order[pos].astype(np.int64)
        return np.array([self.index[tuple(int(x) for x in row)] for row in table], dtype=np.int64)

    def fibers(self) -> dict[int, Fiber]:
        if self._fibers is None:
            ids = self.subset_ids()
            order = np.argsort(ids, kind="stable")
            bounds = np.searchsorted(ids[order], np.arange(len(self) + 1))
            out = {}
            for q in range(len(self)):
                masks = tuple(int(x) for x in order[bounds[q] : bounds[q + 1]])
                out[q] = Fiber(q, self.elements[q], masks)
            self._fibers = out
        return self._fibers

    def fiber(self, q) -> Fiber:
        return self.fibers()[self.resolve(q)]

    # -- intervals and projections ----------------------------------------

    def lower_interval(self, q) -> FinitePoset:
        """Open interval ``(bottom, q)`` with the induced order."""
        q = self.resolve(q)
        ids = [i for i in range(1, len(self)) if i != q and self.leq[i, q]]
        return self.poset(ids)

    def project(self, G: Iterable[int], q) -> Exponents:
        return project(self.elements[self.resolve(q)], G)

    def projection_image(self, G: Iterable[int]) -> list[Exponents]:
        G = frozenset(G)
        return sorted({project(e, G) for e in self.elements}, key=_element_key)

    def strict_sublevel(self, G: Iterable[int], P: Exponents) -> FinitePoset:
        """Non-bottom elements whose projection onto ``G`` strictly divides ``P``."""
        G = frozenset(G)
        P = tuple(P)
        if P not in set(self.projection_image(G)):
            raise LatticeError(f"{P} is not the projection of a lattice element onto {sorted(G)}")
        ids = [i for i in range(1, len(self)) if strictly_divides(project(self.elements[i], G), P)]
        return self.poset(ids)


def build_lattice(gens: GeneratorSet, *, max_m: int = DEFAULT_MAX_M) -> LcmLattice:
    return LcmLattice(gens, max_m=max_m)


def fiber(lat: LcmLattice, q) -> Fiber:
    return lat.fiber(q)


def lower_interval(lat: LcmLattice, q) -> FinitePoset:
    return lat.lower_interval(q)


def strict_sublevel(lat: LcmLattice, G: Iterable[int], P: Exponents) -> FinitePoset:
    return lat.strict_sublevel(G, P)


def project(q: Exponents, G: Iterable[int]) -> Exponents:
    """Largest divisor of ``q`` whose factors all lie in ``G``."""
    G = frozenset(G)
    return tuple(x if i in G else 0 for i, x in enumerate(q))


# -- saturated sets -------------------------------------------------------------


def linear_flats(realization: LinearRealization) -> list[SaturatedSet]:
    """All span-closed subsets of the realization's rows."""
    r = realization.r
    rank_of: dict[int, int] = {}

    def rank(mask: int) -> int:
        if mask not in rank_of:
            rank_of[mask] = realization.rank(i for i in range(r) if mask >> i & 1)
        return rank_of[mask]

    flats = set()
    for mask in range(1 << r):
        rk = rank(mask)
        closure = mask
        for i in range(r):
            if not mask >> i & 1 and rank(mask | 1 << i) == rk:
                closure |= 1 << i
        flats.add(closure)
    return sorted((frozenset(i for i in range(r) if f >> i & 1) for f in flats), key=_set_key)


def _set_key(s: frozenset) -> tuple:
    return (len(s), tuple(sorted(s)))


def saturated_sets(
    gens: GeneratorSet,
    mode: str = "monomial",
    *,
    realization: LinearRealization | None = None,
    table: Mapping[frozenset, int] | None = None,
) -> list[SaturatedSet]:
    """Saturated factor sets: every subset, the flats of a linear realization,
    or the keys of a user depth table."""
    r = gens.r
    if mode == "monomial":
        return sorted(
            (frozenset(c) for k in range(r + 1) for c in itertools.combinations(range(r), k)),
            key=_set_key,
        )
    if mode == "linear":
        if realization is None:
            raise RealizationError("linear mode needs a realization block")
        if realization.r != r:
            raise RealizationError(f"realization has {realization.r} rows, alphabet has {r} factors")
        return linear_flats(realization)
    if mode == "table":
        if table is None:
            raise IncompleteOracleError("table mode needs a depth table")
        return sorted((frozenset(k) for k in table), key=_set_key)
    raise DomainError(f"unknown mode {mode!r}")


def is_flat(realization: LinearRealization, G: Iterable[int]) -> bool:
    G = frozenset(G)
    rk = realization.rank(sorted(G))
    return all(realization.rank(sorted(G | {i})) > rk for i in range(realization.r) if i not in G)


def support_mask(e: Exponents) -> int:
    return members_mask(support(e))
