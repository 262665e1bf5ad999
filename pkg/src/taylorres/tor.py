"""Relative atomic complex of a graded lattice, its DGA, and the Tor algebra.

For the lcm lattice graded by factor multiplicities the relative atomic
complex is the Taylor complex tensored down to the field, so its homology
algebra is Tor of ``S/I``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GradingError, LatticeError
from .fields import QQ
from .homology import ChainComplex, HomologyResult, homology
from .lattice import FinitePoset, LcmLattice
from .taylor import eps, shuffle_sign, subset_complex, subsets_by_degree

MAX_ATOMS = 24


class GradedLattice:
    """A finite lattice with a strictly monotone, submodular rank into ``N^s``."""

    def __init__(self, labels: Sequence, leq: np.ndarray, rank: Sequence[Sequence[int]], atoms: Sequence[int] | None = None):
        self.labels = tuple(labels)
        self.leq = np.asarray(leq, dtype=bool)
        self.rank = tuple(tuple(int(x) for x in r) for r in rank)
        n = len(self.labels)
        if self.leq.shape != (n, n) or len(self.rank) != n:
            raise LatticeError("order matrix and rank list must match the element count")
        poset = FinitePoset(self.labels, self.leq)
        if n == 0 or not poset.is_valid():
            raise LatticeError("order relation is not a nonempty partial order")
        mins = poset.minimal()
        if len(mins) != 1:
            raise LatticeError("lattice must have a unique bottom element")
        self.bottom = mins[0]
        self._join = self._bound_table(upper=True)
        self._meet = self._bound_table(upper=False)
        strict = poset.strict()
        atoms_all = [j for j in range(n) if j != self.bottom and not (strict[:, j] & strict[self.bottom, :]).any()]
        if atoms is None:
            atoms = atoms_all
        atoms = tuple(int(a) for a in atoms)
        if sorted(atoms) != sorted(atoms_all):
            raise LatticeError("atom list does not match the atoms of the lattice")
        if len(atoms) > MAX_ATOMS:
            raise LatticeError(f"{len(atoms)} atoms exceeds the cap of {MAX_ATOMS}")
        self.atoms = atoms
        self._check_grading()

    def __len__(self) -> int:
        return len(self.labels)

    def _bound_table(self, upper: bool) -> np.ndarray:
        n = len(self.labels)
        leq = self.leq if upper else self.leq.T
        out = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                ub = np.nonzero(leq[i] & leq[j])[0]
                least = [u for u in ub if leq[u, ub].all()]
                if not least:
                    kind = "join" if upper else "meet"
                    raise LatticeError(f"elements {self.labels[i]!r} and {self.labels[j]!r} have no {kind}")
                out[i, j] = out[j, i] = least[0]
        return out

    def _check_grading(self) -> None:
        n = len(self)
        s = len(self.rank[0])
        if any(len(r) != s for r in self.rank):
            raise GradingError("rank vectors have different lengths")
        if any(self.rank[self.bottom]):
            raise GradingError("rank of the bottom element must be zero")
        for i in range(n):
            for j in range(n):
                if i != j and self.leq[i, j]:
                    a, b = self.rank[i], self.rank[j]
                    if a == b or any(x > y for x, y in zip(a, b)):
                        raise GradingError(f"rank is not strictly monotone on {self.labels[i]!r} < {self.labels[j]!r}")
                if i < j:
                    jn, mt = self._join[i, j], self._meet[i, j]
                    lhs = [x + y for x, y in zip(self.rank[jn], self.rank[mt])]
                    rhs = [x + y for x, y in zip(self.rank[i], self.rank[j])]
                    if any(x > y for x, y in zip(lhs, rhs)):
                        raise GradingError(f"rank is not submodular on {self.labels[i]!r}, {self.labels[j]!r}")

    def join(self, i: int, j: int) -> int:
        return int(self._join[i, j])

    def meet(self, i: int, j: int) -> int:
        return int(self._meet[i, j])

    def join_table(self) -> np.ndarray:
        """Element id of the join of every atom subset (bitmask over ``atoms``)."""
        k = len(self.atoms)
        out = np.empty(1 << k, dtype=np.int64)
        out[0] = self.bottom
        for mask in range(1, 1 << k):
            low = mask & -mask
            out[mask] = self._join[out[mask ^ low], self.atoms[low.bit_length() - 1]]
        return out

    @classmethod
    def from_lcm_lattice(cls, lat: LcmLattice) -> "GradedLattice":
        """Multiplicity grading; atoms in generator order."""
        return cls(lat.elements, lat.leq, lat.elements, lat.atoms)

    @classmethod
    def from_dict(cls, data: dict) -> "GradedLattice":
        """Elements with either an ``leq`` matrix or a cover list, plus ranks.

        ``rank`` may be omitted when elements are themselves exponent vectors.
        """
        if "payload" in data and "elements" not in data:
            data = data["payload"]
        try:
            elements = data["elements"]
        except (KeyError, TypeError):
            raise LatticeError("lattice file needs an 'elements' list") from None
        labels = tuple(tuple(e) if isinstance(e, list) else e for e in elements)
        n = len(labels)
        if "leq" in data:
            leq = np.array(data["leq"], dtype=bool).reshape(n, n)
        else:
            covers = data.get("covers", data.get("hasse"))
            if covers is None:
                raise LatticeError("lattice file needs 'leq' or 'covers'")
            for a, b in covers:
                if not (0 <= a < n and 0 <= b < n):
                    raise LatticeError(f"cover ({a}, {b}) out of range")
            leq = FinitePoset.from_covers(labels, [tuple(c) for c in covers]).leq
        rank = data.get("rank")
        if rank is None:
            if not all(isinstance(e, tuple) for e in labels):
                raise LatticeError("rank is required unless elements are exponent vectors")
            rank = labels
        return cls(labels, leq, rank, data.get("atoms"))


@dataclass
class AtomicDGA:
    lattice: GradedLattice
    field: object
    complex: ChainComplex
    joins: np.ndarray

    @property
    def n_atoms(self) -> int:
        return len(self.lattice.atoms)

    def rank_of(self, mask: int) -> tuple[int, ...]:
        return self.lattice.rank[int(self.joins[mask])]

    def product(self, sigma: int, tau: int) -> tuple[int, int] | None:
        """``(sign, union)`` or ``None`` for a zero product."""
        if sigma & tau:
            return None
        rs, rt, ru = self.rank_of(sigma), self.rank_of(tau), self.rank_of(sigma | tau)
        if any(a + b != c for a, b, c in zip(rs, rt, ru)):
            return None
        return shuffle_sign(sigma, tau), sigma | tau

    def multiply(self, u: dict[int, object], v: dict[int, object]) -> dict[int, object]:
        f = self.field
        out: dict[int, object] = {}
        for s, a in u.items():
            for t, b in v.items():
                pr = self.product(s, t)
                if pr is None:
                    continue
                sign, w = pr
                c = f.mul(a, b)
                if sign < 0:
                    c = f.neg(c)
                out[w] = f.add(out[w], c) if w in out else c
        return {k: x for k, x in out.items() if x != 0}

    def d(self, u: dict[int, object]) -> dict[int, object]:
        f = self.field
        out: dict[int, object] = {}
        for s, a in u.items():
            t = s
            while t:
                low = t & -t
                i = low.bit_length() - 1
                face = s ^ low
                if self.joins[face] == self.joins[s]:
                    c = a if eps(s, i) % 2 == 0 else f.neg(a)
                    out[face] = f.add(out[face], c) if face in out else c
                t ^= low
        return {k: x for k, x in out.items() if x != 0}


def atomic_dga(lat: GradedLattice, field=QQ) -> AtomicDGA:
    joins = lat.join_table()
    k = len(lat.atoms)
    by_deg = dict(enumerate(subsets_by_degree(k)))
    cx = subset_complex(by_deg, lambda tau, sigma: joins[tau] == joins[sigma], field)
    return AtomicDGA(lat, field, cx, joins)


def _add(f, u: dict, v: dict, sign: int = 1) -> dict:
    out = dict(u)
    for k, x in v.items():
        x = x if sign > 0 else f.neg(x)
        out[k] = f.add(out[k], x) if k in out else x
    return {k: x for k, x in out.items() if x != 0}


def leibniz_check(dga: AtomicDGA, pairs=None) -> bool:
    """``d(s t) = d(s) t + (-1)^|s| s d(t)`` on all basis pairs (or the given ones)."""
    f = dga.field
    n = 1 << dga.n_atoms
    it = pairs if pairs is not None else ((s, t) for s in range(n) for t in range(n))
    for s, t in it:
        us, ut = {s: f.one}, {t: f.one}
        lhs = dga.d(dga.multiply(us, ut))
        a = dga.multiply(dga.d(us), ut)
        b = dga.multiply(us, dga.d(ut))
        rhs = _add(f, a, b, -1 if s.bit_count() % 2 else 1)
        if lhs != rhs:
            return False
    return True


def associativity_check(dga: AtomicDGA) -> bool:
    f = dga.field
    n = 1 << dga.n_atoms
    for s in range(n):
        for t in range(n):
            st = dga.multiply({s: f.one}, {t: f.one})
            for w in range(n):
                if dga.multiply(st, {w: f.one}) != dga.multiply({s: f.one}, dga.multiply({t: f.one}, {w: f.one})):
                    return False
    return True


def graded_commutativity_check(dga: AtomicDGA) -> bool:
    f = dga.field
    n = 1 << dga.n_atoms
    for s in range(n):
        for t in range(n):
            a = dga.multiply({s: f.one}, {t: f.one})
            b = dga.multiply({t: f.one}, {s: f.one})
            sign = -1 if (s.bit_count() * t.bit_count()) % 2 else 1
            if a != _add(f, {}, b, sign):
                return False
    return True


@dataclass
class TorAlgebra:
    dga: AtomicDGA
    homology: HomologyResult
    constants: dict[tuple[tuple[int, int], tuple[int, int]], list[tuple[int, int, object]]]

    def dims(self) -> list[int]:
        d = [self.homology.dim(p) for p in sorted(self.homology.degrees)]
        while len(d) > 1 and d[-1] == 0:
            d.pop()
        return d

    def representative(self, p: int, i: int) -> dict[int, object]:
        basis = self.dga.complex.bases[p]
        v = self.homology[p].representatives[i]
        return {basis[k]: v[k] for k in range(len(basis)) if v[k] != 0}

    def as_dict(self) -> dict:
        f = self.dga.field
        return {
            "dims": self.dims(),
            "structure_constants": [
                {"left": list(a), "right": list(b), "terms": [[p, k, f.format(c)] for p, k, c in terms]}
                for (a, b), terms in sorted(self.constants.items())
                if terms
            ],
        }


def _coords(hom: HomologyResult, dga: AtomicDGA, p: int, vec: dict[int, object]) -> list:
    f = dga.field
    basis = dga.complex.bases.get(p, ())
    if p not in hom.degrees or not hom[p].dim:
        return []
    index = {s: i for i, s in enumerate(basis)}
    z = f.zeros(len(basis), 1)[:, 0]
    for s, c in vec.items():
        z[index[s]] = c
    return hom[p].coordinates(z)


def structure_constants(dga: AtomicDGA, hom: HomologyResult, reps=None) -> dict:
    """``[u_i][u_j] = sum_k c_ij^k [u_k]`` over all pairs of positive-degree classes."""
    f = dga.field
    degrees = [p for p in sorted(hom.degrees) if p >= 1 and hom[p].dim]
    if reps is None:
        reps = {}
        for p in degrees:
            basis = dga.complex.bases[p]
            reps[p] = [
                {basis[k]: v[k] for k in range(len(basis)) if v[k] != 0} for v in hom[p].representatives
            ]
    out = {}
    for p in degrees:
        for q in degrees:
            for i, u in enumerate(reps[p]):
                for j, v in enumerate(reps[q]):
                    prod = dga.multiply(u, v)
                    coords = _coords(hom, dga, p + q, prod) if prod else []
                    out[((p, i), (q, j))] = [(p + q, k, c) for k, c in enumerate(coords) if c != 0]
    return out


def tor_algebra(lat, field=QQ) -> TorAlgebra:
    """Tor algebra from an lcm lattice (multiplicity grading) or a graded lattice."""
    gl = GradedLattice.from_lcm_lattice(lat) if isinstance(lat, LcmLattice) else lat
    dga = atomic_dga(gl, field)
    hom = homology(dga.complex)
    return TorAlgebra(dga, hom, structure_constants(dga, hom))


def perturbation_check(tor: TorAlgebra, seed: int = 0, trials: int = 3) -> bool:
    """Structure constants are unchanged when representatives move by random boundaries."""
    dga, hom = tor.dga, tor.homology
    f = dga.field
    rng = random.Random(seed)
    degrees = [p for p in sorted(hom.degrees) if p >= 1 and hom[p].dim]
    for _ in range(trials):
        reps = {}
        for p in degrees:
            basis = dga.complex.bases[p]
            upper = dga.complex.bases.get(p + 1, ())
            reps[p] = []
            for v in hom[p].representatives:
                u = {basis[k]: v[k] for k in range(len(basis)) if v[k] != 0}
                if upper:
                    w = {upper[rng.randrange(len(upper))]: f.random_nonzero(rng)}
                    u = _add(f, u, dga.d(w))
                reps[p].append(u)
        if structure_constants(dga, hom, reps) != tor.constants:
            return False
    return True
