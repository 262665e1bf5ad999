"""Chain complexes over exact fields and the simplicial complexes of posets.

Degrees of a simplicial chain complex are simplicial dimensions, so a reduced
complex starts in degree -1 with the empty face.  The empty poset has the
complex ``{()}`` whose reduced homology is the field in degree -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import LatticeError, MalformedComplexError
from .fields import QQ
from .lattice import FinitePoset
from .linalg import SparseMatrix, extend_basis, left_inverse, nullspace, pivot_columns, stack_columns


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of vertex tuples (sorted), always containing ``()``."""

    vertices: tuple
    faces: tuple[tuple[int, ...], ...]

    @classmethod
    def from_faces(cls, vertices: Sequence, faces) -> "SimplicialComplex":
        fs = {tuple(sorted(f)) for f in faces}
        fs.add(())
        return cls(tuple(vertices), tuple(sorted(fs, key=lambda f: (len(f), f))))

    @classmethod
    def from_facets(cls, vertices: Sequence, facets) -> "SimplicialComplex":
        fs = set()
        for facet in facets:
            facet = tuple(sorted(facet))
            for k in range(len(facet) + 1):
                fs.update(itertools.combinations(facet, k))
        return cls.from_faces(vertices, fs)

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def is_closed(self) -> bool:
        fs = set(self.faces)
        return () in fs and all(f[:i] + f[i + 1 :] in fs for f in self.faces for i in range(len(f)))


@dataclass
class ChainComplex:
    """Finite chain complex; ``boundaries[p]`` maps degree ``p`` to ``p - 1``."""

    field: object
    bases: dict[int, tuple]
    boundaries: dict[int, SparseMatrix] = dc_field(default_factory=dict)

    def degrees(self) -> list[int]:
        return sorted(self.bases)

    def dim(self, p: int) -> int:
        return len(self.bases.get(p, ()))

    def boundary(self, p: int) -> SparseMatrix:
        if p in self.boundaries:
            return self.boundaries[p]
        return SparseMatrix(self.dim(p - 1), self.dim(p))

    def check(self) -> None:
        """Raise :class:`MalformedComplexError` unless every ``d_{p-1} d_p`` vanishes."""
        for p in self.degrees():
            d1, d2 = self.boundary(p - 1), self.boundary(p)
            if d1.ncols == 0 or d2.ncols == 0:
                continue
            if not d1.compose(d2, self.field).is_zero():
                raise MalformedComplexError(f"d^2 != 0 at degree {p}")

    def rank(self, p: int) -> int:
        d = self.boundary(p)
        if d.nrows == 0 or d.ncols == 0:
            return 0
        return d.rank(self.field)


@dataclass
class HomologyDegree:
    """Homology in one degree with first-pivot cycle representatives."""

    degree: int
    dim: int
    representatives: list[np.ndarray]
    boundary_basis: list[np.ndarray]
    cycle_basis: list[np.ndarray]
    field: object
    _inverse: np.ndarray | None = None

    def coordinates(self, z: np.ndarray) -> list:
        """Coordinates of the class of the cycle ``z`` in the representative basis."""
        f = self.field
        nb = len(self.boundary_basis)
        n = len(z)
        if self._inverse is None:
            basis = stack_columns(self.boundary_basis + self.representatives, n, f)
            self._inverse = left_inverse(basis, f)
        coords = f.matmul(self._inverse, z.reshape(-1, 1))[:, 0]
        if len(coords):
            basis = stack_columns(self.boundary_basis + self.representatives, n, f)
            back = f.matmul(basis, coords.reshape(-1, 1))[:, 0]
        else:
            back = f.zeros(n, 1)[:, 0]
        if any(f.sub(a, b) != 0 for a, b in zip(back, z)):
            raise ValueError("vector is not a cycle in this degree")
        return list(coords[nb:])

    def is_boundary(self, z: np.ndarray) -> bool:
        return all(c == 0 for c in self.coordinates(z))


@dataclass
class HomologyResult:
    degrees: dict[int, HomologyDegree]

    def dims(self) -> dict[int, int]:
        return {p: h.dim for p, h in self.degrees.items()}

    def dim(self, p: int) -> int:
        h = self.degrees.get(p)
        return h.dim if h else 0

    def __getitem__(self, p: int) -> HomologyDegree:
        return self.degrees[p]


# -- complexes of posets ------------------------------------------------------------


def flag_complex(poset: FinitePoset) -> SimplicialComplex:
    """Chains of the poset (vertex ``i`` is poset element ``i``)."""
    n = len(poset)
    s = poset.strict()
    ups = [tuple(int(j) for j in np.nonzero(s[i])[0]) for i in range(n)]
    faces = [()]
    stack = [((i,), ups[i]) for i in range(n)]
    while stack:
        chain, cand = stack.pop()
        faces.append(chain)
        for j in cand:
            stack.append((chain + (j,), ups[j]))
    return SimplicialComplex.from_faces(tuple(range(n)), faces)


def _check_proper_part(poset: FinitePoset) -> None:
    """The poset plus an adjoined bottom and top must be a lattice."""
    for i, j in itertools.combinations(range(len(poset)), 2):
        idx = np.nonzero(poset.upper_bounds((i, j)))[0]
        if len(idx) and not any(poset.leq[a, idx].all() for a in idx):
            raise LatticeError("poset is not the proper part of a bounded lattice: missing join")
        idx = np.nonzero(poset.lower_bounds((i, j)))[0]
        if len(idx) and not any(poset.leq[idx, a].all() for a in idx):
            raise LatticeError("poset is not the proper part of a bounded lattice: missing meet")


def atomic_complex(poset: FinitePoset) -> SimplicialComplex:
    """Atom sets with an upper bound inside the proper part (vertices = minimal elements)."""
    _check_proper_part(poset)
    atoms = poset.minimal()
    facets = []
    for x in range(len(poset)):
        facets.append(tuple(a for a in atoms if poset.leq[a, x]))
    return SimplicialComplex.from_facets(tuple(atoms), facets)


def coatomic_complex(poset: FinitePoset) -> SimplicialComplex:
    """Coatom sets with a lower bound inside the proper part."""
    _check_proper_part(poset)
    coatoms = poset.maximal()
    facets = []
    for x in range(len(poset)):
        facets.append(tuple(c for c in coatoms if poset.leq[x, c]))
    return SimplicialComplex.from_facets(tuple(coatoms), facets)


def chain_complex(cx: SimplicialComplex, field=QQ, reduced: bool = True) -> ChainComplex:
    """Simplicial chain complex with the standard alternating boundary."""
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for f in cx.faces:
        if f or reduced:
            by_dim.setdefault(len(f) - 1, []).append(f)
    lo = -1 if reduced else 0
    top = max(by_dim) if by_dim else lo
    bases = {p: tuple(by_dim.get(p, ())) for p in range(lo, top + 1)}
    index = {p: {f: i for i, f in enumerate(b)} for p, b in bases.items()}
    minus_one = field.neg(field.one)
    bds = {}
    for p in range(lo + 1, top + 1):
        rows = index[p - 1]
        cols = []
        for f in bases[p]:
            col = {}
            for i in range(len(f)):
                g = f[:i] + f[i + 1 :]
                if g in rows:
                    col[rows[g]] = field.one if i % 2 == 0 else minus_one
            cols.append(col)
        bds[p] = SparseMatrix(len(bases[p - 1]), len(bases[p]), cols)
    return ChainComplex(field, bases, bds)


# -- homology -------------------------------------------------------------------


def homology_dims(cc: ChainComplex) -> dict[int, int]:
    """Betti numbers of the complex from sparse ranks (no representatives)."""
    out = {}
    for p in cc.degrees():
        out[p] = cc.dim(p) - cc.rank(p) - cc.rank(p + 1)
    return out


def homology(cc: ChainComplex, *, check: bool = True, prefer: dict[int, list[np.ndarray]] | None = None) -> HomologyResult:
    """Homology with deterministic representatives.

    Boundaries are spanned by the pivot columns of the incoming differential;
    representatives extend them inside the cycles, trying any ``prefer``
    vectors of a degree before the null-space basis.
    """
    if check:
        cc.check()
    f = cc.field
    out = {}
    for p in cc.degrees():
        n = cc.dim(p)
        d_out = cc.boundary(p).to_dense(f)
        d_in = cc.boundary(p + 1).to_dense(f)
        if d_in.shape[1]:
            bcols = pivot_columns(d_in, f)
            boundary = [d_in[:, j].copy() for j in bcols]
        else:
            boundary = []
        if d_out.shape[0]:
            cycles = nullspace(d_out, f)
        else:
            eye = f.identity(n)
            cycles = [eye[:, j].copy() for j in range(n)]
        cand = []
        for v in (prefer or {}).get(p, []):
            if d_out.shape[0] == 0 or all(x == 0 for x in f.matmul(d_out, v.reshape(-1, 1))[:, 0]):
                cand.append(v)
        cand.extend(cycles)
        chosen = extend_basis(boundary, cand, n, f) if n else []
        reps = [cand[j] for j in chosen]
        out[p] = HomologyDegree(p, len(reps), reps, boundary, cycles, f)
    return HomologyResult(out)


def reduced_poset_homology(poset: FinitePoset, field=QQ) -> dict[int, int]:
    """Reduced homology dimensions of the flag complex of ``poset``."""
    return homology_dims(chain_complex(flag_complex(poset), field, reduced=True))


def nonzero_dims(dims: dict[int, int]) -> dict[int, int]:
    return {p: d for p, d in dims.items() if d}
