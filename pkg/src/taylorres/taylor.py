"""Taylor complex, fiber complexes, evaluation complexes and Betti numbers.

Generator subsets are bitmasks over the generator order; within one
homological degree they are listed in ascending integer order.  The sign of
removing generator ``i`` from ``tau`` is ``(-1)**eps(tau, i)`` with ``eps`` the
number of members of ``tau`` below ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import Exponents, GeneratorSet, MonomialCombo, meet, quotient
from .errors import SaturationError
from .fields import QQ
from .homology import ChainComplex, homology, homology_dims, reduced_poset_homology
from .lattice import LcmLattice, project
from .linalg import SparseMatrix


def eps(mask: int, i: int) -> int:
    return (mask & ((1 << i) - 1)).bit_count()


def shuffle_sign(sigma: int, tau: int) -> int:
    """``+1``/``-1``: parity of sorting ``sigma`` followed by ``tau`` into order."""
    inv = 0
    t = tau
    while t:
        low = t & -t
        inv += (sigma & ~((low << 1) - 1)).bit_count()
        t ^= low
    return -1 if inv % 2 else 1


def subsets_by_degree(m: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(m + 1)]
    for mask in range(1 << m):
        out[mask.bit_count()].append(mask)
    return out


def faces(mask: int):
    """``(i, face, sign)`` for every generator ``i`` in ``mask``."""
    t = mask
    while t:
        low = t & -t
        i = low.bit_length() - 1
        yield i, mask ^ low, (-1 if eps(mask, i) % 2 else 1)
        t ^= low


@dataclass
class SModuleComplex:
    """Free complex over ``k[y]`` with basis labelled by generator subsets."""

    gens: GeneratorSet
    field: object
    bases: list[list[int]]
    multidegrees: list[list[Exponents]]
    boundaries: dict[int, SparseMatrix]

    def boundary(self, p: int) -> SparseMatrix:
        return self.boundaries.get(p, SparseMatrix(len(self.bases[p - 1]) if p >= 1 else 0, len(self.bases[p])))

    def check(self) -> bool:
        for p in range(2, len(self.bases)):
            if not self.boundaries[p - 1].compose(self.boundaries[p]).is_zero():
                return False
        return True

    def d(self, element: dict[int, MonomialCombo]) -> dict[int, MonomialCombo]:
        return taylor_boundary(self.gens, element)


def taylor_boundary(gens: GeneratorSet, element: dict[int, MonomialCombo]) -> dict[int, MonomialCombo]:
    """Taylor differential of ``{mask: coeff}`` over ``k[y]``."""
    out: dict[int, MonomialCombo] = {}
    for mask, c in element.items():
        q = gens.lcm(mask)
        for _, face, sign in faces(mask):
            t = c.shift(quotient(q, gens.lcm(face))) * sign
            out[face] = out[face] + t if face in out else t
    return {k: v for k, v in out.items() if v}


def taylor_complex(gens: GeneratorSet, field=QQ) -> SModuleComplex:
    m = gens.m
    bases = subsets_by_degree(m)
    lcms = [gens.lcm(mask) for mask in range(1 << m)]
    mdeg = [[lcms[s] for s in b] for b in bases]
    index = [{s: i for i, s in enumerate(b)} for b in bases]
    bds = {}
    for p in range(1, m + 1):
        cols = []
        for tau in bases[p]:
            col = {}
            for _, sigma, sign in faces(tau):
                col[index[p - 1][sigma]] = MonomialCombo.monomial(quotient(lcms[tau], lcms[sigma]), sign, field)
            cols.append(col)
        bds[p] = SparseMatrix(len(bases[p - 1]), len(bases[p]), cols)
    return SModuleComplex(gens, field, bases, mdeg, bds)


def taylor_product(gens: GeneratorSet, sigma: int, tau: int, field=QQ) -> tuple[MonomialCombo, int]:
    """``sigma * tau`` as ``(coefficient, union)``; the coefficient is 0 on overlap."""
    if sigma & tau:
        return MonomialCombo.zero(field), 0
    g = meet(gens.lcm(sigma), gens.lcm(tau))
    return MonomialCombo.monomial(g, shuffle_sign(sigma, tau), field), sigma | tau


def taylor_multiply(gens: GeneratorSet, u: dict, v: dict, field=QQ) -> dict[int, MonomialCombo]:
    """Bilinear extension of :func:`taylor_product` to ``{mask: coeff}`` elements."""
    out: dict[int, MonomialCombo] = {}
    for s, a in u.items():
        for t, b in v.items():
            c, w = taylor_product(gens, s, t, field)
            if c:
                term = c * a * b
                out[w] = out[w] + term if w in out else term
    return {k: x for k, x in out.items() if x}


# -- field complexes -------------------------------------------------------------


def subset_complex(masks_by_degree: dict[int, list[int]], keep, field) -> ChainComplex:
    """Complex on the given subsets with boundary terms filtered by ``keep(tau, sigma)``."""
    bases = {p: tuple(b) for p, b in sorted(masks_by_degree.items())}
    if bases:
        lo, hi = min(bases), max(bases)
        for p in range(lo, hi + 1):
            bases.setdefault(p, ())
    index = {p: {s: i for i, s in enumerate(b)} for p, b in bases.items()}
    minus_one = field.neg(field.one)
    bds = {}
    for p in sorted(bases):
        if p - 1 not in bases:
            continue
        rows = index[p - 1]
        cols = []
        for tau in bases[p]:
            col = {}
            for _, sigma, sign in faces(tau):
                if sigma in rows and keep(tau, sigma):
                    col[rows[sigma]] = field.one if sign > 0 else minus_one
            cols.append(col)
        bds[p] = SparseMatrix(len(bases[p - 1]), len(bases[p]), cols)
    return ChainComplex(field, bases, bds)


@dataclass
class FiberComplex:
    """``K(Q)``: subsets with lcm ``Q``, boundary keeping faces with the same lcm."""

    q: int
    element: Exponents
    complex: ChainComplex

    def basis(self, p: int) -> tuple[int, ...]:
        return self.complex.bases.get(p, ())


def fiber_complex(lat: LcmLattice, q, field=QQ) -> FiberComplex:
    q = lat.resolve(q)
    ids = lat.subset_ids()
    fib = lat.fiber(q)
    cx = subset_complex(fib.by_degree(), lambda tau, sigma: ids[sigma] == q, field)
    return FiberComplex(q, lat.elements[q], cx)


@dataclass
class EvaluationComplex:
    """The Taylor complex specialised at a point whose vanishing factors are ``G``.

    Entries survive exactly when the monomial quotient avoids ``G``, so the
    complex splits into blocks indexed by the projection ``P`` of ``Q_sigma``.
    """

    lattice: LcmLattice
    G: frozenset
    complex: ChainComplex
    block_of: dict[int, Exponents]

    def blocks(self) -> dict[Exponents, list[int]]:
        out: dict[Exponents, list[int]] = {}
        for mask, P in sorted(self.block_of.items()):
            out.setdefault(P, []).append(mask)
        return out

    def projections(self) -> list[Exponents]:
        return sorted(self.blocks(), key=lambda e: (sum(e), e))

    def block_complex(self, P: Exponents, relation: str = "eq") -> ChainComplex:
        """``K_{G,P}`` (``eq``), or the subcomplexes ``K_{G,<=P}`` (``le``), ``K_{G,<P}`` (``lt``)
        of the unevaluated simplex complex."""
        P = tuple(P)
        f = self.complex.field
        if relation == "eq":
            sel = [s for s, b in self.block_of.items() if b == P]
            keep = lambda tau, sigma: self.block_of[sigma] == P  # noqa: E731
        elif relation in ("le", "lt"):
            strict = relation == "lt"
            sel = [
                s
                for s, b in self.block_of.items()
                if all(x <= y for x, y in zip(b, P)) and (not strict or b != P)
            ]
            keep = lambda tau, sigma: True  # noqa: E731
        else:
            raise ValueError(f"unknown relation {relation!r}")
        by_deg: dict[int, list[int]] = {}
        for s in sorted(sel):
            by_deg.setdefault(s.bit_count(), []).append(s)
        return subset_complex(by_deg, keep, f)

    def block_dims(self) -> dict[Exponents, dict[int, int]]:
        out = {}
        for P, masks in self.blocks().items():
            d: dict[int, int] = {}
            for s in masks:
                d[s.bit_count()] = d.get(s.bit_count(), 0) + 1
            out[P] = d
        return out


def evaluation_complex(lat: LcmLattice, G: Iterable[int], field=QQ, *, saturated=None) -> EvaluationComplex:
    """Combinatorial evaluation of the Taylor complex at a point vanishing on ``G``.

    ``saturated``, when given, is the collection of admissible factor sets.
    """
    G = frozenset(G)
    if saturated is not None and G not in {frozenset(s) for s in saturated}:
        raise SaturationError(f"factor set {sorted(G)} is not saturated")
    m = lat.gens.m
    ids = lat.subset_ids()
    block_of = {mask: project(lat.elements[ids[mask]], G) for mask in range(1 << m)}
    by_deg = {p: b for p, b in enumerate(subsets_by_degree(m))}
    cx = subset_complex(by_deg, lambda tau, sigma: block_of[tau] == block_of[sigma], field)
    return EvaluationComplex(lat, G, cx, block_of)


def evaluation_identity_sides(lat: LcmLattice, G: Iterable[int], field=QQ) -> tuple[list[int], list[int]]:
    """Both sides of ``dim H_p(K(G)) = sum_P dim H~_{p-2}(D(G,<P))`` for ``p = 0..m``.

    The summand for the bottom projection ``P = 1`` is the homology of the
    augmented simplex on the generators avoiding ``G``: the field in degree 0
    when there are none, zero otherwise.
    """
    G = frozenset(G)
    m = lat.gens.m
    ev = evaluation_complex(lat, G, field)
    lhs_d = homology_dims(ev.complex)
    lhs = [lhs_d.get(p, 0) for p in range(m + 1)]
    rhs = [0] * (m + 1)
    bottom = (0,) * lat.gens.r
    for P in lat.projection_image(G):
        if P == bottom:
            if all(project(g, G) != bottom for g in lat.gens.gens):
                rhs[0] += 1
            continue
        dims = reduced_poset_homology(lat.strict_sublevel(G, P), field)
        for q, d in dims.items():
            if 0 <= q + 2 <= m:
                rhs[q + 2] += d
    return lhs, rhs


# -- Betti numbers ------------------------------------------------------------------


def _trim(b: list[int]) -> list[int]:
    while len(b) > 1 and b[-1] == 0:
        b.pop()
    return b


def betti_from_lattice(lat: LcmLattice, field=QQ) -> list[int]:
    """``b_0 = 1`` and ``b_p = sum_{Q != 1} dim H~_{p-2}(D_{<Q})``."""
    m = lat.gens.m
    b = [0] * (m + 1)
    b[0] = 1
    for q in range(1, len(lat)):
        for deg, d in reduced_poset_homology(lat.lower_interval(q), field).items():
            if d and 0 <= deg + 2 <= m:
                b[deg + 2] += d
    return _trim(b)


def betti_from_fibers(lat: LcmLattice, field=QQ) -> list[int]:
    """``b_p = sum_Q dim H_p(K(Q))`` with the fiber complexes graded by subset size."""
    m = lat.gens.m
    b = [0] * (m + 1)
    for q in range(len(lat)):
        for p, d in homology_dims(fiber_complex(lat, q, field).complex).items():
            b[p] += d
    return _trim(b)


def betti_from_evaluation(lat: LcmLattice, field=QQ) -> list[int]:
    """Homology of the Taylor complex tensored down to the field (all factors vanish)."""
    m = lat.gens.m
    ev = evaluation_complex(lat, range(lat.gens.r), field)
    dims = homology_dims(ev.complex)
    return _trim([dims.get(p, 0) for p in range(m + 1)])


def betti_numbers(lat: LcmLattice, field=QQ, route: str = "lattice") -> list[int]:
    routes = {
        "lattice": betti_from_lattice,
        "fibers": betti_from_fibers,
        "evaluation": betti_from_evaluation,
    }
    try:
        return routes[route](lat, field)
    except KeyError:
        raise ValueError(f"unknown Betti route {route!r}") from None


def fiber_homology(lat: LcmLattice, q, field=QQ, prefer=None):
    return homology(fiber_complex(lat, q, field).complex, prefer=prefer)
