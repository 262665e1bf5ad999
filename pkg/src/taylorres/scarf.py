"""Scarf subcomplex and the criteria for it to be the minimal resolution."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fields import QQ
from .homology import homology_dims
from .lattice import Fiber, LcmLattice
from .taylor import betti_from_lattice, fiber_complex


def scarf_complex(lat: LcmLattice) -> dict[int, list[int]]:
    """Subsets with a singleton fiber, grouped by size (ascending masks)."""
    out: dict[int, list[int]] = {p: [] for p in range(lat.gens.m + 1)}
    for fib in lat.fibers().values():
        if len(fib) == 1:
            s = fib.sets[0]
            out[s.bit_count()].append(s)
    for p in out:
        out[p].sort()
    while len(out) > 1 and not out[max(out)]:
        del out[max(out)]
    return out


def scarf_sizes(lat: LcmLattice) -> list[int]:
    sc = scarf_complex(lat)
    return [len(sc[p]) for p in sorted(sc)]


def minimal_elements(fib: Fiber) -> list[int]:
    """Inclusion-minimal subsets of a fiber."""
    sets = fib.sets
    return [s for s in sets if not any(t != s and t & s == t for t in sets)]


def fiber_is_exact(lat: LcmLattice, q, field=QQ) -> bool:
    return not any(homology_dims(fiber_complex(lat, q, field).complex).values())


def coincidence_test(lat: LcmLattice, field=QQ) -> bool:
    """Every fiber is a singleton or has an exact fiber complex."""
    return all(len(fib) == 1 or fiber_is_exact(lat, q, field) for q, fib in lat.fibers().items())


def genericity_test(lat_or_gens) -> bool:
    """No factor has the same nonzero exponent in two generators."""
    gens = lat_or_gens.gens if isinstance(lat_or_gens, LcmLattice) else lat_or_gens
    vecs = gens.gens
    for i, j in itertools.combinations(range(len(vecs)), 2):
        if any(a == b and a > 0 for a, b in zip(vecs[i], vecs[j])):
            return False
    return True


def fiber_is_boolean(fib: Fiber) -> bool:
    """Unique minimal element, equivalently the common intersection lies in the fiber."""
    meet = fib.sets[0]
    for s in fib.sets[1:]:
        meet &= s
    return meet in set(fib.sets)


def shape_tests(lat: LcmLattice) -> tuple[bool, bool]:
    fibers = list(lat.fibers().values())
    boolean = all(fiber_is_boolean(f) for f in fibers)
    closed = True
    for f in fibers:
        members = set(f.sets)
        if any(a & b not in members for a, b in itertools.combinations(f.sets, 2)):
            closed = False
            break
    return boolean, closed


@dataclass
class ScarfReport:
    scarf_basis: dict[int, list[int]]
    is_generic: bool
    coincides: bool
    all_fibers_boolean: bool
    intersection_condition: bool
    betti: list[int]

    @property
    def sizes(self) -> list[int]:
        return [len(self.scarf_basis[p]) for p in sorted(self.scarf_basis)]

    def as_dict(self) -> dict:
        return {
            "scarf_basis": {
                str(p): [[i + 1 for i in range(s.bit_length()) if s >> i & 1] for s in masks]
                for p, masks in sorted(self.scarf_basis.items())
            },
            "scarf_sizes": self.sizes,
            "betti": list(self.betti),
            "is_generic": self.is_generic,
            "coincides": self.coincides,
            "all_fibers_boolean": self.all_fibers_boolean,
            "intersection_condition": self.intersection_condition,
        }


def scarf_report(lat: LcmLattice, field=QQ) -> ScarfReport:
    boolean, closed = shape_tests(lat)
    return ScarfReport(
        scarf_complex(lat),
        genericity_test(lat),
        coincidence_test(lat, field),
        boolean,
        closed,
        betti_from_lattice(lat, field),
    )
