"""Decide whether the Taylor complex is a resolution.

The criterion: for every nonempty saturated factor set ``G`` and every
``P`` in the projection of the lattice onto ``G``, the reduced homology of
``D(G,<P)`` vanishes in degrees ``p >= depth(G) - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .core import GeneratorSet, LinearRealization, support
from .errors import DomainError, IncompleteOracleError, RealizationError
from .fields import QQ
from .homology import reduced_poset_homology
from .lattice import LcmLattice, is_flat, saturated_sets
from .taylor import betti_from_lattice

MODES = ("monomial", "linear", "table")


@dataclass
class DepthOracle:
    """Depth of the ideal generated by a factor set, per input mode."""

    mode: str = "monomial"
    realization: LinearRealization | None = None
    table: Mapping[frozenset, int] | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.mode == "linear" and self.realization is None:
            raise RealizationError("linear mode needs a realization block")
        if self.mode == "table":
            if self.table is None:
                raise IncompleteOracleError("table mode needs a depth table")
            self.table = {frozenset(k): int(v) for k, v in self.table.items()}
            for k, v in self.table.items():
                if k and v < 1:
                    raise IncompleteOracleError(f"depth of nonempty set {sorted(k)} must be at least 1")

    def depth(self, G) -> int:
        G = frozenset(G)
        if self.mode == "monomial":
            return len(G)
        if self.mode == "linear":
            return self.realization.rank(sorted(G))
        try:
            return self.table[G]
        except KeyError:
            raise IncompleteOracleError(f"depth table has no entry for {sorted(G)}") from None

    def saturated(self, gens: GeneratorSet) -> list[frozenset]:
        out = saturated_sets(gens, self.mode, realization=self.realization, table=self.table)
        if self.mode == "table":
            full = frozenset(range(gens.r))
            if full not in set(out):
                raise IncompleteOracleError("depth table must contain the full factor set")
            for G in out:
                if any(i >= gens.r or i < 0 for i in G):
                    raise IncompleteOracleError(f"depth table key {sorted(G)} is outside the alphabet")
        return out


@dataclass(frozen=True)
class Witness:
    G: frozenset
    P: tuple
    p: int
    dim: int

    def as_dict(self) -> dict:
        return {"G": sorted(self.G), "P": list(self.P), "p": self.p, "dim": self.dim}


@dataclass
class AcyclicityCertificate:
    verdict: bool
    witness: Witness | None = None
    checked_pairs: int = 0
    fast_path_hits: dict[str, int] = dc_field(default_factory=dict)
    mode: str = "monomial"

    @property
    def passed(self) -> bool:
        return self.verdict

    def as_dict(self) -> dict:
        return {
            "verdict": "pass" if self.verdict else "fail",
            "witness": self.witness.as_dict() if self.witness else None,
            "checked_pairs": self.checked_pairs,
            "fast_path_hits": dict(sorted(self.fast_path_hits.items())),
            "mode": self.mode,
        }


def fast_coatomic_bound(depth: int, P) -> str:
    """``"skip"`` when ``depth - 1 >= |supp P| - 1``, where vanishing is automatic."""
    return "skip" if depth >= len(support(P)) else "unknown"


def _first_violation(poset, threshold: int, field) -> tuple[int, int] | None:
    dims = reduced_poset_homology(poset, field)
    for p in sorted(dims):
        if p >= threshold and dims[p]:
            return p, dims[p]
    return None


def sufficient_squarefree_test(gens: GeneratorSet, realization: LinearRealization) -> str:
    """``"pass"`` if every complement ``E \\ E_i`` is span-closed; else ``"unknown"``."""
    if not gens.is_squarefree():
        return "unknown"
    full = frozenset(range(gens.r))
    for g in gens.gens:
        if not is_flat(realization, full - support(g)):
            return "unknown"
    return "pass"


@dataclass
class GenericReduction:
    verdict: bool | None
    examined: int = 0
    witness: Witness | None = None


def generic_linear_reduction(lat: LcmLattice, realization: LinearRealization, field=QQ) -> GenericReduction:
    """For a generic realization only full-rank ``P`` need ``H~_p(D_{<P}) = 0``, ``p >= n - 1``.

    ``verdict`` is ``None`` when the realization is not generic.
    """
    if not realization.is_generic():
        return GenericReduction(None)
    n = realization.n
    full = frozenset(range(lat.gens.r))
    examined = 0
    for q in range(1, len(lat)):
        P = lat.elements[q]
        if realization.rank(sorted(support(P))) < n:
            continue
        examined += 1
        bad = _first_violation(lat.lower_interval(q), n - 1, field)
        if bad:
            return GenericReduction(False, examined, Witness(full, P, bad[0], bad[1]))
    return GenericReduction(True, examined)


def avatar_comparison(lat: LcmLattice, n: int, field=QQ) -> tuple[bool, list[int]]:
    """Betti numbers of the monomial avatar and whether they vanish from ``n + 1`` on."""
    b = betti_from_lattice(lat, field)
    return all(x == 0 for x in b[n + 1 :]), b


def check(
    lat: LcmLattice,
    oracle: DepthOracle | None = None,
    *,
    fast_paths: bool = True,
    field=QQ,
) -> AcyclicityCertificate:
    oracle = oracle or DepthOracle()
    gens = lat.gens
    hits = {"coatomic": 0, "squarefree": 0, "generic": 0}
    sat = oracle.saturated(gens)

    if fast_paths and oracle.mode == "linear":
        if sufficient_squarefree_test(gens, oracle.realization) == "pass":
            hits["squarefree"] = 1
            return AcyclicityCertificate(True, None, 0, hits, oracle.mode)
        red = generic_linear_reduction(lat, oracle.realization, field)
        if red.verdict is not None:
            hits["generic"] = 1
            return AcyclicityCertificate(red.verdict, red.witness, red.examined, hits, oracle.mode)

    checked = 0
    bottom = (0,) * gens.r
    for G in sat:
        if not G:
            continue
        depth = oracle.depth(G)
        for P in lat.projection_image(G):
            if P == bottom:
                continue
            if fast_paths and fast_coatomic_bound(depth, P) == "skip":
                hits["coatomic"] += 1
                continue
            checked += 1
            bad = _first_violation(lat.strict_sublevel(G, P), depth - 1, field)
            if bad:
                return AcyclicityCertificate(False, Witness(G, P, bad[0], bad[1]), checked, hits, oracle.mode)
    return AcyclicityCertificate(True, None, checked, hits, oracle.mode)
