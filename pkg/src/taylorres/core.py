"""Exponent vectors, generator sets, and the abstract factor algebra.

A generator is never expanded into the polynomial ring.  It is recorded as an
exponent vector over a fixed alphabet of irreducible factors, so the ideal is
seen through its "monomial avatar" in ``k[y_1, ..., y_r]``.  Exponent vectors
are plain tuples of non-negative ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    AlphabetError,
    DomainError,
    DuplicationError,
    MinimalityError,
    RealizationError,
    TightnessError,
)
from .fields import QQ

Exponents = tuple[int, ...]


def _same_length(a: Exponents, b: Exponents) -> None:
    if len(a) != len(b):
        raise AlphabetError(f"exponent vectors of lengths {len(a)} and {len(b)}")


def join(a: Exponents, b: Exponents) -> Exponents:
    """Least common multiple: componentwise maximum."""
    _same_length(a, b)
    return tuple(x if x >= y else y for x, y in zip(a, b))


def meet(a: Exponents, b: Exponents) -> Exponents:
    """Greatest common divisor: componentwise minimum."""
    _same_length(a, b)
    return tuple(x if x <= y else y for x, y in zip(a, b))


def divides(a: Exponents, b: Exponents) -> bool:
    _same_length(a, b)
    return all(x <= y for x, y in zip(a, b))


def strictly_divides(a: Exponents, b: Exponents) -> bool:
    return a != b and divides(a, b)


def quotient(q: Exponents, p: Exponents) -> Exponents:
    """``q / p``; raises :class:`DomainError` unless ``p`` divides ``q``."""
    _same_length(q, p)
    out = tuple(x - y for x, y in zip(q, p))
    if any(v < 0 for v in out):
        raise DomainError(f"{p} does not divide {q}")
    return out


def multiply(a: Exponents, b: Exponents) -> Exponents:
    _same_length(a, b)
    return tuple(x + y for x, y in zip(a, b))


def support(a: Exponents) -> frozenset[int]:
    return frozenset(i for i, x in enumerate(a) if x)


def join_all(vectors: Iterable[Exponents], r: int) -> Exponents:
    out = (0,) * r
    for v in vectors:
        out = join(out, v)
    return out


def mask_members(mask: int) -> tuple[int, ...]:
    """0-based indices of the set bits of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def members_mask(members: Iterable[int]) -> int:
    mask = 0
    for i in members:
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class FactorAlphabet:
    """Names of the irreducible factors, in their fixed order."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise AlphabetError("alphabet must contain at least one factor")
        if len(set(self.labels)) != len(self.labels):
            raise AlphabetError(f"duplicate factor labels in {self.labels}")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise AlphabetError(f"unknown factor {label!r}") from None

    def monomial(self, exps: Exponents) -> str:
        """Render an exponent vector as ``x^2*y`` (``1`` for the zero vector)."""
        if len(exps) != self.size:
            raise AlphabetError(f"expected {self.size} exponents, got {len(exps)}")
        parts = []
        for lab, e in zip(self.labels, exps):
            if e == 1:
                parts.append(lab)
            elif e > 1:
                parts.append(f"{lab}^{e}")
        return "*".join(parts) if parts else "1"

    def parse_monomial(self, text: str) -> Exponents:
        """Inverse of :meth:`monomial`; also accepts space-separated tokens."""
        exps = [0] * self.size
        text = text.strip()
        if text in ("", "1"):
            return tuple(exps)
        for tok in text.replace("*", " ").split():
            lab, _, pw = tok.partition("^")
            exps[self.index(lab)] += int(pw) if pw else 1
        return tuple(exps)


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generators of the ideal as exponent vectors.

    The order is the one used for every sign downstream.  Construction does
    not validate; call :func:`validate` (or :meth:`checked`).
    """

    alphabet: FactorAlphabet
    gens: tuple[Exponents, ...]
    names: tuple[str, ...] = dc_field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(tuple(int(x) for x in g) for g in self.gens))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"G{i + 1}" for i in range(len(self.gens))))
        else:
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def m(self) -> int:
        return len(self.gens)

    @property
    def r(self) -> int:
        return self.alphabet.size

    def lcm(self, mask: int) -> Exponents:
        return join_all((self.gens[i] for i in mask_members(mask)), self.r)

    def checked(self) -> "GeneratorSet":
        return validate(self)

    @classmethod
    def from_exponents(cls, gens: Iterable[Iterable[int]], labels: Iterable[str] | None = None) -> "GeneratorSet":
        gens = [tuple(g) for g in gens]
        if labels is None:
            r = len(gens[0]) if gens else 0
            labels = [f"y{i + 1}" for i in range(r)]
        return cls(FactorAlphabet(tuple(labels)), tuple(gens))

    @classmethod
    def from_monomials(cls, labels: Iterable[str], monomials: Iterable[str]) -> "GeneratorSet":
        """Convenience constructor, e.g. ``from_monomials("xyzuv", ["x y", "x z"])``."""
        alpha = FactorAlphabet(tuple(labels))
        return cls(alpha, tuple(alpha.parse_monomial(t) for t in monomials))

    def is_squarefree(self) -> bool:
        return all(x <= 1 for g in self.gens for x in g)

    def monomial_strings(self) -> list[str]:
        return [self.alphabet.monomial(g) for g in self.gens]


def validate(gs: GeneratorSet) -> GeneratorSet:
    """Return ``gs`` unchanged if the generators are minimal, distinct and tight."""
    r = gs.alphabet.size
    if gs.m == 0:
        raise DomainError("at least one generator is required")
    for i, g in enumerate(gs.gens):
        if len(g) != r:
            raise AlphabetError(f"generator {gs.names[i]} has {len(g)} exponents, alphabet has {r}")
        if any(x < 0 for x in g):
            raise DomainError(f"generator {gs.names[i]} has a negative exponent")
        if not any(g):
            raise DomainError(f"generator {gs.names[i]} is a unit")
    for i, j in itertools.combinations(range(gs.m), 2):
        a, b = gs.gens[i], gs.gens[j]
        if a == b:
            raise DuplicationError(f"generators {gs.names[i]} and {gs.names[j]} coincide")
        if divides(a, b) or divides(b, a):
            lo, hi = (i, j) if divides(a, b) else (j, i)
            raise MinimalityError(f"generator {gs.names[lo]} divides {gs.names[hi]}")
    unused = [gs.alphabet.labels[k] for k in range(r) if all(g[k] == 0 for g in gs.gens)]
    if unused:
        raise TightnessError(f"factors {unused} occur in no generator")
    return gs


@dataclass(frozen=True)
class LinearRealization:
    """Each factor as an exact linear form: row ``i`` holds its coefficients."""

    matrix: tuple[tuple[Fraction | int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(QQ.coerce(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if not rows:
            raise RealizationError("empty realization")
        n = len(rows[0])
        if n == 0 or any(len(row) != n for row in rows):
            raise RealizationError("realization rows must have equal positive length")
        for i, row in enumerate(rows):
            if not any(row):
                raise RealizationError(f"row {i + 1} of the realization is zero")
        for i, j in itertools.combinations(range(len(rows)), 2):
            if self.rank((i, j)) < 2:
                raise RealizationError(f"rows {i + 1} and {j + 1} of the realization are proportional")

    @property
    def r(self) -> int:
        return len(self.matrix)

    @property
    def n(self) -> int:
        return len(self.matrix[0])

    def rank(self, rows: Iterable[int]) -> int:
        rows = list(rows)
        if not rows:
            return 0
        return QQ.rank(QQ.matrix([self.matrix[i] for i in rows]))

    def is_generic(self) -> bool:
        """Every set of at most ``n`` rows is linearly independent."""
        k = min(self.n, self.r)
        return all(self.rank(c) == k for c in itertools.combinations(range(self.r), k))


class MonomialCombo:
    """Element of the factor algebra ``k[y_1..y_r]``: ``{exponents: coeff}``.

    Immutable; zero coefficients are never stored, the empty map is 0.
    """

    __slots__ = ("terms", "field", "_hash")

    def __init__(self, terms: Mapping[Exponents, object] | None = None, field=QQ):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = field.coerce(c)
                if c != 0:
                    clean[tuple(e)] = c
        self.terms = clean
        self.field = field
        self._hash = None

    @classmethod
    def monomial(cls, exps: Exponents, coeff=1, field=QQ) -> "MonomialCombo":
        return cls({tuple(exps): coeff}, field)

    @classmethod
    def zero(cls, field=QQ) -> "MonomialCombo":
        return cls({}, field)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MonomialCombo):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"MonomialCombo({self.terms!r})"

    def _coerce_other(self, other) -> "MonomialCombo":
        if isinstance(other, MonomialCombo):
            return other
        if not self.terms:
            r = 0
        else:
            r = len(next(iter(self.terms)))
        return MonomialCombo({(0,) * r: other}, self.field)

    def __add__(self, other):
        other = self._coerce_other(other)
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = f.add(out[e], c)
                if s != 0:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return _raw(out, f)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return _raw({e: f.neg(c) for e, c in self.terms.items()}, f)

    def __sub__(self, other):
        return self + (-self._coerce_other(other))

    def __mul__(self, other):
        f = self.field
        if not isinstance(other, MonomialCombo):
            c = f.coerce(other)
            if c == 0:
                return _raw({}, f)
            return _raw({e: f.mul(v, c) for e, v in self.terms.items()}, f)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                t = f.mul(c1, c2)
                if e in out:
                    s = f.add(out[e], t)
                    if s != 0:
                        out[e] = s
                    else:
                        del out[e]
                else:
                    out[e] = t
        return _raw(out, f)

    __rmul__ = __mul__

    def shift(self, exps: Exponents) -> "MonomialCombo":
        """Multiply by the monomial ``y^exps``."""
        return _raw({tuple(x + y for x, y in zip(e, exps)): c for e, c in self.terms.items()}, self.field)

    def constant_term(self):
        for e, c in self.terms.items():
            if not any(e):
                return c
        return self.field.zero

    def evaluate(self, point) -> object:
        """Value at ``y_i = point[i]`` in the coefficient field."""
        f = self.field
        total = f.zero
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = f.mul(t, x if k == 1 else _fpow(f, x, k))
            total = f.add(total, t)
        return total

    def sorted_terms(self) -> list[tuple[Exponents, object]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def format(self, alphabet: FactorAlphabet) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            cs = self.field.format(c)
            mono = alphabet.monomial(e)
            if mono == "1":
                body = cs
            elif cs == "1":
                body = mono
            elif cs == "-1":
                body = "-" + mono
            else:
                body = f"{cs}*{mono}"
            pieces.append(body)
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _fpow(field, x, k: int):
    out = field.one
    for _ in range(k):
        out = field.mul(out, x)
    return out


def _raw(terms: dict, field) -> MonomialCombo:
    obj = MonomialCombo.__new__(MonomialCombo)
    obj.terms = terms
    obj.field = field
    obj._hash = None
    return obj
