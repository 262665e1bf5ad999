"""Input parsing and JSON-ready serialization.

Generator file grammar::

    alphabet: x y z u v
    G1 = x^1 y      # caret powers, exponent 1 optional
    G2 = x z
    realize x = 1 0 0   # optional, one row per factor

Depth table grammar: one ``labels = depth`` line per saturated set, with
``{}`` standing for the empty set.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .core import FactorAlphabet, GeneratorSet, LinearRealization, MonomialCombo, validate
from .errors import FieldError, InputSyntaxError, LatticeError, RealizationError
from .fields import QQ
from .linalg import SparseMatrix

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_POWER = re.compile(r"([A-Za-z_][A-Za-z0-9_']*)(?:\^(\d+))?$")


@dataclass
class ParsedInput:
    gens: GeneratorSet
    realization: LinearRealization | None = None


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _tokens(text: str, offset: int):
    """``(token, column)`` pairs, 1-based columns relative to the line."""
    for m in re.finditer(r"\S+", text):
        yield m.group(0), offset + m.start() + 1


def _parse_monomial(alpha: FactorAlphabet, text: str, offset: int, lineno: int) -> tuple[int, ...]:
    exps = [0] * alpha.size
    toks = list(_tokens(text, offset))
    if not toks:
        raise InputSyntaxError("empty generator", lineno, offset + 1)
    if len(toks) == 1 and toks[0][0] == "1":
        return tuple(exps)
    for tok, col in toks:
        for part in tok.split("*"):
            if not part:
                raise InputSyntaxError(f"malformed factor token {tok!r}", lineno, col)
            m = _POWER.match(part)
            if not m:
                raise InputSyntaxError(f"malformed factor token {part!r}", lineno, col)
            lab, pw = m.group(1), m.group(2)
            if lab not in alpha.labels:
                raise InputSyntaxError(f"unknown factor {lab!r}", lineno, col)
            exps[alpha.labels.index(lab)] += int(pw) if pw is not None else 1
    return tuple(exps)


def parse_generators(text: str, *, check: bool = True) -> ParsedInput:
    alpha = None
    names, gens = [], []
    rows: dict[str, tuple[list, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if re.match(r"alphabet\s*:", body):
            if alpha is not None:
                raise InputSyntaxError("alphabet declared twice", lineno, indent + 1)
            colon = line.index(":")
            labels = []
            for tok, col in _tokens(line[colon + 1 :], colon + 1):
                if not _NAME.fullmatch(tok):
                    raise InputSyntaxError(f"invalid factor name {tok!r}", lineno, col)
                if tok in labels:
                    raise InputSyntaxError(f"duplicate factor name {tok!r} in alphabet", lineno, col)
                labels.append(tok)
            if not labels:
                raise InputSyntaxError("alphabet is empty", lineno, colon + 2)
            alpha = FactorAlphabet(tuple(labels))
            continue
        if alpha is None:
            raise InputSyntaxError("the first line must declare the alphabet", lineno, indent + 1)
        if "=" not in line:
            raise InputSyntaxError("expected '='", lineno, len(line) + 1)
        eq = line.index("=")
        lhs = line[:eq].split()
        if lhs and lhs[0] == "realize":
            if len(lhs) != 2:
                raise InputSyntaxError("expected 'realize <factor> = <coefficients>'", lineno, indent + 1)
            lab = lhs[1]
            if lab not in alpha.labels:
                raise InputSyntaxError(f"unknown factor {lab!r}", lineno, line.index(lab, indent + 7) + 1)
            if lab in rows:
                raise InputSyntaxError(f"factor {lab!r} realized twice", lineno, indent + 1)
            coeffs = []
            for tok, col in _tokens(line[eq + 1 :], eq + 1):
                try:
                    coeffs.append(QQ.coerce(tok))
                except FieldError:
                    raise InputSyntaxError(f"invalid rational {tok!r}", lineno, col) from None
            if not coeffs:
                raise InputSyntaxError("realization row is empty", lineno, eq + 2)
            rows[lab] = (coeffs, lineno)
            continue
        if len(lhs) != 1 or not _NAME.fullmatch(lhs[0]):
            raise InputSyntaxError("expected '<name> = <monomial>'", lineno, indent + 1)
        if lhs[0] in names:
            raise InputSyntaxError(f"generator name {lhs[0]!r} used twice", lineno, indent + 1)
        names.append(lhs[0])
        gens.append(_parse_monomial(alpha, line[eq + 1 :], eq + 1, lineno))
    if alpha is None:
        raise InputSyntaxError("missing alphabet line", 1, 1)
    gs = GeneratorSet(alpha, tuple(gens), tuple(names))
    if check:
        validate(gs)
    realization = None
    if rows:
        missing = [lab for lab in alpha.labels if lab not in rows]
        if missing:
            raise RealizationError(f"factors {missing} have no realization row")
        widths = {len(rows[lab][0]) for lab in alpha.labels}
        if len(widths) != 1:
            raise RealizationError("realization rows have different lengths")
        realization = LinearRealization(tuple(tuple(rows[lab][0]) for lab in alpha.labels))
    return ParsedInput(gs, realization)


def read_generators(path, *, check: bool = True) -> ParsedInput:
    return parse_generators(Path(path).read_text(encoding="utf-8"), check=check)


def parse_depth_table(text: str, alpha: FactorAlphabet) -> dict[frozenset, int]:
    table: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if "=" not in line:
            raise InputSyntaxError("expected '<factors> = <depth>'", lineno, len(line) + 1)
        eq = line.index("=")
        members = set()
        for tok, col in _tokens(line[:eq], 0):
            if tok == "{}":
                continue
            if tok not in alpha.labels:
                raise InputSyntaxError(f"unknown factor {tok!r}", lineno, col)
            members.add(alpha.labels.index(tok))
        val = line[eq + 1 :].strip()
        if not val.isdigit():
            raise InputSyntaxError(f"depth must be a non-negative integer, got {val!r}", lineno, eq + 2)
        key = frozenset(members)
        if key in table:
            raise InputSyntaxError("set listed twice", lineno, 1)
        table[key] = int(val)
    return table


def read_depth_table(path, alpha: FactorAlphabet) -> dict[frozenset, int]:
    return parse_depth_table(Path(path).read_text(encoding="utf-8"), alpha)


def read_lattice(path):
    from .tor import GradedLattice

    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputSyntaxError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise LatticeError("lattice file must hold a JSON object")
    return GradedLattice.from_dict(data)


# -- serialization --------------------------------------------------------------


def members(mask: int) -> list[int]:
    """1-based generator indices of a bitmask."""
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def scalar(field, c) -> str:
    return field.format(c)


def combo(c: MonomialCombo) -> list:
    return [[c.field.format(v), list(e)] for e, v in c.sorted_terms()]


def combo_matrix(mat: SparseMatrix) -> list:
    return [[i, j, combo(v)] for i, j, v in mat.triplets()]


def field_vector(vec: dict[int, object], field) -> list:
    return [[members(s), field.format(c)] for s, c in sorted(vec.items())]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
