import json

import pytest

from conftest import FIXTURES
from taylorres.core import FactorAlphabet, MonomialCombo
from taylorres.errors import (
    InputSyntaxError,
    LatticeError,
    MinimalityError,
    RealizationError,
    TightnessError,
)
from taylorres.fields import QQ
from taylorres.io import (
    combo,
    dumps,
    field_vector,
    members,
    parse_depth_table,
    parse_generators,
    read_generators,
    read_lattice,
)


def test_zigzag_file():
    parsed = read_generators(FIXTURES / "zigzag.txt")
    assert parsed.gens.m == 4 and parsed.gens.r == 5
    assert parsed.realization is None
    assert parsed.gens.monomial_strings() == ["x*y", "x*z", "y*u", "u*v"]


def test_powers_and_stars():
    p = parse_generators("alphabet: x y\nA = x^2*y\nB = y^3 # comment\n")
    assert p.gens.gens == ((2, 1), (0, 3))
    assert p.gens.names == ("A", "B")


def test_minimality_error():
    with pytest.raises(MinimalityError):
        parse_generators("alphabet: x y\nG2 = x y\nG1 = x\n")


def test_realization_errors():
    with pytest.raises(RealizationError):
        parse_generators("alphabet: x y\nG1 = x\nG2 = y\nrealize x = 0 0\nrealize y = 0 1\n")
    with pytest.raises(RealizationError):
        parse_generators("alphabet: x y\nG1 = x\nG2 = y\nrealize x = 1 0\n")
    with pytest.raises(RealizationError):
        parse_generators("alphabet: x y\nG1 = x\nG2 = y\nrealize x = 1 0\nrealize y = 0 1 1\n")
    p = parse_generators("alphabet: x y\nG1 = x\nG2 = y\nrealize x = 1/2 0\nrealize y = 0 -3\n")
    assert p.realization.n == 2


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("G1 = x\n", 1, 1),
        ("alphabet: x y\nG1 = x\nG2 = q\n", 3, 6),
        ("alphabet: x y\nG1 x\n", 2, 5),
        ("alphabet: x y\nG1 = x^\n", 2, 6),
        ("alphabet: x y\nG1 = x\nG1 = y\n", 3, 1),
        ("alphabet: x x\n", 1, 13),
        ("alphabet: x y\n\n  G1 = x y\nrealize x = 1 a\n", 4, 15),
        ("alphabet: x y\nG1 = x\nrealize z = 1\n", 3, 9),
        ("alphabet: x y\nG1 = \n", 2, 5),
    ],
)
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(InputSyntaxError) as info:
        parse_generators(text, check=False)
    assert (info.value.line, info.value.column) == (line, column)


def test_generator_named_like_keyword():
    p = parse_generators("alphabet: x y\nrealizeA = x\nB = y\n")
    assert p.gens.names == ("realizeA", "B")


def test_validation_can_be_deferred():
    p = parse_generators("alphabet: x y z\nG1 = x\nG2 = y\n", check=False)
    with pytest.raises(TightnessError):
        p.gens.checked()


def test_depth_table():
    alpha = FactorAlphabet(("x", "y", "w"))
    t = parse_depth_table("{} = 0\nx = 1\ny=1\nw = 1\nx y w = 2  # whole set\n", alpha)
    assert t == {frozenset(): 0, frozenset({0}): 1, frozenset({1}): 1, frozenset({2}): 1, frozenset({0, 1, 2}): 2}
    with pytest.raises(InputSyntaxError):
        parse_depth_table("x = two\n", alpha)
    with pytest.raises(InputSyntaxError):
        parse_depth_table("q = 1\n", alpha)
    with pytest.raises(InputSyntaxError):
        parse_depth_table("x = 1\nx = 1\n", alpha)


def test_serializers():
    assert members(0b1011) == [1, 2, 4]
    c = MonomialCombo({(1, 0): 2, (0, 0): -1})
    assert combo(c) == [["-1", [0, 0]], ["2", [1, 0]]]
    assert field_vector({0b11: QQ.coerce("1/2")}, QQ) == [[[1, 2], "1/2"]]
    assert json.loads(dumps({"a": [1]})) == {"a": [1]}


def test_read_lattice_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputSyntaxError) as info:
        read_lattice(bad)
    assert info.value.line == 1
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]")
    with pytest.raises(LatticeError):
        read_lattice(arr)
