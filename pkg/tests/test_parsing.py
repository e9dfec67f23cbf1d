import json

import pytest

from wittdr.errors import NotAUnit, ParseError, UnsupportedRing
from wittdr.parsing import parse_element, parse_ring
from wittdr.rings import FiniteField, PolyQuotient, Quotient


def test_ring_shorthands():
    assert parse_ring("Z").characteristic() == 0
    assert parse_ring("Z/9").size() == 9
    assert isinstance(parse_ring("F4"), FiniteField)
    assert isinstance(parse_ring("F2[x,y]/(x^2,y^2)"), PolyQuotient)
    assert parse_ring("F2[x,y]/(x^2,y^2)").size() == 16
    assert isinstance(parse_ring("F3[t]/(t^3-1)"), Quotient)
    assert parse_ring("F3[t]/(t^3-1)").size() == 27


def test_json_descriptor_input():
    R = parse_ring("F2[e]/(e^2)")
    assert parse_ring(json.dumps(R.descriptor())) == R


@pytest.mark.parametrize("text,ring,expected", [
    ("5+5", "Z/8", "2"),
    ("t*t", "F4", "t+1"),
    ("x^(1/2)*x^(3/2)", "F2[x^(1/4)]/(x^2)", "0"),
    ("(a+b)^2", "F2[a,b]", "a^2+b^2"),
    ("-3", "Z", "-3"),
    ("2*x - x", "Z/5[x]", "x"),
])
def test_element_grammar(text, ring, expected):
    R = parse_ring(ring)
    assert R.fmt(parse_element(text, R)) == expected


def test_element_strings_roundtrip():
    R = parse_ring("F2[x^(1/4)]/(x^2)")
    for a in R.elements():
        assert R(str(a)) == a


@pytest.mark.parametrize("text,pos", [("1+", 2), ("x*(1+x", 6), ("1 $ 2", 2), ("y", 0)])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_element(text, parse_ring("F2[x]"))
    assert info.value.pos == pos


def test_bad_rings():
    with pytest.raises(ParseError):
        parse_ring("Q")
    with pytest.raises((UnsupportedRing, ParseError)):
        parse_ring("F2[x,y]/(x^2+y)")


def test_coercion_of_non_units():
    R = parse_ring("Z/9")
    with pytest.raises(NotAUnit):
        R(3).inverse()
