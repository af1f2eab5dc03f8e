from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from hilbchow import chern_calculus as chern
from hilbchow.chern_calculus import (
    C,
    CH,
    ChernVector,
    character,
    character_from_chern,
    chern_from_character,
    ideal_from_structure,
    line_character,
    newton_residuals,
    twist,
)

from conftest import rationals

D = 12


def c_vector(rank, entries):
    return ChernVector(rank, (Fraction(1), *entries), C)


def test_exponential_from_first_chern_class():
    x = Fraction(3, 5)
    ch = character_from_chern(c_vector(1, [x] + [0] * 7))
    assert ch.entries == tuple(x**j / factorial(j) for j in range(9))


def test_second_character_from_c2():
    y = Fraction(7)
    ch = character_from_chern(c_vector(1, [0, y, 0]))
    assert ch[2] == -y


def test_c1_equals_ch1_for_rank_one():
    v = character(1, [Fraction(2), Fraction(5), Fraction(-1)], 3)
    assert chern_from_character(v)[1] == 2


def test_twist_by_minus_canonical_on_p2(p2):
    v = character(1, [], 2, p2.one())
    got = twist(v, -p2.K)
    assert got.entries == (p2.one(), p2.cls("3*h"), p2.cls("9/2*pt"))
    assert got.rank == 1


def test_twist_by_zero_is_identity(p2):
    v = character(2, [p2.cls("h"), p2.cls("pt")], 2, p2.one())
    assert twist(v, p2.cls({})) == v


def test_line_character_is_exponential():
    assert line_character(Fraction(2), 3).entries == (1, 2, 2, Fraction(4, 3))


def test_ideal_from_structure():
    z = character(0, [], 4)
    assert ideal_from_structure(z) == character(1, [], 4)
    z1 = character(0, [0, Fraction(1), Fraction(2)], 4)
    z2 = character(0, [0, Fraction(3), 0, Fraction(5)], 4)
    lhs = ideal_from_structure(z1 + z2)
    rhs = character(1, [], 4) - z1 - z2
    assert lhs == rhs
    assert ideal_from_structure(z1).entries == (1, 0, -1, -2, 0)
    with pytest.raises(ValueError):
        ideal_from_structure(character(1, [], 4))


def test_mode_checks():
    v = character(1, [Fraction(1)], 2)
    with pytest.raises(ValueError):
        character_from_chern(v)
    with pytest.raises(ValueError):
        chern_from_character(chern_from_character(v))
    with pytest.raises(ValueError):
        ChernVector(1, (1,), "x")


def test_chern_classes_of_a_difference_of_lines():
    # c(L1 - L2) = (1 + a) / (1 + b)
    a, b = Fraction(2), Fraction(-3)
    v = line_character(a, 6) - line_character(b, 6)
    c = chern_from_character(v)
    series = [Fraction(1)]
    for m in range(1, 7):
        series.append((-b) ** m + a * (-b) ** (m - 1))
    assert list(c.entries) == series


vectors = st.tuples(st.integers(-4, 4), st.lists(rationals, min_size=D, max_size=D))


@settings(max_examples=200)
@given(vectors)
def test_round_trip_from_character(data):
    rank, entries = data
    v = character(rank, entries, D)
    c = chern_from_character(v)
    assert character_from_chern(c) == v
    assert all(r == 0 for r in newton_residuals(v, c))


@settings(max_examples=200)
@given(vectors)
def test_round_trip_from_chern(data):
    rank, entries = data
    c = ChernVector(rank, (Fraction(1), *entries), C)
    assert chern_from_character(character_from_chern(c)) == c


@settings(max_examples=100)
@given(vectors, rationals, rationals)
def test_twist_group_law(data, a, b):
    v = character(*data, D)
    assert twist(twist(v, a), b) == twist(v, a + b)
    assert twist(twist(v, a), -a) == v


@settings(max_examples=100)
@given(vectors, vectors)
def test_character_additive_chern_multiplicative(x, y):
    v, w = character(*x, D), character(*y, D)
    cv, cw, cs = chern_from_character(v), chern_from_character(w), chern_from_character(v + w)
    for m in range(D + 1):
        assert cs[m] == sum(cv[i] * cw[m - i] for i in range(m + 1))
