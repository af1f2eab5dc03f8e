from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from hilbchow.surface_algebra import (
    SurfaceError,
    format_lincomb,
    integrate,
    load_surface,
    mul,
    parse_lincomb,
    parse_surface,
    todd,
    todd_inverse,
)

from conftest import P1P1, P2, SURFACES, small_rationals

P2_TEXT = """
NAME P2
BASIS
1 0
h 1
pt 2
MULT
h h = pt
INTEGRAL
pt = 1
CANONICAL
-3*h
EULER
3*pt
"""


def test_bundled_fixtures_load():
    assert P2.symbols == ("1", "h", "pt")
    assert P2.degrees == (0, 1, 2)
    assert P1P1.symbols == ("1", "a", "b", "pt")
    assert P2.K == P2.cls("-3*h")
    assert P1P1.e == P1P1.cls("4*pt")


def test_parse_surface_text_matches_bundled():
    s = parse_surface(P2_TEXT)
    for i, j in product(range(3), repeat=2):
        assert s.table[i][j] == P2.table[i][j]


def test_degenerate_pairing_is_rejected():
    with pytest.raises(SurfaceError, match="degenerate pairing"):
        parse_surface(P2_TEXT.replace("pt = 1", "pt = 0"))


def test_non_commutative_table_names_the_entry():
    bad = """
NAME bad
BASIS
1 0
a 1
b 1
pt 2
MULT
a b = pt
b a = 2*pt
INTEGRAL
pt = 1
CANONICAL
-2*a
EULER
4*pt
"""
    with pytest.raises(SurfaceError, match=r"non-commutative table: b\*a != a\*b"):
        parse_surface(bad)


def test_degree_violation_is_rejected():
    with pytest.raises(SurfaceError, match="degree violation"):
        parse_surface(P2_TEXT.replace("h h = pt", "h h = h"))
    with pytest.raises(SurfaceError, match="degree violation"):
        parse_surface(P2_TEXT.replace("-3*h", "-3*pt"))


def test_missing_unit_is_rejected():
    with pytest.raises(SurfaceError):
        parse_surface(P2_TEXT.replace("1 0", "1 1"))


def test_mul_examples():
    assert mul(P2.cls("h"), P2.cls("h")) == P2.cls("pt")
    assert mul(P2.cls("pt"), P2.cls("h")) == P2.cls({})
    ab = P1P1.cls("a+b")
    assert mul(ab, ab) == P1P1.cls("2*pt")


def test_integrate_examples():
    assert integrate(P2.cls("pt")) == 1
    assert integrate(P2.cls("h")) == 0
    assert integrate(P1P1.cls("5*pt - 2")) == 5


def test_todd_classes_invert_each_other(surface):
    assert mul(todd(surface), todd_inverse(surface)) == surface.one()


def test_todd_inverse_values():
    # series inversion of td = 1 - K/2 + (K^2 + e)/12
    assert todd(P2) == P2.cls("1 + 3/2*h + pt")
    assert todd_inverse(P2) == P2.cls("1 - 3/2*h + 5/4*pt")
    assert todd(P1P1) == P1P1.cls("1 + a + b + pt")
    assert todd_inverse(P1P1) == P1P1.cls("1 - a - b + pt")


def test_todd_inverse_trivial_for_flat_formal_surface():
    text = P2_TEXT.replace("-3*h", "0").replace("3*pt", "0")
    s = parse_surface(text)
    assert todd_inverse(s) == s.one()


def test_pairing_is_perfect(surface):
    g = surface.pairing_matrix()
    ginv = surface.inverse_pairing
    r = surface.rank
    for i, j in product(range(r), repeat=2):
        assert sum(g[i][k] * ginv[k][j] for k in range(r)) == (1 if i == j else 0)


def test_diagonal_self_intersection_is_euler(surface):
    assert surface.diagonal_self_intersection() == surface.e


def test_associativity_exhaustive(surface):
    b = [surface.basis_class(i) for i in range(surface.rank)]
    for x, y, z in product(b, repeat=3):
        assert mul(mul(x, y), z) == mul(x, mul(y, z))
        assert mul(x, y) == mul(y, x)


def test_load_surface_unknown_path(tmp_path):
    with pytest.raises(OSError):
        load_surface(tmp_path / "missing.surface")


def test_lincomb_round_trip(surface):
    idx = {s: i for i, s in enumerate(surface.symbols)}
    coeffs = {0: Fraction(2), 1: Fraction(-3, 2), surface.rank - 1: Fraction(1, 4)}
    assert parse_lincomb(format_lincomb(coeffs, surface.symbols), idx) == coeffs


def classes(s):
    return st.lists(small_rationals, min_size=s.rank, max_size=s.rank).map(
        lambda cs: s.cls({sym: c for sym, c in zip(s.symbols, cs)})
    )


@pytest.mark.parametrize("name", sorted(SURFACES))
def test_mul_bilinear_and_graded(name):
    s = SURFACES[name]

    @given(classes(s), classes(s), classes(s))
    def check(x, y, z):
        assert mul(x, y + z) == mul(x, y) + mul(x, z)
        for d in range(3):
            for e in range(3):
                p = mul(x.degree_part(d), y.degree_part(e))
                assert p.degrees() <= ({d + e} if d + e <= 2 else set())

    check()
