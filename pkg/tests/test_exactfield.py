from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from fuchsian.errors import FieldMismatchError
from fuchsian.exactfield import QuadElement, arith, embed, from_coords, integral_basis, is_squarefree

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=12)
DS = [2, 3, 5, 13]


def Q(d, u, v=0):
    return QuadElement(d, Fraction(u), Fraction(v))


def sym(e):
    return sympy.Rational(e.u.numerator, e.u.denominator) + sympy.Rational(e.v.numerator, e.v.denominator) * sympy.sqrt(e.d)


@given(st.sampled_from(DS), fracs, fracs, fracs, fracs)
def test_field_ops_match_sympy(d, u1, v1, u2, v2):
    x, y = Q(d, u1, v1), Q(d, u2, v2)
    for got, want in [(x + y, sym(x) + sym(y)), (x - y, sym(x) - sym(y)), (x * y, sym(x) * sym(y))]:
        assert sympy.simplify(sym(got) - want) == 0
    if y:
        assert sympy.simplify(sym(x / y) - sym(x) / sym(y)) == 0
        assert (y * y.inverse()) == Q(d, 1)


@given(st.sampled_from(DS), fracs, fracs)
def test_norm_trace_conj(d, u, v):
    x = Q(d, u, v)
    assert x * x.conj() == Q(d, x.norm())
    assert x + x.conj() == Q(d, x.trace())


def test_rational_sentinel_and_mismatch():
    assert Q(0, 3) * Q(0, Fraction(1, 3)) == Q(0, 1)
    with pytest.raises(ValueError):
        QuadElement(0, 1, 1)
    with pytest.raises(FieldMismatchError):
        arith(Q(2, 1, 1), Q(3, 1, 1), "add")
    assert arith(Q(0, 2), Q(5, 1, 1), "mul") == Q(5, 2, 2)
    with pytest.raises(ValueError):
        QuadElement(12, 0, 1)
    with pytest.raises(ZeroDivisionError):
        Q(5, 0).inverse()


def test_squarefree():
    assert [d for d in range(2, 20) if is_squarefree(d)] == [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]


def test_integral_basis_and_integrality():
    th5, _ = integral_basis(5)
    assert th5 == Q(5, Fraction(1, 2), Fraction(1, 2))
    assert th5 * th5 == th5 + 1
    th3, _ = integral_basis(3)
    assert th3 * th3 == Q(3, 3)
    assert Q(5, Fraction(1, 2), Fraction(1, 2)).is_integral()
    assert not Q(3, Fraction(1, 2), Fraction(1, 2)).is_integral()
    assert Q(13, Fraction(-1, 2), Fraction(1, 2)).basis_coords() == (-1, 1)


@given(st.sampled_from(DS), st.integers(-99, 99), st.integers(-99, 99))
def test_coords_roundtrip(d, c1, c2):
    e = from_coords(d, (c1, c2))
    assert e.basis_coords() == (c1, c2)
    assert e.is_integral()


def test_embed_against_mpmath():
    e = Q(5, 3, 1)
    assert embed(e) == pytest.approx(3 + 5 ** 0.5, rel=1e-15)
    assert embed(e, "minus") == pytest.approx(3 - 5 ** 0.5, rel=1e-15)
    # near-cancelling element: 161 - 72 sqrt 5 = 1/(161 + 72 sqrt 5)
    small = Q(5, 161, -72)
    with mpmath.workdps(50):
        ref = mpmath.mpf(161) - 72 * mpmath.sqrt(5)
        assert abs(embed(small) - float(ref)) <= 1e-15 * abs(float(ref))
        assert abs(embed(small, dps=40) - ref) < mpmath.mpf(10) ** -38


def test_json_and_str():
    e = Q(13, Fraction(-1, 2), Fraction(9, 2))
    assert QuadElement.from_json(e.to_json()) == e
    assert e.to_json() == {"d": 13, "u": "-1/2", "v": "9/2"}
    assert str(Q(5, 2, -1)) == "2 - sqrt(5)"
