import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from fuchsian.errors import AlgebraMismatchError, SearchOverflowError
from fuchsian.quatalg import (
    AlgebraParams, admissible_prime, cyclo_degree, cyclo_rate_bound, element_from_ints, norm_coords,
    normic_system, rate_lower_bound, reduced_norm, reduced_trace, represent,
)
from fuchsian.takeuchi import LABELS, get_triple

ALGEBRAS = {L: AlgebraParams(get_triple(L).d, get_triple(L).a, get_triple(L).b) for L in LABELS}


def rand_q(alg, rng, k=9):
    return element_from_ints(alg, [rng.randint(-k, k) for _ in range(4 * alg.degree)])


@pytest.mark.parametrize("label", LABELS)
def test_representation_laws(label):
    alg, rng = ALGEBRAS[label], random.Random(7)
    for _ in range(100):
        q1, q2 = rand_q(alg, rng), rand_q(alg, rng)
        M = represent(q1)
        n, t = float(reduced_norm(q1)), float(reduced_trace(q1))
        assert np.linalg.det(M) == pytest.approx(n, rel=1e-10, abs=1e-8)
        assert np.trace(M) == pytest.approx(t, rel=1e-10, abs=1e-10)
        P, R = represent(q1 * q2), M @ represent(q2)
        assert np.max(np.abs(P - R)) <= 1e-9 * max(1.0, np.max(np.abs(R)))


@pytest.mark.parametrize("label", LABELS)
def test_norm_is_multiplicative_and_conj(label):
    alg, rng = ALGEBRAS[label], random.Random(3)
    for _ in range(20):
        q1, q2 = rand_q(alg, rng), rand_q(alg, rng)
        assert reduced_norm(q1 * q2) == reduced_norm(q1) * reduced_norm(q2)
        prod = q1 * q1.conj()
        assert all(c == 0 for c in prod.coords[1:])
        assert prod.x == reduced_norm(q1)


def test_quaternion_relations():
    alg = ALGEBRAS["T4"]
    I, J = alg.element(0, 1), alg.element(0, 0, 1)
    K = I * J
    assert I * I == alg.element(alg.a) and J * J == alg.element(alg.b)
    assert J * I == -K and K == alg.element(0, 0, 0, 1)
    with pytest.raises(AlgebraMismatchError):
        I * ALGEBRAS["T3"].element(1)


def _sympy_normic(alg):
    """Independent expansion of the reduced norm with sympy symbols."""
    n, d = alg.degree, alg.d
    syms = sympy.symbols(" ".join(f"{s}{k}" for s in "xyzt" for k in range(1, n + 1)))
    if n == 1:
        x, y, z, t = syms
        a, b = sympy.Rational(alg.a.u), sympy.Rational(alg.b.u)
        return syms, [sympy.expand(x**2 - a * y**2 - b * z**2 + a * b * t**2)]
    r = sympy.sqrt(d)
    th = r if d % 4 != 1 else (1 + r) / 2
    val = lambda e: sympy.Rational(e.u.numerator, e.u.denominator) + sympy.Rational(e.v.numerator, e.v.denominator) * r  # noqa: E731
    a, b = val(alg.a), val(alg.b)
    X, Y, Z, T = (syms[2 * j] + syms[2 * j + 1] * th for j in range(4))
    N = sympy.expand(X**2 - a * Y**2 - b * Z**2 + a * b * T**2)
    rest = sympy.expand(N.subs(r, sympy.Symbol("R")))
    g_irr = sympy.expand(rest.coeff(sympy.Symbol("R"), 1))
    g_rat = sympy.expand(rest.coeff(sympy.Symbol("R"), 0))
    # N = g_rat + g_irr sqrt d; over {1, theta}
    if d % 4 == 1:
        return syms, [sympy.expand(g_rat - g_irr), sympy.expand(2 * g_irr)]
    return syms, [g_rat, g_irr]


@pytest.mark.parametrize("label", LABELS)
def test_normic_against_sympy(label):
    alg = ALGEBRAS[label]
    ns = normic_system(alg)
    syms, ref = _sympy_normic(alg)
    rng = random.Random(11)
    for _ in range(25):
        vals = [rng.randint(-20, 20) for _ in range(4 * alg.degree)]
        got = ns.evaluate(vals)
        sub = dict(zip(syms, vals))
        assert tuple(int(g.subs(sub)) for g in ref) == got
        assert got == tuple(int(c) for c in norm_coords(element_from_ints(alg, vals)))


def test_normic_golden_strings():
    assert normic_system(ALGEBRAS["T1"]).pretty() == "g1 = x1^2 - 5*y1^2 + 30*z1^2 - 150*t1^2"
    assert normic_system(ALGEBRAS["T4"]).pretty() == (
        "g1 = x1^2 + x2^2 - 8*y1*y2 - 4*y2^2 + 8*z1^2 + 24*z1*z2 + 20*z2^2 - 48*t1^2 - 160*t1*t2 - 128*t2^2\n"
        "g2 = 2*x1*x2 + x2^2 - 4*y1^2 - 8*y1*y2 - 8*y2^2 + 12*z1^2 + 40*z1*z2 + 32*z2^2 - 80*t1^2 - 256*t1*t2 - 208*t2^2"
    )
    for alg in ALGEBRAS.values():
        assert all(p.is_homogeneous(2) for p in normic_system(alg).polys)


def test_nonintegral_coefficients_rejected():
    with pytest.raises(ValueError):
        normic_system(AlgebraParams(5, Fraction(1, 2), -1))


def _brute_admissible(p):
    q = 3
    while not (sympy.isprime(q) and q % p == 1 and q % 4 == 3):
        q += 1
    return q


def test_rates():
    assert rate_lower_bound(1) == 3 and rate_lower_bound(2) == 6
    assert cyclo_degree(7) == 3 and cyclo_rate_bound(7) == 9
    for p in (5, 13, 17, 29, 37):
        assert admissible_prime(p) == _brute_admissible(p)
    assert (admissible_prime(5), admissible_prime(13), admissible_prime(17)) == (11, 79, 103)
    with pytest.raises(ValueError):
        admissible_prime(7)
    with pytest.raises(ValueError):
        cyclo_degree(9)
    with pytest.raises(SearchOverflowError):
        admissible_prime(13, cap=50)
