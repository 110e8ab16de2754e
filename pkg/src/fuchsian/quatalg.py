"""Quaternion algebras (a, b / F) over Q or a real quadratic field.

Covers reduced trace and norm, the regular representation into 2x2 real
matrices, the normic system over an integral basis, and the rate and
cyclotomic bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import count

import numpy as np
from sympy import isprime

from .errors import AlgebraMismatchError, SearchOverflowError
from .exactfield import QuadElement, embed, from_coords, integral_basis

ADMISSIBLE_CAP = 10**8


def _q(d: int, x) -> QuadElement:
    if isinstance(x, QuadElement):
        if x.d not in (0, d):
            raise AlgebraMismatchError(f"element of Q(sqrt {x.d}) in an algebra over d={d}")
        return x if x.d == d else QuadElement(d, x.u)
    return QuadElement(d, Fraction(x))


@dataclass(frozen=True)
class AlgebraParams:
    d: int
    a: QuadElement
    b: QuadElement

    def __post_init__(self):
        object.__setattr__(self, "a", _q(self.d, self.a))
        object.__setattr__(self, "b", _q(self.d, self.b))
        if not self.a or not self.b:
            raise ValueError("a and b must be nonzero")

    @property
    def degree(self) -> int:
        return 1 if self.d == 0 else 2

    def element(self, x=0, y=0, z=0, t=0) -> "QuaternionElement":
        return QuaternionElement(self, x, y, z, t)


@dataclass(frozen=True)
class QuaternionElement:
    """x + yI + zJ + tK with I^2 = a, J^2 = b, K = IJ = -JI."""

    algebra: AlgebraParams
    x: QuadElement
    y: QuadElement
    z: QuadElement
    t: QuadElement

    def __post_init__(self):
        d = self.algebra.d
        for name in "xyzt":
            object.__setattr__(self, name, _q(d, getattr(self, name)))

    @property
    def coords(self) -> tuple:
        return (self.x, self.y, self.z, self.t)

    def __mul__(self, other: "QuaternionElement") -> "QuaternionElement":
        return mul(self, other)

    def __add__(self, other: "QuaternionElement") -> "QuaternionElement":
        _check_same(self, other)
        return QuaternionElement(self.algebra, *(p + q for p, q in zip(self.coords, other.coords)))

    def __neg__(self):
        return QuaternionElement(self.algebra, *(-p for p in self.coords))

    def conj(self) -> "QuaternionElement":
        return QuaternionElement(self.algebra, self.x, -self.y, -self.z, -self.t)

    def __eq__(self, other):
        if not isinstance(other, QuaternionElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash((self.algebra, self.coords))


def _check_same(q1: QuaternionElement, q2: QuaternionElement):
    if q1.algebra != q2.algebra:
        raise AlgebraMismatchError("quaternions from different algebras")


def reduced_trace(q: QuaternionElement) -> QuadElement:
    return 2 * q.x


def reduced_norm(q: QuaternionElement) -> QuadElement:
    a, b = q.algebra.a, q.algebra.b
    return q.x * q.x - a * q.y * q.y - b * q.z * q.z + a * b * q.t * q.t


def mul(q1: QuaternionElement, q2: QuaternionElement) -> QuaternionElement:
    _check_same(q1, q2)
    a, b = q1.algebra.a, q1.algebra.b
    x1, y1, z1, t1 = q1.coords
    x2, y2, z2, t2 = q2.coords
    x = x1 * x2 + a * y1 * y2 + b * z1 * z2 - a * b * t1 * t2
    y = x1 * y2 + y1 * x2 - b * z1 * t2 + b * t1 * z2
    z = x1 * z2 + z1 * x2 + a * y1 * t2 - a * t1 * y2
    t = x1 * t2 + t1 * x2 + y1 * z2 - z1 * y2
    return QuaternionElement(q1.algebra, x, y, z, t)


def represent(q: QuaternionElement) -> np.ndarray:
    """Regular representation [[x + y sqrt a, z + t sqrt a], [b(z - t sqrt a), x - y sqrt a]]."""
    alg = q.algebra
    ea = embed(alg.a)
    if ea <= 0:
        raise ValueError("a must be positive under the real embedding")
    ra = math.sqrt(ea)
    x, y, z, t = (embed(c) for c in q.coords)
    b = embed(alg.b)
    return np.array([[x + y * ra, z + t * ra], [b * (z - t * ra), x - y * ra]])


# --- normic system ---------------------------------------------------------

class Poly:
    """Integer polynomial as {sorted exponent tuple: coefficient}."""

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(self.nvars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1)

    def scale(self, c) -> "Poly":
        return Poly(self.nvars, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(p + q for p, q in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Poly(self.nvars, out)

    def __call__(self, values):
        total = 0
        for k, v in self.terms.items():
            term = v
            for x, e in zip(values, k):
                if e:
                    term *= x**e
            total += term
        return total

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(k) == degree for k in self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def format(self, names) -> str:
        # graded, then lexicographic in variable order
        keys = sorted(self.terms, key=lambda k: (-sum(k), tuple(-e for e in k)))
        parts = []
        for k in keys:
            c = self.terms[k]
            mono = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(k) if e
            )
            mag = abs(c)
            body = mono if (mag == 1 and mono) else (f"{mag}*{mono}" if mono else f"{mag}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, body in parts[1:]:
            out += f" {s} {body}"
        return out


@dataclass(frozen=True)
class NormicSystem:
    n: int
    polys: tuple
    names: tuple

    def evaluate(self, values) -> tuple:
        if len(values) != 4 * self.n:
            raise ValueError(f"expected {4 * self.n} values")
        return tuple(p(values) for p in self.polys)

    def pretty(self) -> str:
        return "\n".join(f"g{k + 1} = {p.format(self.names)}" for k, p in enumerate(self.polys))

    def __str__(self):
        return self.pretty()


def _coords_int(e: QuadElement, what: str) -> tuple:
    cs = e.basis_coords()
    if any(c.denominator != 1 for c in cs):
        raise ValueError(f"{what} = {e} is not in the ring of integers")
    return tuple(int(c) for c in cs)


def normic_system(algebra: AlgebraParams) -> NormicSystem:
    """Expand x^2 - a y^2 - b z^2 + ab t^2 over the integral basis {1, theta}."""
    n = algebra.degree
    if n not in (1, 2):
        raise ValueError("unsupported degree")
    names = tuple(f"{s}{k}" for s in "xyzt" for k in range(1, n + 1))
    nv = 4 * n
    var = [Poly.var(nv, i) for i in range(nv)]
    # each of x, y, z, t as a vector of linear forms over the basis
    lin = [var[j * n:(j + 1) * n] for j in range(4)]
    a, b = algebra.a, algebra.b
    cs = [QuadElement(algebra.d, 1), -a, -b, a * b]
    coeffs = [_coords_int(c, w) for c, w in zip(cs, ("1", "-a", "-b", "ab"))]

    if n == 1:
        total = Poly(nv)
        for (c,), (v,) in zip(coeffs, lin):
            total = total + (v * v).scale(c)
        return NormicSystem(1, (total,), names)

    d = algebra.d
    # theta^2 = p + q theta
    p, q = (d, 0) if d % 4 != 1 else ((d - 1) // 4, 1)
    g1, g2 = Poly(nv), Poly(nv)
    for (c1, c2), (v1, v2) in zip(coeffs, lin):
        s1 = v1 * v1 + (v2 * v2).scale(p)
        s2 = (v1 * v2).scale(2) + (v2 * v2).scale(q)
        # (c1 + c2 theta)(s1 + s2 theta)
        g1 = g1 + s1.scale(c1) + s2.scale(c2 * p)
        g2 = g2 + s2.scale(c1) + s1.scale(c2) + s2.scale(c2 * q)
    return NormicSystem(2, (g1, g2), names)


def norm_coords(q: QuaternionElement) -> tuple:
    """Integral-basis coordinates of the reduced norm."""
    return reduced_norm(q).basis_coords()


def element_from_ints(algebra: AlgebraParams, values) -> QuaternionElement:
    """Quaternion whose coordinates have the given integral-basis coordinates."""
    n = algebra.degree
    parts = [from_coords(algebra.d, values[j * n:(j + 1) * n]) for j in range(4)]
    return QuaternionElement(algebra, *parts)


# --- rates ------------------------------------------------------------------

def rate_lower_bound(n: int) -> int:
    if n < 1:
        raise ValueError("degree must be >= 1")
    return 4 * n - n


def _odd_prime(p: int):
    if not (isinstance(p, int) and p > 2 and isprime(p)):
        raise ValueError(f"{p} is not an odd prime")


def cyclo_degree(p: int) -> int:
    _odd_prime(p)
    return (p - 1) // 2


def cyclo_rate_bound(p: int) -> int:
    return 3 * cyclo_degree(p)


def admissible_prime(p: int, cap: int = ADMISSIBLE_CAP) -> int:
    """Smallest prime q with q = 1 mod p and q = 3 mod 4."""
    if not (isinstance(p, int) and p > 1 and isprime(p) and p % 4 == 1):
        raise ValueError(f"{p} is not a prime congruent to 1 mod 4")
    for k in count(1):
        q = 1 + k * p
        if q > cap:
            raise SearchOverflowError(f"no admissible prime below {cap}")
        if q % 4 == 3 and isprime(q):
            return q


__all__ = [
    "AlgebraParams", "QuaternionElement", "NormicSystem", "Poly",
    "reduced_trace", "reduced_norm", "mul", "represent", "normic_system",
    "norm_coords", "element_from_ints", "rate_lower_bound", "cyclo_degree",
    "cyclo_rate_bound", "admissible_prime", "integral_basis",
]
