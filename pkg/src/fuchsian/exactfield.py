"""Exact arithmetic in Q and real quadratic fields Q(sqrt d).

Rationals are :class:`fractions.Fraction`.  ``d = 0`` marks the rational
field itself, where the irrational part must vanish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from sympy import factorint

from .errors import FieldMismatchError

Rational = Fraction


@lru_cache(maxsize=None)
def is_squarefree(d: int) -> bool:
    if d <= 1:
        return False
    return all(k == 1 for k in factorint(d).values())


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational")


@dataclass(frozen=True)
class QuadElement:
    """The number u + v*sqrt(d)."""

    d: int
    u: Fraction
    v: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "u", _frac(self.u))
        object.__setattr__(self, "v", _frac(self.v))
        if self.d == 0:
            if self.v != 0:
                raise ValueError("rational field element with nonzero sqrt part")
        elif not is_squarefree(self.d):
            raise ValueError(f"d={self.d} is not a squarefree integer > 1")

    # construction helpers
    @classmethod
    def rational(cls, q, d: int = 0) -> "QuadElement":
        return cls(d, _frac(q), Fraction(0))

    @classmethod
    def sqrt(cls, d: int) -> "QuadElement":
        return cls(d, Fraction(0), Fraction(1))

    def _coerce(self, other) -> "QuadElement":
        if isinstance(other, QuadElement):
            if other.d == self.d:
                return other
            # a rational sentinel element mixes freely with any field
            if other.d == 0:
                return QuadElement(self.d, other.u)
            if self.d == 0 and self.v == 0:
                return other
            raise FieldMismatchError(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")
        if isinstance(other, (int, Fraction)):
            return QuadElement(self.d, Fraction(other))
        return NotImplemented

    def _lift(self, other: "QuadElement") -> "QuadElement":
        # promote a rational-sentinel self to other's field
        if self.d == 0 and other.d != 0:
            return QuadElement(other.d, self.u)
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        s = self._lift(o)
        return QuadElement(s.d, s.u + o.u, s.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.d, -self.u, -self.v)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        s = self._lift(o)
        d = s.d
        return QuadElement(d, s.u * o.u + d * s.v * o.v, s.u * o.v + s.v * o.u)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadElement(self.d, self.u / n, -self.v / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadElement(self.d, Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        if isinstance(other, QuadElement):
            if self.v == 0 and other.v == 0:
                return self.u == other.u
            return (self.d, self.u, self.v) == (other.d, other.u, other.v)
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.d, self.u, self.v))

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def conj(self) -> "QuadElement":
        return QuadElement(self.d, self.u, -self.v)

    def norm(self) -> Fraction:
        return self.u * self.u - self.d * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    def is_integral(self) -> bool:
        """Integral iff trace and norm are rational integers."""
        return self.trace().denominator == 1 and self.norm().denominator == 1

    def basis_coords(self) -> tuple[Fraction, ...]:
        """Coordinates over {1} (d = 0) or the integral basis {1, theta}."""
        if self.d == 0:
            return (self.u,)
        if self.d % 4 == 1:
            # u + v sqrt d = (u - v) + 2v * (1 + sqrt d)/2
            return (self.u - self.v, 2 * self.v)
        return (self.u, self.v)

    def __float__(self):
        return embed(self, "plus")

    def __repr__(self):
        if self.d == 0 or self.v == 0:
            return f"QuadElement({self.u})"
        return f"QuadElement({self.u} + {self.v}*sqrt({self.d}))"

    def __str__(self):
        if self.d == 0 or self.v == 0:
            return str(self.u)
        sign = "+" if self.v > 0 else "-"
        v = abs(self.v)
        vs = "" if v == 1 else f"{v}*"
        if self.u == 0:
            return f"{'-' if self.v < 0 else ''}{vs}sqrt({self.d})"
        return f"{self.u} {sign} {vs}sqrt({self.d})"

    def to_json(self) -> dict:
        def pq(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        return {"d": self.d, "u": pq(self.u), "v": pq(self.v)}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadElement":
        return cls(int(obj["d"]), Fraction(obj["u"]), Fraction(obj["v"]))


def arith(e1: QuadElement, e2: QuadElement, kind: str) -> QuadElement:
    if e1.d != e2.d and 0 not in (e1.d, e2.d):
        raise FieldMismatchError(f"Q(sqrt {e1.d}) vs Q(sqrt {e2.d})")
    if kind == "add":
        return e1 + e2
    if kind == "sub":
        return e1 - e2
    if kind == "mul":
        return e1 * e2
    if kind == "div":
        return e1 / e2
    raise ValueError(f"unknown operation {kind!r}")


def embed(e: QuadElement, sign: str = "plus", dps: int | None = None):
    """Real embedding u +/- v*sqrt(d).

    With ``dps`` the value is an mpmath float at that many digits.
    When u and the radical part nearly cancel, the value is recovered from
    the exact norm to avoid losing digits.
    """
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    s = 1 if sign == "plus" else -1
    v = s * e.v
    if dps is not None:
        with mpmath.workdps(dps + 10):
            u = mpmath.mpf(e.u.numerator) / e.u.denominator
            r = mpmath.mpf(v.numerator) / v.denominator * mpmath.sqrt(e.d) if v else mpmath.mpf(0)
            out = u + r
        return +out
    if v == 0:
        return float(e.u)
    r = float(v) * math.sqrt(e.d)
    u = float(e.u)
    if (u > 0) != (r > 0) and u != 0:
        # u + r = N / (u - r) with N the exact norm
        return float(e.norm()) / (u - r)
    return u + r


def integral_basis(d: int) -> tuple[QuadElement, str]:
    """theta with {1, theta} a Z-basis of the ring of integers of Q(sqrt d)."""
    if not is_squarefree(d):
        raise ValueError(f"d={d} is not squarefree")
    if d % 4 == 1:
        return QuadElement(d, Fraction(1, 2), Fraction(1, 2)), f"theta = (1+sqrt{d})/2, theta^2 = theta + {(d - 1) // 4}"
    return QuadElement(d, 0, 1), f"theta = sqrt{d}, theta^2 = {d}"


def from_coords(d: int, coords) -> QuadElement:
    """Inverse of :meth:`QuadElement.basis_coords`."""
    if d == 0:
        (c,) = coords
        return QuadElement(0, _frac(c))
    c1, c2 = (_frac(c) for c in coords)
    theta, _ = integral_basis(d)
    return QuadElement(d, c1) + theta * c2
