"""Mobius maps on the upper half-plane and the unit disk.

Entries may be Python floats or mpmath numbers; everything here only uses
arithmetic, ``abs`` and comparisons, so the same code runs at binary64 or
at extended precision (under an ``mpmath.workdps`` context).
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DegeneratePolygonError, NoIsometricCircleError, PoleError

DEFAULT_TOL = 1e-9
_EPS = sys.float_info.epsilon


def _is_mp(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def _eps_of(x) -> float:
    return float(mpmath.mp.eps) if _is_mp(x) else _EPS


@dataclass(frozen=True)
class UnimodularMap:
    """Row-major [[a, b], [c, d]] with ad - bc = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        scale = max(1.0, float(abs(self.a * self.d) + abs(self.b * self.c)))
        if not abs(det - 1) <= 1e-9 * scale:
            raise ValueError(f"determinant {float(det)!r} is not 1")

    @classmethod
    def normalized(cls, a, b, c, d) -> "UnimodularMap":
        """Scale a positive-determinant matrix onto SL(2, R)."""
        det = a * d - b * c
        # for large entries det itself is only known up to the accumulated
        # rounding of the entries, so a deviation below that is left alone
        noise = 1e4 * _eps_of(det) * (abs(a * d) + abs(b * c))
        if abs(det - 1) <= noise:
            return cls(a, b, c, d)
        if not det > 0:
            raise ValueError("matrix must have positive determinant")
        s = det ** 0.5
        a, b, c, d = a / s, b / s, c / s, d / s
        return cls(a, b, c, d)

    @classmethod
    def from_array(cls, arr) -> "UnimodularMap":
        (a, b), (c, d) = arr
        return cls.normalized(a, b, c, d)

    @classmethod
    def identity(cls) -> "UnimodularMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "UnimodularMap") -> "UnimodularMap":
        return compose(self, other)

    def __neg__(self):
        return UnimodularMap(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "UnimodularMap":
        return UnimodularMap(self.d, -self.b, -self.c, self.a)

    def scale(self) -> float:
        return float(max(abs(x) for x in self.entries))

    def canonical(self) -> "UnimodularMap":
        """Representative of {M, -M} whose first sizable entry of (c, d, a, b) is positive."""
        for x in (self.c, self.d, self.a, self.b):
            if abs(x) > 1e-9:
                return self if x > 0 else -self
        return self

    def distance(self, other: "UnimodularMap") -> float:
        """Sup-norm distance in PSL(2, R): min over the sign of other."""
        p = max(abs(x - y) for x, y in zip(self.entries, other.entries))
        m = max(abs(x + y) for x, y in zip(self.entries, other.entries))
        return float(min(p, m))

    def same(self, other: "UnimodularMap", tol: float = DEFAULT_TOL) -> bool:
        """Equality up to sign, with tolerance relative to the entry scale."""
        return self.distance(other) <= tol * max(1.0, self.scale(), other.scale())

    def is_identity(self, tol: float = DEFAULT_TOL) -> bool:
        return self.same(IDENTITY, tol)

    def to_float(self) -> "UnimodularMap":
        return UnimodularMap.normalized(*(float(x) for x in self.entries))

    def to_list(self) -> list:
        return [[float(self.a), float(self.b)], [float(self.c), float(self.d)]]

    def __repr__(self):
        return "UnimodularMap([[%.10g, %.10g], [%.10g, %.10g]])" % tuple(float(x) for x in self.entries)


IDENTITY = UnimodularMap(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class IsometricCircle:
    """Circle |cz + d| = 1.  ``center`` is real in the half-plane, complex in the disk."""

    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")


def apply(m: UnimodularMap, z):
    den = m.c * z + m.d
    if abs(den) <= 1e-300 or abs(den) <= _eps_of(den) * abs(m.c * z):
        raise PoleError(f"{z!r} is a pole of {m!r}")
    return (m.a * z + m.b) / den


def compose(m1: UnimodularMap, m2: UnimodularMap) -> UnimodularMap:
    a = m1.a * m2.a + m1.b * m2.c
    b = m1.a * m2.b + m1.b * m2.d
    c = m1.c * m2.a + m1.d * m2.c
    d = m1.c * m2.b + m1.d * m2.d
    return UnimodularMap.normalized(a, b, c, d)


def product(maps) -> UnimodularMap:
    out = IDENTITY
    for m in maps:
        out = compose(out, m)
    return out


def isometric_circle(m: UnimodularMap, tol: float = 1e-9) -> IsometricCircle:
    if abs(m.c) <= tol:
        raise NoIsometricCircleError("map fixes infinity; no isometric circle")
    return IsometricCircle(-m.d / m.c, 1 / abs(m.c))


def side(z, circle: IsometricCircle, tol: float = DEFAULT_TOL) -> str:
    gap = abs(z - circle.center) - circle.radius
    if gap < -tol:
        return "interior"
    if gap > tol:
        return "exterior"
    return "boundary"


def cayley(z, direction: str = "to_disk"):
    """w = (z - i)/(z + i) and its inverse z = i(1 + w)/(1 - w)."""
    if direction == "to_disk":
        if not z.imag > 0:
            raise ValueError(f"{z!r} is not in the upper half-plane")
        return (z - 1j) / (z + 1j)
    if direction == "to_half":
        if not abs(z) < 1:
            raise ValueError(f"{z!r} is not in the open unit disk")
        return 1j * (1 + z) / (1 - z)
    raise ValueError(f"unknown direction {direction!r}")


def disk_coeffs(m: UnimodularMap):
    """(A, B) with C m C^-1 : w -> (A w + B)/(conj(B) w + conj(A)), C the Cayley map."""
    A = (m.a + m.d + 1j * (m.b - m.c)) / 2
    B = (m.a - m.d - 1j * (m.b + m.c)) / 2
    return A, B


def disk_apply(A, B, w):
    return (A * w + B) / (B.conjugate() * w + A.conjugate())


def disk_isometric_circle(m: UnimodularMap, tol: float = 1e-9) -> IsometricCircle:
    """Isometric circle of the disk version of m: |conj(B) w + conj(A)| = 1."""
    A, B = disk_coeffs(m)
    if abs(B) <= tol:
        raise NoIsometricCircleError("map fixes the disk center; no isometric circle")
    return IsometricCircle(-A.conjugate() / B.conjugate(), 1 / abs(B))


def hyp_distance(z1, z2) -> float:
    y1, y2 = z1.imag, z2.imag
    if not (y1 > 0 and y2 > 0):
        raise ValueError("points must lie in the open upper half-plane")
    # 2 asinh(|z1 - z2| / (2 sqrt(y1 y2))) is the cosh formula without cancellation
    s = abs(z1 - z2) / (2 * (y1 * y2) ** 0.5)
    if _is_mp(s):
        return 2 * mpmath.asinh(s)
    return 2 * math.asinh(s)


def disk_distance(w1, w2) -> float:
    s = abs(w1 - w2) / ((1 - abs(w1) ** 2) * (1 - abs(w2) ** 2)) ** 0.5
    if _is_mp(s):
        return 2 * mpmath.asinh(s)
    return 2 * math.asinh(s)


def _unit(x: complex) -> complex:
    return x / abs(x)


def _tangents(p: complex, q: complex, circle):
    """Unit tangents of the minor arc p -> q at its start and end."""
    if circle is None:
        t = _unit(q - p)
        return t, t
    c = circle.center
    a, b = p - c, q - c
    s = 1.0 if (a.conjugate() * b).imag > 0 else -1.0
    return s * 1j * _unit(a), s * 1j * _unit(b)


def polygon_area(vertices, circles) -> float:
    """Gauss-Bonnet area (k - 2)pi - sum of interior angles.

    ``circles[i]`` carries edge i from vertices[i] to vertices[i+1]; use
    ``None`` for a straight edge (a diameter in the disk, a vertical line in
    the half-plane).  Works in either conformal model.
    """
    vs = [complex(v) for v in vertices]
    k = len(vs)
    if k < 3 or len(circles) != k:
        raise DegeneratePolygonError("need at least three vertices and one circle per edge")
    circ = [None if c is None else IsometricCircle(complex(c.center), float(c.radius)) for c in circles]
    starts, ends = [], []
    for i in range(k):
        t0, t1 = _tangents(vs[i], vs[(i + 1) % k], circ[i])
        starts.append(t0)
        ends.append(t1)
    total = 0.0
    for i in range(k):
        t_in = ends[i - 1]
        t_out = starts[i]
        cosang = (t_out * (-t_in).conjugate()).real
        total += math.acos(max(-1.0, min(1.0, cosang)))
    area = (k - 2) * math.pi - total
    if area <= 1e-9:
        raise DegeneratePolygonError(f"Gauss-Bonnet area {area:.3g} is not positive")
    return area


class MapSet:
    """Set of maps modulo sign with tolerant lookup.

    Maps are bucketed by log of the squared Frobenius norm (>= log 2 on
    SL(2, R)), so each probe only compares against a handful of entries.
    """

    _WIDTH = 1e-7

    def __init__(self, tol: float = DEFAULT_TOL):
        self.tol = tol
        self._buckets: dict[int, list] = {}
        self.items: list = []

    def _key(self, m: UnimodularMap) -> int:
        f2 = float(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d)
        return int(math.floor(math.log(f2) / self._WIDTH))

    def find(self, m: UnimodularMap):
        """Index of a stored map equal to m up to sign, or None."""
        k = self._key(m)
        for kk in (k - 1, k, k + 1):
            for idx in self._buckets.get(kk, ()):
                if self.items[idx][0].same(m, self.tol):
                    return idx
        return None

    def add(self, m: UnimodularMap, payload=None) -> tuple[int, bool]:
        """Insert unless present; returns (index, inserted)."""
        idx = self.find(m)
        if idx is not None:
            return idx, False
        self.items.append((m, payload))
        self._buckets.setdefault(self._key(m), []).append(len(self.items) - 1)
        return len(self.items) - 1, True

    def __contains__(self, m):
        return self.find(m) is not None

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)
