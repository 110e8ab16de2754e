"""The seven sample arithmetic groups of signature (1; e).

Each row stores exact radicands x^2, y^2, z^2 in Q or Q(sqrt d) together
with the algebra parameters (a, b).  Generators are synthesized in the
normal form where alpha is diagonal and beta is symmetric.

Words over alpha, beta, gamma are tuples of letters ``a b g`` with
upper case for inverses.
"""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import UnrealizableTripleError
from .exactfield import QuadElement, embed
from .hyperbolic import IDENTITY, UnimodularMap, compose, product

FRICKE_TOL = 1e-9


def _Q(d, u, v=0) -> QuadElement:
    return QuadElement(d, Fraction(u), Fraction(v))


@dataclass(frozen=True)
class TraceTriple:
    label: str
    x2: QuadElement
    y2: QuadElement
    z2: QuadElement  # as printed in the source table
    e: int
    d: int
    a: QuadElement
    b: QuadElement

    def __post_init__(self):
        if self.e < 2:
            raise ValueError("e must be >= 2")
        for r in (self.x2, self.y2, self.z2):
            if not embed(r) > 0:
                raise ValueError("radicands must be positive")
        if not (embed(self.x2) > 4 and embed(self.y2) > 4):
            raise ValueError("traces of alpha and beta must exceed 2")

    @property
    def z2_corrected(self) -> QuadElement:
        """z^2 = x^2 y^2 / 4, i.e. z = Tr(alpha beta) in the normal form."""
        return self.x2 * self.y2 / 4

    @property
    def z_consistent(self) -> bool:
        return self.z2 == self.z2_corrected

    @property
    def x(self) -> float:
        return embed(self.x2) ** 0.5

    @property
    def y(self) -> float:
        return embed(self.y2) ** 0.5

    @property
    def z(self) -> float:
        return embed(self.z2) ** 0.5

    @property
    def field_label(self) -> str:
        return "Q" if self.d == 0 else f"Q(sqrt{self.d})"

    def with_corrected_z(self) -> "TraceTriple":
        return TraceTriple(self.label, self.x2, self.y2, self.z2_corrected, self.e, self.d, self.a, self.b)


def _rows() -> tuple:
    h = Fraction(1, 2)
    return (
        TraceTriple("T1", _Q(0, 5), _Q(0, 12), _Q(0, 15), 2, 0, _Q(0, 5), _Q(0, -30)),
        TraceTriple("T2", _Q(5, 3, 1), _Q(5, 9, 3), _Q(5, 6, 9 * h), 5, 5,
                    _Q(5, 2, 2), _Q(5, -150, -66)),
        TraceTriple("T3", _Q(3, 3, 1), _Q(3, 8, 4), _Q(3, 9, 5), 2, 3,
                    _Q(3, 0, 2), _Q(3, -3, -2)),
        TraceTriple("T4", _Q(5, 3, 1), _Q(5, 6, 2), _Q(5, 7, 3), 2, 5,
                    _Q(5, 2, 2), _Q(5, -14, -6)),
        TraceTriple("T5", _Q(13, 5 * h, h), _Q(13, 16, 4), _Q(13, 33 * h, 9 * h), 2, 13,
                    _Q(13, -h, h), _Q(13, -33, -9)),
        TraceTriple("T6", _Q(5, 7 * h, h), _Q(5, 14, 6), _Q(5, 16, 7), 5, 5,
                    _Q(5, -1, 3), _Q(5, -230, -102)),
        TraceTriple("T7", _Q(3, 3, 1), _Q(3, 14, 6), _Q(3, 15, 8), 6, 3,
                    _Q(3, 24, 6), _Q(3, -93, -54)),
    )


_REGISTRY = _rows()
LABELS = tuple(t.label for t in _REGISTRY)


def registry() -> tuple:
    return _REGISTRY


def get_triple(label: str) -> TraceTriple:
    for t in _REGISTRY:
        if t.label == label.upper():
            return t
    raise KeyError(f"unknown group {label!r}; known: {', '.join(LABELS)}")


def two_cos_pi_over(e: int, d: int) -> QuadElement | None:
    """2cos(pi/e) as an element of Q(sqrt d) when it lies there."""
    if e == 2:
        return _Q(d, 0)
    if e == 3:
        return _Q(d, 1)
    if e == 4 and d == 2:
        return _Q(2, 0, 1)
    if e == 5 and d == 5:
        return _Q(5, Fraction(1, 2), Fraction(1, 2))
    if e == 6 and d == 3:
        return _Q(3, 0, 1)
    return None


def fricke_residual_exact(triple: TraceTriple, corrected: bool = False) -> QuadElement | None:
    z2 = triple.z2_corrected if corrected else triple.z2
    c = two_cos_pi_over(triple.e, triple.d)
    if c is None or z2 != triple.z2_corrected:
        return None
    xyz = triple.x2 * triple.y2 / 2  # x y (xy/2), all positive
    return triple.x2 + triple.y2 + z2 - xyz - 2 + c


def fricke_residual(triple: TraceTriple, corrected: bool = False) -> float:
    """x^2 + y^2 + z^2 - xyz - 2 + 2cos(pi/e); exact where possible."""
    ex = fricke_residual_exact(triple, corrected)
    if ex is not None:
        return embed(ex)
    z2 = triple.z2_corrected if corrected else triple.z2
    with mpmath.workdps(40):
        x2, y2, zz = (embed(r, dps=40) for r in (triple.x2, triple.y2, z2))
        val = x2 + y2 + zz - mpmath.sqrt(x2 * y2 * zz) - 2 + 2 * mpmath.cos(mpmath.pi / triple.e)
        return float(val)


# --- words ------------------------------------------------------------------

_INV = {"a": "A", "b": "B", "g": "G", "A": "a", "B": "b", "G": "g"}
_ALIASES = {"α": "a", "β": "b", "γ": "g", "alpha": "a", "beta": "b", "gamma": "g"}
_SUP = str.maketrans("⁻⁰¹²³⁴⁵⁶⁷⁸⁹", "-0123456789")
_TOKEN = re.compile(r"\s*(alpha|beta|gamma|Id|[abgABGαβγ])(?:\^?\(?(-?\d+)\)?)?\s*")


def free_reduce(word) -> tuple:
    out: list = []
    for ch in word:
        if out and out[-1] == _INV[ch]:
            out.pop()
        else:
            out.append(ch)
    return tuple(out)


def invert_word(word) -> tuple:
    return tuple(_INV[ch] for ch in reversed(word))


def parse_word(text: str) -> tuple:
    """Parse e.g. ``a^2 g a^-1``, ``α²γα⁻¹`` or ``Id`` into a reduced letter tuple."""
    s = text.strip().lstrip("±+").translate(_SUP)
    pos, out = 0, []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        pos = m.end()
        sym, exp = m.group(1), m.group(2)
        if sym == "Id":
            continue
        letter = _ALIASES.get(sym, sym)
        k = int(exp) if exp is not None else 1
        unit = letter if k > 0 else _INV[letter]
        out.extend([unit] * abs(k))
    return free_reduce(out)


def format_word(word) -> str:
    """Compact text form, e.g. ('a','a','g','A') -> 'a^2 g a^-1'."""
    if not word:
        return "Id"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        base = word[i].lower()
        k = (j - i) * (1 if word[i].islower() else -1)
        parts.append(base if k == 1 else f"{base}^{k}")
        i = j
    return " ".join(parts)


SQUARED_WORDS = tuple(parse_word(w) for w in ("a^2", "b^2", "g", "a g a^-1", "b g b^-1", "a b g b^-1 a^-1"))


@dataclass(frozen=True)
class GroupPresentation:
    label: str
    alpha: UnimodularMap
    beta: UnimodularMap
    gamma: UnimodularMap
    e: int
    squared_generators: tuple = field(default=(), repr=False)

    def letter(self, ch: str) -> UnimodularMap:
        m = {"a": self.alpha, "b": self.beta, "g": self.gamma}[ch.lower()]
        return m if ch.islower() else m.inverse()

    def evaluate(self, word) -> UnimodularMap:
        if isinstance(word, str):
            word = parse_word(word)
        return product(self.letter(ch) for ch in word) if word else IDENTITY


def synthesize(triple: TraceTriple, dps: int | None = None) -> GroupPresentation:
    """alpha = diag(lambda, 1/lambda), beta symmetric, gamma = -beta alpha beta^-1 alpha^-1.

    With ``dps`` the entries are mpmath numbers at that precision; callers
    must then do arithmetic on them inside ``mpmath.workdps(dps)``.
    """
    res = fricke_residual(triple, corrected=True)
    if abs(res) > FRICKE_TOL:
        raise UnrealizableTripleError(f"{triple.label}: Fricke residual {res:.3g}")
    if dps is None:
        sq = lambda q: embed(q) ** 0.5  # noqa: E731
        return _build(triple, sq)
    with mpmath.workdps(dps):
        return _build(triple, lambda q: mpmath.sqrt(embed(q, dps=dps)))


def _build(triple: TraceTriple, sq) -> GroupPresentation:
    x, y = sq(triple.x2), sq(triple.y2)
    rx, ry = sq(triple.x2 - 4), sq(triple.y2 - 4)
    lam = 2 / (x + rx)  # = (x - sqrt(x^2 - 4))/2 without cancellation
    alpha = UnimodularMap(lam, 0 * lam, 0 * lam, 1 / lam)
    beta = UnimodularMap.normalized(y / 2, -ry / 2, -ry / 2, y / 2)
    gamma = -product([beta, alpha, beta.inverse(), alpha.inverse()])
    pres = GroupPresentation(triple.label, alpha, beta, gamma, triple.e)
    sq_gens = tuple(pres.evaluate(w) for w in SQUARED_WORDS)
    return GroupPresentation(triple.label, alpha, beta, gamma, triple.e, sq_gens)


def squared_generators(g: GroupPresentation) -> tuple:
    """alpha^2, beta^2, gamma, alpha gamma alpha^-1, beta gamma beta^-1, alpha beta gamma beta^-1 alpha^-1."""
    return tuple(m.canonical() for m in g.squared_generators)


@lru_cache(maxsize=None)
def group(label: str) -> GroupPresentation:
    return synthesize(get_triple(label))


def _power(m: UnimodularMap, k: int) -> UnimodularMap:
    out = IDENTITY
    for _ in range(k):
        out = compose(out, m)
    return out


def relation_residuals(g: GroupPresentation) -> tuple:
    """Sup-norm distances of alpha beta alpha^-1 beta^-1 gamma and gamma^e from +-Id."""
    comm = product([g.alpha, g.beta, g.alpha.inverse(), g.beta.inverse(), g.gamma])
    return float(comm.distance(IDENTITY)), float(_power(g.gamma, g.e).distance(IDENTITY))


def algebra_diagnostics(triple: TraceTriple) -> dict:
    """Compare registry (a, b) with two readings of the closed-form parameter formulas.

    Reports table/formula ratios in exact arithmetic; nothing is adjudicated.
    """
    c = two_cos_pi_over(triple.e, triple.d)
    x2, y2 = triple.x2, triple.y2
    a_f = x2 * (x2 - 4)
    out = {"a_formula": a_f, "a_ratio": triple.a / a_f}
    if c is not None:
        b1 = -(2 + c * x2 * y2)
        b2 = -(2 + c) * x2 * y2
        out.update(b_formula_1=b1, b_ratio_1=triple.b / b1, b_formula_2=b2, b_ratio_2=triple.b / b2)
    return out


VALIDATE_COLUMNS = (
    "label", "e", "field", "z_printed_consistent", "fricke_printed", "fricke_corrected",
    "commutator_residual", "elliptic_residual", "a_ratio", "b_ratio_1", "b_ratio_2", "status",
)


def validate(tol: float = FRICKE_TOL) -> tuple[list[dict], bool]:
    """Rows of the validation report and whether every corrected check passed."""
    rows, ok = [], True
    for t in _REGISTRY:
        fp = fricke_residual(t)
        fc = fricke_residual(t, corrected=True)
        comm, ell = relation_residuals(group(t.label))
        diag = algebra_diagnostics(t)
        passed = abs(fc) <= tol and comm <= 1e-8 and ell <= 1e-8
        flags = []
        if abs(fp) > tol:
            flags.append("printed_z_fails")
        ok &= passed
        rows.append({
            "label": t.label, "e": t.e, "field": t.field_label,
            "z_printed_consistent": t.z_consistent,
            "fricke_printed": fp, "fricke_corrected": fc,
            "commutator_residual": comm, "elliptic_residual": ell,
            "a_ratio": str(diag["a_ratio"]),
            "b_ratio_1": str(diag.get("b_ratio_1", "")),
            "b_ratio_2": str(diag.get("b_ratio_2", "")),
            "status": ("pass" if passed else "FAIL") + ("" if not flags else ";" + ";".join(flags)),
        })
    return rows, ok


def validate_csv(rows, header: str = "") -> str:
    buf = io.StringIO()
    if header:
        buf.write(header + "\n")
    w = csv.DictWriter(buf, fieldnames=VALIDATE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (format(v, ".17g") if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()
