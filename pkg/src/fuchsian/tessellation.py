"""Fundamental domains from isometric circles and the point reduction algorithm.

The group is conjugated so that the base point sits at i, then moved to the
unit disk by the Cayley map.  There every non-elliptic-about-the-center
element has an isometric circle, and the isometric circle of g is the
perpendicular bisector of 0 and g^-1(0).  The domain is therefore the
Dirichlet polygon at the base point; it is assembled by clipping in the
Klein model, where each bisector is a straight line.

Words are tuples of nonzero ints: ``k`` is generator k (1-based) and
``-k`` its inverse.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import CenterFixedError, DomainConstructionError, ReductionError
from .hyperbolic import (
    DEFAULT_TOL,
    IDENTITY,
    IsometricCircle,
    MapSet,
    UnimodularMap,
    cayley,
    compose,
    disk_apply,
    disk_coeffs,
    polygon_area,
    product,
)

log = logging.getLogger(__name__)

_CLIP_EPS = 1e-13
_VERTEX_MERGE = 1e-10
_BOX = 1.5


def reduce_signed(word) -> tuple:
    out: list = []
    for k in word:
        if out and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


def invert_signed(word) -> tuple:
    return tuple(-k for k in reversed(word))


def conjugator_for(center) -> UnimodularMap:
    """Real affine map z -> (z - Re c)/Im c, sending the base point to i."""
    x, y = center.real, center.imag
    if not y > 0:
        raise ValueError("center must lie in the upper half-plane")
    s = y ** 0.5
    return UnimodularMap(1 / s, -x / s, 0 * s, s)


def _conj(P: UnimodularMap, g: UnimodularMap) -> UnimodularMap:
    return product([P, g, P.inverse()])


@dataclass(frozen=True)
class Wall:
    circle: IsometricCircle  # in the working disk
    side: str
    pairing: UnimodularMap  # in the caller's half-plane coordinates
    word: tuple
    working: UnimodularMap  # pairing conjugated to the base point i
    A: complex = field(repr=False, default=0j)
    B: complex = field(repr=False, default=0j)

    @classmethod
    def make(cls, pairing, working, word, side="keep_exterior") -> "Wall":
        A, B = disk_coeffs(working)
        circle = IsometricCircle(-A.conjugate() / B.conjugate(), 1 / abs(B))
        return cls(circle, side, pairing, tuple(word), working, A, B)

    def violation(self, w) -> float:
        """Positive when w is strictly on the discarded side."""
        gap = abs(w - self.circle.center) - self.circle.radius
        return -gap if self.side == "keep_exterior" else gap

    def act(self, w):
        return disk_apply(self.A, self.B, w)


@dataclass
class ReductionResult:
    point: complex
    map: UnimodularMap
    iterations: int
    operations: int = 0
    disk_point: complex = 0j
    walls: tuple = ()


@dataclass
class FundamentalDomain:
    model: str
    conjugator: UnimodularMap
    walls: list
    center: complex
    vertices: list  # working-disk polygon vertices, counterclockwise
    edge_walls: list  # wall index of the edge leaving each vertex
    compact: bool
    area: float
    search_depth: int = 3
    tol: float = DEFAULT_TOL
    notes: list = field(default_factory=list)

    def __post_init__(self):
        self._arrays()

    def _arrays(self):
        self._cc = np.array([complex(w.circle.center) for w in self.walls])
        self._rr = np.array([float(w.circle.radius) for w in self.walls])
        self._ext = np.array([w.side == "keep_exterior" for w in self.walls])

    @property
    def max_iter(self) -> int:
        return 64 + 4 * self.search_depth

    def to_working(self, z, model: str = "half_plane"):
        if model == "disk":
            return z
        return cayley(_apply(self.conjugator, z), "to_disk")

    def from_working(self, w, model: str = "half_plane"):
        if model == "disk":
            return w
        return _apply(self.conjugator.inverse(), cayley(w, "to_half"))

    def _violations(self, w):
        if isinstance(w, complex):
            gap = np.abs(w - self._cc) - self._rr
            return np.where(self._ext, -gap, gap)
        return [wl.violation(w) for wl in self.walls]

    def word_text(self, wall: Wall, names=None) -> str:
        names = names or {}
        return " ".join(names.get(k, f"s{k}" if k > 0 else f"s{-k}^-1") for k in wall.word) or "Id"

    def pairing_words(self) -> list:
        return [w.word for w in self.walls]

    # serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        def c2(z):
            return [float(complex(z).real), float(complex(z).imag)]

        return {
            "model": self.model,
            "center": c2(self.center),
            "conjugator": self.conjugator.to_list(),
            "search_depth": self.search_depth,
            "tol": self.tol,
            "compact": self.compact,
            "area": self.area if math.isfinite(self.area) else None,
            "vertices": [c2(v) for v in self.vertices],
            "edge_walls": list(self.edge_walls),
            "walls": [
                {
                    "word": list(w.word),
                    "side": w.side,
                    "circle": {"center": c2(w.circle.center), "radius": float(w.circle.radius)},
                    "pairing": w.pairing.to_float().to_list(),
                    "working": w.working.to_float().to_list(),
                }
                for w in self.walls
            ],
            "notes": list(self.notes),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, obj: dict) -> "FundamentalDomain":
        walls = []
        for w in obj["walls"]:
            pairing = UnimodularMap.from_array(w["pairing"])
            working = UnimodularMap.from_array(w["working"])
            wall = Wall.make(pairing, working, tuple(w["word"]), w["side"])
            walls.append(wall)
        area = obj["area"]
        return cls(
            model=obj["model"],
            conjugator=UnimodularMap.from_array(obj["conjugator"]),
            walls=walls,
            center=complex(*obj["center"]),
            vertices=[complex(*v) for v in obj["vertices"]],
            edge_walls=list(obj["edge_walls"]),
            compact=obj["compact"],
            area=math.inf if area is None else area,
            search_depth=obj["search_depth"],
            tol=obj["tol"],
            notes=list(obj.get("notes", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "FundamentalDomain":
        return cls.from_dict(json.loads(text))


def _apply(m: UnimodularMap, z):
    return (m.a * z + m.b) / (m.c * z + m.d)


# --- Klein-model clipping ---------------------------------------------------

def _klein_line(working: UnimodularMap):
    """Unit normal n and offset t with the kept half-plane {k : <k, n> <= t}."""
    A, B = disk_coeffs(working)
    p = -B / A  # g^-1(0) in the Poincare disk
    return complex(p / abs(p)), float(abs(B) / abs(A))


def _clip(poly, labels, n: complex, t: float, label: int):
    """Clip a convex CCW polygon by <k, n> <= t, tracking edge labels."""
    s = [(v.real * n.real + v.imag * n.imag) - t for v in poly]
    if max(s) <= _CLIP_EPS:
        return poly, labels, False
    out, lab = [], []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        sp, sq = s[i], s[(i + 1) % m]
        pin, qin = sp <= _CLIP_EPS, sq <= _CLIP_EPS
        if pin:
            out.append(p)
            if qin:
                lab.append(labels[i])
            else:
                lab.append(labels[i])
                x = p + (q - p) * (sp / (sp - sq))
                out.append(x)
                lab.append(label)
        elif qin:
            x = p + (q - p) * (sp / (sp - sq))
            out.append(x)
            lab.append(labels[i])
    return out, lab, True


def _merge(poly, labels):
    out, lab = [], []
    m = len(poly)
    for i in range(m):
        if abs(poly[i] - poly[(i + 1) % m]) < _VERTEX_MERGE:
            continue
        out.append(poly[i])
        lab.append(labels[i])
    return out, lab


def _klein_to_disk(k: complex) -> complex:
    r2 = abs(k) ** 2
    return k / (1 + math.sqrt(max(0.0, 1 - r2)))


def _seg_dist0(p: complex, q: complex) -> float:
    d = q - p
    L = abs(d) ** 2
    s = 0.0 if L == 0 else max(0.0, min(1.0, -(p.real * d.real + p.imag * d.imag) / L))
    return abs(p + s * d)


def _dirichlet(cands):
    """cands: list of (working map, payload).  Returns polygon data."""
    lines = []
    for idx, (m, _) in enumerate(cands):
        A, B = disk_coeffs(m)
        if abs(B) <= 1e-12 * max(1.0, abs(A)):
            raise CenterFixedError("a candidate element fixes the base point")
        n, t = _klein_line(m)
        lines.append((t, idx, n))
    lines.sort(key=lambda r: r[0])
    poly = [complex(-_BOX, -_BOX), complex(_BOX, -_BOX), complex(_BOX, _BOX), complex(-_BOX, _BOX)]
    labels = [-1, -1, -1, -1]
    for t, idx, n in lines:
        poly, labels, _ = _clip(poly, labels, n, t, idx)
        if len(poly) < 3:
            raise DomainConstructionError("empty interior")
    poly, labels = _merge(poly, labels)
    if len(poly) < 3:
        raise DomainConstructionError("empty interior")
    compact = all(abs(v) < 1 - 1e-12 for v in poly)
    used = []
    m = len(poly)
    for i, lab in enumerate(labels):
        if lab < 0 or lab in used:
            continue
        if compact or _seg_dist0(poly[i], poly[(i + 1) % m]) < 1 - 1e-12:
            used.append(lab)
    return poly, labels, compact, used


# --- construction -----------------------------------------------------------

class _WordEval:
    """Evaluate reduced words over the base generators, memoized by prefix.

    Recomputing from words keeps maps accurate across refinement rounds
    instead of multiplying already-rounded products together.
    """

    def __init__(self, base):
        self.letter = {}
        for k, m in enumerate(base, start=1):
            self.letter[k] = m
            self.letter[-k] = m.inverse()
        self.cache = {(): IDENTITY}

    def __call__(self, word):
        word = tuple(word)
        hit = self.cache.get(word)
        if hit is None:
            hit = compose(self(word[:-1]), self.letter[word[-1]])
            self.cache[word] = hit
        return hit


def _enumerate(pool_words, depth: int, tol: float, ev: _WordEval):
    """Distinct non-identity products of up to ``depth`` pool words (and inverses)."""
    letters = []
    seen_words = set()
    for w in pool_words:
        for ww in (w, invert_signed(w)):
            if ww and ww not in seen_words:
                seen_words.add(ww)
                letters.append(ww)
    seen = MapSet(tol)
    seen.add(IDENTITY)
    out = []
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for lw in letters:
                word = reduce_signed(w + lw)
                if not word:
                    continue
                p = ev(word)
                if seen.add(p)[1]:
                    nxt.append(word)
                    out.append((p, word))
        frontier = nxt
    return out


def _pra_disk(walls, w, tol, max_iter):
    """Bare PRA in the working disk; returns (point, list of wall indices used)."""
    path = []
    for _ in range(max_iter + 1):
        best, bi = tol, -1
        for i, wl in enumerate(walls):
            v = wl.violation(w)
            if v > best:
                best, bi = v, i
        if bi < 0:
            return w, path
        w = walls[bi].act(w)
        path.append(bi)
    raise ReductionError("PRA did not converge")


def _pairing_consistent(walls, poly, labels, cand_index, tol=1e-7) -> bool:
    """Each wall's pairing carries its edge onto the edge of the inverse wall."""
    m = len(poly)
    pts = [_klein_to_disk(v) for v in poly]
    edges = {}
    for i, lab in enumerate(labels):
        edges.setdefault(lab, []).append((pts[i], pts[(i + 1) % m]))
    for wl, lab in zip(walls, cand_index):
        inv = wl.working.inverse()
        partner = None
        for wl2, lab2 in zip(walls, cand_index):
            if wl2.working.same(inv, 1e-7):
                partner = lab2
                break
        if partner is None:
            return False
        for p, q in edges.get(lab, []):
            ip, iq = wl.act(p), wl.act(q)
            ok = any(
                (abs(ip - a) < tol and abs(iq - b) < tol) or (abs(ip - b) < tol and abs(iq - a) < tol)
                for a, b in edges.get(partner, [])
            )
            if not ok:
                return False
    return True


def build_domain(generators, search_depth: int = 3, center: complex = 1j, tol: float = DEFAULT_TOL,
                 max_rounds: int = 16, retries: int = 3) -> FundamentalDomain:
    """Dirichlet domain at ``center`` for the group generated by ``generators``.

    Candidates are words up to ``search_depth``; the wall set is then
    closed up by re-enumerating products of the current side pairings until
    it stabilizes, every generator reduces to the identity, and the side
    pairings match edges.  A base point fixed by an elliptic element is
    perturbed and retried (noted in ``domain.notes``).
    """
    notes = []
    c = complex(center)
    for attempt in range(retries + 1):
        try:
            dom = _build(list(generators), search_depth, c, tol, max_rounds)
            dom.notes.extend(notes)
            return dom
        except CenterFixedError as exc:
            if attempt == retries:
                raise
            newc = c + complex(0.0137, 0.0071) * (attempt + 1)
            msg = f"center {c} fixed by an elliptic element ({exc}); retrying at {newc}"
            log.warning(msg)
            notes.append(msg)
            c = newc
    raise AssertionError


def _build(gens, depth, center, tol, max_rounds) -> FundamentalDomain:
    P = conjugator_for(center)
    ev = _WordEval([_conj(P, g) for g in gens])
    base = [(k,) for k in range(1, len(gens) + 1)]
    pool = list(base)
    prev = None
    d = depth
    bump = 0
    for rnd in range(max_rounds):
        cands = _enumerate(pool, d, tol, ev)
        poly, labels, compact, used = _dirichlet(cands)
        walls = []
        for idx in used:
            m, w = cands[idx]
            walls.append(Wall.make(_conj(P.inverse(), m), m, w))
        # generators must reduce to the identity through the walls
        extra = []
        for w in base:
            m = ev(w)
            img = disk_apply(*disk_coeffs(m), 0j)
            try:
                _, path = _pra_disk(walls, img, tol, 256)
            except ReductionError:
                continue
            hw = w
            for i in path:
                hw = reduce_signed(walls[i].word + hw)
            if hw and not ev(hw).is_identity(1e-8):
                extra.append(hw)
        cur = MapSet(1e-8)
        for wl in walls:
            cur.add(wl.working)
        stable = prev is not None and len(prev) == len(cur) and all(wl.working in prev for wl in walls)
        paired = (not compact) or _pairing_consistent(walls, poly, labels, used)
        log.debug("round %d: %d candidates, %d walls, compact=%s paired=%s extra=%d",
                  rnd, len(cands), len(walls), compact, paired, len(extra))
        if stable and not extra and paired:
            break
        if stable and not extra and not paired:
            bump += 1
        prev = cur
        pool = [wl.word for wl in walls] + extra + base
        # refinement rounds only need short products of the current pairings
        d = min(depth, 2) + bump
    else:
        raise DomainConstructionError(f"wall set did not stabilize in {max_rounds} rounds")

    order = {lab: i for i, lab in enumerate(used)}
    edge_walls = [order.get(lab, -1) for lab in labels]
    dverts = [_klein_to_disk(v) for v in poly]
    area = math.inf
    if compact:
        circles = [walls[j].circle for j in edge_walls]
        area = polygon_area(dverts, circles)
    return FundamentalDomain("disk", P, walls, center, dverts, edge_walls, compact, area, depth, tol)


# --- membership and reduction ----------------------------------------------

def contains(domain: FundamentalDomain, z, tol: float | None = None, model: str = "half_plane") -> bool:
    tol = domain.tol if tol is None else tol
    w = domain.to_working(z, model)
    return bool(max(domain._violations(w), default=-1.0) <= tol)


def reduce(domain: FundamentalDomain, z, tol: float | None = None, max_iter: int | None = None,
           model: str = "half_plane") -> ReductionResult:
    """Point reduction: cross the most violated wall until none is violated."""
    tol = domain.tol if tol is None else tol
    max_iter = domain.max_iter if max_iter is None else max_iter
    w = domain.to_working(z, model)
    nw = len(domain.walls)
    M = IDENTITY
    path = []
    ops = 0
    fast = isinstance(w, complex)
    for it in range(max_iter + 1):
        if fast:
            v = domain._violations(w)
            bi = int(np.argmax(v))
            best = v[bi]
        else:
            v = domain._violations(w)
            bi = max(range(nw), key=lambda i: (v[i], -i))
            best = v[bi]
        ops += nw
        if not best > tol:
            P = domain.conjugator
            Mh = product([P.inverse(), M, P]) if not P.same(IDENTITY, 0) else M
            point = domain.from_working(w, model)
            return ReductionResult(point, Mh, it, ops, w, tuple(path))
        wl = domain.walls[bi]
        w = wl.act(w)
        M = compose(wl.working, M)
        path.append(bi)
        ops += 1
    raise ReductionError(f"no convergence within {max_iter} iterations")


def depth(domain: FundamentalDomain, g: UnimodularMap, tau=1j) -> int:
    return reduce(domain, _apply(g, tau)).iterations


def lift(domain: FundamentalDomain, generators, dps: int) -> FundamentalDomain:
    """Re-evaluate every wall word on extended-precision generators.

    Must be called, and the result used, inside ``mpmath.workdps(dps)``
    (or a higher precision).
    """
    with mpmath.workdps(dps):
        c = domain.center
        P = conjugator_for(mpmath.mpc(c.real, c.imag))
        walls = []
        for wl in domain.walls:
            g = product(generators[k - 1] if k > 0 else generators[-k - 1].inverse() for k in wl.word)
            walls.append(Wall.make(g, _conj(P, g), wl.word, wl.side))
        return FundamentalDomain(domain.model, P, walls, mpmath.mpc(c.real, c.imag), domain.vertices,
                                 domain.edge_walls, domain.compact, domain.area, domain.search_depth,
                                 domain.tol, list(domain.notes))
