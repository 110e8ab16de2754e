"""Nonuniform Fuchsian codebooks {+-gamma(tau)} with a PRA decoder."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .errors import CodebookError, ReductionError
from .hyperbolic import IDENTITY, MapSet, UnimodularMap, apply, compose
from .takeuchi import (
    SQUARED_WORDS,
    GroupPresentation,
    format_word,
    free_reduce,
    group as _group,
    parse_word,
    squared_generators,
)
from .tessellation import FundamentalDomain, build_domain, contains, reduce, reduce_signed

# Codeword word lists per group (upper half; the lower half is the negation).
PRESETS = {
    "four_nuf": {
        "T1": ["a^2", "a g a^-1"],
        "T2": ["a^2", "a g a^-1"],
        "T3": ["a^2", "a g a^-1"],
        "T4": ["a^2", "a g a^-1"],
        "T5": ["Id", "a^2"],
        "T6": ["a^2", "a g a^-1"],
        "T7": ["a^2", "a g a^-1"],
    },
    "sixteen_nuf": {
        "T1": ["a^4", "a^2 g", "a^2 b^2", "a g a^-1 g", "a^3 g a^-1", "a^2 b g b^-1",
               "a g b g b^-1 a^-1", "a^3 b g b^-1 a^-1"],
        "T2": ["a^2", "a^4", "a^2 g", "a^2 b^2", "a g a^-1", "a g a", "a g a^-1 b^2",
               "a^3 b g b^-1 a^-1"],
        "T3": ["a^2", "a^4", "a^2 g", "a^3 g a^-1", "a^2 b g b^-1", "a g a^-1 b^2",
               "a g b a^-1 b^-1", "a^3 b g b^-1 a^-1"],
        "T4": ["a^2", "a^4", "a^2 g", "a g a", "a^3 g a^-1", "g b g b^-1", "a g a^-1 b^2",
               "a^3 b g b^-1 a^-1"],
        "T5": ["a^2", "a^4", "a^2 g", "a g a^-1", "a^3 g a^-1", "a g a^-1 b^2", "a g a^-1 g",
               "b g b^-1 a^2"],
        "T6": ["a^2", "a^4", "a^2 g", "a g a^-1", "a^3 g a^-1", "a g a^-1 g", "a^2 b g b^-1",
               "a^3 b g b^-1 a^-1"],
        "T7": ["a^2", "a^4", "a g a^-1", "a^2 g", "a g a^-1 g", "a^3 g a^-1", "a^2 b g b^-1",
               "a^3 b g b^-1 a^-1"],
    },
}

MATCH_TOL = 1e-6


def expand_squared(word) -> tuple:
    """Signed word over the six squared-subgroup generators -> letters in a, b, g."""
    out: list = []
    for k in word:
        w = SQUARED_WORDS[abs(k) - 1]
        out.extend(w if k > 0 else tuple(reversed([c.swapcase() for c in w])))
    return free_reduce(out)


@lru_cache(maxsize=None)
def load_group(label: str, search_depth: int = 3) -> tuple[GroupPresentation, FundamentalDomain]:
    """Presentation and fundamental domain of the squared subgroup, cached per label."""
    g = _group(label)
    return g, build_domain(squared_generators(g), search_depth=search_depth)


@dataclass(frozen=True)
class CodeEntry:
    index: int
    word: str
    map: UnimodularMap
    codeword: complex


@dataclass
class DecodeResult:
    message: int | None
    status: str  # ok | erasure | reduction_failure | boundary
    iterations: int = 0
    operations: int = 0
    via_ml: bool = False

    @property
    def ok(self) -> bool:
        return self.message is not None


@dataclass
class Codebook:
    group: str
    domain: FundamentalDomain
    tau: complex
    entries: list
    _index: MapSet = field(repr=False, default=None)

    def __post_init__(self):
        if self._index is None:
            self._index = MapSet(MATCH_TOL)
            for e in self.entries[: self.N]:
                self._index.add(e.map, e.index)
        self._points = np.array([e.codeword for e in self.entries])

    @property
    def N(self) -> int:
        return len(self.entries) // 2

    def __len__(self):
        return len(self.entries)

    @property
    def points(self) -> np.ndarray:
        return self._points

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "tau": [self.tau.real, self.tau.imag],
            "entries": [
                {"index": e.index, "word": e.word, "matrix": e.map.to_list(),
                 "re": e.codeword.real, "im": e.codeword.imag}
                for e in self.entries
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def build_codebook(group, preset="four_nuf", tau: complex = 1j,
                   domain: FundamentalDomain | None = None, maps=None) -> Codebook:
    """Codebook {+-gamma(tau)} for a preset name or an explicit list of words.

    ``group`` is a label or a GroupPresentation; ``maps`` may supply the
    matrices directly (aligned with the word list) instead of evaluating it.
    """
    if isinstance(group, str):
        pres, dom = load_group(group)
    else:
        pres, dom = group, None
    domain = domain or dom or load_group(pres.label)[1]
    if isinstance(preset, str):
        try:
            words = PRESETS[preset][pres.label]
        except KeyError:
            raise CodebookError(f"no preset {preset!r} for {pres.label}") from None
    else:
        words = list(preset)
    tau = complex(tau)
    if not (tau.imag > 0 and contains(domain, tau, tol=-domain.tol)):
        raise CodebookError(f"tau={tau} is not interior to the fundamental domain")
    if maps is None:
        maps = [pres.evaluate(parse_word(w)) for w in words]
    texts = [w if isinstance(w, str) else format_word(w) for w in words]
    N = len(maps)
    entries = [CodeEntry(i, texts[i], m, complex(apply(m, tau))) for i, m in enumerate(maps)]
    entries += [CodeEntry(N + i, "-" + texts[i], m, -entries[i].codeword) for i, m in enumerate(maps)]
    pts = np.array([e.codeword for e in entries])
    if _min_distance(pts) <= 1e-9:
        raise CodebookError("duplicate codewords: the word list is degenerate modulo sign")
    return Codebook(pres.label, domain, tau, entries)


def _min_distance(pts: np.ndarray) -> float:
    if len(pts) < 2:
        return math.nan
    xy = np.column_stack([pts.real, pts.imag])
    dist, _ = cKDTree(xy).query(xy, k=2)
    return float(dist[:, 1].min())


def encode(cb: Codebook, m: int) -> complex:
    if not 0 <= m < len(cb.entries):
        raise IndexError(f"message {m} outside [0, {len(cb.entries)})")
    return cb.entries[m].codeword


def nearest(cb: Codebook, y: complex) -> int:
    """Index of the closest codeword; ties go to the lowest index."""
    return int(np.argmin(np.abs(cb.points - y)))


def decode(cb: Codebook, y: complex, ml_fallback: bool = False) -> DecodeResult:
    """Fold the sign, reduce into the domain, and read off the tile's word."""
    y = complex(y)
    if y.imag == 0:
        if ml_fallback:
            return DecodeResult(nearest(cb, y), "ok", via_ml=True)
        return DecodeResult(None, "boundary")
    neg = y.imag < 0
    if neg:
        y = -y
    try:
        r = reduce(cb.domain, y)
    except ReductionError:
        if ml_fallback:
            return DecodeResult(nearest(cb, -y if neg else y), "ok", via_ml=True)
        return DecodeResult(None, "reduction_failure")
    idx = cb._index.find(r.map.inverse())
    if idx is None:
        if ml_fallback:
            return DecodeResult(nearest(cb, -y if neg else y), "ok", r.iterations, r.operations, True)
        return DecodeResult(None, "erasure", r.iterations, r.operations)
    m = cb._index.items[idx][1]
    return DecodeResult(m + cb.N if neg else m, "ok", r.iterations, r.operations)


@dataclass(frozen=True)
class Metrics:
    min_distance: float
    avg_energy: float
    code_depth: int


def metrics(cb: Codebook) -> Metrics:
    upper = cb.points[: cb.N]
    depth_ = max(reduce(cb.domain, e.codeword).iterations for e in cb.entries[: cb.N])
    return Metrics(_min_distance(cb.points), float(np.mean(np.abs(upper) ** 2)), depth_)


# --- nested codebooks for complexity measurements -----------------------------

def ball_words(domain: FundamentalDomain, n: int) -> list:
    """First n distinct elements in breadth-first order over the side pairings (identity first)."""
    letters = [(w.pairing, w.word) for w in domain.walls]
    seen = MapSet(1e-9)
    seen.add(IDENTITY, ())
    out = [(IDENTITY, ())]
    frontier = list(out)
    while len(out) < n and frontier:
        nxt = []
        for m, w in frontier:
            for lm, lw in letters:
                p = compose(m, lm)
                if seen.add(p)[1]:
                    item = (p, reduce_signed(w + lw))
                    nxt.append(item)
                    out.append(item)
                    if len(out) == n:
                        return out
        frontier = nxt
    return out


def nested_codebook(label: str, n: int, tau: complex = 1j) -> Codebook:
    pres, dom = load_group(label)
    items = ball_words(dom, n)
    words = [format_word(expand_squared(w)) for _, w in items]
    return build_codebook(pres, words, tau, dom, maps=[m for m, _ in items])


# --- ball census -------------------------------------------------------------

CENSUS_COLUMNS = ("group", "budget", "mode", "maps", "radius", "count", "min_distance")


@dataclass
class CensusReport:
    group: str
    budget: int
    radii: tuple
    counts: dict
    min_distance: float
    maps: int
    mode: str = "closure"

    def rows(self) -> list:
        return [
            {"group": self.group, "budget": self.budget, "mode": self.mode, "maps": self.maps,
             "radius": r, "count": self.counts[r], "min_distance": self.min_distance}
            for r in self.radii
        ]


def ball_census(group, budget: int = 5000, radii=(1.0, 0.5), inverses: bool = True,
                tol: float = 1e-9) -> CensusReport:
    """Count codewords +-gamma(i) in closed origin-centered balls.

    Elements come from a breadth-first enumeration over the six
    squared-subgroup generators (and their inverses unless ``inverses`` is
    false), deduplicated modulo sign, stopping once ``budget`` distinct
    maps are collected.  Only nonempty words are enumerated, so the
    identity appears only if some product equals it.
    """
    if budget < 6:
        raise ValueError("budget must be at least 6")
    radii = tuple(float(r) for r in radii)
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    pres = _group(group) if isinstance(group, str) else group
    gens = list(squared_generators(pres))
    letters = gens + ([g.inverse() for g in gens] if inverses else [])
    seen = MapSet(tol)
    frontier = [IDENTITY]
    done = False
    while frontier and not done:
        nxt = []
        for m in frontier:
            for g in letters:
                p = compose(m, g)
                if seen.add(p)[1]:
                    nxt.append(p)
                    if len(seen) >= budget:
                        done = True
                        break
            if done:
                break
        frontier = nxt
    pts = np.array([complex(apply(m, 1j)) for m, _ in seen])
    pts = np.concatenate([pts, -pts])
    mags = np.abs(pts)
    counts = {r: int(np.count_nonzero(mags <= r)) for r in radii}
    inside = pts[mags <= 1.0]
    return CensusReport(pres.label, budget, radii, counts, _min_distance(inside), len(seen),
                        "closure" if inverses else "positive_products")


def census_csv(reports, header: str = "") -> str:
    buf = io.StringIO()
    if header:
        buf.write(header + "\n")
    w = csv.DictWriter(buf, fieldnames=CENSUS_COLUMNS, lineterminator="\n")
    w.writeheader()
    for rep in reports:
        for row in rep.rows():
            w.writerow({k: (format(v, ".17g") if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
