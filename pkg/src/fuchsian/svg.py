"""Static SVG figures: the domain in the disk and the constellation in the plane."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .hyperbolic import apply
from .tessellation import FundamentalDomain

_STYLE = (
    ".model{fill:none;stroke:#444;}"
    ".wall{fill:none;stroke:#9ab;}"
    ".domain{fill:#f3e2b8;fill-opacity:0.6;stroke:#222;}"
    ".tile{fill:#bcd7f0;fill-opacity:0.5;stroke:#35a;}"
    ".axis{stroke:#888;}"
    ".codeword{fill:#c22;}"
    "*{vector-effect:non-scaling-stroke;stroke-width:1px}"
)


def _f(x: float) -> str:
    return format(float(x), ".17g")


def _arc(p: complex, q: complex, center, radius) -> str:
    """SVG arc command for the minor arc p -> q (math orientation, y up)."""
    if center is None:
        return f"L {_f(q.real)} {_f(q.imag)}"
    a, b = p - center, q - center
    sweep = 1 if (a.conjugate() * b).imag > 0 else 0
    r = _f(radius)
    return f"A {r} {r} 0 0 {sweep} {_f(q.real)} {_f(q.imag)}"


def _geodesic_half(p: complex, q: complex):
    """Center and radius of the half-plane geodesic through p and q (None for a vertical line)."""
    dx = q.real - p.real
    if abs(dx) < 1e-12 * max(1.0, abs(p), abs(q)):
        return None, None
    x0 = (abs(q) ** 2 - abs(p) ** 2) / (2 * dx)
    return complex(x0, 0), abs(p - x0)


def _geodesic_disk(p: complex, q: complex):
    """Circle orthogonal to the unit circle through p and q (None for a diameter)."""
    cross = (p.conjugate() * q).imag
    if abs(cross) < 1e-12:
        return None, None
    # center c solves <c, p> = (1 + |p|^2)/2 and <c, q> = (1 + |q|^2)/2
    rp, rq = (1 + abs(p) ** 2) / 2, (1 + abs(q) ** 2) / 2
    det = p.real * q.imag - p.imag * q.real
    cx = (rp * q.imag - rq * p.imag) / det
    cy = (p.real * rq - q.real * rp) / det
    c = complex(cx, cy)
    return c, abs(p - c)


def _polygon_path(points, geodesic) -> str:
    k = len(points)
    out = [f"M {_f(points[0].real)} {_f(points[0].imag)}"]
    for i in range(k):
        p, q = points[i], points[(i + 1) % k]
        c, r = geodesic(p, q)
        out.append(_arc(p, q, c, r))
    return " ".join(out) + " Z"


def _doc(body: list, lo: complex, hi: complex, px: int = 640) -> str:
    w, h = hi.real - lo.real, hi.imag - lo.imag
    # flip y so that math coordinates can be used inside the group
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{px}" height="{int(px * h / w)}" '
        f'viewBox="{_f(lo.real)} {_f(-hi.imag)} {_f(w)} {_f(h)}">'
    )
    return "\n".join([head, f"<style>{_STYLE}</style>", '<g transform="scale(1,-1)">', *body, "</g>", "</svg>"]) + "\n"


def domain_svg(domain: FundamentalDomain, codebook=None, title: str = "") -> str:
    """Disk-model figure: wall circles clipped to the disk, the domain, tiles and codewords."""
    body = []
    if title:
        body.append(f"<title>{escape(title)}</title>")
    body.append('<defs><clipPath id="disk"><circle cx="0" cy="0" r="1"/></clipPath></defs>')
    body.append('<circle class="model" cx="0" cy="0" r="1"/>')
    body.append('<g clip-path="url(#disk)">')
    for i, w in enumerate(domain.walls):
        c = complex(w.circle.center)
        body.append(
            f'<circle class="wall" data-wall="{i}" cx="{_f(c.real)}" cy="{_f(c.imag)}" r="{_f(w.circle.radius)}"/>'
        )
    if codebook is not None and domain.compact:
        for e in codebook.entries[: codebook.N]:
            pts = [_to_disk(domain, apply(e.map, domain.from_working(v))) for v in domain.vertices]
            body.append(f'<path class="tile" d="{_polygon_path(pts, _geodesic_disk)}"/>')
    if domain.compact:
        verts = [complex(v) for v in domain.vertices]
        k = len(verts)
        d = [f"M {_f(verts[0].real)} {_f(verts[0].imag)}"]
        for i in range(k):
            w = domain.walls[domain.edge_walls[i]]
            d.append(_arc(verts[i], verts[(i + 1) % k], complex(w.circle.center), w.circle.radius))
        body.append(f'<path class="domain" d="{" ".join(d)} Z"/>')
    body.append("</g>")
    if codebook is not None:
        for e in codebook.entries[: codebook.N]:
            w = _to_disk(domain, e.codeword)
            body.append(
                f'<circle class="codeword" data-index="{e.index}" data-re="{_f(w.real)}" '
                f'data-im="{_f(w.imag)}" cx="{_f(w.real)}" cy="{_f(w.imag)}" r="0.012"/>'
            )
    return _doc(body, complex(-1.05, -1.05), complex(1.05, 1.05))


def _to_disk(domain: FundamentalDomain, z: complex) -> complex:
    return complex(domain.to_working(complex(z)))


def constellation_svg(codebook, title: str = "", tiles: bool = True) -> str:
    """Half-plane projection: tiles gamma(F) and -gamma(F) with all 2N codewords."""
    dom = codebook.domain
    base = [complex(dom.from_working(v)) for v in dom.vertices] if dom.compact else []
    pts = codebook.points
    R = max(1.2 * float(max(abs(pts))), 0.05)
    body = []
    if title:
        body.append(f"<title>{escape(title)}</title>")
    body.append(f'<line class="axis" x1="{_f(-R)}" y1="0" x2="{_f(R)}" y2="0"/>')
    body.append(f'<line class="axis" x1="0" y1="{_f(-R)}" x2="0" y2="{_f(R)}"/>')
    if tiles and base:
        for e in codebook.entries[: codebook.N]:
            img = [complex(apply(e.map, v)) for v in base]
            for sgn in (1, -1):
                poly = [sgn * z for z in img]
                body.append(f'<path class="tile" d="{_polygon_path(poly, _geodesic_half)}"/>')
    rr = R / 120
    for e in codebook.entries:
        z = e.codeword
        body.append(
            f'<circle class="codeword" data-index="{e.index}" data-re="{_f(z.real)}" '
            f'data-im="{_f(z.imag)}" cx="{_f(z.real)}" cy="{_f(z.imag)}" r="{_f(rr)}"/>'
        )
    return _doc(body, complex(-R, -R), complex(R, R))
