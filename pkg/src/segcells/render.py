"""Deterministic SVG drawings of an instance and its certificate."""

from __future__ import annotations

from fractions import Fraction

SIZE = 640
MARGIN = 24
SEGMENT_COLOR = "#9a9a9a"
CHOSEN_COLOR = "#d62728"
BOUNDARY_FILL = "#eef3f8"
BOUNDARY_STROKE = "#4a6fa5"
CERT_COLOR = "#1f77b4"
POINT_COLOR = "#111111"


def _num(v) -> str:
    return f"{float(v):.4f}"


def render_svg(inst, chosen=(), certificate=None) -> str:
    pts = [p for s in inst.segments for p in (s.p, s.q)]
    if inst.a is not None:
        pts += [inst.a, inst.b]
    if inst.polygon is not None:
        pts += [p for ring in inst.polygon.rings() for p in ring]
    if certificate is not None:
        pts += list(certificate.vertices)
    if not pts:
        pts = [None]
        xs, ys = [Fraction(0), Fraction(1)], [Fraction(0), Fraction(1)]
    else:
        xs, ys = [p.x for p in pts], [p.y for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, Fraction(1))
    scale = Fraction(SIZE - 2 * MARGIN) / span

    def X(p):
        return _num(MARGIN + (p.x - x0) * scale)

    def Y(p):
        return _num(SIZE - MARGIN - (p.y - y0) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           '<rect width="100%" height="100%" fill="white"/>']
    if inst.polygon is not None:
        d = " ".join("M " + " L ".join(f"{X(p)} {Y(p)}" for p in ring) + " Z"
                     for ring in inst.polygon.rings())
        out.append(f'<path d="{d}" fill="{BOUNDARY_FILL}" fill-rule="evenodd" '
                   f'stroke="{BOUNDARY_STROKE}" stroke-width="1.5"/>')
    chosen = set(chosen)
    for s in sorted(inst.segments, key=lambda s: (s.id in chosen, s.id)):
        color, width = (CHOSEN_COLOR, 2.5) if s.id in chosen else (SEGMENT_COLOR, 1.2)
        out.append(f'<line x1="{X(s.p)}" y1="{Y(s.p)}" x2="{X(s.q)}" y2="{Y(s.q)}" '
                   f'stroke="{color}" stroke-width="{width}"><title>s{s.id}</title></line>')
    if certificate is not None and len(certificate.vertices) > 1:
        tag = "polygon" if certificate.closed else "polyline"
        coords = " ".join(f"{X(p)},{Y(p)}" for p in certificate.vertices)
        out.append(f'<{tag} points="{coords}" fill="none" stroke="{CERT_COLOR}" '
                   f'stroke-width="1.8" stroke-dasharray="6 4"/>')
    if inst.a is not None:
        for name, p in (("a", inst.a), ("b", inst.b)):
            out.append(f'<circle cx="{X(p)}" cy="{Y(p)}" r="4" fill="{POINT_COLOR}"/>')
            out.append(f'<text x="{X(p)}" y="{Y(p)}" dx="6" dy="-6" font-family="sans-serif" '
                       f'font-size="13">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
