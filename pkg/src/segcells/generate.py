"""Seeded instance families.

Every generator is a pure function of its parameters and seed, and checks
the preconditions its family promises before returning.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import arrangement
from .errors import DegenerateError, ParamsError
from .geom import (Point, Segment, incidences, on_closed_segment, properly_cross, seg_intersect,
                   triple_points)
from .io import Instance
from .polygon import PolygonWithHoles

FAMILIES = ("random", "nested-polygons", "contact-grid", "polygon-restricted")


def _off_segments(p: Point, segments) -> bool:
    return not any(on_closed_segment(p, s.p, s.q) for s in segments)


def _compatible(s: Segment, segments) -> bool:
    try:
        for t in segments:
            seg_intersect(s, t)
    except DegenerateError:
        return False
    return True


def random_point(rng, box, den=2, avoid=()) -> Point:
    """Rational point of the form k/den in [0, box]^2 off every segment."""
    while True:
        p = Point(Fraction(rng.randint(0, box * den), den), Fraction(rng.randint(0, box * den), den))
        if _off_segments(p, avoid):
            return p


def pick_points(rng, segments, box, prefer_bounded=True, tries=60):
    """Choose a, b off the segments.

    With prefer_bounded, a is steered into a bounded cell and b into a cell
    different from a's whenever a few random draws find one.
    """
    if not segments:
        return random_point(rng, box), random_point(rng, box)
    arr = arrangement.build(segments)
    rounds = tries if prefer_bounded and len(arr.faces) > 1 else 1
    a = None
    for _ in range(rounds):
        a = random_point(rng, box, 4, segments)
        if arrangement.locate(arr, a) != 0:
            break
    fa = arrangement.locate(arr, a)
    b = None
    for _ in range(rounds):
        b = random_point(rng, box, 4, segments)
        if b != a and arrangement.locate(arr, b) != fa:
            return a, b
    while b == a:
        b = random_point(rng, box, 4, segments)
    return a, b


def random_instance(n, seed, box=32, weights="unit", allow_triple=True, max_crossings=None,
                    prefer_bounded=True, problem="separation") -> Instance:
    """Uniform integer endpoints; overlapping pairs are redrawn."""
    if n < 0 or box < 1:
        raise ParamsError("n must be >= 0 and box >= 1")
    if weights not in ("unit", "rational", "01"):
        raise ParamsError(f"unknown weight mode {weights!r}")
    rng = random.Random(seed)
    for _ in range(1000):
        segments = []
        while len(segments) < n:
            p = (rng.randint(0, box), rng.randint(0, box))
            q = (rng.randint(0, box), rng.randint(0, box))
            if p == q:
                continue
            if weights == "unit":
                w = Fraction(1)
            elif weights == "01":
                w = Fraction(rng.randint(0, 1))
            else:
                w = Fraction(rng.randint(0, 12), rng.randint(1, 4))
            s = Segment(len(segments), Point(Fraction(p[0]), Fraction(p[1])),
                        Point(Fraction(q[0]), Fraction(q[1])), w)
            if _compatible(s, segments):
                segments.append(s)
        if not allow_triple and triple_points(segments):
            continue
        if max_crossings is not None and count_crossings(segments) > max_crossings:
            continue
        a, b = pick_points(rng, segments, box, prefer_bounded)
        return Instance(problem, segments, a, b, meta={"family": "random", "seed": seed})
    raise ParamsError("could not satisfy the requested constraints")


def count_crossings(segments) -> int:
    items = list(segments)
    return sum(1 for i, s in enumerate(items) for t in items[i + 1:] if properly_cross(s.p, s.q, t.p, t.q))


def nested_polygons(levels, seed, sides=4, extra=0, problem="separation") -> Instance:
    """Nested convex rings around a with b outside, plus optional random chords."""
    if levels < 1 or sides < 3:
        raise ParamsError("need levels >= 1 and sides >= 3")
    rng = random.Random(seed)
    size = 8 * levels + 8
    c = Fraction(size, 2)
    segments = []
    radius = Fraction(3)
    for _ in range(levels):
        # a convex polygon through jittered points on a diamond/square of this radius
        verts = _convex_ring(rng, c, radius, sides)
        for i in range(sides):
            segments.append(Segment(len(segments), verts[i], verts[(i + 1) % sides]))
        radius += 4
    tries = 0
    while len(segments) < levels * sides + extra and tries < 1000:
        tries += 1
        p = Point(Fraction(rng.randint(0, size)), Fraction(rng.randint(0, size)))
        q = Point(Fraction(rng.randint(0, size)), Fraction(rng.randint(0, size)))
        if p == q:
            continue
        s = Segment(len(segments), p, q)
        if _compatible(s, segments):
            segments.append(s)
    a = Point(c + Fraction(1, 3), c + Fraction(1, 7))
    b = Point(Fraction(-1, 3), Fraction(-2, 7))
    if not (_off_segments(a, segments) and _off_segments(b, segments)):
        a, b = pick_points(rng, segments, size)
    return Instance(problem, segments, a, b, meta={"family": "nested-polygons", "seed": seed})


def _convex_ring(rng, c, r, sides):
    # points on the boundary of the square of half-width r, strictly increasing angle
    verts = []
    per = 8 * r
    cuts = sorted(rng.sample(range(int(per)), sides))
    for t in cuts:
        t = Fraction(t)
        side, off = divmod(t, 2 * r)
        off -= r
        if side == 0:
            verts.append(Point(c + r, c + off))
        elif side == 1:
            verts.append(Point(c - off, c + r))
        elif side == 2:
            verts.append(Point(c - r, c - off))
        else:
            verts.append(Point(c + off, c - r))
    return verts


def contact_grid(n, seed, box=16, crossing=0, problem="connection") -> Instance:
    """Axis-parallel segments inside a frame, each grown until it touches another.

    The result has no proper crossings and no point on three segments.  With
    crossing > 0, extra free segments are then added while the number of
    properly crossing pairs stays at most `crossing`, again with no point on
    three segments.
    """
    if n < 0 or box < 4:
        raise ParamsError("need n >= 0 and box >= 4")
    rng = random.Random(seed)
    P = lambda x, y: Point(Fraction(x), Fraction(y))  # noqa: E731
    segments = [Segment(0, P(0, 0), P(box, 0)), Segment(1, P(box, 0), P(box, box)),
                Segment(2, P(box, box), P(0, box)), Segment(3, P(0, box), P(0, 0))]
    attempts = 0
    while len(segments) < n + 4 and attempts < 200 * (n + 1):
        attempts += 1
        x, y = rng.randint(1, box - 1), rng.randint(1, box - 1)
        start = P(x, y)
        if not _off_segments(start, segments):
            continue
        horizontal = rng.random() < 0.5
        ends = []
        for sign in (-1, 1):
            cx, cy = x, y
            while True:
                nx, ny = (cx + sign, cy) if horizontal else (cx, cy + sign)
                cx, cy = nx, ny
                if not _off_segments(P(cx, cy), segments):
                    break
            ends.append(P(cx, cy))
        s = Segment(len(segments), ends[0], ends[1])
        if not _compatible(s, segments):
            continue
        if any(properly_cross(s.p, s.q, t.p, t.q) for t in segments):
            continue
        if triple_points(segments + [s]):
            continue
        segments.append(s)
    assert count_crossings(segments) == 0 and not triple_points(segments)
    budget = crossing
    attempts = 0
    while budget > 0 and attempts < 200:
        attempts += 1
        p = P(rng.randint(1, box - 1), rng.randint(1, box - 1))
        q = P(rng.randint(1, box - 1), rng.randint(1, box - 1))
        if p == q:
            continue
        s = Segment(len(segments), p, q)
        if not _compatible(s, segments):
            continue
        k = sum(properly_cross(s.p, s.q, t.p, t.q) for t in segments)
        if k == 0 or k > budget or triple_points(segments + [s]):
            continue
        segments.append(s)
        budget -= k
    a, b = pick_points(rng, segments, box)
    meta = {"family": "contact-grid", "seed": seed}
    if crossing:
        meta["crossing"] = crossing
    return Instance(problem, segments, a, b, meta=meta)


def _square(x0, y0, side, ccw=True):
    pts = [(x0, y0), (x0 + side, y0), (x0 + side, y0 + side), (x0, y0 + side)]
    if not ccw:
        pts = pts[::-1]
    return tuple(Point(Fraction(x), Fraction(y)) for x, y in pts)


def polygon_restricted(h, n, seed, size=24, problem="connection-polygon") -> Instance:
    """Square with h square holes and n chords between boundary points.

    Chord endpoints are generic rational points of boundary edges (never
    vertices); chords avoid each other's endpoints, polygon vertices, a and b.
    """
    if h < 0 or n < 0 or size < 8:
        raise ParamsError("need h >= 0, n >= 0 and size >= 8")
    rng = random.Random(seed)
    for _ in range(200):
        holes, boxes = [], []
        ok = True
        for _ in range(h):
            for _ in range(200):
                side = rng.randint(2, 4)
                x0, y0 = rng.randint(2, size - side - 2), rng.randint(2, size - side - 2)
                if all(x0 + side + 1 < bx or bx + bs + 1 < x0 or y0 + side + 1 < by or by + bs + 1 < y0
                       for bx, by, bs in boxes):
                    boxes.append((x0, y0, side))
                    holes.append(_square(x0, y0, side, ccw=False))
                    break
            else:
                ok = False
        if not ok:
            continue
        poly = PolygonWithHoles(_square(0, 0, size), tuple(holes)).validate()
        a = _interior_point(rng, poly, size)
        b = _interior_point(rng, poly, size, avoid=a)
        segments = _chords(rng, poly, n, (a, b))
        if segments is None:
            continue
        return Instance(problem, segments, a, b, poly, meta={"family": "polygon-restricted", "seed": seed})
    raise ParamsError("could not place the requested holes and chords")


def _interior_point(rng, poly, size, avoid=None) -> Point:
    while True:
        p = Point(Fraction(rng.randint(1, 8 * size - 1), 8) + Fraction(1, 101),
                  Fraction(rng.randint(1, 8 * size - 1), 8) + Fraction(1, 103))
        if p != avoid and poly.contains(p, strict=True):
            return p


def _chords(rng, poly, n, points):
    edges = poly.boundary_edges()
    vertices = [v for ring in poly.rings() for v in ring]
    segments = []
    attempts = 0
    while len(segments) < n:
        attempts += 1
        if attempts > 400 * (n + 1):
            return None
        ends = []
        for _ in range(2):
            _, _, u, v = edges[rng.randrange(len(edges))]
            t = Fraction(rng.randint(1, 96), 97)
            ends.append(Point(u.x + t * (v.x - u.x), u.y + t * (v.y - u.y)))
        if ends[0] == ends[1]:
            continue
        s = Segment(len(segments), ends[0], ends[1])
        if not _inside_chord(s, poly):
            continue
        if any(on_closed_segment(p, s.p, s.q) for p in list(points) + vertices):
            continue
        if not _compatible(s, segments):
            continue
        if any(on_closed_segment(e, t.p, t.q) for t in segments for e in (s.p, s.q)):
            continue
        if any(on_closed_segment(e, s.p, s.q) for t in segments for e in (t.p, t.q)):
            continue
        segments.append(s)
    if triple_points(segments):
        return None
    return segments


def _inside_chord(s: Segment, poly) -> bool:
    mid = Point((s.p.x + s.q.x) / 2, (s.p.y + s.q.y) / 2)
    if not poly.contains(mid, strict=True):
        return False
    for _, _, u, v in poly.boundary_edges():
        try:
            x = seg_intersect(s, Segment(-1, u, v, Fraction(0)))
        except DegenerateError:
            return False
        if x is not None and x not in (s.p, s.q):
            return False
    return True


def generate(kind, seed, **params) -> Instance:
    if kind == "random":
        return random_instance(params.get("n", 8), seed, box=params.get("box", 32),
                               weights=params.get("weights", "unit"),
                               allow_triple=params.get("allow_triple", True))
    if kind == "nested-polygons":
        return nested_polygons(params.get("levels", 3), seed, sides=params.get("sides", 4),
                               extra=params.get("n", 0))
    if kind == "contact-grid":
        return contact_grid(params.get("n", 8), seed, box=params.get("box", 16),
                            crossing=params.get("crossing", 0))
    if kind == "polygon-restricted":
        return polygon_restricted(params.get("h", 1), params.get("n", 6), seed, size=params.get("box", 24))
    raise ParamsError(f"unknown family {kind!r}")


def validate_family(inst: Instance) -> list:
    """Violations of the preconditions the instance's family declares."""
    family = inst.meta.get("family")
    problems = []
    if family == "contact-grid":
        if count_crossings(inst.segments) > inst.meta.get("crossing", 0):
            problems.append("proper crossing")
        if triple_points(inst.segments):
            problems.append("triple point")
    if family == "polygon-restricted":
        for s in inst.segments:
            for p in (s.p, s.q):
                if inst.polygon.boundary_ring_at(p) is None:
                    problems.append(f"segment {s.id} endpoint off the boundary")
    if family is not None:
        incidences(inst.segments)  # raises on overlap
    return problems


def bench_instance(n, seed) -> Instance:
    """Short random segments in a box that grows with n, so k stays near c*n."""
    rng = random.Random(seed)
    box = int(3 * n ** 0.5) + 6
    segments = []
    while len(segments) < n:
        x, y = rng.randint(0, box), rng.randint(0, box)
        dx, dy = rng.randint(-6, 6), rng.randint(-6, 6)
        if dx == 0 and dy == 0:
            continue
        s = Segment(len(segments), Point(Fraction(x), Fraction(y)), Point(Fraction(x + dx), Fraction(y + dy)))
        if _compatible(s, segments):
            segments.append(s)
    a = random_point(rng, box, 3, segments)
    b = random_point(rng, box, 3, segments)
    while b == a:
        b = random_point(rng, box, 3, segments)
    return Instance("separation", segments, a, b, meta={"family": "bench", "seed": seed})
