"""Planar arrangement of segments: DCEL, point location, colored dual graph.

Construction is quadratic: every pair of segments is intersected, the
intersection points are sorted along each segment and the resulting edges are
linked around their vertices by exact angular order.  Faces are traced as
half-edge cycles; clockwise cycles are hole boundaries and get attached to the
innermost counter-clockwise cycle around them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional

from .errors import DegenerateError, OverlapError
from .geom import (Point, Polyline, Segment, intersect_closed, on_closed_segment,
                   ray_parity, seg_intersect, signed_area2)
from .polygon import PolygonWithHoles


@dataclass
class Face:
    id: int
    outer: Optional[int]  # half-edge on the outer boundary, None for the unbounded face
    holes: list = field(default_factory=list)
    exterior: bool = False


@dataclass
class Arrangement:
    segments: list
    vertices: list
    origin: list
    twin: list
    next: list
    color: list
    face_of: list
    faces: list
    components: int
    clip: Optional[PolygonWithHoles] = None
    _cycles: list = field(default_factory=list, repr=False)

    @property
    def n_edges(self) -> int:
        return len(self.origin) // 2

    def half_edge_points(self, h: int):
        return self.vertices[self.origin[h]], self.vertices[self.origin[self.twin[h]]]

    def edge_list(self):
        """Undirected edges as (p, q, color)."""
        return [(*self.half_edge_points(h), self.color[h]) for h in range(0, len(self.origin), 2)]

    def cycle(self, h: int) -> list:
        out = [h]
        g = self.next[h]
        while g != h:
            out.append(g)
            g = self.next[g]
        return out

    def face_colors(self, f: int) -> set:
        return {self.color[h] for h in range(len(self.origin)) if self.face_of[h] == f}


def _direction_cmp(d1, d2) -> int:
    # counter-clockwise order starting from the positive x axis
    h1 = 0 if (d1[1] > 0 or (d1[1] == 0 and d1[0] > 0)) else 1
    h2 = 0 if (d2[1] > 0 or (d2[1] == 0 and d2[0] > 0)) else 1
    if h1 != h2:
        return h1 - h2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def _along(s: Segment):
    if s.p.x != s.q.x:
        return (lambda v: v.x) if s.p.x < s.q.x else (lambda v: -v.x)
    return (lambda v: v.y) if s.p.y < s.q.y else (lambda v: -v.y)


def all_segments(segments, clip: Optional[PolygonWithHoles] = None) -> list:
    segs = list(segments)
    if clip is not None:
        segs += clip.boundary_segments()
    return segs


def build(segments, clip: Optional[PolygonWithHoles] = None) -> Arrangement:
    segs = all_segments(segments, clip)
    ids = [s.id for s in segs]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate segment ids")
    on_seg = [[s.p, s.q] for s in segs]
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            x = seg_intersect(segs[i], segs[j])
            if x is not None:
                on_seg[i].append(x)
                on_seg[j].append(x)

    vid = {}
    vertices = []
    origin, color = [], []
    for s, pts in zip(segs, on_seg):
        key = _along(s)
        chain = sorted(set(pts), key=key)
        for v in chain:
            if v not in vid:
                vid[v] = len(vertices)
                vertices.append(v)
        for u, v in zip(chain, chain[1:]):
            origin += [vid[u], vid[v]]
            color += [s.id, s.id]

    nh = len(origin)
    twin = [h ^ 1 for h in range(nh)]
    around = [[] for _ in vertices]
    for h in range(nh):
        around[origin[h]].append(h)

    def dir_of(h):
        u, v = vertices[origin[h]], vertices[origin[h ^ 1]]
        return (v.x - u.x, v.y - u.y)

    pos = [0] * nh
    for v, hs in enumerate(around):
        hs.sort(key=cmp_to_key(lambda g, h: _direction_cmp(dir_of(g), dir_of(h))))
        for i, h in enumerate(hs):
            pos[h] = i
    nxt = [0] * nh
    for h in range(nh):
        t = twin[h]
        hs = around[origin[t]]
        nxt[h] = hs[(pos[t] - 1) % len(hs)]

    # connected components of the union
    parent = list(range(len(vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h in range(0, nh, 2):
        a, b = find(origin[h]), find(origin[h + 1])
        if a != b:
            parent[a] = b
    comps = len({find(v) for v in range(len(vertices))})

    seen = [False] * nh
    cycles = []
    for h in range(nh):
        if seen[h]:
            continue
        cyc = [h]
        seen[h] = True
        g = nxt[h]
        while g != h:
            seen[g] = True
            cyc.append(g)
            g = nxt[g]
        poly = [vertices[origin[g]] for g in cyc]
        cycles.append((cyc, signed_area2(poly), find(origin[h])))

    faces = [Face(0, None)]
    face_of = [-1] * nh
    bounded = []
    for cyc, area, comp in cycles:
        if area > 0:
            f = Face(len(faces), cyc[0])
            faces.append(f)
            for g in cyc:
                face_of[g] = f.id
            bounded.append((f.id, area, comp, [(vertices[origin[g]], vertices[origin[nxt[g]]]) for g in cyc]))
    for cyc, area, comp in cycles:
        if area > 0:
            continue
        probe = vertices[origin[cyc[0]]]
        best, best_area = 0, None
        for fid, farea, fcomp, edges in bounded:
            if fcomp == comp:
                continue
            if (best_area is None or farea < best_area) and ray_parity(probe, edges):
                best, best_area = fid, farea
        faces[best].holes.append(cyc[0])
        for g in cyc:
            face_of[g] = best

    arr = Arrangement(segs, vertices, origin, twin, nxt, color, face_of, faces, comps, clip,
                      [(fid, farea, edges) for fid, farea, _, edges in bounded])
    if clip is not None:
        _mark_exterior(arr, clip)
    else:
        faces[0].exterior = False
    return arr


def _mark_exterior(arr: Arrangement, clip: PolygonWithHoles):
    ring_dir = {sid: (p, q) for sid, _, p, q in clip.boundary_edges()}
    arr.faces[0].exterior = True
    for f in arr.faces[1:]:
        f.exterior = False
        for h in range(len(arr.origin)):
            if arr.face_of[h] != f.id or arr.color[h] not in ring_dir:
                continue
            u, v = arr.half_edge_points(h)
            p, q = ring_dir[arr.color[h]]
            # P's interior lies left of every ring edge; the face lies left of h
            same = (v.x - u.x) * (q.x - p.x) + (v.y - u.y) * (q.y - p.y) > 0
            f.exterior = not same
            break


def _check_off_edges(arr: Arrangement, p: Point):
    for u, v, _ in arr.edge_list():
        if on_closed_segment(p, u, v):
            raise DegenerateError(f"point {p} lies on the arrangement")
    for v in arr.vertices:
        if v == p:
            raise DegenerateError(f"point {p} is an arrangement vertex")


def locate(arr: Arrangement, p: Point) -> int:
    """Face id containing p (0 is the unbounded face)."""
    _check_off_edges(arr, p)
    best, best_area = 0, None
    for fid, farea, edges in arr._cycles:
        if (best_area is None or farea < best_area) and ray_parity(p, edges):
            best, best_area = fid, farea
    return best


def face_count(arr: Arrangement) -> int:
    return len(arr.faces)


def euler_holds(arr: Arrangement) -> bool:
    return len(arr.vertices) - arr.n_edges + len(arr.faces) == 1 + arr.components


@dataclass
class ColoredDualGraph:
    n_nodes: int
    edges: list  # (face, face, color), one per arrangement edge

    def color_classes(self) -> dict:
        out = {}
        for f, g, c in self.edges:
            out.setdefault(c, []).append((f, g))
        return out

    def merged(self, colors) -> list:
        """Face representative after crossing every edge whose color is in colors."""
        parent = list(range(self.n_nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for f, g, c in self.edges:
            if c in colors:
                a, b = find(f), find(g)
                if a != b:
                    parent[a] = b
        return [find(x) for x in range(self.n_nodes)]

    def connected(self, f: int, g: int, colors) -> bool:
        rep = self.merged(colors)
        return rep[f] == rep[g]

    def n_components(self, colors) -> int:
        return len(set(self.merged(colors)))


def dual(arr: Arrangement) -> ColoredDualGraph:
    edges = [(arr.face_of[h], arr.face_of[h + 1], arr.color[h]) for h in range(0, len(arr.origin), 2)]
    return ColoredDualGraph(len(arr.faces), edges)


def same_cell(segments, a: Point, b: Point, clip: Optional[PolygonWithHoles] = None) -> bool:
    arr = build(segments, clip)
    if clip is not None:
        for p in (a, b):
            if not clip.contains(p):
                raise DegenerateError(f"point {p} is not inside the polygon")
    return locate(arr, a) == locate(arr, b)


# ---------------------------------------------------------------------------
# Witness paths through a cell
# ---------------------------------------------------------------------------

def _y_at(p: Point, q: Point, x: Fraction) -> Fraction:
    return p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)


class _Slabs:
    """Vertical slab decomposition of a set of pairwise non-crossing edges."""

    def __init__(self, edges):
        self.xs = sorted({v.x for e in edges for v in e})
        self.slanted = []
        self.vertical = {}
        for p, q in edges:
            if p.x == q.x:
                lo, hi = sorted((p.y, q.y))
                self.vertical.setdefault(p.x, []).append((lo, hi))
            else:
                self.slanted.append((p, q) if p.x < q.x else (q, p))
        self.order = []
        for i in range(len(self.xs) + 1):
            if i == 0 or i == len(self.xs):
                self.order.append([])
                continue
            xl, xr = self.xs[i - 1], self.xs[i]
            xm = (xl + xr) / 2
            inside = [e for e in self.slanted if e[0].x <= xl and e[1].x >= xr]
            inside.sort(key=lambda e: _y_at(e[0], e[1], xm))
            self.order.append(inside)

    def slab_x(self, i: int) -> Fraction:
        if not self.xs:
            return Fraction(0)
        if i == 0:
            return self.xs[0] - 1
        if i == len(self.xs):
            return self.xs[-1] + 1
        return (self.xs[i - 1] + self.xs[i]) / 2

    def gap_bounds(self, i: int, j: int, x: Fraction):
        es = self.order[i]
        lo = _y_at(*es[j - 1], x) if j > 0 else None
        hi = _y_at(*es[j], x) if j < len(es) else None
        return lo, hi

    def gap_of(self, i: int, p: Point) -> int:
        es = self.order[i]
        j = 0
        while j < len(es) and _y_at(*es[j], p.x) < p.y:
            j += 1
        return j

    def locate(self, p: Point):
        k = 0
        while k < len(self.xs) and self.xs[k] <= p.x:
            k += 1
        # p.x lies in slab k, or on its left wall when equal to xs[k-1]
        return (k, self.gap_of(k, p))

    def rep(self, i: int, j: int) -> Point:
        x = self.slab_x(i)
        lo, hi = self.gap_bounds(i, j, x)
        if lo is None and hi is None:
            y = Fraction(0)
        elif lo is None:
            y = hi - 1
        elif hi is None:
            y = lo + 1
        else:
            y = (lo + hi) / 2
        return Point(x, y)

    def portals(self, i: int):
        """Free passages across the wall between slab i and slab i+1."""
        x0 = self.xs[i]
        left, right = self.order[i], self.order[i + 1]
        yl = [_y_at(*e, x0) for e in left]
        yr = [_y_at(*e, x0) for e in right]
        blocked = sorted(self.vertical.get(x0, []))
        out = []
        jl = jr = 0
        while jl <= len(yl) and jr <= len(yr):
            lo_l = yl[jl - 1] if jl > 0 else None
            hi_l = yl[jl] if jl < len(yl) else None
            lo_r = yr[jr - 1] if jr > 0 else None
            hi_r = yr[jr] if jr < len(yr) else None
            lo = _max_opt(lo_l, lo_r)
            hi = _min_opt(hi_l, hi_r)
            if lo is None or hi is None or lo < hi:
                y = _free_point(lo, hi, blocked)
                if y is not None:
                    out.append((jl, jr, Point(x0, y)))
            if hi_l is None and hi_r is None:
                break
            if hi_r is None or (hi_l is not None and hi_l < hi_r):
                jl += 1
            elif hi_l is None or hi_r < hi_l:
                jr += 1
            else:
                jl += 1
                jr += 1
        return out


def _max_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _free_point(lo, hi, blocked):
    """A point of the open interval (lo, hi) outside all closed blocked ranges."""
    cur = lo
    for b_lo, b_hi in blocked:
        if hi is not None and b_lo >= hi:
            break
        if cur is not None and b_hi <= cur:
            continue
        if cur is None or b_lo > cur:
            return _between(cur, b_lo)
        cur = b_hi
    if cur is None or hi is None or cur < hi:
        return _between(cur, hi)
    return None


def _between(lo, hi):
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def route(arr: Arrangement, a: Point, b: Point) -> Optional[Polyline]:
    """Open polyline from a to b touching no edge of arr, or None."""
    _check_off_edges(arr, a)
    _check_off_edges(arr, b)
    edges = [(p, q) for p, q, _ in arr.edge_list()]
    if not edges:
        return Polyline((a, b))
    slabs = _Slabs(edges)
    start, goal = slabs.locate(a), slabs.locate(b)
    links = {}
    for i in range(len(slabs.xs)):
        for jl, jr, portal in slabs.portals(i):
            links.setdefault((i, jl), []).append(((i + 1, jr), portal))
            links.setdefault((i + 1, jr), []).append(((i, jl), portal))
    prev = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            break
        for nb, portal in links.get(cur, ()):
            if nb not in prev:
                prev[nb] = (cur, portal)
                queue.append(nb)
    if goal not in prev:
        return None
    chain = []
    cur = goal
    while cur is not None:
        chain.append(cur)
        step = prev[cur]
        if step is None:
            break
        chain.append(step[1])
        cur = step[0]
    chain.reverse()
    pts = [a]
    for item in chain:
        pts.append(slabs.rep(*item) if isinstance(item, tuple) and not isinstance(item, Point) else item)
    pts.append(b)
    clean = [pts[0]]
    for v in pts[1:]:
        if v != clean[-1]:
            clean.append(v)
    return Polyline(clean)


def polyline_avoids(gamma: Polyline, segments) -> list:
    """Ids of the segments that gamma touches."""
    hit = []
    for s in segments:
        for u, v in gamma.edges():
            try:
                x = intersect_closed(u, v, s.p, s.q) if u != v else (u if on_closed_segment(u, s.p, s.q) else None)
            except OverlapError:
                x = True
            if x is not None:
                hit.append(s.id)
                break
    return hit
