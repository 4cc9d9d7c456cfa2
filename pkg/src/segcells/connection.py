"""Fewest segments to cross when walking from a to b.

Three solvers share one feasibility test: the faces of A(S minus S') are the
components of the colored dual graph of A(S) after merging every dual edge
whose color lies in S'.

* :func:`brute_force` tries subsets S' by increasing size.
* :func:`fpt_crossings` guesses which properly crossing segments are crossed
  and finishes with a breadth-first search in which every color costs one.
* :func:`solve_polygon` handles segments spanning a polygon with holes.  It
  groups segments whose detours are homotopic (equal reduced crossing words
  against a cut system of paths from a) and searches over unions of groups.
"""

from __future__ import annotations

import functools
import heapq
from collections import deque
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from itertools import combinations
from typing import Optional

from . import arrangement
from .errors import (DegenerateError, InternalConsistencyError, OverlapError, PreconditionError,
                     TooLargeError, TooManyHolesError)
from .geom import (Orientation, Point, Polyline, cross, incidences, intersect_closed,
                   on_closed_segment, orient, properly_cross)
from .polygon import PolygonWithHoles
from .separation import validate_restricted

DEFAULT_GUARD = 16
DEFAULT_HOLE_GUARD = 4


@dataclass
class ConnectionResult:
    segments: tuple
    cost: int
    certificate: Optional[Polyline]
    stats: dict = field(default_factory=dict)


def _check_points(segments, a, b, clip):
    for s in segments:
        for p in (a, b):
            if on_closed_segment(p, s.p, s.q):
                raise DegenerateError(f"point {p} lies on segment {s.id}")
    if clip is not None:
        clip.validate()
        for p in (a, b):
            if not clip.contains(p, strict=True):
                raise PreconditionError(f"point {p} is not in the interior of the polygon")


def certificate_for(segments, removed, a, b, clip=None) -> Polyline:
    """Path from a to b in A(S minus removed), clipped to P when given."""
    kept = [s for s in segments if s.id not in set(removed)]
    arr = arrangement.build(kept, clip)
    path = arrangement.route(arr, a, b)
    if path is None:
        raise InternalConsistencyError(f"removing {sorted(removed)} does not connect a and b")
    return path


def _finish(segments, chosen, a, b, clip, stats) -> ConnectionResult:
    chosen = tuple(sorted(chosen))
    cert = certificate_for(segments, chosen, a, b, clip)
    touched = set(arrangement.polyline_avoids(cert, [s for s in segments]))
    if touched != set(chosen):
        raise InternalConsistencyError(
            f"certificate crosses {sorted(touched)} instead of {list(chosen)}")
    return ConnectionResult(chosen, len(chosen), cert, stats)


def brute_force(segments, a: Point, b: Point, clip: Optional[PolygonWithHoles] = None,
                guard: int = DEFAULT_GUARD) -> ConnectionResult:
    """Smallest S' (then lexicographically first) whose removal joins a and b."""
    segments = list(segments)
    if len(segments) > guard:
        raise TooLargeError(f"brute force limited to {guard} segments, got {len(segments)}")
    _check_points(segments, a, b, clip)
    arr = arrangement.build(segments, clip)
    dg = arrangement.dual(arr)
    fa, fb = arrangement.locate(arr, a), arrangement.locate(arr, b)
    # colors that only ever separate a face from itself never help
    useful = sorted({c for f, g, c in dg.edges if f != g and c >= 0})
    tried = 0
    for k in range(len(useful) + 1):
        for combo in combinations(useful, k):
            tried += 1
            if dg.connected(fa, fb, set(combo)):
                return _finish(segments, combo, a, b, clip, {"subsets": tried})
    raise InternalConsistencyError("a and b stay apart even with every segment removed")


# ---------------------------------------------------------------------------
# Few proper crossings
# ---------------------------------------------------------------------------

def check_fpt_precondition(segments):
    """Three or more segments may meet only at an endpoint common to all."""
    for p, ids in incidences(segments).items():
        if len(ids) >= 3:
            for s in segments:
                if s.id in ids and p not in (s.p, s.q):
                    raise PreconditionError(
                        f"segments {sorted(ids)} meet at {p}, which is interior to segment {s.id}")


def crossing_pairs(segments) -> list:
    items = list(segments)
    return [(s.id, t.id) for i, s in enumerate(items) for t in items[i + 1:]
            if properly_cross(s.p, s.q, t.p, t.q)]


def _min_color_path(rep, classes, usable, fa, fb):
    """BFS where entering a color costs 1 and reaches every face of that color."""
    start, goal = rep[fa], rep[fb]
    if start == goal:
        return 0, []
    faces_of = {}
    colors_at = {}
    for c in usable:
        nodes = set()
        for f, g in classes.get(c, ()):
            nodes.add(rep[f])
            nodes.add(rep[g])
        faces_of[c] = sorted(nodes)
        for f in nodes:
            colors_at.setdefault(f, []).append(c)
    dist = {start: 0}
    via = {start: None}
    used = set()
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for c in sorted(colors_at.get(f, ())):
            if c in used:
                continue
            used.add(c)
            for g in faces_of[c]:
                if g not in dist:
                    dist[g] = dist[f] + 1
                    via[g] = (f, c)
                    if g == goal:
                        path = []
                        while via[g] is not None:
                            g, c2 = via[g]
                            path.append(c2)
                        return dist[goal], sorted(path)
                    queue.append(g)
    return None, None


def _class_components(rep, edges) -> tuple:
    """(components, cycle rank) of the graph spanned by one color class."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    extra = 0
    for f, g in edges:
        u, v = find(rep[f]), find(rep[g])
        if u == v:
            extra += 1
        else:
            parent[u] = v
    roots = {find(x) for x in list(parent)}
    return len(roots), extra


def fpt_crossings(segments, a: Point, b: Point) -> ConnectionResult:
    """Exact connection cost in time exponential only in the crossing segments."""
    segments = list(segments)
    _check_points(segments, a, b, None)
    check_fpt_precondition(segments)
    pairs = crossing_pairs(segments)
    C = sorted({i for p in pairs for i in p})
    arr = arrangement.build(segments)
    dg = arrangement.dual(arr)
    classes = dg.color_classes()
    fa, fb = arrangement.locate(arr, a), arrangement.locate(arr, b)
    all_ids = sorted(s.id for s in segments)
    best = None
    cyclic_classes = 0
    for mask in range(1 << len(C)):
        chosen = {C[i] for i in range(len(C)) if mask >> i & 1}
        rest = set(C) - chosen
        excluded = {x for p in pairs if p[0] in rest and p[1] in rest for x in p}
        rep = dg.merged(chosen)
        usable = [c for c in all_ids if c not in chosen and c not in excluded]
        for c in usable:
            comps, extra = _class_components(rep, classes.get(c, ()))
            if comps > 1:
                raise InternalConsistencyError(f"color {c} is disconnected after contracting {sorted(chosen)}")
            cyclic_classes += extra > 0
        length, path = _min_color_path(rep, classes, usable, fa, fb)
        if length is None:
            continue
        cand = (len(chosen) + length, tuple(sorted(chosen | set(path))))
        if best is None or cand < best:
            best = cand
    if best is None:
        raise InternalConsistencyError("no crossing guess connects a and b")
    if not dg.connected(fa, fb, set(best[1])) or len(best[1]) != best[0]:
        raise InternalConsistencyError("fpt answer fails the feasibility re-check")
    stats = {"crossing_segments": len(C), "crossings": len(pairs), "guesses": 1 << len(C),
             "cyclic_color_classes": cyclic_classes}
    return _finish(segments, best[1], a, b, None, stats)


# ---------------------------------------------------------------------------
# Polygon with holes: cut systems and crossing words
# ---------------------------------------------------------------------------

_PREC = 60
_TOL = Decimal(10) ** -40


def _length(p: Point, q: Point) -> Decimal:
    sq = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
    with localcontext() as ctx:
        ctx.prec = _PREC
        return (Decimal(sq.numerator) / Decimal(sq.denominator)).sqrt()


class Visibility:
    """Shortest-path tree from a over a, b and the polygon vertices.

    Node 0 is a, node 1 is b, the rest are ring vertices in ring order.  An
    edge must lie in the closed polygon and may not pass through a third
    node; b is only ever a path end.
    """

    def __init__(self, polygon: PolygonWithHoles, a: Point, b: Point):
        self.polygon = polygon
        self.nodes = [a, b]
        self.ring_of = [None, None]
        for r, ring in enumerate(polygon.rings()):
            for v in ring:
                self.nodes.append(v)
                self.ring_of.append(r)
        self.boundary = [(p, q) for _, _, p, q in polygon.boundary_edges()]
        self._dijkstra()

    def visible(self, u: int, v: int) -> bool:
        pu, pv = self.nodes[u], self.nodes[v]
        for w, pw in enumerate(self.nodes):
            if w not in (u, v) and on_closed_segment(pw, pu, pv):
                return False
        for p, q in self.boundary:
            if properly_cross(pu, pv, p, q):
                return False
        mid = Point((pu.x + pv.x) / 2, (pu.y + pv.y) / 2)
        return self.polygon.contains(mid, strict=False)

    def _dijkstra(self):
        n = len(self.nodes)
        adj = {u: [v for v in range(n) if v != u and self.visible(u, v)] for u in range(n)}
        dist = {0: Decimal(0)}
        parent = {0: None}
        done = set()
        heap = [(Decimal(0), 0)]
        while heap:
            d, u = heapq.heappop(heap)
            if u in done or d != dist[u]:
                continue
            done.add(u)
            if u == 1:
                continue
            for v in adj[u]:
                if v in done:
                    continue
                nd = d + _length(self.nodes[u], self.nodes[v])
                if v not in dist or nd < dist[v] - _TOL:
                    dist[v] = nd
                    parent[v] = u
                    heapq.heappush(heap, (nd, v))
                elif abs(nd - dist[v]) <= _TOL and u < parent[v]:
                    parent[v] = u
        self.dist = dist
        self.parent = parent

    def path(self, v: int) -> list:
        if v not in self.parent:
            raise DegenerateError(f"node {v} is unreachable from a")
        out = [v]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def nearest_on_ring(self, r: int) -> int:
        cands = [v for v in range(2, len(self.nodes)) if self.ring_of[v] == r and v in self.dist]
        if not cands:
            raise DegenerateError(f"ring {r} is unreachable from a")
        low = min(self.dist[v] for v in cands)
        return min(v for v in cands if self.dist[v] - low <= _TOL)


@dataclass
class SigmaPath:
    tag: str  # "to-boundary", "far-path" or "a-to-b"
    ring: Optional[int]
    nodes: list
    polyline: Polyline


@dataclass
class SigmaSystem:
    pair: tuple
    paths: list
    vis: Visibility = field(repr=False)
    lanes: dict = field(default_factory=dict, repr=False)
    tree_edges: list = field(default_factory=list, repr=False)

    @property
    def m(self) -> int:
        return len(self.paths)


def _far_point(polygon: PolygonWithHoles, v: Point) -> Point:
    ring = polygon.outer
    i = ring.index(v)
    p, n = ring[i - 1], ring[(i + 1) % len(ring)]
    xs = [q.x for q in ring]
    ys = [q.y for q in ring]
    diam = (max(xs) - min(xs)) + (max(ys) - min(ys))
    # outward normal of the two incident edges (interior lies to their left)
    dx = (v.y - p.y) + (n.y - v.y)
    dy = -(v.x - p.x) - (n.x - v.x)
    if dx == 0 and dy == 0:
        dx, dy = v.y - p.y, -(v.x - p.x)
    scale = 3 * diam / (abs(dx) + abs(dy))
    return Point(v.x + scale * dx, v.y + scale * dy)


def sigma_system(polygon: PolygonWithHoles, a: Point, b: Point, beta: int, beta_prime: int,
                 vis: Optional[Visibility] = None) -> SigmaSystem:
    """Paths from a that cut the domain of the boundary pair into a disc.

    One shortest path reaches every boundary other than beta and beta'; one
    runs from a to b; and when the outer boundary belongs to the pair, the
    path to it continues to a far-away point (only its part inside P is ever
    crossed by a segment).
    """
    vis = vis or Visibility(polygon, a, b)
    pair = (min(beta, beta_prime), max(beta, beta_prime))
    paths = []
    for r in range(len(polygon.rings())):
        if r in pair and r != 0:
            continue
        v = vis.nearest_on_ring(r)
        nodes = vis.path(v)
        pts = tuple(vis.nodes[x] for x in nodes)
        if r in pair:
            paths.append(SigmaPath("far-path", 0, nodes, Polyline(pts + (_far_point(polygon, vis.nodes[v]),))))
        else:
            paths.append(SigmaPath("to-boundary", r, nodes, Polyline(pts)))
    nodes = vis.path(1)
    paths.append(SigmaPath("a-to-b", None, nodes, Polyline(tuple(vis.nodes[x] for x in nodes))))
    sys_ = SigmaSystem(pair, paths, vis)
    _build_lanes(sys_)
    return sys_


def _mirror(d):
    return (d[0], -d[1])


def _ccw_cmp(d0, d1, d2) -> int:
    """Compare counter-clockwise angles of d1 and d2 measured from d0."""
    def half(d):
        c = d0[0] * d[1] - d0[1] * d[0]
        dot = d0[0] * d[0] + d0[1] * d[1]
        return 0 if c > 0 or (c == 0 and dot > 0) else 1
    h1, h2 = half(d1), half(d2)
    if h1 != h2:
        return h1 - h2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def _build_lanes(sys_: SigmaSystem):
    vis = sys_.vis
    children, ends = {}, {}
    edges = set()
    for i, path in enumerate(sys_.paths):
        nodes = path.nodes
        for u, v in zip(nodes, nodes[1:]):
            children.setdefault(u, set()).add(v)
            edges.add((u, v))
        ends.setdefault(nodes[-1], []).append(i)
    ring_next = {}
    for r, ring in enumerate(vis.polygon.rings()):
        for j, v in enumerate(ring):
            ring_next[v] = ring[(j + 1) % len(ring)]

    def lanes(u, v):
        if (u, v) in sys_.lanes:
            return sys_.lanes[(u, v)]
        pv = vis.nodes[v]
        pu = vis.nodes[u]
        d0 = _mirror((pu.x - pv.x, pu.y - pv.y))
        items = []
        for c in children.get(v, ()):
            pc = vis.nodes[c]
            items.append((_mirror((pc.x - pv.x, pc.y - pv.y)), 0, c))
        if v in ends:
            if v >= 2:
                n = ring_next[pv]
                d = _mirror((n.x - pv.x, n.y - pv.y))
            else:
                d = d0  # b is a leaf: its only lane needs no position
            items.append((d, 1, None))

        def cmp(x, y):
            c = _ccw_cmp(d0, x[0], y[0])
            return c if c else x[1] - y[1]

        out = []
        for d, is_end, c in sorted(items, key=functools.cmp_to_key(cmp)):
            out.extend(ends[v] if is_end else lanes(v, c))
        sys_.lanes[(u, v)] = out
        return out

    for u, v in sorted(edges):
        lanes(u, v)
    sys_.tree_edges = sorted(edges)
    pts = [(vis.nodes[u], vis.nodes[v]) for u, v in sys_.tree_edges]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if properly_cross(*pts[i], *pts[j]):
                raise DegenerateError("cut paths cross; the instance needs perturbation")


@dataclass(frozen=True)
class CrossingWord:
    letters: tuple  # (path index, +1 for rightward / -1 for leftward)
    reduced: bool = False

    def __str__(self):
        return " ".join(f"s{i + 1}{'→' if d > 0 else '←'}" for i, d in self.letters)


def reduce_word(letters) -> CrossingWord:
    stack = []
    for x in letters:
        if stack and stack[-1][0] == x[0] and stack[-1][1] == -x[1]:
            stack.pop()
        else:
            stack.append(tuple(x))
    return CrossingWord(tuple(stack), True)


def oriented_endpoints(s, polygon: PolygonWithHoles):
    """(start, end, pair) with start on the lower ring of the pair."""
    rp, rq = polygon.boundary_ring_at(s.p), polygon.boundary_ring_at(s.q)
    if rp is None or rq is None:
        raise PreconditionError(f"segment {s.id} has an endpoint off the boundary")
    if rp < rq or (rp == rq and s.p <= s.q):
        return s.p, s.q, (rp, rq)
    return s.q, s.p, (rq, rp)


def raw_word(s, sys_: SigmaSystem) -> CrossingWord:
    vis = sys_.vis
    start, end, pair = oriented_endpoints(s, vis.polygon)
    if pair != sys_.pair:
        raise ValueError(f"segment {s.id} spans {pair}, system is for {sys_.pair}")
    for v, pv in enumerate(vis.nodes):
        if on_closed_segment(pv, s.p, s.q):
            raise DegenerateError(f"segment {s.id} passes through node {pv}")
    dx, dy = end.x - start.x, end.y - start.y
    events = []
    for u, v in sys_.tree_edges:
        pu, pv = vis.nodes[u], vis.nodes[v]
        try:
            x = intersect_closed(start, end, pu, pv)
        except OverlapError:
            raise DegenerateError(f"segment {s.id} runs along a cut path") from None
        if x is None:
            continue
        o_start, o_end = orient(pu, pv, start), orient(pu, pv, end)
        rightward = o_start == Orientation.CCW or o_end == Orientation.CW
        t = (x.x - start.x) * dx + (x.y - start.y) * dy
        lanes = sys_.lanes[(u, v)]
        if rightward:
            events.append((t, [(i, 1) for i in lanes]))
        else:
            events.append((t, [(i, -1) for i in reversed(lanes)]))
    events.sort(key=lambda e: e[0])
    for e1, e2 in zip(events, events[1:]):
        if e1[0] == e2[0]:
            raise DegenerateError(f"segment {s.id} meets two cut edges at one point")
    return CrossingWord(tuple(x for _, ls in events for x in ls))


def reduced_word(s, sys_: SigmaSystem) -> CrossingWord:
    return reduce_word(raw_word(s, sys_).letters)


@dataclass
class Cluster:
    pair: tuple
    key: CrossingWord
    members: tuple


def hole_representative(ring) -> Point:
    """Centroid of the first ear of a simple ring."""
    n = len(ring)
    area = sum(ring[i].x * ring[(i + 1) % n].y - ring[i].y * ring[(i + 1) % n].x for i in range(n))
    for i in range(n):
        p, v, q = ring[i - 1], ring[i], ring[(i + 1) % n]
        c = cross(p, v, q)
        if c == 0 or (c > 0) != (area > 0):
            continue
        tri = (p, v, q)
        if any(_in_triangle(w, tri) for w in ring if w not in tri):
            continue
        return Point((p.x + v.x + q.x) / 3, (p.y + v.y + q.y) / 3)
    raise DegenerateError("ring has no ear")


def _in_triangle(w, tri) -> bool:
    s = [orient(tri[i], tri[(i + 1) % 3], w) for i in range(3)]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


def cluster_segments(polygon: PolygonWithHoles, segments, a: Point, b: Point) -> list:
    """Group segments by boundary pair and reduced crossing word."""
    segments = list(segments)
    if not segments:
        return []
    vis = Visibility(polygon, a, b)
    systems = {}
    groups = {}
    for s in segments:
        _, _, pair = oriented_endpoints(s, polygon)
        if pair not in systems:
            systems[pair] = sigma_system(polygon, a, b, *pair, vis=vis)
        key = reduced_word(s, systems[pair])
        groups.setdefault((pair, key.letters), []).append(s.id)
    out = [Cluster(pair, CrossingWord(word, True), tuple(sorted(ids)))
           for (pair, word), ids in groups.items()]
    out.sort(key=lambda c: (c.pair, c.members))
    return out


def solve_polygon(polygon: PolygonWithHoles, segments, a: Point, b: Point,
                  hole_guard: int = DEFAULT_HOLE_GUARD) -> ConnectionResult:
    """Exact connection cost inside P by searching unions of clusters."""
    segments = list(segments)
    if polygon.h > hole_guard:
        raise TooManyHolesError(f"at most {hole_guard} holes supported, got {polygon.h}")
    validate_restricted(polygon, segments, a, b)
    clusters = cluster_segments(polygon, segments, a, b)
    arr = arrangement.build(segments, polygon)
    dg = arrangement.dual(arr)
    fa, fb = arrangement.locate(arr, a), arrangement.locate(arr, b)
    sizes = [len(c.members) for c in clusters]
    tried = [0]

    def unions(i, budget, acc):
        # all unions of clusters[i:] with exactly `budget` segments
        if budget == 0:
            yield acc
            return
        if i == len(clusters):
            return
        if sizes[i] <= budget:
            yield from unions(i + 1, budget - sizes[i], acc + clusters[i].members)
        yield from unions(i + 1, budget, acc)

    for total in range(len(segments) + 1):
        feasible = []
        for u in unions(0, total, ()):
            tried[0] += 1
            if dg.connected(fa, fb, set(u)):
                feasible.append(tuple(sorted(u)))
        if feasible:
            stats = {"clusters": len(clusters), "unions": tried[0]}
            return _finish(segments, min(feasible), a, b, polygon, stats)
    raise InternalConsistencyError("no cluster union connects a and b")
