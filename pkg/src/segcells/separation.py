"""Minimum-weight separation of two points by segments.

The solver works on the segment intersection graph, where the edge between
intersecting segments s and t has length w(s) + w(t).  For every root segment
it grows a shortest-path tree, labels each vertex with the signed crossing
count of its tree path against the segment ab, and scans the non-tree edges
for the shortest fundamental cycle whose closed polyline crosses ab a nonzero
number of times.  The overall shortest such cycle uses exactly the segments of
an optimal separating set, and its polyline is a simple closed curve with a
and b on opposite sides.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import arrangement
from .errors import (DegenerateError, InternalConsistencyError, NotAWalkError, OverlapError,
                     PreconditionError, SameCellError)
from .geom import (Point, Polyline, Segment, crossing_number, intersect_closed,
                   on_closed_segment, point_in_closed_polyline, polyline_is_simple)
from .polygon import PolygonWithHoles


@dataclass
class IntersectionGraph:
    segments: dict  # id -> Segment
    adj: dict  # id -> {neighbour id: intersection point}

    @property
    def n(self) -> int:
        return len(self.segments)

    @property
    def k(self) -> int:
        return sum(len(v) for v in self.adj.values()) // 2

    def weight(self, s) -> Fraction:
        return self.segments[s].weight

    def edge_weight(self, s, t) -> Fraction:
        return self.segments[s].weight + self.segments[t].weight

    def point(self, s, t) -> Point:
        return self.adj[s][t]

    def edges(self):
        return sorted((s, t) for s in self.adj for t in self.adj[s] if s < t)

    def components(self) -> list:
        seen, out = set(), []
        for s in sorted(self.adj):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in self.adj[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            out.append(sorted(comp))
        return out


def intersection_graph(segments) -> IntersectionGraph:
    segs = {s.id: s for s in segments}
    if len(segs) != len(segments):
        raise ValueError("duplicate segment ids")
    adj = {sid: {} for sid in segs}
    items = list(segments)
    for i in range(len(items)):
        s = items[i]
        for j in range(i + 1, len(items)):
            t = items[j]
            try:
                x = intersect_closed(s.p, s.q, t.p, t.q)
            except OverlapError:
                raise OverlapError(f"segments {s.id} and {t.id} overlap") from None
            if x is not None:
                adj[s.id][t.id] = x
                adj[t.id][s.id] = x
    return IntersectionGraph(segs, adj)


def walk_polyline(G: IntersectionGraph, walk, closed: Optional[bool] = None) -> Polyline:
    """Polyline through the intersection points of consecutive walk entries.

    A walk whose first and last ids agree is closed unless closed=False.
    """
    walk = list(walk)
    for s in walk:
        if s not in G.adj:
            raise NotAWalkError(f"unknown segment {s}")
    for s, t in zip(walk, walk[1:]):
        if t not in G.adj[s]:
            raise NotAWalkError(f"segments {s} and {t} do not intersect")
    if closed is None:
        closed = len(walk) > 2 and walk[0] == walk[-1]
    pts = tuple(G.adj[s][t] for s, t in zip(walk, walk[1:]))
    return Polyline(pts, closed=closed)


@dataclass
class SPTree:
    root: int
    dist: dict
    parent: dict
    order: list  # settle order; parents precede children
    N: dict = field(default_factory=dict)
    C: dict = field(default_factory=dict)
    depth: dict = field(default_factory=dict)
    up: list = field(default_factory=list)

    def __contains__(self, s):
        return s in self.dist

    def is_tree_edge(self, s, t) -> bool:
        return self.parent.get(s) == t or self.parent.get(t) == s

    def path_from_root(self, s) -> list:
        out = [s]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def lca(self, s, t):
        if self.depth[s] < self.depth[t]:
            s, t = t, s
        diff = self.depth[s] - self.depth[t]
        k = 0
        while diff:
            if diff & 1:
                s = self.up[k][s]
            diff >>= 1
            k += 1
        if s == t:
            return s
        for k in range(len(self.up) - 1, -1, -1):
            if self.up[k][s] != self.up[k][t]:
                s, t = self.up[k][s], self.up[k][t]
        return self.parent[s]


def sp_tree(G: IntersectionGraph, r, zero_one: bool = False, rank: Optional[dict] = None) -> SPTree:
    """Shortest-path tree of r's component.

    Vertices settle in (distance, rank) order, where rank defaults to the
    segment id; a vertex's parent is the lowest-ranked already settled
    neighbour that realizes its distance.  The 0/1 variant replaces the
    binary heap by one bucket per integer distance and settles vertices in
    the same order.
    """
    key = (lambda v: v) if rank is None else rank.__getitem__
    if zero_one:
        return _sp_tree_buckets(G, r, key)
    dist = {r: Fraction(0)}
    settled = set()
    order = []
    heap = [(Fraction(0), key(r), r)]
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in settled or d != dist[u]:
            continue
        settled.add(u)
        order.append(u)
        for v in G.adj[u]:
            nd = d + G.edge_weight(u, v)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, key(v), v))
    return _finish_tree(G, r, dist, order, key)


def _sp_tree_buckets(G: IntersectionGraph, r, key) -> SPTree:
    for s in G.segments.values():
        if s.weight not in (0, 1):
            raise ValueError("0/1 fast path requires segment weights 0 or 1")
    dist = {r: 0}
    buckets = {0: [(key(r), r)]}
    settled = set()
    order = []
    d = 0
    limit = 2 * len(G.segments) + 2
    while d <= limit:
        bucket = buckets.get(d)
        if not bucket:
            d += 1
            continue
        _, u = heapq.heappop(bucket)
        if u in settled or dist[u] != d:
            continue
        settled.add(u)
        order.append(u)
        for v in G.adj[u]:
            nd = d + int(G.edge_weight(u, v))
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(buckets.setdefault(nd, []), (key(v), v))
    return _finish_tree(G, r, {s: Fraction(v) for s, v in dist.items()}, order, key)


def _finish_tree(G, r, dist, order, key) -> SPTree:
    parent = {r: None}
    seen = set()
    for v in order:
        seen.add(v)
        if v == r:
            continue
        parent[v] = min((u for u in G.adj[v]
                         if u in seen and dist[u] + G.edge_weight(u, v) == dist[v]), key=key)
    tree = SPTree(r, dist, parent, order)
    depth = {r: 0}
    for v in order[1:]:
        depth[v] = depth[parent[v]] + 1
    tree.depth = depth
    up0 = {v: (parent[v] if parent[v] is not None else v) for v in order}
    up = [up0]
    span = 1
    while span < len(order):
        prev = up[-1]
        up.append({v: prev[prev[v]] for v in order})
        span *= 2
    tree.up = up
    return tree


def _piece(G, walk, a, b) -> int:
    return crossing_number(walk_polyline(G, walk, closed=False), a, b)


def annotate(tree: SPTree, G: IntersectionGraph, a: Point, b: Point) -> SPTree:
    """Fill crossing labels N_r and root-child labels C_r along the tree."""
    r = tree.root
    tree.N = {r: 0}
    tree.C = {r: None}
    for s in tree.order[1:]:
        p = tree.parent[s]
        if p == r:
            tree.N[s] = 0
            tree.C[s] = s
        else:
            tree.N[s] = tree.N[p] + _piece(G, [tree.parent[p], p, s], a, b)
            tree.C[s] = tree.C[p]
    return tree


@dataclass
class CandidateCycle:
    root: int
    edge: tuple
    length: Fraction
    N: int
    cycle: list  # closed walk, first entry repeated at the end
    polyline: Optional[Polyline] = None

    @property
    def key(self):
        return (self.length, self.root, self.edge[0], self.edge[1])


def fundamental_cycle(tree: SPTree, s, t) -> list:
    """Closed walk lca .. s t .. lca of the fundamental cycle of edge st."""
    m = tree.lca(s, t)
    down_s = []
    x = s
    while x != m:
        down_s.append(x)
        x = tree.parent[x]
    down_t = []
    x = t
    while x != m:
        down_t.append(x)
        x = tree.parent[x]
    return [m] + down_s[::-1] + down_t + [m]


def edge_crossing_value(tree: SPTree, G, s, t, a, b) -> int:
    """N of the closed walk r ~> s -> t ~> r assembled from tree labels."""
    r = tree.root
    ps, pt_ = tree.parent[s], tree.parent[t]
    mid = ([ps] if ps is not None else []) + [s, t] + ([pt_] if pt_ is not None else [])
    cs = tree.C[s] if s != r else t
    ct = tree.C[t] if t != r else s
    return tree.N[s] + _piece(G, mid, a, b) - tree.N[t] + _piece(G, [ct, r, cs], a, b)


def cycle_length(tree: SPTree, G, s, t) -> Fraction:
    m = tree.lca(s, t)
    return tree.dist[s] + G.weight(s) + G.weight(t) + tree.dist[t] - 2 * tree.dist[m]


def _walk_length(G, walk) -> Fraction:
    return sum((G.edge_weight(u, v) for u, v in zip(walk, walk[1:])), Fraction(0))


def candidate_min(tree: SPTree, G: IntersectionGraph, a: Point, b: Point,
                  audit: bool = False, stats: Optional[dict] = None) -> Optional[CandidateCycle]:
    """Shortest fundamental cycle of tree with nonzero crossing value.

    With audit set, every evaluated edge is cross-checked: the LCA length
    against the explicit edge sum, and the label-assembled crossing value
    against a direct count on the cycle's polyline.
    """
    best = None
    count = 0
    for s in tree.order:
        for t in G.adj[s]:
            if not s < t or tree.is_tree_edge(s, t):
                continue
            n_val = edge_crossing_value(tree, G, s, t, a, b)
            length = cycle_length(tree, G, s, t)
            if audit:
                cyc = fundamental_cycle(tree, s, t)
                if _walk_length(G, cyc) != length:
                    raise InternalConsistencyError(f"cycle length mismatch at root {tree.root}, edge {s}-{t}")
                if all(G.weight(x) == 1 for x in cyc) and length != 2 * (len(cyc) - 1):
                    raise InternalConsistencyError(f"unit-weight cycle length is not twice its size at edge {s}-{t}")
                direct = crossing_number(walk_polyline(G, cyc), a, b)
                if direct != n_val:
                    raise InternalConsistencyError(
                        f"crossing label mismatch at root {tree.root}, edge {s}-{t}: {n_val} != {direct}")
            if n_val == 0:
                continue
            count += 1
            key = (length, tree.root, s, t)
            if best is None or key < best.key:
                best = CandidateCycle(tree.root, (s, t), length, n_val, [])
    if stats is not None:
        stats["candidates"] = stats.get("candidates", 0) + count
    if best is None:
        return None
    best.cycle = fundamental_cycle(tree, *best.edge)
    best.polyline = walk_polyline(G, best.cycle)
    direct = crossing_number(best.polyline, a, b)
    if direct != best.N:
        raise InternalConsistencyError(
            f"crossing label mismatch at root {tree.root}, edge {best.edge}: {best.N} != {direct}")
    return best


def audit_labels(tree: SPTree, G, a, b):
    """Compare every N_r label with a direct count on its tree path."""
    for s in tree.order:
        direct = crossing_number(walk_polyline(G, tree.path_from_root(s)), a, b)
        if direct != tree.N[s]:
            raise InternalConsistencyError(f"N label mismatch at root {tree.root}, vertex {s}")


@dataclass
class SeparationResult:
    segments: tuple
    weight: Fraction
    certificate: Polyline
    witness: tuple  # (root, (s, t))
    cycle: list
    stats: dict = field(default_factory=dict)


def _check_points(segments, a, b):
    for s in segments:
        for p in (a, b):
            if on_closed_segment(p, s.p, s.q):
                raise DegenerateError(f"point {p} lies on segment {s.id}")
    if a == b:
        raise DegenerateError("a and b coincide")


def _root_scan(G, r, a, b, zero_one, audit, rank=None):
    stats = {}
    tree = annotate(sp_tree(G, r, zero_one, rank), G, a, b)
    if audit:
        audit_labels(tree, G, a, b)
    return candidate_min(tree, G, a, b, audit=audit, stats=stats), stats


def uncross(G: IntersectionGraph, cycle: list, a: Point, b: Point) -> list:
    """Split a self-touching cycle until its polyline is simple.

    Cutting at an intersection of the pieces lying on cycle[i] and cycle[j]
    yields the cycles cycle[i..j] and cycle[..i] + cycle[j..]; their crossing
    values add up to the original one, so one of them keeps a nonzero value
    and neither is longer.
    """
    while True:
        poly = walk_polyline(G, cycle)
        if polyline_is_simple(poly):
            return cycle
        ring = cycle[:-1]
        t = len(ring)
        pts = poly.vertices
        pieces = [(pts[j - 1], pts[j]) for j in range(t)]  # pieces[j] lies on ring[j]
        split = None
        for i in range(t):
            for j in range(i + 2, t):
                if i == 0 and j == t - 1:
                    continue
                try:
                    hit = intersect_closed(*pieces[i], *pieces[j])
                except OverlapError:
                    hit = True
                if hit is not None:
                    split = (i, j)
                    break
            if split:
                break
        if split is None:
            raise InternalConsistencyError("non-simple certificate without a splittable crossing")
        i, j = split
        c1 = ring[i:j + 1] + [ring[i]]
        c2 = ring[:i + 1] + ring[j:] + [ring[0]]
        options = []
        for c in (c1, c2):
            n_val = crossing_number(walk_polyline(G, c), a, b)
            if n_val != 0:
                options.append((_walk_length(G, c), c))
        if not options:
            raise InternalConsistencyError("uncrossing lost the crossing value")
        cycle = min(options)[1]


def solve(segments, a: Point, b: Point, zero_one="auto", threads: int = 1,
          audit: bool = False, rank: Optional[dict] = None) -> SeparationResult:
    """Minimum-weight set of segments separating a from b.

    rank optionally reorders shortest-path tie-breaking (default: by id);
    the optimal weight does not depend on it.
    """
    segments = list(segments)
    _check_points(segments, a, b)
    G = intersection_graph(segments)
    if zero_one == "auto":
        zero_one = all(s.weight in (0, 1) for s in segments)
    roots = sorted(G.segments)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _root_scan(G, r, a, b, zero_one, audit, rank), roots))
    else:
        results = [_root_scan(G, r, a, b, zero_one, audit, rank) for r in roots]
    best = None
    n_candidates = 0
    for cand, st in results:
        n_candidates += st.get("candidates", 0)
        if cand is not None and (best is None or cand.key < best.key):
            best = cand
    if best is None:
        if arrangement.same_cell(segments, a, b):
            raise SameCellError("a and b lie in the same cell; no separating set exists")
        raise InternalConsistencyError("no candidate cycle although a and b are separated")
    cycle = best.cycle
    uncrossed = False
    if not polyline_is_simple(best.polyline):
        cycle = uncross(G, cycle, a, b)
        uncrossed = True
    cert = walk_polyline(G, cycle)
    chosen = tuple(sorted(set(cycle)))
    weight = sum((G.weight(s) for s in chosen), Fraction(0))
    if weight * 2 != best.length:
        raise InternalConsistencyError(f"certificate weight {weight} differs from half the cycle length {best.length}")
    check_certificate(cert, a, b)
    stats = {
        "roots": len(roots),
        "candidates": n_candidates,
        "n": G.n,
        "k": G.k,
        "zero_one": bool(zero_one),
        "uncrossed": uncrossed,
    }
    return SeparationResult(chosen, weight, cert, (best.root, best.edge), cycle, stats)


def check_certificate(cert: Polyline, a: Point, b: Point):
    if not polyline_is_simple(cert):
        raise InternalConsistencyError("certificate polyline is not simple")
    n_val = crossing_number(cert, a, b)
    if abs(n_val) != 1:
        raise InternalConsistencyError(f"certificate crossing number is {n_val}")
    if point_in_closed_polyline(a, cert) == point_in_closed_polyline(b, cert):
        raise InternalConsistencyError("certificate does not separate a from b")


def validate_restricted(polygon: PolygonWithHoles, segments, a: Point, b: Point,
                        need_endpoints_on_boundary: bool = True):
    """Check the restricted setting: segments in P with ends on its boundary."""
    polygon.validate()
    for p in (a, b):
        if not polygon.contains(p, strict=True):
            raise PreconditionError(f"point {p} is not in the interior of the polygon")
    bsegs = polygon.boundary_segments()
    for s in segments:
        if need_endpoints_on_boundary:
            for p in (s.p, s.q):
                if polygon.boundary_ring_at(p) is None:
                    raise PreconditionError(f"segment {s.id} has an endpoint off the boundary")
        mid = Point((s.p.x + s.q.x) / 2, (s.p.y + s.q.y) / 2)
        if not polygon.contains(mid, strict=False):
            raise PreconditionError(f"segment {s.id} leaves the polygon")
        for e in bsegs:
            try:
                hit = intersect_closed(s.p, s.q, e.p, e.q)
            except OverlapError:
                raise PreconditionError(f"segment {s.id} runs along the boundary") from None
            if hit is not None and hit not in (s.p, s.q):
                raise PreconditionError(f"segment {s.id} touches the boundary in its interior")


def solve_in_polygon(polygon: PolygonWithHoles, segments, a: Point, b: Point,
                     threads: int = 1, audit: bool = False) -> SeparationResult:
    """Fewest segments separating a from b inside P (boundary edges cost 0)."""
    segments = list(segments)
    validate_restricted(polygon, segments, a, b)
    unit = [Segment(s.id, s.p, s.q, Fraction(1)) for s in segments]
    res = solve(unit + polygon.boundary_segments(), a, b, zero_one=True, threads=threads, audit=audit)
    real = tuple(s for s in res.segments if s >= 0)
    res.stats["boundary_edges_used"] = len(res.segments) - len(real)
    return SeparationResult(real, Fraction(len(real)), res.certificate, res.witness, res.cycle, res.stats)
