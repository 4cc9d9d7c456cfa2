import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segcells import separation
from segcells.errors import (DegenerateError, InternalConsistencyError, NotAWalkError,
                             PreconditionError, SameCellError)
from segcells.generate import polygon_restricted, random_instance
from segcells.geom import crossing_number, point_in_closed_polyline, polyline_is_simple, pt, seg
from segcells.polygon import PolygonWithHoles

from oracles import (first_split, min_separating_weight, min_separating_weight_rebuild,
                     random_simple_cycle, random_walk_between)

TRIANGLE = [seg(0, (0, 0), (4, 0)), seg(1, (4, 0), (2, 4)), seg(2, (2, 4), (0, 0))]
X_CROSS = [seg(0, (0, 0), (4, 4)), seg(1, (0, 4), (4, 0))]
SQUARE = [seg(0, (0, 1), (5, 1)), seg(1, (4, 0), (4, 5)), seg(2, (5, 4), (0, 4)), seg(3, (1, 5), (1, 0))]

H = Fraction(1, 2)
# Eight segments arranged so that the intersection pattern is
# 1-2, 1-3, 1-4, 4-6, 4-5, 6-7, 7-5, 7-2, 7-8, 8-6.
EIGHT = [
    seg(1, (0, 0), (10, 0)),
    seg(2, (1, -1), (1, 8)),
    seg(3, (4, -1), (4, 1)),
    seg(4, (8, -1), (8, 5)),
    seg(5, (Fraction(17, 2), 1), (3, Fraction(15, 2))),
    seg(6, (9, 2), (5, 8)),
    seg(7, (0, 7), (7, 7)),
    seg(8, (Fraction(9, 2), 9), (Fraction(15, 2), Fraction(21, 5))),
]
EIGHT_EDGES = [(1, 2), (1, 3), (1, 4), (2, 7), (4, 5), (4, 6), (5, 7), (6, 7), (6, 8), (7, 8)]


def test_triangle_graph():
    G = separation.intersection_graph(TRIANGLE)
    assert G.edges() == [(0, 1), (0, 2), (1, 2)]
    assert all(G.edge_weight(s, t) == 2 for s, t in G.edges())


def test_x_cross_graph():
    G = separation.intersection_graph(X_CROSS)
    assert G.edges() == [(0, 1)]
    assert G.edge_weight(0, 1) == 2 and G.point(0, 1) == pt(2, 2)


def test_eight_segment_adjacency():
    G = separation.intersection_graph(EIGHT)
    assert G.edges() == EIGHT_EDGES
    assert (G.n, G.k) == (8, 10)


def test_walk_polyline_examples():
    G = separation.intersection_graph(TRIANGLE)
    open_walk = separation.walk_polyline(G, [0, 1])
    assert open_walk.vertices == (pt(4, 0),) and not open_walk.closed
    assert list(open_walk.edges()) == []
    closed = separation.walk_polyline(G, [0, 1, 2, 0])
    assert closed.closed and closed.vertices == (pt(4, 0), pt(2, 4), pt(0, 0))


def test_eight_segment_closed_walk():
    G = separation.intersection_graph(EIGHT)
    gamma = separation.walk_polyline(G, [2, 1, 4, 6, 7, 2])
    assert gamma.closed
    assert gamma.vertices == (pt(1, 0), pt(8, 0), pt(8, Fraction(7, 2)), pt(Fraction(17, 3), 7), pt(1, 7))
    assert polyline_is_simple(gamma)


def test_not_a_walk():
    G = separation.intersection_graph(EIGHT)
    with pytest.raises(NotAWalkError):
        separation.walk_polyline(G, [1, 6])
    with pytest.raises(NotAWalkError):
        separation.walk_polyline(G, [1, 99])


def test_sp_tree_triangle():
    G = separation.intersection_graph(TRIANGLE)
    for zero_one in (False, True):
        tree = separation.sp_tree(G, 0, zero_one)
        assert tree.dist == {0: 0, 1: 2, 2: 2}
        assert tree.parent == {0: None, 1: 0, 2: 0}


def test_sp_tree_weighted_path():
    segs = [seg(0, (0, 0), (2, 0), 1), seg(1, (1, -1), (1, 2), 0), seg(2, (0, 1), (2, 1), 1)]
    G = separation.intersection_graph(segs)
    assert G.edge_weight(0, 1) == 1 and G.edge_weight(1, 2) == 1
    for zero_one in (False, True):
        assert separation.sp_tree(G, 0, zero_one).dist[2] == 2


def _bellman(G, r):
    dist = {r: Fraction(0)}
    for _ in range(G.n):
        for s, t in G.edges():
            for u, v in ((s, t), (t, s)):
                if u in dist and (v not in dist or dist[u] + G.edge_weight(u, v) < dist[v]):
                    dist[v] = dist[u] + G.edge_weight(u, v)
    return dist


@pytest.mark.parametrize("seed", range(25))
def test_sp_tree_distances(seed):
    inst = random_instance(9, seed, box=16, weights="rational")
    G = separation.intersection_graph(inst.segments)
    for r in G.segments:
        tree = separation.sp_tree(G, r)
        assert tree.dist == _bellman(G, r)
        for v, p in tree.parent.items():
            if p is not None:
                assert tree.dist[v] == tree.dist[p] + G.edge_weight(p, v)


@pytest.mark.parametrize("seed", range(25))
def test_bucket_queue_builds_identical_trees(seed):
    inst = random_instance(9, seed, box=16, weights="01")
    G = separation.intersection_graph(inst.segments)
    for r in G.segments:
        heap, buckets = separation.sp_tree(G, r), separation.sp_tree(G, r, zero_one=True)
        assert heap.dist == buckets.dist and heap.parent == buckets.parent


def test_annotate_triangle():
    G = separation.intersection_graph(TRIANGLE)
    tree = separation.annotate(separation.sp_tree(G, 0), G, pt(2, 1), pt(5, 5))
    assert tree.N[1] == 0 and tree.N[2] == 0
    assert tree.C[1] == 1 and tree.C[2] == 2


def test_root_child_labels_depend_on_tie_break():
    G = separation.intersection_graph(EIGHT)
    a, b = pt(3, 3), pt(12, 12)
    default = separation.annotate(separation.sp_tree(G, 1), G, a, b)
    assert default.parent[8] == 6
    # Prefer higher ids on ties: s8 then hangs below s7, which descends from s2.
    rank = {s: -s for s in G.segments}
    tree = separation.annotate(separation.sp_tree(G, 1, rank=rank), G, a, b)
    assert tree.parent[8] == 7
    assert tree.C[8] == 2 and tree.C[6] == 4
    separation.audit_labels(tree, G, a, b)


@pytest.mark.parametrize("seed", range(30))
def test_labels_match_direct_counts(seed):
    inst = random_instance(8, seed, box=16)
    G = separation.intersection_graph(inst.segments)
    for r in G.segments:
        tree = separation.annotate(separation.sp_tree(G, r), G, inst.a, inst.b)
        separation.audit_labels(tree, G, inst.a, inst.b)
        separation.candidate_min(tree, G, inst.a, inst.b, audit=True)


def test_audit_catches_a_corrupted_label():
    inst = random_instance(8, 3, box=16)
    G = separation.intersection_graph(inst.segments)
    tree = separation.annotate(separation.sp_tree(G, 0), G, inst.a, inst.b)
    victim = tree.order[-1]
    tree.N[victim] += 1
    with pytest.raises(InternalConsistencyError):
        separation.audit_labels(tree, G, inst.a, inst.b)


def test_candidate_triangle():
    G = separation.intersection_graph(TRIANGLE)
    tree = separation.annotate(separation.sp_tree(G, 0), G, pt(2, 1), pt(5, 5))
    cand = separation.candidate_min(tree, G, pt(2, 1), pt(5, 5), audit=True)
    assert cand.edge == (1, 2) and cand.length == 6 and abs(cand.N) == 1


def test_candidate_x_cross_empty():
    G = separation.intersection_graph(X_CROSS)
    tree = separation.annotate(separation.sp_tree(G, 0), G, pt(2, 1), pt(2, 3))
    assert separation.candidate_min(tree, G, pt(2, 1), pt(2, 3)) is None


def test_candidate_square():
    G = separation.intersection_graph(SQUARE)
    a, b = pt(2, 2), pt(9, 9)
    lengths = []
    for r in G.segments:
        tree = separation.annotate(separation.sp_tree(G, r), G, a, b)
        cand = separation.candidate_min(tree, G, a, b, audit=True)
        lengths.append(cand.length)
    assert lengths == [8, 8, 8, 8]


def test_solve_triangle():
    res = separation.solve(TRIANGLE, pt(2, 1), pt(5, 5))
    assert res.segments == (0, 1, 2) and res.weight == 3
    assert set(res.certificate.vertices) == {pt(0, 0), pt(4, 0), pt(2, 4)}


def test_solve_weighted_triangle():
    segs = [seg(0, (0, 0), (4, 0), 0), seg(1, (4, 0), (2, 4), 2), seg(2, (2, 4), (0, 0), 1)]
    res = separation.solve(segs, pt(2, 1), pt(5, 5))
    assert res.segments == (0, 1, 2) and res.weight == 3


def test_solve_same_cell():
    with pytest.raises(SameCellError):
        separation.solve(X_CROSS, pt(2, 1), pt(2, 3))
    with pytest.raises(SameCellError):
        separation.solve(TRIANGLE, pt(2, 1), pt(2, 2))


def test_solve_rejects_points_on_segments():
    with pytest.raises(DegenerateError):
        separation.solve(TRIANGLE, pt(2, 0), pt(5, 5))


def _separable(seeds, n_of, **kw):
    for seed in seeds:
        inst = random_instance(n_of(seed), seed, **kw)
        yield seed, inst


def _assert_sound(res, a, b):
    cert = res.certificate
    assert polyline_is_simple(cert)
    assert abs(crossing_number(cert, a, b)) == 1
    assert point_in_closed_polyline(a, cert) != point_in_closed_polyline(b, cert)
    assert set(res.cycle) == set(res.segments)


@pytest.mark.parametrize("seed", range(40))
def test_solve_matches_subset_oracle(seed):
    inst = random_instance(3 + seed % 7, seed)
    best = min_separating_weight(inst.segments, inst.a, inst.b)
    if best is None:
        with pytest.raises(SameCellError):
            separation.solve(inst.segments, inst.a, inst.b)
        return
    res = separation.solve(inst.segments, inst.a, inst.b, audit=True)
    assert res.weight == best
    _assert_sound(res, inst.a, inst.b)


@pytest.mark.parametrize("seed", range(10))
def test_oracles_agree(seed):
    inst = random_instance(3 + seed % 5, 500 + seed, weights="rational")
    assert (min_separating_weight(inst.segments, inst.a, inst.b)
            == min_separating_weight_rebuild(inst.segments, inst.a, inst.b))


@pytest.mark.parametrize("seed", range(20))
def test_weighted_matches_oracle(seed):
    inst = random_instance(3 + seed % 6, 1000 + seed, weights="rational")
    best = min_separating_weight(inst.segments, inst.a, inst.b)
    if best is None:
        return
    res = separation.solve(inst.segments, inst.a, inst.b, audit=True)
    assert res.weight == best
    _assert_sound(res, inst.a, inst.b)


@pytest.mark.parametrize("seed", range(20))
def test_zero_one_path_identical(seed):
    inst = random_instance(4 + seed % 6, 2000 + seed, weights="01")
    try:
        fast = separation.solve(inst.segments, inst.a, inst.b, zero_one=True)
    except SameCellError:
        with pytest.raises(SameCellError):
            separation.solve(inst.segments, inst.a, inst.b, zero_one=False)
        return
    slow = separation.solve(inst.segments, inst.a, inst.b, zero_one=False)
    assert (fast.weight, fast.segments, fast.certificate) == (slow.weight, slow.segments, slow.certificate)


def test_zero_one_path_rejects_other_weights():
    G = separation.intersection_graph([seg(0, (0, 0), (1, 1), 3), seg(1, (0, 1), (1, 0))])
    with pytest.raises(ValueError):
        separation.sp_tree(G, 0, zero_one=True)


@pytest.mark.parametrize("seed", range(8))
def test_threads_identical(seed):
    inst = random_instance(9, 3000 + seed)
    try:
        one = separation.solve(inst.segments, inst.a, inst.b)
    except SameCellError:
        return
    many = separation.solve(inst.segments, inst.a, inst.b, threads=4)
    assert (one.segments, one.certificate, one.witness) == (many.segments, many.certificate, many.witness)


@pytest.mark.parametrize("seed", range(15))
def test_tie_break_permutations_keep_optimum(seed):
    inst = random_instance(8, 4000 + seed)
    try:
        base = separation.solve(inst.segments, inst.a, inst.b).weight
    except SameCellError:
        return
    rng = random.Random(seed)
    ids = [s.id for s in inst.segments]
    for _ in range(3):
        perm = ids[:]
        rng.shuffle(perm)
        rank = {s: i for i, s in enumerate(perm)}
        res = separation.solve(inst.segments, inst.a, inst.b, rank=rank, audit=True)
        assert res.weight == base
        _assert_sound(res, inst.a, inst.b)


def _three_walk_sums(G, a, b, rng):
    ids = [v for v in sorted(G.segments) if G.adj[v]]
    s, t = rng.choice(ids), rng.choice(ids)
    walks = [random_walk_between(G, s, t, rng) for _ in range(3)]
    if any(w is None for w in walks):
        return None
    values = []
    for i in range(3):
        w1, w2 = walks[i], walks[(i + 1) % 3]
        closed = w1 + w2[::-1][1:]
        values.append(crossing_number(separation.walk_polyline(G, closed, closed=True), a, b))
    return values


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_three_path_identity(seed, wseed):
    inst = random_instance(7, seed, box=16)
    G = separation.intersection_graph(inst.segments)
    if G.k == 0:
        return
    values = _three_walk_sums(G, inst.a, inst.b, random.Random(wseed))
    if values is None:
        return
    assert sum(values) == 0
    assert sum(1 for v in values if v != 0) != 1


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_uncrossing_is_additive(seed, wseed):
    inst = random_instance(8, seed, box=16)
    G = separation.intersection_graph(inst.segments)
    if G.k == 0:
        return
    walk = random_simple_cycle(G, random.Random(wseed))
    if walk is None:
        return
    poly = separation.walk_polyline(G, walk, closed=True)
    ring = walk[:-1]
    pts = poly.vertices
    split = first_split([(pts[j - 1], pts[j]) for j in range(len(ring))])
    if split is None:
        return
    i, j = split
    c1 = ring[i:j + 1] + [ring[i]]
    c2 = ring[:i + 1] + ring[j:] + [ring[0]]
    parts = [crossing_number(separation.walk_polyline(G, c, closed=True), inst.a, inst.b) for c in (c1, c2)]
    assert crossing_number(poly, inst.a, inst.b) == sum(parts)


def test_uncross_produces_simple_cycle():
    # A figure-eight walk: the pieces on segments 0 and 2 cross.
    segs = [seg(0, (0, 0), (6, 6)), seg(1, (6, 7), (6, -1)), seg(2, (6, 0), (0, 6)), seg(3, (0, -1), (0, 7))]
    G = separation.intersection_graph(segs)
    walk = [0, 1, 2, 3, 0]
    assert not polyline_is_simple(separation.walk_polyline(G, walk))
    a, b = pt(5, 3), pt(9, 3)
    assert crossing_number(separation.walk_polyline(G, walk), a, b) != 0
    cyc = separation.uncross(G, walk, a, b)
    gamma = separation.walk_polyline(G, cyc)
    assert polyline_is_simple(gamma) and crossing_number(gamma, a, b) != 0


# ---------------------------------------------------------------------------
# Restriction to a polygon
# ---------------------------------------------------------------------------

def test_polygon_chord():
    square = PolygonWithHoles.from_coords([(0, 0), (8, 0), (8, 8), (0, 8)])
    res = separation.solve_in_polygon(square, [seg(0, (4, 0), (4, 8))], pt(1, 1), pt(7, 1))
    assert res.segments == (0,) and res.weight == 1
    assert res.stats["boundary_edges_used"] > 0


def test_polygon_hole_needs_both_sides():
    square = PolygonWithHoles.from_coords([(0, 0), (8, 0), (8, 8), (0, 8)], [[(3, 3), (3, 5), (5, 5), (5, 3)]])
    above, below = seg(0, (4, 5), (4, 8)), seg(1, (4, 0), (4, 3))
    res = separation.solve_in_polygon(square, [above, below], pt(1, 4), pt(7, 4))
    assert res.segments == (0, 1) and res.weight == 2
    assert min_separating_weight_rebuild([above, below], pt(1, 4), pt(7, 4), square) == 2


def test_polygon_same_cell():
    square = PolygonWithHoles.from_coords([(0, 0), (8, 0), (8, 8), (0, 8)], [[(3, 3), (3, 5), (5, 5), (5, 3)]])
    with pytest.raises(SameCellError):
        separation.solve_in_polygon(square, [seg(0, (4, 5), (4, 8))], pt(1, 4), pt(7, 4))


def test_polygon_precondition():
    square = PolygonWithHoles.from_coords([(0, 0), (8, 0), (8, 8), (0, 8)])
    with pytest.raises(PreconditionError):
        separation.solve_in_polygon(square, [seg(0, (4, 1), (4, 8))], pt(1, 1), pt(7, 1))
    with pytest.raises(PreconditionError):
        separation.solve_in_polygon(square, [seg(0, (4, 0), (4, 8))], pt(1, 1), pt(9, 1))


@pytest.mark.parametrize("seed", range(15))
def test_polygon_matches_oracle(seed):
    inst = polygon_restricted(1 + seed % 2, 3 + seed % 5, seed, problem="separation-polygon")
    unit = [seg(s.id, s.p, s.q) for s in inst.segments]
    best = min_separating_weight(unit, inst.a, inst.b, clip=inst.polygon)
    if best is None:
        with pytest.raises(SameCellError):
            separation.solve_in_polygon(inst.polygon, inst.segments, inst.a, inst.b)
        return
    res = separation.solve_in_polygon(inst.polygon, inst.segments, inst.a, inst.b, audit=True)
    assert res.weight == best
    assert polyline_is_simple(res.certificate)
    assert abs(crossing_number(res.certificate, inst.a, inst.b)) == 1
