from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from segcells.errors import DegenerateError, OverlapError
from segcells.geom import (Location, Orientation, Point, Polyline, Segment, concat, crossing_number,
                           orient, point_in_closed_polyline, polyline_is_simple, pt, seg,
                           seg_intersect, to_scalar, triple_points)

TRIANGLE = Polyline((pt(0, 0), pt(4, 0), pt(2, 4)), closed=True)

coord = st.integers(-20, 20)
points = st.builds(lambda x, y: Point(Fraction(x), Fraction(y)), coord, coord)
fine = st.fractions(min_value=-20, max_value=20, max_denominator=7)
fine_points = st.builds(Point, fine, fine)


def test_orient_examples():
    assert orient(pt(0, 0), pt(1, 0), pt(0, 1)) is Orientation.CCW
    assert orient(pt(0, 0), pt(1, 1), pt(2, 2)) is Orientation.COLLINEAR
    assert orient(pt(0, 0), pt(0, 1), pt(1, 0)) is Orientation.CW


def test_seg_intersect_examples():
    assert seg_intersect(seg(0, (0, 0), (4, 4)), seg(1, (0, 4), (4, 0))) == pt(2, 2)
    assert seg_intersect(seg(0, (0, 0), (1, 0)), seg(1, (2, 0), (3, 0))) is None
    with pytest.raises(OverlapError):
        seg_intersect(seg(0, (0, 0), (2, 0)), seg(1, (1, 0), (3, 0)))


def test_seg_intersect_touching_cases():
    # endpoint on interior, shared endpoint, collinear touching at one point
    assert seg_intersect(seg(0, (0, 0), (4, 0)), seg(1, (2, 0), (2, 5))) == pt(2, 0)
    assert seg_intersect(seg(0, (0, 0), (4, 0)), seg(1, (4, 0), (6, 3))) == pt(4, 0)
    assert seg_intersect(seg(0, (0, 0), (2, 0)), seg(1, (2, 0), (5, 0))) == pt(2, 0)
    assert seg_intersect(seg(0, (0, 0), (4, 4)), seg(1, (0, 1), (4, 5))) is None


def test_crossing_number_examples():
    a, b = pt(0, 0), pt(0, 2)
    gamma = Polyline((pt(-1, 1), pt(1, 1)))
    assert crossing_number(gamma, a, b) == 1
    assert crossing_number(gamma.reversed(), a, b) == -1
    assert crossing_number(Polyline((pt(5, 0), pt(5, 9))), a, b) == 0


def test_crossing_number_rejects_points_on_gamma():
    with pytest.raises(DegenerateError):
        crossing_number(Polyline((pt(-1, 0), pt(1, 0))), pt(0, 0), pt(0, 2))


def test_crossing_through_vertex_on_ab_counts_once():
    # the polyline bends exactly on segment ab
    a, b = pt(0, 0), pt(0, 4)
    touch = Polyline((pt(-1, 1), pt(0, 2), pt(-1, 3)))
    assert crossing_number(touch, a, b) == 0
    assert crossing_number(Polyline((pt(1, 1), pt(0, 2), pt(1, 3))), a, b) == 0
    through = Polyline((pt(-1, 1), pt(0, 2), pt(1, 3)))
    assert abs(crossing_number(through, a, b)) == 1
    assert crossing_number(through, a, b) == crossing_number(Polyline((pt(-1, 1), pt(1, 3))), a, b)


def test_simplicity_examples():
    assert polyline_is_simple(TRIANGLE)
    assert not polyline_is_simple(Polyline((pt(0, 0), pt(4, 4), pt(0, 4), pt(4, 0)), closed=True))
    assert polyline_is_simple(Polyline((pt(0, 0), pt(1, 1))))


def test_simplicity_ignores_zero_length_edges():
    gamma = Polyline((pt(0, 0), pt(4, 0), pt(4, 0), pt(2, 4)), closed=True)
    assert polyline_is_simple(gamma)


def test_fold_back_is_not_simple():
    assert not polyline_is_simple(Polyline((pt(0, 0), pt(4, 0), pt(2, 0))))


def test_point_in_triangle_examples():
    assert point_in_closed_polyline(pt(2, 1), TRIANGLE) is Location.INSIDE
    assert point_in_closed_polyline(pt(5, 5), TRIANGLE) is Location.OUTSIDE
    near_apex = Point(Fraction(2), 4 - Fraction(1, 1000))
    assert point_in_closed_polyline(near_apex, TRIANGLE) is Location.INSIDE


def test_point_on_polyline_is_degenerate():
    with pytest.raises(DegenerateError):
        point_in_closed_polyline(pt(2, 0), TRIANGLE)


def test_scalars_are_exact():
    assert to_scalar("7/3") == Fraction(7, 3)
    for bad in (0.5, "0.5", "1e3", True, "nan"):
        with pytest.raises((TypeError, ValueError)):
            to_scalar(bad)


def test_segment_validation():
    with pytest.raises(DegenerateError):
        seg(0, (1, 1), (1, 1))
    with pytest.raises(ValueError):
        Segment(0, pt(0, 0), pt(1, 0), Fraction(-1))


def test_triple_points():
    star = [seg(0, (0, 0), (4, 4)), seg(1, (0, 4), (4, 0)), seg(2, (2, 0), (2, 4))]
    assert triple_points(star) == [pt(2, 2)]
    assert triple_points(star[:2]) == []


@given(points, points, points)
def test_orient_antisymmetric(p, q, r):
    assert orient(p, q, r) == -orient(p, r, q)


@given(st.lists(fine_points, min_size=2, max_size=8), fine_points, fine_points, st.booleans())
def test_reversal_negates(vs, a, b, closed):
    gamma = Polyline(tuple(vs), closed)
    try:
        n = crossing_number(gamma, a, b)
    except DegenerateError:
        return
    assert crossing_number(gamma.reversed(), a, b) == -n


@given(st.lists(fine_points, min_size=1, max_size=6), st.lists(fine_points, min_size=1, max_size=6),
       fine_points, fine_points)
def test_concatenation_additive(v1, v2, a, b):
    g1 = Polyline(tuple(v1))
    g2 = Polyline((v1[-1],) + tuple(v2))
    try:
        total = crossing_number(concat(g1, g2), a, b)
        parts = crossing_number(g1, a, b) + crossing_number(g2, a, b)
    except DegenerateError:
        return
    assert total == parts


def _star_polygon(center, radii_angles):
    # vertices sorted by angle around the center give a simple polygon
    import math
    pts = []
    for r, ang in sorted(radii_angles, key=lambda t: t[1]):
        x = center.x + Fraction(round(r * math.cos(ang) * 8), 8)
        y = center.y + Fraction(round(r * math.sin(ang) * 8), 8)
        pts.append(Point(x, y))
    return Polyline(tuple(pts), closed=True)


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(2, 12), st.floats(0, 6.28)), min_size=3, max_size=9,
                unique_by=lambda t: round(t[1], 2)),
       fine_points, fine_points)
def test_jordan_check(radii_angles, a, b):
    gamma = _star_polygon(Point(Fraction(0), Fraction(0)), radii_angles)
    assume(polyline_is_simple(gamma))
    try:
        n = crossing_number(gamma, a, b)
        la, lb = point_in_closed_polyline(a, gamma), point_in_closed_polyline(b, gamma)
    except DegenerateError:
        return
    assert abs(n) <= 1
    assert (abs(n) == 1) == (la != lb)


@given(points, points, points, points)
def test_intersection_point_lies_on_both(p1, q1, p2, q2):
    assume(p1 != q1 and p2 != q2)
    try:
        x = seg_intersect(Segment(0, p1, q1), Segment(1, p2, q2))
    except OverlapError:
        return
    from segcells.geom import on_closed_segment
    if x is not None:
        assert on_closed_segment(x, p1, q1) and on_closed_segment(x, p2, q2)
        assert isinstance(x.x, Fraction) and isinstance(x.y, Fraction)
