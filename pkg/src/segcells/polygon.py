"""Polygons with holes used to restrict paths and segments."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BadPolygonError
from .geom import (Point, Polyline, Segment, intersect_closed, on_closed_segment,
                   polyline_is_simple, pt, ray_parity, signed_area2)
from .errors import OverlapError


def boundary_id(k: int) -> int:
    """Reserved segment id of the k-th boundary edge (0-based)."""
    return -(k + 1)


def is_boundary_id(sid: int) -> bool:
    return sid < 0


@dataclass(frozen=True)
class PolygonWithHoles:
    outer: tuple
    holes: tuple = ()
    _edges: list = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "outer", tuple(self.outer))
        object.__setattr__(self, "holes", tuple(tuple(h) for h in self.holes))

    @classmethod
    def from_coords(cls, outer, holes=()):
        return cls(tuple(pt(*v) for v in outer),
                   tuple(tuple(pt(*v) for v in h) for h in holes))

    @property
    def h(self) -> int:
        return len(self.holes)

    def rings(self):
        """Boundary components; index 0 is the exterior boundary."""
        return (self.outer,) + self.holes

    def ring_edges(self, r: int):
        ring = self.rings()[r]
        return [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]

    def boundary_edges(self):
        """List of (reserved id, ring index, p, q) for all boundary edges."""
        if self._edges is None:
            out, k = [], 0
            for r in range(len(self.rings())):
                for p, q in self.ring_edges(r):
                    out.append((boundary_id(k), r, p, q))
                    k += 1
            object.__setattr__(self, "_edges", out)
        return self._edges

    def boundary_segments(self):
        return [Segment(sid, p, q, Fraction(0)) for sid, _, p, q in self.boundary_edges()]

    def ring_of(self, sid: int) -> int:
        return self.boundary_edges()[-sid - 1][1]

    def validate(self):
        rings = self.rings()
        for r, ring in enumerate(rings):
            if len(ring) < 3:
                raise BadPolygonError(f"ring {r} has fewer than 3 vertices")
            if not polyline_is_simple(Polyline(ring, closed=True)):
                raise BadPolygonError(f"ring {r} is not simple")
            area = signed_area2(ring)
            if r == 0 and area <= 0:
                raise BadPolygonError("outer boundary must be counter-clockwise")
            if r > 0 and area >= 0:
                raise BadPolygonError(f"hole {r} must be clockwise")
        for r1 in range(len(rings)):
            for r2 in range(r1 + 1, len(rings)):
                for p1, q1 in self.ring_edges(r1):
                    for p2, q2 in self.ring_edges(r2):
                        try:
                            hit = intersect_closed(p1, q1, p2, q2)
                        except OverlapError:
                            hit = True
                        if hit is not None:
                            raise BadPolygonError(f"rings {r1} and {r2} touch")
        outer_edges = self.ring_edges(0)
        for r in range(1, len(rings)):
            if not ray_parity(rings[r][0], outer_edges):
                raise BadPolygonError(f"hole {r} is outside the outer boundary")
            for r2 in range(1, len(rings)):
                if r2 != r and ray_parity(rings[r][0], self.ring_edges(r2)):
                    raise BadPolygonError(f"hole {r} is nested in hole {r2}")
        return self

    def boundary_ring_at(self, p: Point) -> Optional[int]:
        """Ring index whose boundary contains p, or None."""
        for _, r, u, v in self.boundary_edges():
            if on_closed_segment(p, u, v):
                return r
        return None

    def is_vertex(self, p: Point) -> bool:
        return any(p in ring for ring in self.rings())

    def contains(self, p: Point, strict: bool = True) -> bool:
        """Point in P; boundary points count only when strict is False."""
        if self.boundary_ring_at(p) is not None:
            return not strict
        if not ray_parity(p, self.ring_edges(0)):
            return False
        return not any(ray_parity(p, self.ring_edges(r)) for r in range(1, len(self.rings())))
