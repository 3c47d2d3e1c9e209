"""Convex integral polygons: edge data, lattice counts, building blocks.

Vertices are (x, y) int tuples on the homology lattice of the torus.  A
polygon is stored in absolute coordinates; equality up to lattice translation
is a separate predicate, because Newton polygons of spectral polynomials are
only defined up to translation.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from math import gcd


class PolygonError(ValueError):
    pass


class NotConvex(PolygonError):
    pass


class NotClosed(PolygonError):
    pass


class RepeatedVertex(PolygonError):
    pass


class NotUnimodular(PolygonError):
    pass


class NoInteriorPoint(PolygonError):
    pass


def cross(a, b):
    """Standard planar cross product a.x*b.y - a.y*b.x."""
    return a[0] * b[1] - a[1] * b[0]


def vsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def vadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def primitive(v):
    g = gcd(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return (v[0] // g, v[1] // g)


@dataclass(frozen=True)
class EdgeDatum:
    """One side of the polygon: E_rho = multiplicity * primitive_direction."""

    index: int
    vector: tuple
    primitive_direction: tuple
    multiplicity: int
    inward_normal: tuple


@dataclass(frozen=True)
class ConvexIntegralPolygon:
    vertices: tuple

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        """Counterclockwise edge vectors, one per side."""
        vs = self.vertices
        return [vsub(vs[(i + 1) % len(vs)], vs[i]) for i in range(len(vs))]

    def edge_data(self):
        out = []
        for i, e in enumerate(self.edges()):
            p = primitive(e)
            # interior lies to the left of each ccw edge
            u = (-p[1], p[0])
            out.append(
                EdgeDatum(
                    index=i,
                    vector=e,
                    primitive_direction=p,
                    multiplicity=abs(gcd(e[0], e[1])),
                    inward_normal=u,
                )
            )
        return out

    def multiplicities(self):
        return [d.multiplicity for d in self.edge_data()]

    def area2(self):
        """Twice the area (shoelace); positive for ccw polygons."""
        vs = self.vertices
        return sum(cross(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def bounding_box(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys)), (max(xs), max(ys))

    def contains(self, p, strict=False):
        """Point-in-polygon with exact arithmetic; strict excludes the boundary."""
        vs = self.vertices
        for i in range(len(vs)):
            c = cross(vsub(vs[(i + 1) % len(vs)], vs[i]), vsub(p, vs[i]))
            if c < 0 or (strict and c == 0):
                return False
        return True

    def lattice_points(self):
        """All lattice points of the closed polygon, sorted."""
        (x0, y0), (x1, y1) = self.bounding_box()
        return [
            (x, y)
            for x in range(x0, x1 + 1)
            for y in range(y0, y1 + 1)
            if self.contains((x, y))
        ]

    def boundary_lattice_points(self):
        """Boundary lattice points in ccw cyclic order starting at vertex 0."""
        out = []
        vs = self.vertices
        for i, v in enumerate(vs):
            e = vsub(vs[(i + 1) % len(vs)], v)
            k = abs(gcd(e[0], e[1]))
            step = primitive(e)
            for t in range(k):
                out.append((v[0] + t * step[0], v[1] + t * step[1]))
        return out

    def translate(self, t):
        return ConvexIntegralPolygon(tuple(vadd(v, t) for v in self.vertices))

    def to_json(self):
        return {"vertices": [list(v) for v in self.vertices]}


def validate_polygon(vertices):
    """Check convexity and normalize the start vertex to the lex-smallest.

    Clockwise input is re-oriented counterclockwise; genuinely non-convex or
    degenerate input raises.  Three consecutive collinear vertices are
    rejected so that sides and their multiplicities are well defined.
    """
    vs = [tuple(int(c) for c in v) for v in vertices]
    if len(vs) < 3:
        raise NotConvex("a polygon needs at least 3 vertices")
    if len(set(vs)) != len(vs):
        raise RepeatedVertex("repeated vertex in input")
    n = len(vs)
    signs = []
    for i in range(n):
        a, b, c = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
        signs.append(cross(vsub(b, a), vsub(c, b)))
    if any(s == 0 for s in signs):
        raise NotConvex("three consecutive vertices are collinear")
    if all(s < 0 for s in signs):
        vs.reverse()
    elif not all(s > 0 for s in signs):
        raise NotConvex("vertex sequence is not convex")
    start = vs.index(min(vs))
    vs = vs[start:] + vs[:start]
    return ConvexIntegralPolygon(tuple(vs))


def polygon_from_edge_vectors(vectors):
    """Assemble edge vectors (sorted by angle, parallel ones merged) into a polygon.

    Raises NotClosed when the vectors do not sum to zero.  The result is
    normalized so its lex-smallest vertex is at the origin.
    """
    vecs = [tuple(v) for v in vectors if v != (0, 0)]
    if not vecs:
        raise NotConvex("no nonzero edge vectors")
    total = (sum(v[0] for v in vecs), sum(v[1] for v in vecs))
    if total != (0, 0):
        raise NotClosed("edge vectors sum to %r, not zero" % (total,))

    def angle_cmp(a, b):
        ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
        hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
        if ha != hb:
            return ha - hb
        c = cross(a, b)
        return 0 if c == 0 else (-1 if c > 0 else 1)

    vecs.sort(key=functools.cmp_to_key(angle_cmp))
    merged = []
    for v in vecs:
        if merged and cross(merged[-1], v) == 0:
            merged[-1] = vadd(merged[-1], v)
        else:
            merged.append(v)
    pts = [(0, 0)]
    for v in merged[:-1]:
        pts.append(vadd(pts[-1], v))
    poly = validate_polygon(pts)
    base = min(poly.vertices)
    return poly.translate((-base[0], -base[1]))


def edge_data(p):
    return p.edge_data()


def interior_lattice_points(p):
    """(g, interior points); cross-checked against Pick's theorem."""
    pts = [q for q in p.lattice_points() if p.contains(q, strict=True)]
    boundary = len(p.boundary_lattice_points())
    # Pick: 2*Area = 2*I + B - 2, exactly.
    if p.area2() != 2 * len(pts) + boundary - 2:
        raise AssertionError("Pick's theorem violated; polygon data corrupt")
    return len(pts), pts


def genus(p):
    return interior_lattice_points(p)[0]


def apply_sl2(p, m):
    """Transform vertices by a det-1 integer matrix."""
    (a, b), (c, d) = m
    if a * d - b * c != 1:
        raise NotUnimodular("matrix determinant must be 1")
    return validate_polygon([(a * x + b * y, c * x + d * y) for x, y in p.vertices])


def is_building_block(p):
    """True iff exactly one interior lattice point and at most five in total."""
    g, _ = interior_lattice_points(p)
    return g == 1 and len(p.lattice_points()) <= 5


def translation_equal(p, q):
    if len(p.vertices) != len(q.vertices):
        return False
    t = vsub(q.vertices[0], p.vertices[0])
    return all(vadd(v, t) == w for v, w in zip(p.vertices, q.vertices))


def _polygon_from_boundary_chain(points):
    """Polygon through a cyclic chain of points, dropping interior-of-edge ones."""
    n = len(points)
    corners = []
    for i in range(n):
        a, b, c = points[i - 1], points[i], points[(i + 1) % n]
        if cross(vsub(b, a), vsub(c, b)) != 0:
            corners.append(b)
    if len(corners) < 3:
        raise NotConvex("degenerate chain")
    return validate_polygon(corners)


def _chord_pieces(p, a, b):
    """Split p along the chord a-b into its two closed pieces."""
    ring = p.boundary_lattice_points()
    ia, ib = ring.index(a), ring.index(b)
    arc1 = ring[ia : ib + 1] if ia <= ib else ring[ia:] + ring[: ib + 1]
    arc2 = ring[ib : ia + 1] if ib <= ia else ring[ib:] + ring[: ia + 1]
    return _polygon_from_boundary_chain(arc1), _polygon_from_boundary_chain(arc2)


def _admissible(piece, count):
    return (
        len(piece.lattice_points()) < count
        and interior_lattice_points(piece)[0] >= 1
    )


def find_building_block(p):
    """Shrink p to a building block polygon contained in it.

    Shrinks by constructive cuts: first try
    chords between boundary lattice points (edge-count reduction and
    splitting off boundary points), and when no chord is admissible, cut a
    triangle through an interior lattice point and two boundary points (the
    step that isolates one interior point when the boundary has no spare
    lattice points).  Every accepted piece strictly reduces the total lattice
    point count, so the loop terminates; candidates are scanned in
    lexicographic order, so the result is reproducible.
    """
    g, _ = interior_lattice_points(p)
    if g < 1:
        raise NoInteriorPoint("polygon has no interior lattice point")
    q = p
    while not is_building_block(q):
        count = len(q.lattice_points())
        ring = q.boundary_lattice_points()
        chords = sorted(
            (min(a, b), max(a, b)) for i, a in enumerate(ring) for b in ring[i + 1 :]
        )
        step = None
        for a, b in chords:
            try:
                pieces = _chord_pieces(q, a, b)
            except PolygonError:
                continue
            found = [pc for pc in pieces if _admissible(pc, count)]
            if found:
                found.sort(key=lambda c: (len(c.lattice_points()), c.vertices))
                step = found[0]
                break
        if step is None:
            interior = interior_lattice_points(q)[1]
            for y in interior:
                for a, b in chords:
                    try:
                        tri = validate_polygon([a, b, y])
                    except PolygonError:
                        continue
                    if _admissible(tri, count):
                        step = tri
                        break
                if step is not None:
                    break
        if step is None:
            raise AssertionError("no admissible cut found; should be impossible for convex input")
        q = step
    return q


def random_convex_polygon(rng, bound=8, min_points=3, max_points=8):
    """Convex hull of random lattice points inside [0, bound]^2."""
    while True:
        k = rng.randint(min_points, max_points)
        pts = {(rng.randint(0, bound), rng.randint(0, bound)) for _ in range(k)}
        hull = convex_hull(list(pts))
        if len(hull) >= 3:
            try:
                return validate_polygon(hull)
            except PolygonError:
                continue


def convex_hull(points):
    """Andrew monotone chain; returns ccw hull vertices without collinear points."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def half(seq):
        out = []
        for q in seq:
            while len(out) >= 2 and cross(vsub(out[-1], out[-2]), vsub(q, out[-2])) <= 0:
                out.pop()
            out.append(q)
        return out

    lower = half(pts)
    upper = half(list(reversed(pts)))
    return lower[:-1] + upper[:-1]


def load_polygon(handle_or_dict):
    """Read `{"vertices": [[x, y], ...]}`; cw input is auto-reversed."""
    data = handle_or_dict
    if not isinstance(data, dict):
        data = json.load(data)
    return validate_polygon([tuple(v) for v in data["vertices"]])
