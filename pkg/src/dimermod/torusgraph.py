"""Bipartite torus graphs as combinatorial maps with homology displacements.

A graph is a rotation system: for each vertex, the counterclockwise cyclic
order of its incident edges.  The torus structure lives entirely in per-edge
displacement vectors: disp(e) is the deck translate gained when the edge is
traversed from its white end to its black end.  A dart is (edge_id, sign)
with sign +1 for white->black.

Conventions pinned here and relied on everywhere else:

  * faces: from a dart, the next boundary dart leaves the head along the
    previous edge in ccw order; orbits then run counterclockwise with the
    face on the left, so every dart lies in exactly one face.
  * zig-zag paths: at a black head take the next edge clockwise, at a white
    head the next edge counterclockwise ("maximally right at black,
    maximally left at white").  The global swap would reverse all paths; the
    choice is the one whose square-lattice homology classes match the
    published character-divisor signs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import intlin, polygon as poly


class GraphError(ValueError):
    pass


class NotBipartite(GraphError):
    pass


class Disconnected(GraphError):
    pass


class NonContractibleFace(GraphError):
    pass


class EulerMismatch(GraphError):
    pass


class InvalidRotation(GraphError):
    pass


class TrivialZigZag(GraphError):
    pass


class UnknownCatalogEntry(GraphError):
    pass


class UnbalancedColors(GraphError):
    pass


BLACK = "b"
WHITE = "w"


@dataclass(frozen=True)
class Face:
    id: str
    darts: tuple


@dataclass(frozen=True)
class ZigZagPath:
    id: str
    darts: tuple
    homology: tuple
    positions: tuple  # lift position of each dart's tail, starting at (0, 0)

    def edge_ids(self):
        return [e for e, _ in self.darts]


class TorusGraph:
    """Immutable after construction; faces and zig-zag paths are cached."""

    def __init__(self, vertices, edges, rotations):
        self.vertices = dict(vertices)
        self.edges = {e: (b, w, tuple(d)) for e, (b, w, d) in edges.items()}
        self.rotations = {v: tuple(r) for v, r in rotations.items()}
        self._validate_incidence()
        self._check_connected()
        self._faces, self._face_of_dart = self._trace_faces()
        self._check_topology()
        self._zigzags, self._zz_of_dart = self._trace_zigzags()

    # -- basic dart algebra -------------------------------------------------

    def color(self, v):
        return self.vertices[v]

    def black(self, e):
        return self.edges[e][0]

    def white(self, e):
        return self.edges[e][1]

    def disp(self, e):
        return self.edges[e][2]

    def dart_tail(self, d):
        e, s = d
        return self.white(e) if s > 0 else self.black(e)

    def dart_head(self, d):
        e, s = d
        return self.black(e) if s > 0 else self.white(e)

    def dart_disp(self, d):
        e, s = d
        dx, dy = self.disp(e)
        return (dx, dy) if s > 0 else (-dx, -dy)

    def darts(self):
        for e in self.edges:
            yield (e, 1)
            yield (e, -1)

    def _rot_step(self, v, e, delta):
        rot = self.rotations[v]
        i = rot.index(e)
        return rot[(i + delta) % len(rot)]

    def _dart_from(self, v, e):
        s = 1 if self.color(v) == WHITE else -1
        return (e, s)

    def next_face_dart(self, d):
        v = self.dart_head(d)
        return self._dart_from(v, self._rot_step(v, d[0], -1))

    def next_zigzag_dart(self, d):
        v = self.dart_head(d)
        delta = -1 if self.color(v) == BLACK else 1
        return self._dart_from(v, self._rot_step(v, d[0], delta))

    # -- validation ----------------------------------------------------------

    def _validate_incidence(self):
        for e, (b, w, d) in self.edges.items():
            if b not in self.vertices or w not in self.vertices:
                raise NotBipartite("edge %s has an unknown endpoint" % e)
            if self.vertices[b] != BLACK or self.vertices[w] != WHITE:
                raise NotBipartite("edge %s must join black to white" % e)
            if len(d) != 2:
                raise InvalidRotation("edge %s displacement must be a pair" % e)
        incident = {v: [] for v in self.vertices}
        for e, (b, w, _) in self.edges.items():
            incident[b].append(e)
            incident[w].append(e)
        for v in self.vertices:
            rot = self.rotations.get(v)
            if rot is None or sorted(rot) != sorted(incident[v]):
                raise InvalidRotation("rotation at %s does not list its edges" % v)
            if len(set(rot)) != len(rot):
                raise InvalidRotation("rotation at %s repeats an edge" % v)

    def _check_connected(self):
        if not self.vertices:
            raise Disconnected("empty graph")
        seen = set()
        start = min(self.vertices)
        stack = [start]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            for e in self.rotations[v]:
                b, w, _ = self.edges[e]
                stack.append(w if v == b else b)
        if len(seen) != len(self.vertices):
            raise Disconnected("graph is not connected")

    def _orbits(self, step):
        todo = set(self.darts())
        orbits = []
        while todo:
            d0 = min(todo)
            cycle = [d0]
            todo.remove(d0)
            d = step(d0)
            while d != d0:
                todo.remove(d)
                cycle.append(d)
                d = step(d)
            orbits.append(tuple(cycle))
        orbits.sort(key=lambda c: c[0])
        return orbits

    def _trace_faces(self):
        faces = []
        face_of = {}
        for i, cycle in enumerate(self._orbits(self.next_face_dart)):
            f = Face(id="f%d" % i, darts=cycle)
            faces.append(f)
            for d in cycle:
                face_of[d] = f.id
        return tuple(faces), face_of

    def _check_topology(self):
        v, e, f = len(self.vertices), len(self.edges), len(self._faces)
        if v - e + f != 0:
            raise EulerMismatch("V-E+F = %d, expected 0 on the torus" % (v - e + f))
        for face in self._faces:
            total = (0, 0)
            for d in face.darts:
                total = poly.vadd(total, self.dart_disp(d))
            if total != (0, 0):
                raise NonContractibleFace("face %s has displacement %r" % (face.id, total))

    def _trace_zigzags(self):
        paths = []
        zz_of = {}
        for i, cycle in enumerate(self._orbits(self.next_zigzag_dart)):
            pos = [(0, 0)]
            for d in cycle[:-1]:
                pos.append(poly.vadd(pos[-1], self.dart_disp(d)))
            h = poly.vadd(pos[-1], self.dart_disp(cycle[-1]))
            z = ZigZagPath(id="z%d" % i, darts=cycle, homology=h, positions=tuple(pos))
            paths.append(z)
            for d in cycle:
                zz_of[d] = z.id
        return tuple(paths), zz_of

    # -- cached views ----------------------------------------------------------

    def faces(self):
        return self._faces

    def face_of_dart(self, d):
        return self._face_of_dart[d]

    def face_by_id(self, fid):
        for f in self._faces:
            if f.id == fid:
                return f
        raise GraphError("no face %s" % fid)

    def zigzags(self):
        return self._zigzags

    def zigzag_of_dart(self, d):
        return self._zz_of_dart[d]

    def zigzag_by_id(self, zid):
        for z in self._zigzags:
            if z.id == zid:
                return z
        raise GraphError("no zig-zag path %s" % zid)

    def paths_through_edge(self, e):
        return (self._zz_of_dart[(e, 1)], self._zz_of_dart[(e, -1)])

    # -- serialization ----------------------------------------------------------

    def to_json(self):
        return {
            "vertices": [
                {"id": v, "color": self.vertices[v]} for v in sorted(self.vertices)
            ],
            "edges": [
                {
                    "id": e,
                    "black": self.edges[e][0],
                    "white": self.edges[e][1],
                    "disp": list(self.edges[e][2]),
                }
                for e in sorted(self.edges)
            ],
            "rotations": {v: list(self.rotations[v]) for v in sorted(self.rotations)},
        }


def validate_graph(data):
    """Build a TorusGraph from the JSON dict shape; all invariants checked."""
    vertices = {v["id"]: v["color"] for v in data["vertices"]}
    edges = {e["id"]: (e["black"], e["white"], tuple(e["disp"])) for e in data["edges"]}
    rotations = {v: tuple(r) for v, r in data["rotations"].items()}
    return TorusGraph(vertices, edges, rotations)


def load_graph(handle_or_dict):
    data = handle_or_dict
    if not isinstance(data, dict):
        data = json.load(data)
    return validate_graph(data)


def zig_zag_paths(g):
    return list(g.zigzags())


def newton_polygon(g):
    """Polygon assembled from zig-zag homology classes, plus path -> side labels."""
    classes = []
    for z in g.zigzags():
        if z.homology == (0, 0):
            raise TrivialZigZag("zig-zag %s is homologically trivial" % z.id)
        classes.append(z.homology)
    p = poly.polygon_from_edge_vectors(classes)
    labels = {}
    dirs = {d.primitive_direction: d.index for d in p.edge_data()}
    for z in g.zigzags():
        labels[z.id] = dirs[poly.primitive(z.homology)]
    return p, labels


# -- minimality ------------------------------------------------------------


def _lifted_edge_anchor(g, d, pos):
    """Identify the lifted edge under dart d at tail position pos.

    The anchor is the lift position of the white endpoint, which is the same
    for both traversal directions of the same lifted edge.
    """
    e, s = d
    return (e, pos if s > 0 else poly.vadd(pos, g.dart_disp(d)))


def check_minimality(g):
    """(is_minimal, certificate). Lifts are scanned within a periodic window.

    Self-intersections: a zig-zag path that uses some edge twice per period
    lifts either to a self-crossing curve or to two parallel lifts sharing an
    edge; both are violations.  Parallel bigons: two lifts sharing two
    consecutive intersections traversed in the same order.
    """
    zigzags = g.zigzags()
    for z in zigzags:
        if z.homology == (0, 0):
            # a trivial class bounds a disk, which always forces crossings
            return False, {"kind": "trivial_zigzag", "path": z.id}
        seen = set()
        for d in z.darts:
            if d[0] in seen:
                return False, {
                    "kind": "self_intersection",
                    "path": z.id,
                    "edge": d[0],
                }
            seen.add(d[0])

    occs = {}
    for z in zigzags:
        occs[z.id] = [
            (d[0], _lifted_edge_anchor(g, d, p)) for d, p in zip(z.darts, z.positions)
        ]

    for ai in range(len(zigzags)):
        for bi in range(ai + 1, len(zigzags)):
            za, zb = zigzags[ai], zigzags[bi]
            pa, pb = len(za.darts), len(zb.darts)
            window = pa + pb + 2
            buckets = {}
            for i, (ea, (_, qa)) in enumerate(occs[za.id]):
                for j, (eb, (_, qb)) in enumerate(occs[zb.id]):
                    if ea != eb:
                        continue
                    for s in range(-window, window + 1):
                        for t in range(-window, window + 1):
                            m = (
                                qa[0] + s * za.homology[0] - qb[0] - t * zb.homology[0],
                                qa[1] + s * za.homology[1] - qb[1] - t * zb.homology[1],
                            )
                            buckets.setdefault(m, []).append((i + s * pa, j + t * pb))
            inner = min(pa, pb) * (window - 2)
            for m, matches in buckets.items():
                matches.sort()
                for k in range(len(matches) - 1):
                    (ta1, tb1), (ta2, tb2) = matches[k], matches[k + 1]
                    if abs(ta1) > inner or abs(ta2) > inner:
                        continue
                    if ta1 == ta2:
                        continue
                    if tb2 <= tb1:
                        continue
                    if any(tb1 < tb < tb2 for _, tb in matches):
                        continue
                    return False, {
                        "kind": "parallel_bigon",
                        "paths": [za.id, zb.id],
                        "offset": list(m),
                    }
    return True, None


# -- seed and face variables -------------------------------------------------


@dataclass(frozen=True)
class Seed:
    face_ids: tuple
    epsilon: dict
    face_cycles: dict


def seed_of(g):
    """Exchange form from shared-edge orientation counts.

    For every edge, the face containing the white->black dart is the one on
    the crossing's left.  eps[F][G] counts shared edges with G on the left
    minus those with F on the left; this is the orientation under which the
    mutation cross-check holds with the standard sign-split formula.
    """
    fids = tuple(f.id for f in g.faces())
    eps = {f: {h: 0 for h in fids} for f in fids}
    for e in g.edges:
        left = g.face_of_dart((e, 1))
        right = g.face_of_dart((e, -1))
        if left == right:
            continue
        eps[right][left] += 1
        eps[left][right] -= 1
    cycles = {f.id: f.darts for f in g.faces()}
    return Seed(face_ids=fids, epsilon=eps, face_cycles=cycles)


def face_variable(g, weights, face):
    x = Fraction(1)
    for e, s in face.darts:
        x = x * weights[e] if s > 0 else x / weights[e]
    return x


def _weight_potentials(g, weights):
    """BFS-tree lift positions and alternating-product potentials."""
    start = min(g.vertices)
    pos = {start: (0, 0)}
    phi = {start: Fraction(1)}
    order = [start]
    tree = set()
    queue = [start]
    while queue:
        v = queue.pop(0)
        for e in g.rotations[v]:
            b, w, d = g.edges[e]
            other = w if v == b else b
            if other in pos:
                continue
            tree.add(e)
            if v == w:  # white -> black
                pos[other] = poly.vadd(pos[v], d)
                phi[other] = phi[v] * weights[e]
            else:
                pos[other] = poly.vsub(pos[v], d)
                phi[other] = phi[v] / weights[e]
            order.append(other)
            queue.append(other)
    return pos, phi, tree


def torus_monodromies(g, weights):
    """Monodromies along fixed cycles of class (1,0) and (0,1).

    The cycles are combinations of BFS-tree fundamental cycles; the integer
    combination is produced by the Smith solver, so it is deterministic for a
    given graph.
    """
    pos, phi, tree = _weight_potentials(g, weights)
    hols = []
    classes = []
    for e in sorted(g.edges):
        if e in tree:
            continue
        b, w, d = g.edges[e]
        cls = poly.vsub(poly.vadd(pos[w], d), pos[b])
        classes.append(cls)
        hols.append(phi[w] * weights[e] / phi[b])
    mat = [[c[0] for c in classes], [c[1] for c in classes]]
    out = []
    for target in ((1, 0), (0, 1)):
        x = _integer_solution(mat, list(target))
        m = Fraction(1)
        for c, h in zip(x, hols):
            m *= h ** c
        out.append(m)
    return tuple(out)


def _integer_solution(mat, target):
    snf = intlin.smith_normal_form(mat)
    uy = intlin.mat_vec(snf.u, target)
    rows = len(mat)
    cols = len(mat[0])
    z = [0] * cols
    for i in range(min(rows, cols)):
        di = snf.d[i][i]
        if di == 0:
            if uy[i] != 0:
                raise GraphError("homology classes of cycles do not span the torus")
            continue
        if uy[i] % di != 0:
            raise GraphError("homology classes of cycles do not span the torus")
        z[i] = uy[i] // di
    return intlin.mat_vec(snf.v, z)


def face_variables(g, weights):
    """All face monodromies plus the two torus monodromies.

    The product of the face variables is 1 exactly, because each edge enters
    once in each direction across the collection of faces.
    """
    xs = {f.id: face_variable(g, weights, f) for f in g.faces()}
    total = Fraction(1)
    for x in xs.values():
        total *= x
    if total != 1:
        raise AssertionError("face variables do not multiply to 1")
    return xs, torus_monodromies(g, weights)


def zigzag_monodromy(g, weights, z):
    m = Fraction(1)
    for e, s in z.darts:
        m = m * weights[e] if s > 0 else m / weights[e]
    return m


# -- weights -----------------------------------------------------------------


def all_ones_weights(g):
    return {e: Fraction(1) for e in g.edges}


def random_weights(g, rng, max_val=9):
    """Positive random rationals; positivity keeps spider deltas nonzero."""
    return {
        e: Fraction(rng.randint(1, max_val), rng.randint(1, max_val)) for e in g.edges
    }


def parse_weights(data):
    return {e: _parse_rational(v) for e, v in data.items()}


def _parse_rational(s):
    if isinstance(s, int):
        return Fraction(s)
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def format_rational(x):
    return "%d/%d" % (x.numerator, x.denominator) if x.denominator != 1 else str(x.numerator)


def weights_to_json(weights):
    return {e: format_rational(w) for e, w in sorted(weights.items())}


# -- catalog -----------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    graph: TorusGraph
    newton: poly.ConvexIntegralPolygon
    genus: int


def _square_lattice_graph(k):
    """Grid Z^2 mod 2k with checkerboard coloring; deck units are 2k steps."""
    n = 2 * k
    vertices = {}
    edges = {}
    rotations = {}

    def vid(i, j):
        color = BLACK if (i + j) % 2 == 0 else WHITE
        return "%s%d,%d" % (color, i, j)

    for i in range(n):
        for j in range(n):
            vertices[vid(i, j)] = BLACK if (i + j) % 2 == 0 else WHITE
    for i in range(n):
        for j in range(n):
            a, b = vid(i, j), vid((i + 1) % n, j)
            deck = (1, 0) if i + 1 == n else (0, 0)
            black, white = (a, b) if vertices[a] == BLACK else (b, a)
            # disp is black lift minus white lift, in deck units
            d = deck if black == b else (-deck[0], -deck[1])
            edges["h%d,%d" % (i, j)] = (black, white, d)
            a, b = vid(i, j), vid(i, (j + 1) % n)
            deck = (0, 1) if j + 1 == n else (0, 0)
            black, white = (a, b) if vertices[a] == BLACK else (b, a)
            d = deck if black == b else (-deck[0], -deck[1])
            edges["v%d,%d" % (i, j)] = (black, white, d)
    for i in range(n):
        for j in range(n):
            rotations[vid(i, j)] = (
                "h%d,%d" % (i, j),
                "v%d,%d" % (i, j),
                "h%d,%d" % ((i - 1) % n, j),
                "v%d,%d" % (i, (j - 1) % n),
            )
    return TorusGraph(vertices, edges, rotations)


def _honeycomb_graph():
    vertices = {"b0": BLACK, "w0": WHITE}
    edges = {
        "e0": ("b0", "w0", (0, 0)),
        "e1": ("b0", "w0", (1, 0)),
        "e2": ("b0", "w0", (0, 1)),
    }
    rotations = {"b0": ("e0", "e1", "e2"), "w0": ("e0", "e1", "e2")}
    return TorusGraph(vertices, edges, rotations)


def _honeycomb_block_graph(k):
    """Hexagonal lattice with a k x k block of cells per fundamental domain."""
    vertices = {}
    edges = {}
    rotations = {}
    for i in range(k):
        for j in range(k):
            vertices["b%d,%d" % (i, j)] = BLACK
            vertices["w%d,%d" % (i, j)] = WHITE
    for i in range(k):
        for j in range(k):
            b = "b%d,%d" % (i, j)
            edges["e0_%d,%d" % (i, j)] = (b, "w%d,%d" % (i, j), (0, 0))
            deck = (1, 0) if i + 1 == k else (0, 0)
            edges["e1_%d,%d" % (i, j)] = (b, "w%d,%d" % ((i + 1) % k, j), deck)
            deck = (0, 1) if j + 1 == k else (0, 0)
            edges["e2_%d,%d" % (i, j)] = (b, "w%d,%d" % (i, (j + 1) % k), deck)
    for i in range(k):
        for j in range(k):
            rotations["b%d,%d" % (i, j)] = (
                "e0_%d,%d" % (i, j),
                "e1_%d,%d" % (i, j),
                "e2_%d,%d" % (i, j),
            )
            rotations["w%d,%d" % (i, j)] = (
                "e0_%d,%d" % (i, j),
                "e1_%d,%d" % ((i - 1) % k, j),
                "e2_%d,%d" % (i, (j - 1) % k),
            )
    return TorusGraph(vertices, edges, rotations)


def _refinement(name, prefix):
    if name == prefix:
        return 1
    if name.startswith(prefix + "_"):
        try:
            k = int(name.rsplit("_", 1)[1])
        except ValueError:
            raise UnknownCatalogEntry(name)
        if k >= 1:
            return k
    raise UnknownCatalogEntry(name)


def catalog(name):
    """Bundled minimal graphs; synthesis from arbitrary polygons is out of scope."""
    if name == "honeycomb":
        g = _honeycomb_graph()
        p = poly.validate_polygon([(0, 0), (1, 0), (0, 1)])
        return CatalogEntry(name=name, graph=g, newton=p, genus=0)
    if name.startswith("honeycomb"):
        k = _refinement(name, "honeycomb")
        g = _honeycomb_block_graph(k)
        p = poly.validate_polygon([(0, 0), (k, 0), (0, k)])
        return CatalogEntry(name=name, graph=g, newton=p, genus=(k - 1) * (k - 2) // 2)
    k = _refinement(name, "square_lattice")
    g = _square_lattice_graph(k)
    p = poly.validate_polygon([(k, 0), (0, k), (-k, 0), (0, -k)])
    return CatalogEntry(name=name, graph=g, newton=p, genus=2 * k * k - 2 * k + 1)


CATALOG_NAMES = ("honeycomb", "honeycomb_2", "square_lattice", "square_lattice_2")


def resolve_graph(name_or_path):
    """Catalog name or a JSON file path -> TorusGraph."""
    try:
        return catalog(name_or_path).graph
    except UnknownCatalogEntry:
        with open(name_or_path) as fh:
            return load_graph(fh)
