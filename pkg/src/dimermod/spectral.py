"""Kasteleyn characteristic polynomial and the discrete Abel map.

Laurent polynomials in (z, w) are sparse maps from integer exponent pairs to
exact rationals.  Determinants are expanded by memoized Laplace expansion
over column subsets, which stays in the Laurent ring and avoids division
entirely; the graphs here are desk scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import polygon as poly
from .torusgraph import GraphError, UnbalancedColors, WHITE


class ZeroPolynomial(ValueError):
    pass


class NoValidSignAssignment(GraphError):
    pass


class InconsistentAbelMap(GraphError):
    pass


class LaurentPoly2:
    """Finite-support map (i, j) -> Fraction with no explicit zeros."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[k] = c

    @classmethod
    def monomial(cls, coeff, i, j):
        return cls({(i, j): coeff})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, LaurentPoly2) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        p = LaurentPoly2()
        p.terms = out
        return p

    def __neg__(self):
        p = LaurentPoly2()
        p.terms = {k: -c for k, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for (a, b), c in self.terms.items():
            for (x, y), d in other.terms.items():
                k = (a + x, b + y)
                s = out.get(k, Fraction(0)) + c * d
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        p = LaurentPoly2()
        p.terms = out
        return p

    def scale(self, c):
        c = Fraction(c)
        p = LaurentPoly2()
        if c:
            p.terms = {k: v * c for k, v in self.terms.items()}
        return p

    def shift(self, di, dj):
        p = LaurentPoly2()
        p.terms = {(i + di, j + dj): c for (i, j), c in self.terms.items()}
        return p

    def support(self):
        return sorted(self.terms)

    def newton_polygon(self):
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no Newton polygon")
        pts = list(self.terms)
        hull = poly.convex_hull(pts)
        if len(hull) < 3:
            return None  # support is a point or a segment
        return poly.validate_polygon(hull)

    def to_json(self):
        return {
            "terms": [
                {
                    "z": i,
                    "w": j,
                    "coeff": "%d/%d" % (c.numerator, c.denominator)
                    if c.denominator != 1
                    else str(c.numerator),
                }
                for (i, j), c in sorted(self.terms.items())
            ]
        }

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            data = json.load(data)
        terms = {}
        for t in data["terms"]:
            s = str(t["coeff"])
            c = Fraction(int(s.split("/")[0]), int(s.split("/")[1])) if "/" in s else Fraction(int(s))
            terms[(t["z"], t["w"])] = c
        return cls(terms)

    def __repr__(self):
        bits = []
        for (i, j), c in sorted(self.terms.items()):
            bits.append("%s*z^%d*w^%d" % (c, i, j))
        return " + ".join(bits) or "0"


def normalized_poly(p):
    """Kill the scalar/monomial/sign-sector gauge of a characteristic polynomial.

    Translates the lex-min support vertex to the origin and makes it monic.
    On the torus, Kasteleyn sign solutions also differ by the H^1(T, Z_2)
    twists (z, w) -> (+-z, +-w), so the normalization additionally picks the
    lexicographically smallest of the four twisted forms.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    hull = poly.convex_hull(list(p.terms))
    corner = min(hull)
    base = p.shift(-corner[0], -corner[1])
    best = None
    for sx in (1, -1):
        for sy in (1, -1):
            twisted = LaurentPoly2(
                {
                    (i, j): c * (sx if i % 2 else 1) * (sy if j % 2 else 1)
                    for (i, j), c in base.terms.items()
                }
            )
            monic = twisted.scale(Fraction(1) / twisted.terms[(0, 0)])
            key = tuple(sorted((k, monic.terms[k]) for k in monic.terms))
            if best is None or key < best[0]:
                best = (key, monic)
    return best[1]


def kasteleyn_signs(g):
    """Edge signs with product (-1)^(k+1) around every degree-2k face.

    Solved exactly over GF(2) with deterministic pivoting; a failure would
    mean the face data is inconsistent, which validation already excludes.
    """
    edge_ids = sorted(g.edges)
    idx = {e: i for i, e in enumerate(edge_ids)}
    rows = []
    for f in g.faces():
        vec = [0] * (len(edge_ids) + 1)
        for e, _ in f.darts:
            vec[idx[e]] ^= 1
        k = len(f.darts) // 2
        vec[-1] = (k + 1) % 2
        rows.append(vec)
    # GF(2) elimination
    pivots = []
    r = 0
    for c in range(len(edge_ids)):
        sel = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1]:
            raise NoValidSignAssignment("face sign conditions are inconsistent")
    x = [0] * len(edge_ids)
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return {e: (-1) ** x[idx[e]] for e in edge_ids}


def kasteleyn_polynomial(g, weights, signs=None):
    """det K(z, w) for the signed, homology-graded Kasteleyn matrix."""
    blacks = sorted(v for v, c in g.vertices.items() if c == "b")
    whites = sorted(v for v, c in g.vertices.items() if c == "w")
    if len(blacks) != len(whites):
        raise UnbalancedColors("need equal numbers of black and white vertices")
    if signs is None:
        signs = kasteleyn_signs(g)
    bi = {v: i for i, v in enumerate(blacks)}
    wi = {v: i for i, v in enumerate(whites)}
    n = len(blacks)
    mat = [[LaurentPoly2() for _ in range(n)] for _ in range(n)]
    for e, (b, w, d) in g.edges.items():
        term = LaurentPoly2.monomial(Fraction(signs[e]) * weights[e], d[0], d[1])
        mat[bi[b]][wi[w]] = mat[bi[b]][wi[w]] + term
    return _det_laplace(mat)


def _det_laplace(mat):
    """Determinant over the Laurent ring by subset-memoized expansion."""
    n = len(mat)
    if n == 0:
        return LaurentPoly2.monomial(1, 0, 0)
    cache = {(): LaurentPoly2.monomial(1, 0, 0)}

    def minor(cols):
        if cols in cache:
            return cache[cols]
        row = n - len(cols)
        acc = LaurentPoly2()
        for pos, c in enumerate(cols):
            entry = mat[row][c]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1 :]
            sub = minor(rest)
            term = entry * sub
            acc = acc + term if pos % 2 == 0 else acc - term
        cache[cols] = acc
        return acc

    return minor(tuple(range(n)))


def matching_polynomial(g, weights, signs=None):
    """Brute-force oracle: signed sum over perfect matchings graded by homology.

    Shares the sign assignment with the determinant route but none of its
    algebra: matchings are enumerated directly and each contributes
    sgn(permutation) * prod(sign * weight) * z^a w^b.
    """
    blacks = sorted(v for v, c in g.vertices.items() if c == "b")
    whites = sorted(v for v, c in g.vertices.items() if c == "w")
    if len(blacks) != len(whites):
        raise UnbalancedColors("need equal numbers of black and white vertices")
    if signs is None:
        signs = kasteleyn_signs(g)
    wi = {v: i for i, v in enumerate(whites)}
    by_black = {b: [] for b in blacks}
    for e, (b, w, d) in g.edges.items():
        by_black[b].append((e, w, d))
    for b in by_black:
        by_black[b].sort()

    total = LaurentPoly2()
    n = len(blacks)
    used = [False] * n
    perm = [0] * n

    def rec(i, coeff, cls):
        nonlocal total
        if i == n:
            sgn = _perm_sign(perm)
            total = total + LaurentPoly2.monomial(coeff * sgn, cls[0], cls[1])
            return
        for e, w, d in by_black[blacks[i]]:
            j = wi[w]
            if used[j]:
                continue
            used[j] = True
            perm[i] = j
            rec(i + 1, coeff * signs[e] * weights[e], (cls[0] + d[0], cls[1] + d[1]))
            used[j] = False

    rec(0, Fraction(1), (0, 0))
    return total


def _perm_sign(perm):
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- discrete Abel map --------------------------------------------------------


@dataclass(frozen=True)
class AbelMap:
    """Vertex-indexed divisors at infinity, with the lattice equivariance rule.

    `base_positions[v]` is the BFS lift at which `values[v]` holds;
    `shift_x`/`shift_y` extend to all lifts:
    value(v, c) = values[v] + (c - base) paired into the shifts.
    """

    graph: object
    base_vertex: str
    base_positions: dict
    values: dict
    shift_x: dict
    shift_y: dict

    def value(self, v, lift=None):
        base = self.base_positions[v]
        if lift is None:
            lift = base
        dx, dy = lift[0] - base[0], lift[1] - base[1]
        out = {}
        for z in self.values[v]:
            c = self.values[v][z] + dx * self.shift_x[z] + dy * self.shift_y[z]
            out[z] = c
        return out

    def shift(self, m):
        return {z: m[0] * self.shift_x[z] + m[1] * self.shift_y[z] for z in self.shift_x}

    def to_json(self):
        return {
            "base": self.base_vertex,
            "values": {v: dict(sorted(self.values[v].items())) for v in sorted(self.values)},
            "lifts": {v: list(self.base_positions[v]) for v in sorted(self.values)},
            "div_chi_10": dict(sorted(self.shift_x.items())),
            "div_chi_01": dict(sorted(self.shift_y.items())),
        }


def _edge_nu(g, e):
    """The two zig-zag labels through an edge (with multiplicity)."""
    return [g.zigzag_of_dart((e, 1)), g.zigzag_of_dart((e, -1))]


def discrete_abel_map(g, base_vertex=None):
    """Propagate d(w) = d(b) - nu(alpha) - nu(beta) from the base white vertex.

    BFS over a spanning tree fixes one lift per vertex; the remaining edges
    determine the equivariance shifts and must satisfy them exactly,
    otherwise the graph data is corrupt and InconsistentAbelMap is raised.
    """
    if base_vertex is None:
        base_vertex = min(v for v, c in g.vertices.items() if c == WHITE)
    zids = [z.id for z in g.zigzags()]
    pos = {base_vertex: (0, 0)}
    val = {base_vertex: {z: 0 for z in zids}}
    tree = []
    nontree = []
    queue = [base_vertex]
    seen_edges = set()
    while queue:
        v = queue.pop(0)
        for e in g.rotations[v]:
            if e in seen_edges:
                continue
            seen_edges.add(e)
            b, w, d = g.edges[e]
            other = w if v == b else b
            if other in pos:
                nontree.append(e)
                continue
            tree.append(e)
            nu = _edge_nu(g, e)
            if v == w:
                pos[other] = poly.vadd(pos[v], d)
                nxt = dict(val[v])
                for z in nu:
                    nxt[z] += 1
            else:
                pos[other] = poly.vsub(pos[v], d)
                nxt = dict(val[v])
                for z in nu:
                    nxt[z] -= 1
            val[other] = nxt
            queue.append(other)

    # Each non-tree edge sees the black lift at pos(w) + disp; the defect
    # against the tree lift of the black end pins the equivariance shift.
    equations = []
    for e in nontree:
        b, w, d = g.edges[e]
        m = poly.vsub(poly.vadd(pos[w], d), pos[b])
        nu = _edge_nu(g, e)
        rhs = {}
        for z in zids:
            want = val[w][z] + (1 if z == nu[0] else 0) + (1 if z == nu[1] else 0)
            rhs[z] = want - val[b][z]
        equations.append((m, rhs))

    shift_x, shift_y = _solve_shifts(zids, equations)
    return AbelMap(
        graph=g,
        base_vertex=base_vertex,
        base_positions=pos,
        values=val,
        shift_x=shift_x,
        shift_y=shift_y,
    )


def _solve_shifts(zids, equations):
    pair_eqs = [(m, rhs) for m, rhs in equations]
    best = None
    for i in range(len(pair_eqs)):
        for j in range(i + 1, len(pair_eqs)):
            (m1, _), (m2, _) = pair_eqs[i], pair_eqs[j]
            det = m1[0] * m2[1] - m1[1] * m2[0]
            if det != 0:
                best = (i, j, det)
                break
        if best:
            break
    if best is None:
        raise InconsistentAbelMap("cycle classes do not span the torus")
    i, j, det = best
    (m1, r1), (m2, r2) = pair_eqs[i], pair_eqs[j]
    sx, sy = {}, {}
    for z in zids:
        num_x = r1[z] * m2[1] - r2[z] * m1[1]
        num_y = r2[z] * m1[0] - r1[z] * m2[0]
        if num_x % det or num_y % det:
            raise InconsistentAbelMap("equivariance shifts are not integral")
        sx[z], sy[z] = num_x // det, num_y // det
    for m, rhs in pair_eqs:
        for z in zids:
            if rhs[z] != m[0] * sx[z] + m[1] * sy[z]:
                raise InconsistentAbelMap("Abel map is path dependent")
    return sx, sy


def newton_polygon_of_poly(p):
    hull = poly.convex_hull(list(p.terms))
    if len(hull) < 3:
        raise ZeroPolynomial("polynomial support is degenerate")
    q = poly.validate_polygon(hull)
    base = min(q.vertices)
    return q.translate((-base[0], -base[1]))
