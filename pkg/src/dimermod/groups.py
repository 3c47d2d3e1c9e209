"""Group computations attached to the polygon alone.

The intersection pairing on H_1 of the torus is fixed once and for all as

    pair(a, b) = a.y*b.x - a.x*b.y

and the homology embedding sends m to the function E_rho -> pair(E_rho, m),
with edges enumerated counterclockwise from the lex-smallest vertex.  This
orientation is the one that reproduces the worked 4-row matrix, the torsion
lattice basis ((1,0), (-1/2,1/2)) and the character-divisor values on the
square lattice exactly; the opposite orientation would negate the matrix and
leave every quotient group unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import intlin
from .polygon import (
    ConvexIntegralPolygon,
    NoInteriorPoint,
    interior_lattice_points,
    polygon_from_edge_vectors,
)


def pair(a, b):
    """Intersection pairing on H_1(T, Z); see the module docstring."""
    return a[1] * b[0] - a[0] * b[1]


@dataclass(frozen=True)
class EmbeddingJ:
    """The embedding j: H_1 -> Z^{E_N}_0 as a |E_N| x 2 integer matrix."""

    polygon: ConvexIntegralPolygon
    matrix: tuple

    def apply(self, m):
        return [pair(e, m) for e in self.polygon.edges()]


def build_j(p):
    rows = tuple((pair(e, (1, 0)), pair(e, (0, 1))) for e in p.edges())
    b = [list(r) for r in rows]
    assert all(sum(col) == 0 for col in zip(*b)), "image must lie in the sum-zero lattice"
    return EmbeddingJ(polygon=p, matrix=rows)


def _matrix(j):
    return [list(r) for r in j.matrix]


def ambient_quotient(p):
    """A = Z^{E_N} / j H_1, the unconstrained ambient quotient."""
    return intlin.cokernel(_matrix(build_j(p)))


def sum_zero_coordinates(vec):
    """Coordinates of a sum-zero vector in the basis e_i - e_{i+1}.

    These are the partial sums; the representation is exact and integral
    precisely because the entries sum to zero.
    """
    if sum(vec) != 0:
        raise ValueError("vector is not sum-zero")
    out = []
    acc = 0
    for x in vec[:-1]:
        acc += x
        out.append(acc)
    return out


@dataclass(frozen=True)
class ClusterModularGroupResult:
    group: intlin.FgAbelianGroup
    genus: int
    case_tag: str

    def to_json(self):
        d = self.group.to_json()
        d["case"] = self.case_tag
        return d


def _divisibility_sublattice_columns(mults):
    """Basis columns of {f in Z^n_0 : m_rho | f_rho for all rho}.

    Parameterized as f = (m_rho * a_rho) with sum m_rho a_rho = 0, so a basis
    of the a-lattice is the kernel of the 1 x n matrix of multiplicities.
    """
    kern = intlin.kernel_basis([list(mults)])
    return [[m * a for m, a in zip(mults, col)] for col in kern]


def cluster_modular_group(p):
    """The group G_N of the polygon, split by the interior-point case."""
    g, _ = interior_lattice_points(p)
    b = _matrix(build_j(p))
    n = len(p.vertices)
    if g >= 1:
        cols = [[row[j] for row in b] for j in range(2)]
        reduced = [sum_zero_coordinates(c) for c in cols]
        b0 = [[reduced[j][i] for j in range(2)] for i in range(n - 1)]
        group = intlin.cokernel(b0)
        return ClusterModularGroupResult(group=group, genus=g, case_tag="interior_point")
    mults = [d.multiplicity for d in p.edge_data()]
    cols = _divisibility_sublattice_columns(mults)
    reduced = [sum_zero_coordinates(c) for c in cols]
    b0 = [[reduced[j][i] for j in range(len(cols))] for i in range(n - 1)]
    group = intlin.cokernel(b0, rows=n - 1)
    return ClusterModularGroupResult(group=group, genus=g, case_tag="no_interior_point")


@dataclass(frozen=True)
class TorsionLattice:
    """Rank-2 lattice L in H_1(T, Q) containing H_1(T, Z).

    basis[0] is the vector on the x-axis, basis[1] carries the second pivot;
    both are exact rationals.
    """

    basis: tuple

    def denominators(self):
        out = []
        for v in self.basis:
            d = 1
            for c in v:
                d = d * c.denominator // gcd(d, c.denominator)
            out.append(d)
        return out

    def index_over_standard(self):
        """Index [L : H_1(T, Z)], a positive integer."""
        d = self.basis[0][0] * self.basis[1][1] - self.basis[0][1] * self.basis[1][0]
        inv = 1 / abs(d)
        assert inv.denominator == 1
        return int(inv)

    def contains(self, v):
        d = self.basis[0][0] * self.basis[1][1] - self.basis[0][1] * self.basis[1][0]
        a = (Fraction(v[0]) * self.basis[1][1] - Fraction(v[1]) * self.basis[1][0]) / d
        b = (Fraction(v[1]) * self.basis[0][0] - Fraction(v[0]) * self.basis[0][1]) / d
        return a.denominator == 1 and b.denominator == 1

    def to_json(self):
        return {"basis": [[str(c) for c in v] for v in self.basis]}


def _canonical_lattice_basis(gens):
    """Canonical basis of the rational lattice spanned by two Q^2 generators.

    Scale to integers, bring the generator matrix (columns) to upper
    triangular column form, and reduce the off-diagonal entry into the
    symmetric range [-d/2, d/2).  This is the normalization under which the
    worked example yields ((1, 0), (-1/2, 1/2)).
    """
    den = 1
    for v in gens:
        for c in v:
            den = den * c.denominator // gcd(den, c.denominator)
    cols = [[int(c * den) for c in v] for v in gens]
    m = [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
    # zero out m[1][0] by unimodular column ops (swapping Euclid)
    while m[1][0] != 0:
        if m[1][1] == 0:
            m[0][0], m[0][1] = m[0][1], m[0][0]
            m[1][0], m[1][1] = m[1][1], m[1][0]
            continue
        q = m[1][0] // m[1][1]
        m[0][0] -= q * m[0][1]
        m[1][0] -= q * m[1][1]
        m[0][0], m[0][1] = m[0][1], m[0][0]
        m[1][0], m[1][1] = m[1][1], m[1][0]
    if m[0][0] < 0:
        m[0][0], m[1][0] = -m[0][0], -m[1][0]
    if m[1][1] < 0:
        m[0][1], m[1][1] = -m[0][1], -m[1][1]
    a = m[0][0]
    # symmetric residue, ties to the negative side
    r = (m[0][1] + a // 2) % a - a // 2 if a else m[0][1]
    m[0][1] = r
    return (
        (Fraction(m[0][0], den), Fraction(m[1][0], den)),
        (Fraction(m[0][1], den), Fraction(m[1][1], den)),
    )


def torsion_lattice(p):
    """The lattice L with L / H_1(T, Z) isomorphic to the torsion of A.

    L hat is the saturation of the image of j inside Z^{E_N}; L is its
    rational preimage under j, returned in the canonical basis.
    """
    g, _ = interior_lattice_points(p)
    if g < 1:
        raise NoInteriorPoint("torsion lattice needs an interior lattice point")
    b = _matrix(build_j(p))
    sat = intlin.saturation_basis(b)
    gens = []
    for col in sat:
        x = intlin.solve_rational(b, col)
        assert x is not None, "saturation vector not in the rational image of j"
        gens.append(tuple(x))
    lat = TorsionLattice(basis=_canonical_lattice_basis(gens))
    assert lat.contains((1, 0)) and lat.contains((0, 1))
    return lat


@dataclass(frozen=True)
class MaxTranslationPolygon:
    polygon: ConvexIntegralPolygon
    w_rows: tuple
    basis: tuple

    def to_json(self):
        return {
            "polygon": self.polygon.to_json(),
            "w_rows": [list(r) for r in self.w_rows],
            "basis": [[str(c) for c in v] for v in self.basis],
        }


def max_translation_polygon(p, basis=None):
    """The polygon of the maximally translation invariant graphs, in L-coordinates.

    w_rho = <j(g2), e_rho> g1 - <j(g1), e_rho> g2 for the chosen basis (g1, g2)
    of L; the rows are returned alongside the assembled polygon.
    """
    if basis is None:
        basis = torsion_lattice(p).basis
    b = _matrix(build_j(p))
    imgs = []
    for vec in basis:
        img = [sum(Fraction(row[j]) * vec[j] for j in range(2)) for row in b]
        assert all(c.denominator == 1 for c in img), "j(basis) must be integral"
        imgs.append([int(c) for c in img])
    j1, j2 = imgs
    w_rows = tuple((j2[r], -j1[r]) for r in range(len(b)))
    assert sum(w[0] for w in w_rows) == 0 and sum(w[1] for w in w_rows) == 0
    poly = polygon_from_edge_vectors(w_rows)
    return MaxTranslationPolygon(polygon=poly, w_rows=w_rows, basis=tuple(basis))


@dataclass(frozen=True)
class Pic0Presentation:
    group: intlin.FgAbelianGroup
    generators: tuple

    def to_json(self):
        d = self.group.to_json()
        d["generators"] = list(self.generators)
        return d


def pic0_stack_presentation(p):
    """Pic^0 of the toric stack, presented on the fractional toric divisors.

    The generator labeled L_rho stands for O(D_rho / |E_rho|); the relation
    lattice is spanned by the divisors of characters, whose coordinate rows
    are |E_rho| u_rho paired against the basis of H_1.  The resulting group is
    asserted to agree with cluster_modular_group; the agreement is the whole
    content of the stacky Picard description of this group.
    """
    g, _ = interior_lattice_points(p)
    if g < 1:
        raise NoInteriorPoint("stack presentation follows the interior-point case")
    data = p.edge_data()
    rows = []
    for d in data:
        scaled = (d.multiplicity * d.inward_normal[0], d.multiplicity * d.inward_normal[1])
        rows.append([pair(scaled, (1, 0)), pair(scaled, (0, 1))])
    n = len(rows)
    cols = [[rows[i][j] for i in range(n)] for j in range(2)]
    reduced = [sum_zero_coordinates(c) for c in cols]
    b0 = [[reduced[j][i] for j in range(2)] for i in range(n - 1)]
    group = intlin.cokernel(b0)
    ref = cluster_modular_group(p)
    assert group == ref.group, "stack presentation disagrees with the cluster group"
    gens = tuple("L_%d" % d.index for d in data)
    return Pic0Presentation(group=group, generators=gens)
