"""Kasteleyn polynomial, the matching oracle, and the discrete Abel map."""

import random
from fractions import Fraction

import pytest

from dimermod import polygon as poly, spectral as sp, torusgraph as tg
from dimermod.groups import pair


def test_laurent_arithmetic():
    p = sp.LaurentPoly2({(0, 0): 1, (1, 0): 2})
    q = sp.LaurentPoly2({(0, 0): 1, (1, 0): -2})
    assert (p + q) == sp.LaurentPoly2({(0, 0): 2})
    assert (p * q) == sp.LaurentPoly2({(0, 0): 1, (2, 0): -4})
    assert p.shift(-1, 2).terms == {(-1, 2): Fraction(1), (0, 2): Fraction(2)}
    assert sp.LaurentPoly2.from_json(p.to_json()) == p


def test_kasteleyn_signs_face_rule():
    for name in tg.CATALOG_NAMES:
        g = tg.catalog(name).graph
        signs = sp.kasteleyn_signs(g)
        for f in g.faces():
            prod = 1
            for e, _ in f.darts:
                prod *= signs[e]
            k = len(f.darts) // 2
            assert prod == (-1) ** (k + 1)


def test_honeycomb_trinomial():
    g = tg.catalog("honeycomb").graph
    w = {"e0": Fraction(2), "e1": Fraction(3), "e2": Fraction(5)}
    p = sp.kasteleyn_polynomial(g, w)
    assert len(p.terms) == 3
    support = sorted(p.terms)
    assert support == [(0, 0), (0, 1), (1, 0)]
    assert {abs(c) for c in p.terms.values()} == {2, 3, 5}


def test_unbalanced_colors_rejected():
    # a valid torus graph with one black and two white vertices
    g = tg.TorusGraph(
        {"b0": "b", "w0": "w", "w1": "w"},
        {
            "a": ("b0", "w0", (0, 0)),
            "b": ("b0", "w0", (1, 0)),
            "c": ("b0", "w1", (0, 0)),
            "d": ("b0", "w1", (0, 1)),
        },
        {"b0": ("a", "c", "b", "d"), "w0": ("a", "b"), "w1": ("c", "d")},
    )
    with pytest.raises(tg.UnbalancedColors):
        sp.kasteleyn_polynomial(g, tg.all_ones_weights(g))


def test_determinant_matches_matching_oracle():
    rng = random.Random(21)
    for name in ("honeycomb", "square_lattice"):
        g = tg.catalog(name).graph
        for _ in range(10):
            w = tg.random_weights(g, rng)
            assert sp.kasteleyn_polynomial(g, w) == sp.matching_polynomial(g, w)


def test_newton_polygon_of_characteristic_polynomial():
    rng = random.Random(17)
    for name in ("honeycomb", "square_lattice", "square_lattice_2"):
        entry = tg.catalog(name)
        for weights in (tg.all_ones_weights(entry.graph), tg.random_weights(entry.graph, rng)):
            p = sp.kasteleyn_polynomial(entry.graph, weights)
            got = sp.newton_polygon_of_poly(p)
            want, _ = tg.newton_polygon(entry.graph)
            assert poly.translation_equal(got, want)
            assert sorted(d.multiplicity for d in got.edge_data()) == sorted(
                d.multiplicity for d in want.edge_data()
            )


def test_normalized_honeycomb_monic_at_corner():
    g = tg.catalog("honeycomb").graph
    w = {"e0": Fraction(2), "e1": Fraction(3), "e2": Fraction(5)}
    n = sp.normalized_poly(sp.kasteleyn_polynomial(g, w))
    assert n.terms[(0, 0)] == 1
    assert min(n.support()) == (0, 0)


def test_normalized_kills_scalar_and_monomial():
    g = tg.catalog("square_lattice").graph
    p = sp.kasteleyn_polynomial(g, tg.all_ones_weights(g))
    n1 = sp.normalized_poly(p)
    assert n1 == sp.normalized_poly(p.scale(Fraction(-7, 3)).shift(2, -5))
    with pytest.raises(sp.ZeroPolynomial):
        sp.normalized_poly(sp.LaurentPoly2())


def test_normalized_invariant_under_gauge():
    rng = random.Random(23)
    g = tg.catalog("square_lattice").graph
    w = tg.random_weights(g, rng)
    n1 = sp.normalized_poly(sp.kasteleyn_polynomial(g, w))
    w2 = dict(w)
    for e in g.rotations["b0,0"]:
        w2[e] *= Fraction(9, 4)
    assert sp.normalized_poly(sp.kasteleyn_polynomial(g, w2)) == n1


def test_normalized_invariant_under_displacement_representatives():
    rng = random.Random(24)
    g = tg.catalog("square_lattice").graph
    w = tg.random_weights(g, rng)
    n1 = sp.normalized_poly(sp.kasteleyn_polynomial(g, w))
    # shift the lift of one black vertex by (1, -2)
    m = (1, -2)
    data = g.to_json()
    for e in data["edges"]:
        if e["black"] == "b1,1":
            e["disp"] = [e["disp"][0] + m[0], e["disp"][1] + m[1]]
    g2 = tg.validate_graph(data)
    assert sp.normalized_poly(sp.kasteleyn_polynomial(g2, w)) == n1


def test_abel_map_square_lattice():
    g = tg.catalog("square_lattice").graph
    abel = sp.discrete_abel_map(g)
    assert all(c == 0 for c in abel.values[abel.base_vertex].values())
    _, labels = tg.newton_polygon(g)
    by_label = {labels[z.id]: z.id for z in g.zigzags()}
    assert abel.shift((1, 0)) == {
        by_label[0]: -1,
        by_label[1]: 1,
        by_label[2]: 1,
        by_label[3]: -1,
    }
    assert abel.shift((0, 1)) == {
        by_label[0]: -1,
        by_label[1]: -1,
        by_label[2]: 1,
        by_label[3]: 1,
    }


def test_abel_map_local_rule_everywhere():
    # d(w) = d(b) - nu(alpha) - nu(beta) for every edge and every lift
    for name in tg.CATALOG_NAMES:
        g = tg.catalog(name).graph
        abel = sp.discrete_abel_map(g)
        for e, (b, w, d) in g.edges.items():
            lift_w = abel.base_positions[w]
            lift_b = poly.vadd(lift_w, d)
            dw = abel.value(w, lift_w)
            db = abel.value(b, lift_b)
            nu = [g.zigzag_of_dart((e, 1)), g.zigzag_of_dart((e, -1))]
            for z in dw:
                want = db[z] - (1 if z == nu[0] else 0) - (1 if z == nu[1] else 0)
                assert dw[z] == want


def test_abel_map_equivariance_is_the_pairing():
    for name in tg.CATALOG_NAMES:
        g = tg.catalog(name).graph
        abel = sp.discrete_abel_map(g)
        for m in ((1, 0), (0, 1), (2, -3)):
            shifts = abel.shift(m)
            for z in g.zigzags():
                assert shifts[z.id] == pair(z.homology, m)


def test_abel_map_inconsistent_data_detected():
    # corrupting one displacement by a full period keeps faces contractible
    # on the doubled cell but breaks path independence of the Abel map
    data = tg.catalog("square_lattice_2").graph.to_json()
    g = tg.validate_graph(data)
    bad = None
    for e in data["edges"]:
        if e["disp"] != [0, 0]:
            e["disp"] = [e["disp"][0] * -1, e["disp"][1] * -1]
            bad = e["id"]
            break
    try:
        g2 = tg.validate_graph(data)
    except tg.GraphError:
        return  # already rejected upstream, which is fine
    with pytest.raises(sp.InconsistentAbelMap):
        sp.discrete_abel_map(g2)
