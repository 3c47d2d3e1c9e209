"""Polygon validation, lattice counts, and building blocks."""

import random

import pytest

from dimermod import polygon as poly

DIAMOND = [(1, 0), (0, 1), (-1, 0), (0, -1)]


def test_validate_diamond():
    p = poly.validate_polygon(DIAMOND)
    assert p.vertices == ((-1, 0), (0, -1), (1, 0), (0, 1))
    assert [d.multiplicity for d in p.edge_data()] == [1, 1, 1, 1]


def test_validate_unit_triangle():
    p = poly.validate_polygon([(0, 0), (1, 0), (0, 1)])
    assert len(p.edges()) == 3
    assert all(d.multiplicity == 1 for d in p.edge_data())


def test_validate_trapezoid_multiplicities():
    p = poly.validate_polygon([(0, 0), (2, 0), (1, 1), (0, 1)])
    mults = {d.vector: d.multiplicity for d in p.edge_data()}
    assert mults == {(2, 0): 2, (-1, 1): 1, (-1, 0): 1, (0, -1): 1}


def test_validate_rejects():
    with pytest.raises(poly.RepeatedVertex):
        poly.validate_polygon([(0, 0), (1, 0), (1, 0), (0, 1)])
    with pytest.raises(poly.NotConvex):
        poly.validate_polygon([(0, 0), (2, 0), (1, 0), (0, 1)])  # collinear
    with pytest.raises(poly.NotConvex):
        poly.validate_polygon([(0, 0), (2, 0), (2, 2), (1, 1), (0, 2)])
    with pytest.raises(poly.NotConvex):
        poly.validate_polygon([(0, 0), (1, 0)])


def test_clockwise_input_reversed():
    p = poly.validate_polygon(list(reversed(DIAMOND)))
    assert p.area2() > 0
    assert p.vertices == poly.validate_polygon(DIAMOND).vertices


def test_edge_vectors_close_up():
    p = poly.validate_polygon([(0, 0), (3, 1), (2, 4), (-1, 3)])
    assert tuple(map(sum, zip(*p.edges()))) == (0, 0)


def test_square_side_two_multiplicities():
    p = poly.validate_polygon([(0, 0), (2, 0), (2, 2), (0, 2)])
    assert sorted(d.multiplicity for d in p.edge_data()) == [2, 2, 2, 2]


def test_interior_points():
    assert poly.interior_lattice_points(poly.validate_polygon(DIAMOND)) == (1, [(0, 0)])
    assert poly.interior_lattice_points(poly.validate_polygon([(0, 0), (1, 0), (0, 1)]))[0] == 0
    assert poly.interior_lattice_points(poly.validate_polygon([(0, 0), (3, 0), (0, 3)]))[0] == 1


def test_inward_normals_point_inward():
    p = poly.validate_polygon(DIAMOND)
    for d in p.edge_data():
        v = p.vertices[d.index]
        probe = (v[0] + d.inward_normal[0], v[1] + d.inward_normal[1])
        # moving off an edge endpoint along the inward normal stays inside
        assert p.contains(probe)


def test_apply_sl2():
    p = poly.validate_polygon(DIAMOND)
    assert poly.apply_sl2(p, [[1, 0], [0, 1]]).vertices == p.vertices
    sheared = poly.apply_sl2(p, [[1, 1], [0, 1]])
    assert poly.genus(sheared) == 1
    assert sorted(d.multiplicity for d in sheared.edge_data()) == [1, 1, 1, 1]
    assert sheared.area2() == p.area2()
    with pytest.raises(poly.NotUnimodular):
        poly.apply_sl2(p, [[2, 0], [0, 1]])
    with pytest.raises(poly.NotUnimodular):
        poly.apply_sl2(p, [[0, 1], [1, 0]])


def test_apply_sl2_rotation_of_triangle():
    tri = poly.validate_polygon([(0, 0), (1, 0), (0, 1)])
    rot = poly.apply_sl2(tri, [[0, -1], [1, 0]])
    assert poly.genus(rot) == 0


def test_is_building_block():
    assert poly.is_building_block(poly.validate_polygon(DIAMOND))
    assert not poly.is_building_block(poly.validate_polygon([(0, 0), (1, 0), (0, 1)]))
    assert not poly.is_building_block(poly.validate_polygon([(0, 0), (3, 0), (0, 3)]))


def test_find_building_block_diamond_is_fixed_point():
    p = poly.validate_polygon(DIAMOND)
    assert poly.find_building_block(p).vertices == p.vertices


def test_find_building_block_three_triangle():
    p = poly.validate_polygon([(0, 0), (3, 0), (0, 3)])
    bb = poly.find_building_block(p)
    assert poly.is_building_block(bb)
    assert all(p.contains(v) for v in bb.vertices)


def test_find_building_block_needs_interior_point():
    with pytest.raises(poly.NoInteriorPoint):
        poly.find_building_block(poly.validate_polygon([(0, 0), (1, 0), (0, 1)]))


def test_find_building_block_random():
    rng = random.Random(5)
    done = 0
    while done < 40:
        p = poly.random_convex_polygon(rng, bound=8)
        if poly.genus(p) < 1:
            continue
        bb = poly.find_building_block(p)
        assert poly.is_building_block(bb)
        assert len(bb.vertices) <= 4
        assert all(p.contains(v) for v in bb.vertices)
        done += 1


def test_picks_theorem_random():
    rng = random.Random(9)
    for _ in range(40):
        p = poly.random_convex_polygon(rng, bound=7)
        g, _ = poly.interior_lattice_points(p)  # raises if Pick fails
        b = len(p.boundary_lattice_points())
        assert p.area2() == 2 * g + b - 2


def test_polygon_from_edge_vectors():
    p = poly.polygon_from_edge_vectors([(1, -1), (1, 1), (-1, 1), (-1, -1)])
    assert p.vertices == ((0, 0), (1, -1), (2, 0), (1, 1))
    # parallel vectors merge into one side with multiplicity
    q = poly.polygon_from_edge_vectors([(1, 0), (1, 0), (-2, 1), (0, -1)])
    assert {d.vector: d.multiplicity for d in q.edge_data()}[(2, 0)] == 2
    with pytest.raises(poly.NotClosed):
        poly.polygon_from_edge_vectors([(1, 0), (0, 1)])


def test_translation_equal():
    p = poly.validate_polygon(DIAMOND)
    q = p.translate((3, -2))
    assert poly.translation_equal(p, q)
    assert not poly.translation_equal(p, poly.validate_polygon([(0, 0), (1, 0), (0, 1)]))
