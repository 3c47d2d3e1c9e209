"""Smith/Hermite forms and group presentations, exact."""

import random

import pytest

from dimermod import intlin

DIAMOND_B = [[-1, -1], [1, -1], [1, 1], [-1, 1]]


def test_snf_of_worked_matrix():
    snf = intlin.smith_normal_form(DIAMOND_B)
    assert snf.diagonal() == [1, 2]
    assert intlin.mat_mul(intlin.mat_mul(snf.u, DIAMOND_B), snf.v) == snf.d
    assert intlin.is_unimodular(snf.u) and intlin.is_unimodular(snf.v)


def test_snf_identity():
    snf = intlin.smith_normal_form(intlin.identity_matrix(3))
    assert snf.diagonal() == [1, 1, 1]


def test_snf_roundtrip_random():
    rng = random.Random(42)
    for trial in range(40):
        hi = 12 if trial < 5 else 6
        rows = rng.randint(1, hi)
        cols = rng.randint(1, hi)
        b = [[rng.randint(-10**6, 10**6) for _ in range(cols)] for _ in range(rows)]
        snf = intlin.smith_normal_form(b)
        assert intlin.mat_mul(intlin.mat_mul(snf.u, b), snf.v) == snf.d
        assert intlin.mat_mul(snf.u, snf.u_inv) == intlin.identity_matrix(rows)
        assert intlin.mat_mul(snf.v, snf.v_inv) == intlin.identity_matrix(cols)
        diag = snf.invariant_factors()
        assert all(d > 0 for d in diag)
        for a, c in zip(diag, diag[1:]):
            assert c % a == 0


def test_cokernel_examples():
    assert intlin.cokernel(DIAMOND_B) == intlin.FgAbelianGroup(rank=2, torsion=(2,))
    assert intlin.cokernel([[], [], []]) == intlin.FgAbelianGroup(rank=3, torsion=())
    assert intlin.cokernel([[2, 0], [0, 3]]) == intlin.FgAbelianGroup(rank=0, torsion=(6,))


def test_cokernel_invariant_under_unimodular_changes():
    rng = random.Random(7)
    for _ in range(20):
        b = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(4)]
        ref = intlin.cokernel(b)
        # random unimodular row/col operations
        m = [row[:] for row in b]
        for _ in range(6):
            i, j = rng.sample(range(4), 2)
            q = rng.randint(-3, 3)
            m[j] = [x + q * y for x, y in zip(m[j], m[i])]
            i, j = rng.sample(range(3), 2)
            q = rng.randint(-3, 3)
            for r in range(4):
                m[r][j] += q * m[r][i]
        assert intlin.cokernel(m) == ref


def test_kernel_basis_sum_zero_lattice():
    basis = intlin.kernel_basis([[1, 1, 1]])
    assert len(basis) == 2
    for col in basis:
        assert sum(col) == 0
    # saturation: the basis matrix has all invariant factors 1
    mat = [[col[i] for col in basis] for i in range(3)]
    assert intlin.smith_normal_form(mat).invariant_factors() == [1, 1]


def test_kernel_of_invertible_is_empty():
    assert intlin.kernel_basis([[2, 1], [1, 1]]) == []


def test_kernel_random_annihilated_and_saturated():
    rng = random.Random(3)
    for _ in range(20):
        rows, cols = rng.randint(1, 4), rng.randint(1, 5)
        b = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        basis = intlin.kernel_basis(b)
        for col in basis:
            assert all(v == 0 for v in intlin.mat_vec(b, col))
        if basis:
            mat = [[col[i] for col in basis] for i in range(cols)]
            snf = intlin.smith_normal_form(mat)
            assert snf.invariant_factors() == [1] * len(basis)


def test_reduce_mod_image():
    # a column of B reduces to zero
    col = [row[0] for row in DIAMOND_B]
    assert intlin.reduce_mod_image(col, DIAMOND_B) == (0, 0, 0, 0)
    rng = random.Random(11)
    for _ in range(30):
        x = [rng.randint(-9, 9) for _ in range(4)]
        c = [rng.randint(-5, 5) for _ in range(2)]
        shift = intlin.mat_vec(DIAMOND_B, c)
        y = [a + b for a, b in zip(x, shift)]
        assert intlin.reduce_mod_image(x, DIAMOND_B) == intlin.reduce_mod_image(y, DIAMOND_B)


def test_reduce_mod_image_dimension_check():
    with pytest.raises(intlin.DimensionMismatch):
        intlin.reduce_mod_image([1, 2, 3], DIAMOND_B)


def test_solve_rational():
    x = intlin.solve_rational(DIAMOND_B, [-1, 1, 1, -1])
    assert x == [1, 0]
    assert intlin.solve_rational(DIAMOND_B, [1, 0, 0, 0]) is None


def test_saturation_basis_of_worked_matrix():
    sat = intlin.saturation_basis(DIAMOND_B)
    assert len(sat) == 2
    # (0, -1, 0, 1) is in the saturation but not in the image
    target = [0, -1, 0, 1]
    mat = [[sat[0][i], sat[1][i]] for i in range(4)]
    assert intlin.in_image(target, mat)
    assert not intlin.in_image(target, DIAMOND_B)
