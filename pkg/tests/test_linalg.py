"""Echelon decompositions, kernels, determinants, pseudoinverses, and
subquotients with induced maps."""

import pytest

from jointtorsion import (DomainError, ExactMatrix, build_subquotient,
                          cokernel_subquotient, induced_map,
                          kernel_subquotient, qi, rref_decompose,
                          subspace_bases)
from jointtorsion.randgen import child_rng, random_matrix, random_singularized


def mat(rows):
    return ExactMatrix.from_rows(rows)


def test_rref_rank_one():
    rref, pivots, rank, transform = rref_decompose(mat([[1, 2], [2, 4]]))
    assert rank == 1
    assert pivots == [0]
    assert transform * mat([[1, 2], [2, 4]]) == rref


def test_rref_identity():
    _, pivots, rank, _ = rref_decompose(ExactMatrix.identity(3))
    assert rank == 3
    assert pivots == [0, 1, 2]


def test_rref_shifted_pivot():
    _, pivots, rank, _ = rref_decompose(mat([[0, 1], [0, 0]]))
    assert rank == 1
    assert pivots == [1]


def test_subspace_bases_rank_one():
    m = mat([[1, 2], [2, 4]])
    kernel, image = subspace_bases(m)
    assert kernel.columns() == [(qi(-2), qi(1))]
    assert image.columns() == [(qi(1), qi(2))]
    assert (m * kernel).is_zero()


def test_subspace_bases_identity_and_zero():
    kernel, image = subspace_bases(ExactMatrix.identity(2))
    assert kernel.cols == 0
    assert image == ExactMatrix.identity(2)
    kernel, image = subspace_bases(ExactMatrix.zero(2, 2))
    assert kernel == ExactMatrix.identity(2)
    assert image.cols == 0


def test_kernel_image_ranks_on_randoms():
    rng = child_rng(5, 0)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), mag=3)
        kernel, image = subspace_bases(m)
        assert (m * kernel).is_zero()
        assert kernel.cols + image.cols == m.cols
        assert image.rank() == image.cols


def test_determinant_examples():
    assert mat([[1, 2], [3, 4]]).determinant() == qi(-2)
    assert mat([["i"]]).determinant() == qi(0, 1)
    assert mat([[1, 2], [2, 4]]).determinant() == qi(0)
    with pytest.raises(DomainError):
        ExactMatrix.zero(2, 3).determinant()


def test_determinant_multiplicative():
    rng = child_rng(5, 1)
    for _ in range(25):
        n = rng.randint(1, 4)
        a = random_matrix(rng, n, n, mag=3)
        b = random_matrix(rng, n, n, mag=3)
        assert (a * b).determinant() == a.determinant() * b.determinant()


def test_rref_transform_invertible():
    rng = child_rng(5, 2)
    for _ in range(20):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4), mag=3)
        assert not m.rref().transform.determinant().is_zero()


def test_pseudoinverse_examples():
    assert mat([[2]]).pseudoinverse() == mat([["1/2"]])
    z = ExactMatrix.zero(2, 3)
    assert z.pseudoinverse() == ExactMatrix.zero(3, 2)
    m = mat([[1, 0], [0, 0]])
    assert m.pseudoinverse() == m


def test_pseudoinverse_identities_all_ranks():
    rng = child_rng(5, 3)
    for _ in range(40):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = random_matrix(rng, r, c, mag=3)
        if rng.random() < 0.5:
            m = random_singularized(rng, max(r, c), mag=3).select_columns(
                range(c)) if r == max(r, c) else m
        dag = m.pseudoinverse()
        assert m * dag * m == m
        assert dag * m * dag == dag


def test_build_subquotient_cokernel_of_diag():
    sq = cokernel_subquotient(mat([[0, 0], [0, 1]]))
    assert sq.dim == 1
    assert sq.rep_basis.columns() == [(qi(1), qi(0))]


def test_build_subquotient_quad_h1_dimension():
    # H_1 of the quadruple complex with all-zero 1x1 operators: C^2 / 0.
    cycles = ExactMatrix.identity(2)
    boundaries = ExactMatrix.zero(2, 0)
    sq = build_subquotient(2, cycles, boundaries)
    assert sq.dim == 2


def test_build_subquotient_zero_quotient():
    cycles = mat([[1, 0], [0, 1]])
    sq = build_subquotient(2, cycles, cycles)
    assert sq.dim == 0


def test_build_subquotient_containment_checked():
    with pytest.raises(DomainError, match="not a subquotient"):
        build_subquotient(2, mat([[1], [0]]), mat([[0], [1]]))


def test_subquotient_projection_section_identity():
    rng = child_rng(5, 4)
    for _ in range(25):
        n = rng.randint(1, 5)
        m = random_singularized(rng, n, mag=3)
        sq = cokernel_subquotient(m)
        assert sq.project_map * sq.lift_map == ExactMatrix.identity(sq.dim)
        assert (sq.project_map * sq.boundary_basis).is_zero()


def test_induced_map_on_kernel():
    a = mat([[0, 0], [0, 2]])
    b = mat([[3, 0], [0, 0]])
    assert induced_map(b, kernel_subquotient(a), kernel_subquotient(a)) == mat([[3]])


def test_induced_map_identity():
    rng = child_rng(5, 5)
    for _ in range(10):
        n = rng.randint(1, 4)
        m = random_singularized(rng, n, mag=3)
        sq = cokernel_subquotient(m)
        ident = ExactMatrix.identity(n)
        assert induced_map(ident, sq, sq) == ExactMatrix.identity(sq.dim)


def test_induced_map_on_cokernel():
    a = mat([[0, 0], [0, 2]])
    b = mat([[3, 0], [0, 0]])
    sq = cokernel_subquotient(b)
    assert induced_map(a, sq, sq) == mat([[2]])


def test_induced_map_rejects_non_descending():
    a = mat([[0, 1], [0, 0]])  # does not map ker(proj to e1) into itself
    src = kernel_subquotient(mat([[1, 0]]))
    dst = kernel_subquotient(mat([[1, 0]]))
    with pytest.raises(DomainError, match="map does not descend"):
        induced_map(a, src, dst)


def test_induced_map_respects_composition():
    rng = child_rng(5, 6)
    for _ in range(15):
        n = rng.randint(1, 4)
        m = random_singularized(rng, n, mag=3)
        sq = cokernel_subquotient(m)
        # any operators preserving im(m): multiples of identity do
        u = ExactMatrix.scalar_diag(n, qi(2))
        v = ExactMatrix.scalar_diag(n, qi((1, 3)))
        lhs = induced_map(u * v, sq, sq)
        rhs = induced_map(u, sq, sq) * induced_map(v, sq, sq)
        assert lhs == rhs
