"""Koszul complexes, long exact sequences, perturbation scalars, joint
torsion, and the folded-determinant formula."""

import pytest

from jointtorsion import (CommutingTuple, DomainError, ExactMatrix,
                          KoszulQuadruple, RestrictionData,
                          build_eps_sequences, build_koszul,
                          build_quad_complex, det_commutator,
                          factorization_identities, graded_determinant,
                          joint_torsion_pair, joint_torsion_quad,
                          lefschetz_ratio, perturbation_sigma,
                          pseudoinv_formula, qi, torsion_scalar)
from jointtorsion.randgen import (child_rng, random_commuting_pair,
                                  random_exact_sequence, random_invertible,
                                  random_quadruple, random_singularized)


def mat(rows):
    return ExactMatrix.from_rows(rows)


ZERO1 = mat([[0]])
ONE1 = mat([[1]])


# -- complex builders ------------------------------------------------------

def test_koszul_single_operator():
    c = build_koszul(CommutingTuple([mat([[2, 1], [0, 2]])]))
    assert c.dims_by_degree == [2, 2]
    assert c.differential(1) == mat([[2, 1], [0, 2]])


def test_koszul_pair_of_zeros_homology():
    c = build_koszul(CommutingTuple([ZERO1, ZERO1]))
    assert c.homology_dims() == [1, 2, 1]


def test_koszul_pair_of_identities_acyclic():
    c = build_koszul(CommutingTuple([ONE1, ONE1]))
    assert c.homology_dims() == [0, 0, 0]


def test_koszul_rejects_noncommuting():
    a = mat([[0, 1], [0, 0]])
    b = mat([[0, 0], [1, 0]])
    with pytest.raises(DomainError, match="commute"):
        CommutingTuple([a, b])


def test_quad_complex_zero_homology_dims():
    q = KoszulQuadruple(ZERO1, ZERO1, ZERO1, ZERO1)
    assert build_quad_complex(q).homology_dims() == [1, 2, 1]


def test_quad_complex_identity_acyclic():
    q = KoszulQuadruple(ONE1, ONE1, ONE1, ONE1)
    assert build_quad_complex(q).homology_dims() == [0, 0, 0]


def test_quad_complex_rejects_mismatch():
    with pytest.raises(DomainError, match="AB != CD"):
        KoszulQuadruple(ONE1, ONE1, ONE1, mat([[2]]))


def test_quad_matches_koszul_for_commuting_pair():
    rng = child_rng(17, 0)
    for _ in range(5):
        a, b = random_commuting_pair(rng, rng.randint(1, 3))
        koszul = build_koszul(CommutingTuple([a, b]))
        quad = build_quad_complex(KoszulQuadruple(a, b, b, a))
        assert koszul.homology_dims() == quad.homology_dims()
        assert quad.differential(2) == koszul.differential(2)
        assert quad.differential(1) == koszul.differential(1)


# -- eps sequences ---------------------------------------------------------

def test_eps_dims_for_zero_quadruple():
    q = KoszulQuadruple(ZERO1, ZERO1, ZERO1, ZERO1)
    eps_ad, eps_bc = build_eps_sequences(q)
    assert eps_ad.complex.dims_by_degree == [1, 1, 1, 2, 1, 1, 1][::-1]
    assert eps_bc.complex.dims_by_degree == [1, 1, 1, 2, 1, 1, 1][::-1]


def test_eps_all_zero_for_invertible_quadruple():
    q = KoszulQuadruple(ONE1, ONE1, ONE1, ONE1)
    eps_ad, eps_bc = build_eps_sequences(q)
    assert all(d == 0 for d in eps_ad.complex.dims_by_degree)
    assert all(d == 0 for d in eps_bc.complex.dims_by_degree)


def test_eps_recovers_commuting_pair_sequences():
    a = mat([[0, 0], [0, 2]])
    b = mat([[3, 0], [0, 0]])
    q = KoszulQuadruple(a, b, b, a)
    eps_ad, eps_bc = build_eps_sequences(q)
    # spaces: H2, ker B, ker B, H1, coker B, coker B, H0 (and with A swapped in)
    assert eps_ad.complex.dims_by_degree[::-1] == [0, 1, 1, 0, 1, 1, 0]
    assert eps_bc.complex.dims_by_degree[::-1] == [0, 1, 1, 0, 1, 1, 0]
    # the middle isomorphisms are multiplication by the eigenvalues 2 and 3
    assert eps_ad.complex.differential(5) == mat([[2]])
    assert eps_ad.complex.differential(2) == mat([[2]])
    assert eps_bc.complex.differential(5) == mat([[3]])
    assert eps_bc.complex.differential(2) == mat([[3]])


# -- perturbation scalars ----------------------------------------------------

def test_sigma_equal_operators_is_one():
    rng = child_rng(17, 1)
    for _ in range(10):
        n = rng.randint(1, 4)
        a = random_singularized(rng, n)
        assert perturbation_sigma(a, a) == qi(1)


def test_sigma_invertible_scalars():
    assert perturbation_sigma(mat([[2]]), mat([[3]])) == qi((3, 2))


def test_sigma_zero_operators():
    assert perturbation_sigma(ZERO1, ZERO1) == qi(1)


def test_sigma_shape_mismatch():
    with pytest.raises(DomainError, match="shape mismatch"):
        perturbation_sigma(ZERO1, ExactMatrix.identity(2))


def test_sigma_direct_sum_multiplicative():
    rng = child_rng(17, 2)
    for _ in range(10):
        n1, n2 = rng.randint(1, 3), rng.randint(1, 3)
        a1, d1 = random_singularized(rng, n1), random_singularized(rng, n1)
        a2, d2 = random_singularized(rng, n2), random_singularized(rng, n2)
        top = ExactMatrix.zero(n1, n2)
        bottom = ExactMatrix.zero(n2, n1)
        a = a1.hstack(top).vstack(bottom.hstack(a2))
        d = d1.hstack(top).vstack(bottom.hstack(d2))
        assert perturbation_sigma(a, d) == (perturbation_sigma(a1, d1)
                                            * perturbation_sigma(a2, d2))


# -- joint torsion -----------------------------------------------------------

def test_joint_torsion_zero_quadruple():
    report = joint_torsion_quad(KoszulQuadruple(ZERO1, ZERO1, ZERO1, ZERO1))
    assert report.value == qi(1)
    assert report.lambda_exp == 4


def test_joint_torsion_random_quadruples_trivial():
    rng = child_rng(17, 3)
    for trial in range(40):
        q = random_quadruple(rng, rng.randint(1, 4))
        report = joint_torsion_quad(q)
        assert report.value == qi(1), f"trial {trial}"


def test_joint_torsion_direct_sum_multiplicative():
    rng = child_rng(17, 4)
    for _ in range(8):
        n1, n2 = rng.randint(1, 3), rng.randint(1, 3)
        q1 = random_quadruple(rng, n1)
        q2 = random_quadruple(rng, n2)
        top = ExactMatrix.zero(n1, n2)
        bottom = ExactMatrix.zero(n2, n1)

        def dsum(x, y):
            return x.hstack(top).vstack(bottom.hstack(y))

        q = KoszulQuadruple(dsum(q1.a, q2.a), dsum(q1.b, q2.b),
                            dsum(q1.c, q2.c), dsum(q1.d, q2.d))
        assert joint_torsion_quad(q).value == (joint_torsion_quad(q1).value
                                               * joint_torsion_quad(q2).value)


def test_joint_torsion_basis_independent():
    rng = child_rng(17, 5)
    for _ in range(8):
        q = random_quadruple(rng, rng.randint(1, 3))
        base = joint_torsion_quad(q)
        rebasing = {}
        for label, dim in base.homology_dims.items():
            if dim:
                rebasing[label] = random_invertible(rng, dim, mag=2)
        rebased = joint_torsion_quad(q, rebasing=rebasing)
        assert rebased.value == base.value


def test_joint_torsion_pair_with_identity():
    rng = child_rng(17, 6)
    for _ in range(6):
        n = rng.randint(1, 4)
        a = random_singularized(rng, n)
        assert joint_torsion_pair(a, ExactMatrix.identity(n)) == qi(1)
        assert joint_torsion_pair(ExactMatrix.identity(n), a) == qi(1)


def test_joint_torsion_pair_examples():
    a = mat([[0, 0], [0, 2]])
    b = mat([[3, 0], [0, 0]])
    assert joint_torsion_pair(a, b) == qi(1)
    assert joint_torsion_pair(ZERO1, ZERO1) == qi(1)


def test_joint_torsion_pair_random_commuting():
    rng = child_rng(17, 7)
    for _ in range(15):
        a, b = random_commuting_pair(rng, rng.randint(1, 4))
        assert joint_torsion_pair(a, b) == qi(1)


def test_joint_torsion_pair_skew_symmetry():
    rng = child_rng(17, 8)
    for _ in range(10):
        a, b = random_commuting_pair(rng, rng.randint(1, 3))
        assert joint_torsion_pair(a, b) * joint_torsion_pair(b, a) == qi(1)


def test_joint_torsion_pair_rejects_noncommuting():
    with pytest.raises(DomainError, match="commute"):
        joint_torsion_pair(mat([[0, 1], [0, 0]]), mat([[0, 0], [1, 0]]))


# -- Lefschetz ratio and folded determinants ---------------------------------

def test_lefschetz_identity_blocks():
    blocks = RestrictionData(*(ExactMatrix.identity(2) for _ in range(4)))
    assert lefschetz_ratio(blocks) == qi(1)


def test_lefschetz_toeplitz_model_values():
    empty = ExactMatrix.zero(0, 0)
    r = RestrictionData(empty, mat([["1/6"]]), mat([["-1/6"]]), empty)
    assert lefschetz_ratio(r) == qi(-1)
    r2 = RestrictionData(empty, mat([["-3/2"]]), empty, empty)
    assert lefschetz_ratio(r2) == qi((-2, 3))


def test_lefschetz_rejects_singular_block():
    empty = ExactMatrix.zero(0, 0)
    with pytest.raises(DomainError, match="pair not acyclic"):
        lefschetz_ratio(RestrictionData(empty, ZERO1, empty, empty))


def test_graded_determinant_equals_torsion():
    rng = child_rng(17, 9)
    for _ in range(30):
        seq = random_exact_sequence(rng, max_len=5, max_rank=3)
        assert graded_determinant(seq) == torsion_scalar(seq).value


def test_graded_determinant_pseudoinverse_choice_irrelevant():
    # conjugating before folding exercises a different algebraic pseudoinverse
    rng = child_rng(17, 10)
    for _ in range(10):
        seq = random_exact_sequence(rng, max_len=4, max_rank=2)
        n = seq.length
        gs = [random_invertible(rng, seq.complex.dim(k), mag=2)
              if seq.complex.dim(k) else ExactMatrix.identity(0)
              for k in range(n, -1, -1)]
        from jointtorsion import rebase
        rebased = rebase(seq, gs)
        assert graded_determinant(rebased) == torsion_scalar(rebased).value


def test_pseudoinv_formula_two_term_isomorphisms():
    from jointtorsion import BasedExactSequence, ChainComplexSpec

    phi_a = mat([[2, 1], [1, 1]])
    phi_b = mat([[3]])
    eps_a = BasedExactSequence(ChainComplexSpec([2, 2], [phi_a]))
    eps_b = BasedExactSequence(ChainComplexSpec([1, 1], [phi_b]))
    value = pseudoinv_formula(eps_a, eps_b, 0, 0)
    assert value == phi_b.determinant().inverse() * phi_a.determinant()


def test_pseudoinv_formula_matches_pipeline_on_pairs():
    rng = child_rng(17, 11)
    for _ in range(20):
        a, b = random_commuting_pair(rng, rng.randint(1, 4))
        q = KoszulQuadruple(a, b, b, a)
        eps_a, eps_b = build_eps_sequences(q)
        mu_a = (a.cols - a.rank()) ** 2
        mu_b = (b.cols - b.rank()) ** 2
        value = pseudoinv_formula(eps_a, eps_b, mu_a, mu_b)
        assert value == joint_torsion_pair(a, b)


# -- determinant of the multiplicative commutator ----------------------------

def test_det_commutator_commuting():
    a = mat([[2, 0], [0, 3]])
    b = mat([[5, 0], [0, 7]])
    assert det_commutator(a, b) == qi(1)


def test_det_commutator_triangular_pair():
    assert det_commutator(mat([[1, 1], [0, 1]]), mat([[1, 0], [0, 2]])) == qi(1)


def test_det_commutator_random():
    rng = child_rng(17, 12)
    for _ in range(10):
        n = rng.randint(1, 4)
        a = random_invertible(rng, n)
        b = random_invertible(rng, n)
        assert det_commutator(a, b) == qi(1)


def test_det_commutator_rejects_singular():
    with pytest.raises(DomainError, match="singular input"):
        det_commutator(ZERO1, ONE1)


# -- factorization identities -------------------------------------------------

def test_factorization_identity_trivial_u():
    rng = child_rng(17, 13)
    q = random_quadruple(rng, 2)
    ident = ExactMatrix.identity(2)
    for which in ("sigma-conjugate", "sigma-right-shift", "sigma-det-class",
                  "quad-conjugate", "quad-slide"):
        lhs, rhs = factorization_identities(q, ident, which)
        assert lhs == rhs


def test_factorization_det_class_hand_example():
    # A = D = 0 on C^1, U = 2: sigma(A, DU) = 1, the kernel factor is 1/2,
    # det U = 2, and indeed 1 = 1 * (1/2) * 2.
    q = KoszulQuadruple(ZERO1, ZERO1, ZERO1, ZERO1)
    u = mat([[2]])
    lhs, rhs = factorization_identities(q, u, "sigma-det-class")
    assert lhs == rhs == qi(1)


def test_factorization_identities_random():
    rng = child_rng(17, 14)
    for which in ("sigma-conjugate", "sigma-right-shift", "sigma-det-class",
                  "quad-conjugate", "quad-slide"):
        for _ in range(6):
            n = rng.randint(1, 3)
            q = random_quadruple(rng, n)
            u = random_invertible(rng, n, mag=2)
            lhs, rhs = factorization_identities(q, u, which)
            assert lhs == rhs, which


def test_factorization_rejects_singular_u():
    q = KoszulQuadruple(ZERO1, ZERO1, ZERO1, ZERO1)
    with pytest.raises(DomainError, match="U not invertible"):
        factorization_identities(q, ZERO1, "sigma-conjugate")
