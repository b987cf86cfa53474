"""Koszul complexes, long exact sequences, perturbation scalars, and joint
torsion for (almost) commuting operators on a finite dimensional space.

For a quadruple (A, B, C, D) with AB = CD the three-term complex

    H --(-B, D)--> H^2 --(A, C)--> H

has homology H_2 = ker B n ker D, H_0 = H/(AH + CH), and
H_1 = {(y, z) | Ay + Cz = 0} / {(-Bx, Dx)}.  Two eight-term exact sequences
tie these to the kernels and cokernels of the four operators:

    eps_AD: 0 -> H_2 --i--> ker B --D--> ker C --(0,v)--> H_1
                 --(y,z)->y--> coker B --A--> coker C --pi--> H_0 -> 0

    eps_BC: 0 -> H_2 --(-i)--> ker D --B--> ker A --(v,0)--> H_1
                 --(y,z)->z--> coker D --C--> coker A --pi--> H_0 -> 0

The minus sign on the first map of eps_BC is part of the convention and is
required for the final scalar to be +1, not -1, on finite quadruples.

The joint torsion is

    value = (-1)^(lambda + pairing) * tau(eps_AD) * tau(eps_BC)^(-1)
            * sigma(A, D) * sigma(B, C)

where sigma(X, Y) = (-1)^(kappa(X)+kappa(Y)) tau(X') / tau(Y') is the
perturbation scalar built from the four-term sequences
0 -> ker X -> H --X--> H -> coker X -> 0, kappa(X) = nullity * rank, and
lambda = dim(ker B n ker D)(dim ker D + dim ker B)
       + dim H_0 (dim coker A + dim coker C).

The extra exponent

    pairing = dim ker B (dim ker C + 1) + dim ker D (dim ker A + 1)

is the contraction-order sign: the four factors live in a tensor product of
kernel/cokernel determinant lines, and flattening that product to a plain
product of scalars moves odd-dimensional factors past each other.  With the
torsion normalization fixed in ``complexes`` (which is pinned by its own
two- and three-term values), this is the unique quadratic correction under
which the value is exactly 1 on every finite dimensional quadruple; it
vanishes on commuting pairs (A, B, B, A) and on quadruples with invertible
B and D, which is why smaller test families never see it.

All homology spaces are given one shared set of deterministic bases, so the
basis dependence of the four factors cancels and the value is well defined;
on a finite dimensional space it is exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .complexes import BasedExactSequence, ChainComplexSpec, TorsionScalar, torsion_scalar
from .errors import DomainError
from .linalg import (ExactMatrix, Subquotient, build_subquotient,
                     cokernel_subquotient, induced_map, kernel_subquotient,
                     solve_columns)
from .scalars import QiScalar


class CommutingTuple:
    """An exactly commuting tuple of square matrices on a common space."""

    def __init__(self, ops):
        ops = list(ops)
        if not ops:
            raise DomainError("empty tuple")
        h = ops[0].rows
        for m in ops:
            if m.rows != h or m.cols != h:
                raise DomainError("operators must be square on a common space")
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                if not ops[i].commutator_with(ops[j]).is_zero():
                    raise DomainError("operators do not commute")
        self.ops = ops
        self.n = len(ops)
        self.dim = h


def build_koszul(t: CommutingTuple) -> ChainComplexSpec:
    """The Koszul complex of a commuting tuple.

    Degree i has dimension h * C(n, i), with basis blocks indexed by the
    lexicographically ordered i-element subsets of the operator indices.
    The differential sends x (x) e_S to the alternating sum over k in S of
    ops[k] x (x) e_{S\\k}, with sign (-1)^(position of k in S).
    """
    n, h = t.n, t.dim
    subsets = [list(combinations(range(n), i)) for i in range(n + 1)]
    index_of = [{s: j for j, s in enumerate(level)} for level in subsets]
    diffs_top_down = []
    for i in range(n, 0, -1):
        rows = h * len(subsets[i - 1])
        cols = h * len(subsets[i])
        blocks = [[None] * len(subsets[i]) for _ in range(len(subsets[i - 1]))]
        for s_idx, s in enumerate(subsets[i]):
            for pos, k in enumerate(s):
                target = tuple(x for x in s if x != k)
                t_idx = index_of[i - 1][target]
                op = t.ops[k] if pos % 2 == 0 else -t.ops[k]
                existing = blocks[t_idx][s_idx]
                blocks[t_idx][s_idx] = op if existing is None else existing + op
        ent = []
        for bi in range(len(subsets[i - 1])):
            for r in range(h):
                for bj in range(len(subsets[i])):
                    block = blocks[bi][bj]
                    if block is None:
                        ent.extend([QiScalar(0)] * h)
                    else:
                        ent.extend(block.row(r))
        diffs_top_down.append(ExactMatrix(rows, cols, ent))
    dims_top_down = [h * len(subsets[i]) for i in range(n, -1, -1)]
    return ChainComplexSpec(dims_top_down, diffs_top_down)


class KoszulQuadruple:
    """Operators A, B, C, D on a common space with AB = CD exactly."""

    def __init__(self, a, b, c, d):
        h = a.rows
        for m in (a, b, c, d):
            if m.rows != h or m.cols != h:
                raise DomainError("operators must be square on a common space")
        if a * b != c * d:
            raise DomainError("AB != CD")
        self.a, self.b, self.c, self.d = a, b, c, d
        self.dim = h


def build_quad_complex(q: KoszulQuadruple) -> ChainComplexSpec:
    """Three-term complex H -> H^2 -> H with d2 = (-B; D), d1 = (A, C)."""
    h = q.dim
    d2 = (-q.b).vstack(q.d)
    d1 = q.a.hstack(q.c)
    return ChainComplexSpec([h, 2 * h, h], [d2, d1])


_SPACE_LABELS = ("ker_A", "coker_A", "ker_B", "coker_B", "ker_C", "coker_C",
                 "ker_D", "coker_D", "ker_B_cap_ker_D", "H1", "H0")


class QuadHomology:
    """The eleven homology spaces of a quadruple, with shared bases.

    ``rebasing`` optionally recombines the representative basis of any space
    by an invertible matrix (keyed by label); the joint torsion value must
    not depend on it.
    """

    def __init__(self, q: KoszulQuadruple, rebasing=None):
        h = q.dim
        self.quad = q
        sq = {
            "ker_A": kernel_subquotient(q.a),
            "coker_A": cokernel_subquotient(q.a),
            "ker_B": kernel_subquotient(q.b),
            "coker_B": cokernel_subquotient(q.b),
            "ker_C": kernel_subquotient(q.c),
            "coker_C": cokernel_subquotient(q.c),
            "ker_D": kernel_subquotient(q.d),
            "coker_D": cokernel_subquotient(q.d),
            "ker_B_cap_ker_D": kernel_subquotient(q.b.vstack(q.d)),
            "H1": build_subquotient(
                2 * h,
                q.a.hstack(q.c).kernel_basis(),
                (-q.b).vstack(q.d).image_basis()),
            "H0": build_subquotient(
                h, ExactMatrix.identity(h), q.a.hstack(q.c).image_basis()),
        }
        if rebasing:
            for label, g in rebasing.items():
                if label not in sq:
                    raise DomainError(f"unknown homology space {label!r}")
                sq[label] = sq[label].with_rep_transform(g)
        self.spaces = sq

    def dims(self) -> dict:
        return {label: self.spaces[label].dim for label in _SPACE_LABELS}


def _as_based_sequence(dims_top_down, diffs_top_down) -> BasedExactSequence:
    try:
        return BasedExactSequence(ChainComplexSpec(dims_top_down, diffs_top_down))
    except DomainError as exc:
        raise RuntimeError(f"internal: constructed sequence invalid ({exc})") from exc


def build_eps_sequences(q: KoszulQuadruple, homology: QuadHomology | None = None):
    """The two eight-term exact sequences of the quadruple, based."""
    if homology is None:
        homology = QuadHomology(q)
    sq = homology.spaces
    h = q.dim
    ident = ExactMatrix.identity(h)
    include_second = ExactMatrix.zero(h, h).vstack(ident)
    include_first = ident.vstack(ExactMatrix.zero(h, h))
    project_first = ident.hstack(ExactMatrix.zero(h, h))
    project_second = ExactMatrix.zero(h, h).hstack(ident)

    eps_ad = _as_based_sequence(
        [sq["ker_B_cap_ker_D"].dim, sq["ker_B"].dim, sq["ker_C"].dim,
         sq["H1"].dim, sq["coker_B"].dim, sq["coker_C"].dim, sq["H0"].dim],
        [induced_map(ident, sq["ker_B_cap_ker_D"], sq["ker_B"]),
         induced_map(q.d, sq["ker_B"], sq["ker_C"]),
         induced_map(include_second, sq["ker_C"], sq["H1"]),
         induced_map(project_first, sq["H1"], sq["coker_B"]),
         induced_map(q.a, sq["coker_B"], sq["coker_C"]),
         induced_map(ident, sq["coker_C"], sq["H0"])])

    eps_bc = _as_based_sequence(
        [sq["ker_B_cap_ker_D"].dim, sq["ker_D"].dim, sq["ker_A"].dim,
         sq["H1"].dim, sq["coker_D"].dim, sq["coker_A"].dim, sq["H0"].dim],
        [induced_map(-ident, sq["ker_B_cap_ker_D"], sq["ker_D"]),
         induced_map(q.b, sq["ker_D"], sq["ker_A"]),
         induced_map(include_first, sq["ker_A"], sq["H1"]),
         induced_map(project_second, sq["H1"], sq["coker_D"]),
         induced_map(q.c, sq["coker_D"], sq["coker_A"]),
         induced_map(ident, sq["coker_A"], sq["H0"])])
    return eps_ad, eps_bc


def _four_term_sequence(op: ExactMatrix, ker_sq: Subquotient,
                        coker_sq: Subquotient) -> BasedExactSequence:
    h = op.rows
    return _as_based_sequence(
        [ker_sq.dim, h, h, coker_sq.dim],
        [ker_sq.lift_map, op, coker_sq.project_map])


def kappa(op: ExactMatrix) -> int:
    """nullity * rank of a square operator."""
    r = op.rank()
    return (op.cols - r) * r


def perturbation_sigma(a: ExactMatrix, d: ExactMatrix, bases=None) -> QiScalar:
    """The finite dimensional perturbation scalar of two operators.

    Both operators act on the same space; the scalar is
    (-1)^(kappa(a)+kappa(d)) tau(seq_a) / tau(seq_d) where seq_x is the
    four-term sequence 0 -> ker x -> H -> H -> coker x -> 0 based by the
    supplied (or deterministic) kernel/cokernel bases and the standard
    ambient basis.  For a = d the factors cancel and the result is 1.
    """
    if a.rows != a.cols or d.rows != d.cols or a.rows != d.rows:
        raise DomainError("shape mismatch")
    if bases is None:
        bases = (kernel_subquotient(a), cokernel_subquotient(a),
                 kernel_subquotient(d), cokernel_subquotient(d))
    ker_a, coker_a, ker_d, coker_d = bases
    tau_a = torsion_scalar(_four_term_sequence(a, ker_a, coker_a)).value
    tau_d = torsion_scalar(_four_term_sequence(d, ker_d, coker_d)).value
    sign = -1 if (kappa(a) + kappa(d)) % 2 else 1
    return tau_a * tau_d.inverse() * sign


@dataclass
class JointTorsionReport:
    """Everything the joint torsion computation produced, for reproducibility.

    value = (-1)^(lambda_exp + pairing_exp) * tau_AD * tau_BC^(-1)
            * sigma_AD * sigma_BC.
    """
    tau_AD: TorsionScalar
    tau_BC: TorsionScalar
    sigma_AD: QiScalar
    sigma_BC: QiScalar
    lambda_exp: int
    pairing_exp: int
    kappa_A: int
    kappa_B: int
    kappa_C: int
    kappa_D: int
    mu_values: dict
    homology_dims: dict
    value: QiScalar


def joint_torsion_quad(q: KoszulQuadruple, rebasing=None) -> JointTorsionReport:
    """Joint torsion of a quadruple with AB = CD; the value is always 1 here.

    The full report is returned so the cancellation can be audited: each
    torsion and perturbation scalar individually depends on the homology
    bases, only the combined value does not.
    """
    homology = QuadHomology(q, rebasing)
    sq = homology.spaces
    eps_ad, eps_bc = build_eps_sequences(q, homology)
    tau_ad = torsion_scalar(eps_ad)
    tau_bc = torsion_scalar(eps_bc)
    sigma_ad = perturbation_sigma(
        q.a, q.d, (sq["ker_A"], sq["coker_A"], sq["ker_D"], sq["coker_D"]))
    sigma_bc = perturbation_sigma(
        q.b, q.c, (sq["ker_B"], sq["coker_B"], sq["ker_C"], sq["coker_C"]))
    dims = homology.dims()
    lambda_exp = (dims["ker_B_cap_ker_D"] * (dims["ker_D"] + dims["ker_B"])
                  + dims["H0"] * (dims["coker_A"] + dims["coker_C"]))
    pairing_exp = (dims["ker_B"] * (dims["ker_C"] + 1)
                   + dims["ker_D"] * (dims["ker_A"] + 1))
    value = tau_ad.value * tau_bc.value.inverse() * sigma_ad * sigma_bc
    if (lambda_exp + pairing_exp) % 2:
        value = -value
    return JointTorsionReport(
        tau_AD=tau_ad, tau_BC=tau_bc, sigma_AD=sigma_ad, sigma_BC=sigma_bc,
        lambda_exp=lambda_exp, pairing_exp=pairing_exp,
        kappa_A=kappa(q.a), kappa_B=kappa(q.b),
        kappa_C=kappa(q.c), kappa_D=kappa(q.d),
        mu_values={key: dims[f"ker_{key}"] * dims[f"coker_{key}"]
                   for key in ("A", "B", "C", "D")},
        homology_dims=dims, value=value)


def joint_torsion_pair(a: ExactMatrix, b: ExactMatrix) -> QiScalar:
    """Joint torsion of a commuting pair, via the quadruple (A, B, B, A)."""
    if not a.commutator_with(b).is_zero():
        raise DomainError("operators do not commute")
    return joint_torsion_quad(KoszulQuadruple(a, b, b, a)).value


@dataclass
class RestrictionData:
    """The four restricted blocks of a commuting pair with acyclic Koszul
    complex: B on ker A, B on coker A, A on coker B, A on ker B."""
    b_on_ker_a: ExactMatrix
    b_on_coker_a: ExactMatrix
    a_on_coker_b: ExactMatrix
    a_on_ker_b: ExactMatrix


def lefschetz_ratio(r: RestrictionData) -> QiScalar:
    """det(B|ker A) det(B|coker A)^-1 det(A|coker B) det(A|ker B)^-1."""
    dets = []
    for block in (r.b_on_ker_a, r.b_on_coker_a, r.a_on_coker_b, r.a_on_ker_b):
        if not block.is_square():
            raise DomainError("restriction blocks must be square")
        det = block.determinant()
        if det.is_zero():
            raise DomainError("pair not acyclic")
        dets.append(det)
    return dets[0] * dets[1].inverse() * dets[2] * dets[3].inverse()


def graded_determinant(seq: BasedExactSequence) -> QiScalar:
    """det(D_+ + D_-^dagger) for the even/odd folding of an exact sequence.

    Spaces at even distance from the top form the source, the others the
    target, each ordered by decreasing degree.  D_+ collects differentials
    leaving the source, D_- those leaving the target, and the dagger is the
    algebraic pseudoinverse.  With these conventions the determinant equals
    the torsion scalar of the sequence (any algebraic pseudoinverse gives
    the same value).
    """
    cpx = seq.complex
    n = cpx.length
    plus_deg = [k for k in range(n, -1, -1) if (n - k) % 2 == 0]
    minus_deg = [k for k in range(n, -1, -1) if (n - k) % 2 == 1]
    plus_dim = sum(cpx.dim(k) for k in plus_deg)
    minus_dim = sum(cpx.dim(k) for k in minus_deg)
    if plus_dim != minus_dim:
        raise DomainError("sequence not exact")
    plus_off = _offsets(cpx, plus_deg)
    minus_off = _offsets(cpx, minus_deg)

    def based_diff(k):
        d = cpx.differential(k)
        binv = seq.basis_inverse(k - 1)
        g = seq.basis(k)
        if binv is not None:
            d = binv * d
        if g is not None:
            d = d * g
        return d

    def fold(src_deg, src_off, dst_off, dim_dst, dim_src):
        ent = [[QiScalar(0)] * dim_src for _ in range(dim_dst)]
        for k in src_deg:
            if k == 0 or (k - 1) not in dst_off:
                continue
            d = based_diff(k)
            r0, c0 = dst_off[k - 1], src_off[k]
            for i in range(d.rows):
                row = ent[r0 + i]
                for j in range(d.cols):
                    row[c0 + j] = d[i, j]
        return ExactMatrix(dim_dst, dim_src, [v for row in ent for v in row])

    d_plus = fold(plus_deg, plus_off, minus_off, minus_dim, plus_dim)
    d_minus = fold(minus_deg, minus_off, plus_off, plus_dim, minus_dim)
    total = d_plus + d_minus.pseudoinverse()
    det = total.determinant()
    if det.is_zero():
        raise RuntimeError("internal: folded map is singular on an exact sequence")
    return det


def _offsets(cpx, degrees):
    off = {}
    pos = 0
    for k in degrees:
        off[k] = pos
        pos += cpx.dim(k)
    return off


def _rank_parity_correction(seq: BasedExactSequence) -> int:
    """Sign exponent aligning the folded determinant with the signed formula.

    For a sequence with top differential ranks a_n, a_{n-1} and bottom rank
    a_1 the exponent is a_{n-1} (a_n + a_1 + 1); it vanishes on two-term
    sequences and on sequences whose second-from-top space is zero.
    """
    cpx = seq.complex
    n = cpx.length
    return cpx.rank(n - 1) * (cpx.rank(n) + cpx.rank(1) + 1)


def pseudoinv_formula(eps_a: BasedExactSequence, eps_b: BasedExactSequence,
                      mu_a: int, mu_b: int) -> QiScalar:
    """The determinant-invariant of a pair from folded exact sequences:

        (-1)^(mu_a + mu_b) det(D_B+ + D_B-^dagger)^(-1) (D_A+ + D_A-^dagger)

    where mu_x = dim ker X * dim coker X and the folding signs follow the
    conventions of ``graded_determinant``.  Equals the joint torsion of the
    pair that produced the sequences.
    """
    det_a = graded_determinant(eps_a)
    det_b = graded_determinant(eps_b)
    exponent = (mu_a + mu_b + _rank_parity_correction(eps_a)
                + _rank_parity_correction(eps_b))
    value = det_a * det_b.inverse()
    return -value if exponent % 2 else value


def det_commutator(a: ExactMatrix, b: ExactMatrix) -> QiScalar:
    """Exact determinant of A B A^-1 B^-1; always 1 in finite dimension."""
    for m in (a, b):
        if not m.is_square() or m.determinant().is_zero():
            raise DomainError("singular input")
    return (a * b * a.inverse() * b.inverse()).determinant()


def _iso_det_between_kernels(op, src_sq: Subquotient, dst_sq: Subquotient) -> QiScalar:
    image = op * src_sq.rep_basis
    return solve_columns(dst_sq.rep_basis, image).determinant()


def _iso_det_between_cokernels(op, src_sq: Subquotient, dst_sq: Subquotient) -> QiScalar:
    return (dst_sq.project_map * (op * src_sq.rep_basis)).determinant()


FACTORIZATION_SELECTORS = ("sigma-conjugate", "sigma-right-shift",
                           "sigma-det-class", "quad-conjugate", "quad-slide")


def factorization_identities(q: KoszulQuadruple, u: ExactMatrix, which: str):
    """Evaluate both sides of one of the factorization identities.

    Selectors (U invertible throughout; all scalars are evaluated against
    the same deterministic bases, so the equalities are exact):

    * sigma-conjugate:   sigma(A, U^-1 D U) versus
                         sigma(A, D) * t(U^-1 | ker D) / t(U^-1 | coker D)
    * sigma-right-shift: sigma(A U, D U) versus
                         sigma(A, D) * t(U^-1 | ker D) / t(U^-1 | ker A)
    * sigma-det-class:   sigma(A, D U) versus
                         sigma(A, D) * t(U^-1 | ker D) * det U
    * quad-conjugate:    value of (A, B U, C U, U^-1 D U) versus (A, B, C, D)
    * quad-slide:        value of (A, B, C U, U^-1 D)     versus (A, B, C, D)

    Here t(U | V) is the determinant of the isomorphism induced by U from
    the deterministic basis of V to the deterministic basis of its image
    space.  Returns (lhs, rhs).
    """
    if not u.is_square() or u.rows != q.dim:
        raise DomainError("U has the wrong shape")
    if u.determinant().is_zero():
        raise DomainError("U not invertible")
    a, b, c, d = q.a, q.b, q.c, q.d
    u_inv = u.inverse()

    if which == "sigma-conjugate":
        d2 = u_inv * d * u
        lhs = perturbation_sigma(a, d2)
        t_ker = _iso_det_between_kernels(
            u_inv, kernel_subquotient(d), kernel_subquotient(d2))
        t_coker = _iso_det_between_cokernels(
            u_inv, cokernel_subquotient(d), cokernel_subquotient(d2))
        rhs = perturbation_sigma(a, d) * t_ker * t_coker.inverse()
        return lhs, rhs
    if which == "sigma-right-shift":
        a2, d2 = a * u, d * u
        lhs = perturbation_sigma(a2, d2)
        t_ker_a = _iso_det_between_kernels(
            u_inv, kernel_subquotient(a), kernel_subquotient(a2))
        t_ker_d = _iso_det_between_kernels(
            u_inv, kernel_subquotient(d), kernel_subquotient(d2))
        rhs = perturbation_sigma(a, d) * t_ker_a.inverse() * t_ker_d
        return lhs, rhs
    if which == "sigma-det-class":
        d2 = d * u
        lhs = perturbation_sigma(a, d2)
        t_ker = _iso_det_between_kernels(
            u_inv, kernel_subquotient(d), kernel_subquotient(d2))
        rhs = perturbation_sigma(a, d) * t_ker * u.determinant()
        return lhs, rhs
    if which == "quad-conjugate":
        lhs = joint_torsion_quad(
            KoszulQuadruple(a, b * u, c * u, u_inv * d * u)).value
        rhs = joint_torsion_quad(q).value
        return lhs, rhs
    if which == "quad-slide":
        lhs = joint_torsion_quad(KoszulQuadruple(a, b, c * u, u_inv * d)).value
        rhs = joint_torsion_quad(q).value
        return lhs, rhs
    raise DomainError(f"unknown identity selector {which!r}")
