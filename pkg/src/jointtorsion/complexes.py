"""Chain complexes over Q(i), homology, and torsion of based exact sequences.

Conventions, fixed once and used everywhere:

* A complex ``0 -> V_n -> ... -> V_0 -> 0`` is constructed from top-degree
  data (dims and differentials listed from degree n down), stored by degree.
  ``d_k`` maps ``V_k`` to ``V_{k-1}``; the boundary maps ``d_0`` and
  ``d_{n+1}`` are zero-shaped matrices so kernels and images at the ends
  come out of the same code path.

* The torsion scalar of a based exact sequence alternates stars starting at
  the top: position k carries exponent -1 when ``k = n (mod 2)`` and +1
  otherwise.  For each degree the generator set T_k is the standard basis
  vectors at the pivot columns of d_k, and

      c_k = det [ d_{k+1} T_{k+1} | T_k ]   (in the basis of V_k)

  including k = n, whose factor is 1 for standard bases.  The product of
  ``c_k`` to the signed exponents is the torsion; it does not depend on the
  generator choices (any valid T_k gives the same value) and transforms by
  ``det(g_k)^(-s_k)`` under a change of basis ``g_k``.

* Direct sums concatenate bases first-summand-first.  The scalar torsion of
  a direct sum is the product of the torsions times an explicit reordering
  sign (see ``interleave_sign``); the sign is +1 in particular whenever one
  summand has all even ranks.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import DomainError
from .linalg import ExactMatrix, Subquotient, build_subquotient
from .scalars import ONE, QiScalar


class ChainComplexSpec:
    """A finite chain complex of coordinate spaces with exact differentials."""

    def __init__(self, dims_top_down, differentials_top_down):
        dims = [int(d) for d in dims_top_down]
        diffs = list(differentials_top_down)
        if len(diffs) != max(len(dims) - 1, 0):
            raise DomainError("need exactly one differential per adjacent pair")
        self.length = len(dims) - 1
        self._dims = list(reversed(dims))  # by degree
        self._diffs = list(reversed(diffs))  # d_1 .. d_n by degree
        for k in range(1, self.length + 1):
            d = self._diffs[k - 1]
            if d.rows != self._dims[k - 1] or d.cols != self._dims[k]:
                raise DomainError(f"differential d_{k} has shape "
                                  f"{d.rows}x{d.cols}, expected "
                                  f"{self._dims[k - 1]}x{self._dims[k]}")
        for k in range(1, self.length):
            if not (self._diffs[k - 1] * self._diffs[k]).is_zero():
                raise DomainError("differentials do not compose to zero")

    def dim(self, k: int) -> int:
        return self._dims[k]

    @property
    def dims_by_degree(self) -> list:
        return list(self._dims)

    def differential(self, k: int) -> ExactMatrix:
        """d_k for 0 <= k <= n+1, with zero-shaped maps at the ends."""
        if k == 0:
            return ExactMatrix.zero(0, self._dims[0])
        if k == self.length + 1:
            return ExactMatrix.zero(self._dims[self.length], 0)
        return self._diffs[k - 1]

    def rank(self, k: int) -> int:
        if k <= 0 or k > self.length:
            return 0
        return self._diffs[k - 1].rank()

    def homology(self, k: int) -> Subquotient:
        """H_k as a based subquotient: ker d_k over im d_{k+1}."""
        if not 0 <= k <= self.length:
            raise DomainError(f"degree {k} out of range")
        cycles = self.differential(k).kernel_basis()
        boundaries = self.differential(k + 1).image_basis()
        return build_subquotient(self._dims[k], cycles, boundaries)

    def homology_dims(self) -> list:
        return [self._dims[k] - self.rank(k) - self.rank(k + 1)
                for k in range(self.length + 1)]

    def is_exact(self) -> bool:
        return all(h == 0 for h in self.homology_dims())

    def direct_sum(self, other: "ChainComplexSpec") -> "ChainComplexSpec":
        n = max(self.length, other.length)
        dims = [self._padded_dim(k) + other._padded_dim(k)
                for k in range(n, -1, -1)]
        diffs = []
        for k in range(n, 0, -1):
            a = self._padded_diff(k)
            b = other._padded_diff(k)
            diffs.append(_block_diag(a, b))
        return ChainComplexSpec(dims, diffs)

    def _padded_dim(self, k: int) -> int:
        return self._dims[k] if k <= self.length else 0

    def _padded_diff(self, k: int) -> ExactMatrix:
        if k <= self.length:
            return self.differential(k)
        return ExactMatrix.zero(self._padded_dim(k - 1), 0)


def _block_diag(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    top = a.hstack(ExactMatrix.zero(a.rows, b.cols))
    bottom = ExactMatrix.zero(b.rows, a.cols).hstack(b)
    return top.vstack(bottom)


class BasedExactSequence:
    """An exact complex together with an ordered basis for each space."""

    def __init__(self, complex_spec: ChainComplexSpec, bases=None):
        self.complex = complex_spec
        n = complex_spec.length
        for k in range(n + 1):
            rk = complex_spec.rank(k) + complex_spec.rank(k + 1)
            if rk != complex_spec.dim(k):
                raise DomainError("sequence not exact")
        if bases is not None:
            bases = list(bases)
            if len(bases) != n + 1:
                raise DomainError("need one basis per space")
            bases = list(reversed(bases))  # store by degree
            for k, g in enumerate(bases):
                if g.rows != complex_spec.dim(k) or g.cols != complex_spec.dim(k):
                    raise DomainError("basis shape mismatch")
                if g.rank() != g.rows:
                    raise DomainError("singular change of basis")
        self._bases = bases
        self._basis_inverses = None

    @property
    def length(self) -> int:
        return self.complex.length

    def basis(self, k: int):
        if self._bases is None:
            return None
        return self._bases[k]

    def basis_inverse(self, k: int):
        if self._bases is None:
            return None
        if self._basis_inverses is None:
            self._basis_inverses = [None] * (self.length + 1)
        if self._basis_inverses[k] is None:
            self._basis_inverses[k] = self._bases[k].inverse()
        return self._basis_inverses[k]

    def bases_top_down(self):
        n = self.length
        if self._bases is None:
            return [ExactMatrix.identity(self.complex.dim(k))
                    for k in range(n, -1, -1)]
        return [self._bases[k] for k in range(n, -1, -1)]

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(repr(self.complex.dims_by_degree).encode())
        for g in self.bases_top_down():
            digest.update(";".join(e.to_text() for e in g.entries).encode())
        return digest.hexdigest()[:16]

    def direct_sum(self, other: "BasedExactSequence") -> "BasedExactSequence":
        cpx = self.complex.direct_sum(other.complex)
        bases = [_block_diag(a, b) for a, b in
                 zip(_padded_bases(self, cpx.length),
                     _padded_bases(other, cpx.length))]
        return BasedExactSequence(cpx, bases)


def _padded_bases(seq: BasedExactSequence, n: int):
    out = []
    for k in range(n, -1, -1):
        if k <= seq.length:
            g = seq.basis(k)
            out.append(g if g is not None
                       else ExactMatrix.identity(seq.complex.dim(k)))
        else:
            out.append(ExactMatrix.identity(0))
    return out


@dataclass(frozen=True)
class TorsionScalar:
    value: QiScalar
    basis_fingerprint: str

    def __post_init__(self):
        if self.value.is_zero():
            raise DomainError("torsion scalar must be nonzero")


def _default_selection(d: ExactMatrix):
    return list(d.rref().pivots)


def torsion_scalar(seq: BasedExactSequence, selector=None) -> TorsionScalar:
    """Torsion of a based exact sequence, per the conventions above.

    ``selector`` optionally overrides the generator choice: it gets the
    degree and the differential and must return column indices on which the
    differential is injective with full image rank.  Any valid selection
    yields the same value; this hook exists so tests can prove that.
    """
    cpx = seq.complex
    n = cpx.length
    selections = {}
    for k in range(n + 2):
        d = cpx.differential(k)
        if selector is None or k == 0 or k == n + 1:
            selections[k] = _default_selection(d)
        else:
            chosen = list(selector(k, d))
            sub = d.select_columns(chosen)
            if len(chosen) != cpx.rank(k) or sub.rank() != cpx.rank(k):
                raise DomainError("invalid generator selection")
            selections[k] = chosen
    value = ONE
    for k in range(n, -1, -1):
        d_up = cpx.differential(k + 1)
        image_part = d_up.select_columns(selections[k + 1])
        own_part = ExactMatrix.identity(cpx.dim(k)).select_columns(selections[k])
        square = image_part.hstack(own_part)
        if square.cols != cpx.dim(k):
            raise RuntimeError("internal: torsion block is not square")
        binv = seq.basis_inverse(k)
        if binv is not None:
            square = binv * square
        c = square.determinant()
        if c.is_zero():
            raise RuntimeError("internal: torsion factor vanished")
        starred = (n - k) % 2 == 0
        value = value * (c.inverse() if starred else c)
    return TorsionScalar(value, seq.fingerprint())


def rebase(seq: BasedExactSequence, new_bases) -> BasedExactSequence:
    """Same complex, new bases (given top-down as invertible matrices).

    The torsion transforms by the product of det(g_k)^(-s_k) where g_k is
    the change of basis at position k and s_k its signed exponent.
    """
    return BasedExactSequence(seq.complex, new_bases)


def interleave_sign(first: BasedExactSequence, second: BasedExactSequence) -> int:
    """Reordering sign relating torsion of a direct sum to the product.

    For degree-aligned summands of equal length,

        torsion(first (+) second) = sign * torsion(first) * torsion(second)

    with sign = (-1)^(sum_k rank1(d_k) * rank2(d_{k+1})): the parity of
    interleaving the second summand's image generators past the first
    summand's own generators inside each degree.  Summands of different
    length additionally flip the shorter torsion's exponent pattern, so the
    plain product law is stated for equal lengths only.
    """
    n = max(first.length, second.length)
    total = 0
    for k in range(n + 1):
        total += first.complex.rank(k) * second.complex.rank(k + 1)
    return -1 if total % 2 else 1
