"""Dense exact linear algebra over the Gaussian rationals.

The basis conventions here are load-bearing for everything downstream: every
kernel, image, and quotient basis is derived from reduced row echelon form
with a leftmost first-nonzero pivot scan, so identical inputs always produce
identical bases and therefore identical torsion scalars.

Subquotients (kernels, cokernels, homology spaces) are represented by
explicit matrices: a cycle basis, a boundary basis, a representative basis
whose classes span the quotient, and lift/project maps realizing the section
and the projection.  Induced maps on subquotients are then ordinary matrix
products, with well-definedness checked exactly.
"""

from __future__ import annotations

from .errors import DomainError
from .scalars import ONE, ZERO, QiScalar


def _to_scalar(value) -> QiScalar:
    if isinstance(value, QiScalar):
        return value
    if isinstance(value, str):
        return QiScalar.parse(value)
    return QiScalar(value)


class ExactMatrix:
    """Immutable dense matrix with QiScalar entries, stored row-major."""

    __slots__ = ("rows", "cols", "entries", "_rref")

    def __init__(self, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise DomainError(f"entry count {len(entries)} != {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._rref = None

    # -- constructors --------------------------------------------------

    @classmethod
    def from_rows(cls, rows) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DomainError("ragged rows")
        return cls(n, m, [_to_scalar(v) for r in rows for v in r])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        ent = [ZERO] * (n * n)
        for i in range(n):
            ent[i * n + i] = ONE
        return cls(n, n, ent)

    @classmethod
    def from_columns(cls, dim: int, columns) -> "ExactMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != dim:
                raise DomainError("column has wrong dimension")
        ent = []
        for i in range(dim):
            for c in columns:
                ent.append(_to_scalar(c[i]))
        return cls(dim, len(columns), ent)

    @classmethod
    def scalar_diag(cls, n: int, value) -> "ExactMatrix":
        value = _to_scalar(value)
        ent = [ZERO] * (n * n)
        for i in range(n):
            ent[i * n + i] = value
        return cls(n, n, ent)

    # -- access ----------------------------------------------------------

    def __getitem__(self, key):
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(e.to_text() for e in self.row(i))
                         for i in range(self.rows))
        return f"ExactMatrix({self.rows}x{self.cols}: {body})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        self._same_shape(other)
        return ExactMatrix(self.rows, self.cols,
                           [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return ExactMatrix(self.rows, self.cols,
                           [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return ExactMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, value) -> "ExactMatrix":
        value = _to_scalar(value)
        return ExactMatrix(self.rows, self.cols, [value * a for a in self.entries])

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DomainError(f"shape mismatch {self.rows}x{self.cols} * "
                              f"{other.rows}x{other.cols}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            for j in range(m):
                acc = ZERO
                for t in range(k):
                    x = arow[t]
                    if x.is_zero():
                        continue
                    acc = acc + x * b[t * m + j]
                out.append(acc)
        return ExactMatrix(n, m, out)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           [self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)])

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise DomainError("hstack row mismatch")
        ent = []
        for i in range(self.rows):
            ent.extend(self.row(i))
            ent.extend(other.row(i))
        return ExactMatrix(self.rows, self.cols + other.cols, ent)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise DomainError("vstack column mismatch")
        return ExactMatrix(self.rows + other.rows, self.cols,
                           self.entries + other.entries)

    def select_columns(self, indices) -> "ExactMatrix":
        idx = list(indices)
        ent = []
        for i in range(self.rows):
            base = i * self.cols
            for j in idx:
                ent.append(self.entries[base + j])
        return ExactMatrix(self.rows, len(idx), ent)

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DomainError("shape mismatch")

    # -- echelon machinery ---------------------------------------------

    def rref(self) -> "RrefResult":
        """Reduced row echelon decomposition with a recorded transform.

        Deterministic by construction: pivots are found by scanning each
        column top-down for the first nonzero entry, with no magnitude
        heuristics, so the result depends only on the exact entries.
        """
        if self._rref is not None:
            return self._rref
        n, m = self.rows, self.cols
        work = [list(self.row(i)) for i in range(n)]
        trans = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        pivots = []
        prow = 0
        for col in range(m):
            if prow >= n:
                break
            src = None
            for r in range(prow, n):
                if not work[r][col].is_zero():
                    src = r
                    break
            if src is None:
                continue
            if src != prow:
                work[prow], work[src] = work[src], work[prow]
                trans[prow], trans[src] = trans[src], trans[prow]
            inv = work[prow][col].inverse()
            work[prow] = [inv * v for v in work[prow]]
            trans[prow] = [inv * v for v in trans[prow]]
            for r in range(n):
                if r == prow:
                    continue
                f = work[r][col]
                if f.is_zero():
                    continue
                work[r] = [a - f * b for a, b in zip(work[r], work[prow])]
                trans[r] = [a - f * b for a, b in zip(trans[r], trans[prow])]
            pivots.append(col)
            prow += 1
        result = RrefResult(
            rref=ExactMatrix(n, m, [v for r in work for v in r]),
            pivots=tuple(pivots),
            rank=len(pivots),
            transform=ExactMatrix(n, n, [v for r in trans for v in r]),
        )
        self._rref = result
        return result

    def rank(self) -> int:
        return self.rref().rank

    def kernel_basis(self) -> "ExactMatrix":
        """Basis of the kernel as matrix columns, from the free columns."""
        res = self.rref()
        pivot_set = set(res.pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        cols = []
        for f in free:
            vec = [ZERO] * self.cols
            vec[f] = ONE
            for prow, pcol in enumerate(res.pivots):
                vec[pcol] = -res.rref[prow, f]
            cols.append(vec)
        return ExactMatrix.from_columns(self.cols, cols)

    def image_basis(self) -> "ExactMatrix":
        """Pivot columns of the original matrix, spanning the image."""
        return self.select_columns(self.rref().pivots)

    def determinant(self) -> QiScalar:
        """Exact determinant by elimination with a deterministic pivot scan."""
        if not self.is_square():
            raise DomainError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return ONE
        work = [list(self.row(i)) for i in range(n)]
        det = ONE
        for col in range(n):
            src = None
            for r in range(col, n):
                if not work[r][col].is_zero():
                    src = r
                    break
            if src is None:
                return ZERO
            if src != col:
                work[col], work[src] = work[src], work[col]
                det = -det
            piv = work[col][col]
            det = det * piv
            inv = piv.inverse()
            for r in range(col + 1, n):
                f = work[r][col]
                if f.is_zero():
                    continue
                f = f * inv
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        return det

    def inverse(self) -> "ExactMatrix":
        if not self.is_square():
            raise DomainError("inverse of non-square matrix")
        res = self.rref()
        if res.rank != self.rows:
            raise DomainError("matrix is singular")
        return res.transform

    def pseudoinverse(self) -> "ExactMatrix":
        """Algebraic pseudoinverse from the rank factorization m = C R.

        C is the pivot columns of m and R the nonzero rows of its rref.
        R has an exact right inverse supported on the pivot columns, and the
        first ``rank`` rows of the recorded transform give a left inverse of
        C, so X = R_right * C_left satisfies m X m = m and X m X = X.  No
        inner product is involved; this is not a metric pseudoinverse.
        """
        res = self.rref()
        r = res.rank
        if r == 0:
            return ExactMatrix.zero(self.cols, self.rows)
        right = ExactMatrix.zero(self.cols, r)
        ent = list(right.entries)
        for j, pcol in enumerate(res.pivots):
            ent[pcol * r + j] = ONE
        right = ExactMatrix(self.cols, r, ent)
        left = ExactMatrix(r, self.rows,
                           [res.transform[i, j] for i in range(r)
                            for j in range(self.rows)])
        return right * left

    def commutator_with(self, other: "ExactMatrix") -> "ExactMatrix":
        return self * other - other * self


class RrefResult:
    __slots__ = ("rref", "pivots", "rank", "transform")

    def __init__(self, rref, pivots, rank, transform):
        self.rref = rref
        self.pivots = pivots
        self.rank = rank
        self.transform = transform


def rref_decompose(m: ExactMatrix):
    """(rref, pivots, rank, transform) with transform * m = rref."""
    res = m.rref()
    return res.rref, list(res.pivots), res.rank, res.transform


def subspace_bases(m: ExactMatrix):
    """(kernel basis, image basis), both as matrices of columns."""
    return m.kernel_basis(), m.image_basis()


def solve_columns(basis: ExactMatrix, vectors: ExactMatrix) -> ExactMatrix:
    """Solve basis * X = vectors where basis has full column rank.

    Raises DomainError if any column of ``vectors`` is outside the span.
    """
    stacked = basis.hstack(vectors)
    res = stacked.rref()
    if any(p >= basis.cols for p in res.pivots):
        raise DomainError("vector outside span of basis")
    if res.rank != basis.cols:
        raise DomainError("basis columns are dependent")
    ent = [res.rref[i, basis.cols + j] for i in range(basis.cols)
           for j in range(vectors.cols)]
    return ExactMatrix(basis.cols, vectors.cols, ent)


def in_span(basis: ExactMatrix, vectors: ExactMatrix) -> bool:
    """Exact containment test span(vectors) <= span(basis)."""
    if vectors.cols == 0:
        return True
    return basis.hstack(vectors).rank() == basis.rank()


class Subquotient:
    """A based subquotient Z/B of an ambient coordinate space.

    ``rep_basis`` columns are ambient vectors whose classes form the chosen
    basis of the quotient; ``lift_map`` is the section (quotient coordinates
    to ambient) and ``project_map`` the left inverse killing boundaries and a
    fixed complement of the cycle space.
    """

    __slots__ = ("ambient_dim", "cycle_basis", "boundary_basis", "rep_basis",
                 "lift_map", "project_map")

    def __init__(self, ambient_dim, cycle_basis, boundary_basis, rep_basis,
                 lift_map, project_map):
        self.ambient_dim = ambient_dim
        self.cycle_basis = cycle_basis
        self.boundary_basis = boundary_basis
        self.rep_basis = rep_basis
        self.lift_map = lift_map
        self.project_map = project_map

    @property
    def dim(self) -> int:
        return self.rep_basis.cols

    def project(self, vectors: ExactMatrix) -> ExactMatrix:
        return self.project_map * vectors

    def with_rep_transform(self, g: ExactMatrix) -> "Subquotient":
        """Recombine the representative basis by an invertible matrix g."""
        if g.rows != self.dim or g.cols != self.dim:
            raise DomainError("rebase shape mismatch")
        g_inv = g.inverse()
        rep = self.rep_basis * g
        return Subquotient(self.ambient_dim, self.cycle_basis,
                           self.boundary_basis, rep,
                           rep, g_inv * self.project_map)


def build_subquotient(ambient_dim: int, cycles: ExactMatrix,
                      boundaries: ExactMatrix) -> Subquotient:
    """Construct the based subquotient span(cycles)/span(boundaries).

    The representative basis extends the rref pivot basis of the boundaries
    to one of the cycles, so it is deterministic in the inputs.
    """
    if cycles.rows != ambient_dim or boundaries.rows != ambient_dim:
        raise DomainError("ambient dimension mismatch")
    if not in_span(cycles, boundaries):
        raise DomainError("not a subquotient")
    bnd = boundaries.image_basis()
    candidates = bnd.hstack(cycles)
    pivots = candidates.rref().pivots
    rep_cols = [p for p in pivots if p >= bnd.cols]
    rep = candidates.select_columns(rep_cols)
    # Extend boundary + representative columns to an ambient basis with
    # standard vectors; the projection reads off rep coordinates and kills
    # both the boundaries and the chosen standard complement.
    full = bnd.hstack(rep).hstack(ExactMatrix.identity(ambient_dim))
    fpivots = full.rref().pivots
    basis = full.select_columns(fpivots)
    if basis.cols != ambient_dim:
        raise RuntimeError("internal: basis extension failed")
    inv = basis.inverse()
    proj_rows = []
    for j, p in enumerate(fpivots):
        if bnd.cols <= p < bnd.cols + rep.cols:
            proj_rows.append(j)
    project = ExactMatrix(len(proj_rows), ambient_dim,
                          [inv[i, j] for i in proj_rows
                           for j in range(ambient_dim)])
    return Subquotient(ambient_dim, cycles, boundaries, rep, rep, project)


def kernel_subquotient(m: ExactMatrix) -> Subquotient:
    """ker m as a based subquotient (no boundaries)."""
    return build_subquotient(m.cols, m.kernel_basis(),
                             ExactMatrix.zero(m.cols, 0))


def cokernel_subquotient(m: ExactMatrix) -> Subquotient:
    """coker m = ambient/im m as a based subquotient."""
    return build_subquotient(m.rows, ExactMatrix.identity(m.rows),
                             m.image_basis())


def induced_map(m: ExactMatrix, src: Subquotient, dst: Subquotient) -> ExactMatrix:
    """Matrix of the map induced by m between two subquotients.

    Checked exactly: m must carry cycles into cycles and boundaries into
    boundaries, otherwise the induced map does not exist.
    """
    if m.cols != src.ambient_dim or m.rows != dst.ambient_dim:
        raise DomainError("ambient shape mismatch")
    if not in_span(dst.cycle_basis, m * src.cycle_basis):
        raise DomainError("map does not descend")
    if not in_span(dst.boundary_basis, m * src.boundary_basis):
        raise DomainError("map does not descend")
    return dst.project_map * (m * src.lift_map)
