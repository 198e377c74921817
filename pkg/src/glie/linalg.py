"""Dense exact linear algebra over GF(q): RREF, kernels, eigensplits,
subspace lattice operations.

Subspaces are always kept in reduced row echelon form, so two spans are
equal exactly when their row lists are equal.  Everything here is immutable
after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AmbientMismatch, NotDiagonalizable
from .fields import FieldElement, FieldSpec


def _as_vector(spec: FieldSpec, vec) -> tuple[FieldElement, ...]:
    out = []
    for x in vec:
        if isinstance(x, FieldElement):
            if x.spec != spec:
                raise AmbientMismatch("vector entry from a different field")
            out.append(x)
        else:
            out.append(spec.from_int(int(x)))
    return tuple(out)


def rref_rows(spec: FieldSpec, rows):
    """Reduced row echelon form of a list of vectors; returns (rows, pivots).

    Zero rows are dropped; pivot columns are strictly increasing with pivot
    entry 1 and zeros elsewhere in the pivot column.
    """
    work = [list(r) for r in rows]
    ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, len(work)):
            if not work[r][col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        inv = work[rank][col].inverse()
        work[rank] = [inv * x for x in work[rank]]
        for r in range(len(work)):
            if r != rank and not work[r][col].is_zero():
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[rank])]
        pivots.append(col)
        rank += 1
    return [tuple(r) for r in work[:rank]], pivots


@dataclass(frozen=True)
class SubspaceBasis:
    """Row-reduced basis of a subspace of F^ambient_dim."""

    spec: FieldSpec
    ambient_dim: int
    rows: tuple[tuple[FieldElement, ...], ...]

    @classmethod
    def from_vectors(cls, spec: FieldSpec, ambient_dim: int, vectors) -> "SubspaceBasis":
        vecs = [_as_vector(spec, v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector length {len(v)} != ambient {ambient_dim}")
        rows, _ = rref_rows(spec, vecs)
        return cls(spec, ambient_dim, tuple(rows))

    @classmethod
    def zero(cls, spec: FieldSpec, ambient_dim: int) -> "SubspaceBasis":
        return cls(spec, ambient_dim, ())

    @classmethod
    def full(cls, spec: FieldSpec, ambient_dim: int) -> "SubspaceBasis":
        one, zero = spec.one(), spec.zero()
        rows = tuple(
            tuple(one if i == j else zero for j in range(ambient_dim))
            for i in range(ambient_dim)
        )
        return cls(spec, ambient_dim, rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _check_compatible(self, other: "SubspaceBasis"):
        if self.ambient_dim != other.ambient_dim or self.spec != other.spec:
            raise AmbientMismatch("subspaces live in different ambient spaces")

    def contains(self, vector) -> bool:
        """Exact membership by reduction against the RREF rows."""
        v = list(_as_vector(self.spec, vector))
        if len(v) != self.ambient_dim:
            raise AmbientMismatch("vector has wrong length")
        for row in self.rows:
            pivot = next(i for i, x in enumerate(row) if not x.is_zero())
            if not v[pivot].is_zero():
                c = v[pivot]
                v = [a - c * b for a, b in zip(v, row)]
        return all(x.is_zero() for x in v)

    def contains_space(self, other: "SubspaceBasis") -> bool:
        self._check_compatible(other)
        return all(self.contains(r) for r in other.rows)

    def sum(self, other: "SubspaceBasis") -> "SubspaceBasis":
        self._check_compatible(other)
        return SubspaceBasis.from_vectors(
            self.spec, self.ambient_dim, list(self.rows) + list(other.rows)
        )

    def intersect(self, other: "SubspaceBasis") -> "SubspaceBasis":
        """Zassenhaus-style intersection via the kernel of the stacked system.

        A coefficient vector (x | y) with x*A = y*B lies in the kernel of the
        (a+b) x n matrix [A ; -B] transposed; the intersection is x*A.
        """
        self._check_compatible(other)
        if self.dim == 0 or other.dim == 0:
            return SubspaceBasis.zero(self.spec, self.ambient_dim)
        stacked = [list(r) for r in self.rows] + [[-x for x in r] for r in other.rows]
        m = MatrixGF.from_rows(self.spec, stacked).transpose()
        coeffs = m.kernel()
        vectors = []
        for c in coeffs.rows:
            vec = [self.spec.zero()] * self.ambient_dim
            for i, row in enumerate(self.rows):
                if not c[i].is_zero():
                    vec = [a + c[i] * b for a, b in zip(vec, row)]
            vectors.append(tuple(vec))
        return SubspaceBasis.from_vectors(self.spec, self.ambient_dim, vectors)

    def __le__(self, other: "SubspaceBasis") -> bool:
        return other.contains_space(self)

    def vectors(self):
        """All q^dim elements of the subspace, in deterministic order."""
        els = self.spec.elements()
        out = []

        def rec(i, acc):
            if i == len(self.rows):
                out.append(tuple(acc))
                return
            for c in els:
                rec(i + 1, [a + c * b for a, b in zip(acc, self.rows[i])])

        rec(0, [self.spec.zero()] * self.ambient_dim)
        return out


@dataclass(frozen=True)
class MatrixGF:
    """Dense matrix over GF(q), row-major, immutable."""

    spec: FieldSpec
    rows: int
    cols: int
    entries: tuple[tuple[FieldElement, ...], ...]

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows) -> "MatrixGF":
        ents = tuple(_as_vector(spec, r) for r in rows)
        ncols = len(ents[0]) if ents else 0
        if any(len(r) != ncols for r in ents):
            raise AmbientMismatch("ragged matrix rows")
        return cls(spec, len(ents), ncols, ents)

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "MatrixGF":
        one, zero = spec.one(), spec.zero()
        return cls(spec, n, n, tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        ))

    @classmethod
    def zero(cls, spec: FieldSpec, rows: int, cols: int) -> "MatrixGF":
        z = spec.zero()
        return cls(spec, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "MatrixGF":
        return MatrixGF(self.spec, self.cols, self.rows,
                        tuple(zip(*self.entries)) if self.entries else ())

    def __add__(self, other: "MatrixGF") -> "MatrixGF":
        return MatrixGF(self.spec, self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        ))

    def __sub__(self, other: "MatrixGF") -> "MatrixGF":
        return MatrixGF(self.spec, self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        ))

    def scale(self, c: FieldElement) -> "MatrixGF":
        return MatrixGF(self.spec, self.rows, self.cols, tuple(
            tuple(c * a for a in r) for r in self.entries
        ))

    def matmul(self, other: "MatrixGF") -> "MatrixGF":
        if self.cols != other.rows:
            raise AmbientMismatch("inner dimensions disagree")
        bt = other.transpose().entries
        z = self.spec.zero()
        out = []
        for r in self.entries:
            row = []
            for c in bt:
                acc = z
                for a, b in zip(r, c):
                    acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return MatrixGF(self.spec, self.rows, other.cols, tuple(out))

    def matvec(self, vec) -> tuple[FieldElement, ...]:
        v = _as_vector(self.spec, vec)
        z = self.spec.zero()
        out = []
        for r in self.entries:
            acc = z
            for a, b in zip(r, v):
                acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def rref(self):
        """Returns (rref: MatrixGF, rank: int, pivots: list[int])."""
        rows, pivots = rref_rows(self.spec, self.entries)
        z = self.spec.zero()
        padded = list(rows) + [tuple(z for _ in range(self.cols))] * (self.rows - len(rows))
        return MatrixGF(self.spec, self.rows, self.cols, tuple(padded)), len(pivots), pivots

    def rank(self) -> int:
        return self.rref()[1]

    def kernel(self) -> SubspaceBasis:
        """Right kernel {v : M v = 0}, as an RREF SubspaceBasis of F^cols."""
        reduced, _, pivots = self.rref()
        free_cols = [c for c in range(self.cols) if c not in pivots]
        one, zero = self.spec.one(), self.spec.zero()
        basis = []
        for fc in free_cols:
            v = [zero] * self.cols
            v[fc] = one
            for r, pc in enumerate(pivots):
                v[pc] = -reduced.entries[r][fc]
            basis.append(tuple(v))
        return SubspaceBasis.from_vectors(self.spec, self.cols, basis)

    def inverse(self) -> "MatrixGF":
        if self.rows != self.cols:
            raise AmbientMismatch("only square matrices invert")
        n = self.rows
        aug = [list(r) + list(MatrixGF.identity(self.spec, n).entries[i])
               for i, r in enumerate(self.entries)]
        rows, pivots = rref_rows(self.spec, aug)
        if pivots != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return MatrixGF.from_rows(self.spec, [r[n:] for r in rows])

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.entries for x in r)

    def __str__(self):
        return "\n".join("[" + " ".join(str(x) for x in r) + "]" for r in self.entries)


@dataclass(frozen=True)
class EigenBasis:
    """Eigenvalues found over the ground field, with their eigenspaces."""

    pairs: tuple[tuple[FieldElement, SubspaceBasis], ...]
    diagonalizable: bool
    ambient_dim: int

    def eigenvalues(self):
        return [lam for lam, _ in self.pairs]

    def space_for(self, lam: FieldElement) -> SubspaceBasis | None:
        for mu, space in self.pairs:
            if mu == lam:
                return space
        return None


def eigen_decomposition(m: MatrixGF) -> EigenBasis:
    """Eigensplit by enumerating every candidate eigenvalue in GF(q).

    q is tiny in all intended uses, so scanning all q shifts m - lam*I beats
    any factorization machinery.  Non-diagonalizable input is a legal result.
    """
    if m.rows != m.cols:
        raise AmbientMismatch("eigen decomposition needs a square matrix")
    n = m.rows
    ident = MatrixGF.identity(m.spec, n)
    pairs = []
    total = 0
    for lam in m.spec.elements():
        ker = (m - ident.scale(lam)).kernel()
        if ker.dim > 0:
            pairs.append((lam, ker))
            total += ker.dim
    return EigenBasis(tuple(pairs), total == n, n)


def eigen_basis_matrix(eig: EigenBasis, spec: FieldSpec) -> MatrixGF:
    """Columns = concatenated eigenvectors; only meaningful when diagonalizable."""
    if not eig.diagonalizable:
        raise NotDiagonalizable("no full eigenbasis over the ground field")
    cols = [row for _, space in eig.pairs for row in space.rows]
    return MatrixGF.from_rows(spec, cols).transpose()
