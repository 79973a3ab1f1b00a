"""Sparse exact linear algebra: matrices over Scalars, truncated series, or
matrix-valued rings, plus the tensor-leg bookkeeping used by the R-matrix
checks (Kronecker embedding, the weighted transposition t, the matrix D).

Index convention, fixed once for the whole package: the basis of
C^N (x) C^N is ordered with the FIRST tensor factor most significant, so a
pair (i, a) of 1-based indices maps to row (i-1)*N + (a-1) (0-based).
"""

from __future__ import annotations

from .scalars import Scalar, ONE, ZERO


class MatrixError(ArithmeticError):
    pass


class SingularMatrixError(MatrixError):
    def __init__(self, row):
        super().__init__(f"singular matrix: no usable pivot for row {row}")
        self.row = row


def _entry_is_zero(x) -> bool:
    return x.is_zero()


class SparseMat:
    """A sparse nrows x ncols matrix; entries indexed 0-based, stored as
    a dict of rows {i: {j: entry}} with no explicit zeros."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {}
        if rows:
            for i, row in rows.items():
                clean = {j: x for j, x in row.items() if not _entry_is_zero(x)}
                if clean:
                    self.rows[i] = clean

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_entries(nrows, ncols, entries) -> "SparseMat":
        """entries: iterable of (i, j, value), 0-based, summed on collision."""
        rows = {}
        for i, j, x in entries:
            row = rows.setdefault(i, {})
            row[j] = row[j] + x if j in row else x
        return SparseMat(nrows, ncols, rows)

    @staticmethod
    def identity(n, one=ONE) -> "SparseMat":
        return SparseMat(n, n, {i: {i: one} for i in range(n)})

    @staticmethod
    def zeros(nrows, ncols) -> "SparseMat":
        return SparseMat(nrows, ncols)

    @staticmethod
    def unit(n, i, j, value=ONE) -> "SparseMat":
        """value * e_ij on an n x n space (0-based)."""
        return SparseMat(n, n, {i: {j: value}})

    # -- access -----------------------------------------------------------

    def get(self, i, j, zero=ZERO):
        return self.rows.get(i, {}).get(j, zero)

    def entries(self):
        """Sorted iterator of (i, j, value)."""
        for i in sorted(self.rows):
            row = self.rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def first_nonzero(self):
        for i, j, x in self.entries():
            return i, j, x
        return None

    # -- arithmetic -------------------------------------------------------

    def _check_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise MatrixError("shape mismatch")

    def __add__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        self._check_shape(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            row = rows.setdefault(i, {})
            for j, x in r.items():
                row[j] = row[j] + x if j in row else x
        return SparseMat(self.nrows, self.ncols, rows)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SparseMat(
            self.nrows,
            self.ncols,
            {i: {j: -x for j, x in r.items()} for i, r in self.rows.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        if self.ncols != other.nrows:
            raise MatrixError("inner dimension mismatch")
        rows = {}
        for i, arow in self.rows.items():
            out = {}
            for k, a in arow.items():
                brow = other.rows.get(k)
                if not brow:
                    continue
                for j, b in brow.items():
                    prod = a * b
                    out[j] = out[j] + prod if j in out else prod
            if out:
                rows[i] = out
        return SparseMat(self.nrows, other.ncols, rows)

    def scale(self, c) -> "SparseMat":
        """Left-multiply every entry by c."""
        return SparseMat(
            self.nrows,
            self.ncols,
            {i: {j: c * x for j, x in r.items()} for i, r in self.rows.items()},
        )

    def scale_right(self, c) -> "SparseMat":
        return SparseMat(
            self.nrows,
            self.ncols,
            {i: {j: x * c for j, x in r.items()} for i, r in self.rows.items()},
        )

    def transpose(self) -> "SparseMat":
        rows = {}
        for i, r in self.rows.items():
            for j, x in r.items():
                rows.setdefault(j, {})[i] = x
        return SparseMat(self.ncols, self.nrows, rows)

    def __eq__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return (self - other).is_zero()

    def kron(self, other) -> "SparseMat":
        """Kronecker product, first factor most significant."""
        rows = {}
        for i, ra in self.rows.items():
            for k, rb in other.rows.items():
                out = {}
                for j, a in ra.items():
                    for l, b in rb.items():
                        out[j * other.ncols + l] = a * b
                rows[i * other.nrows + k] = out
        return SparseMat(
            self.nrows * other.nrows, self.ncols * other.ncols, rows
        )

    def inverse(self, one=ONE) -> "SparseMat":
        """Exact inverse by Gauss-Jordan elimination.

        Entries must support inverse(); pivots are chosen as the first row
        whose candidate entry is invertible, so this works over the Scalar
        field and over rings where invertibility can fail (series rings),
        raising SingularMatrixError when no pivot works.
        """
        if self.nrows != self.ncols:
            raise MatrixError("inverse of a non-square matrix")
        n = self.nrows
        a = [[self.rows.get(i, {}).get(j) for j in range(n)] for i in range(n)]
        b = [[one if i == j else None for j in range(n)] for i in range(n)]

        def rowsub(target, factor, source):
            # target -= factor * source
            for j in range(n):
                for mat in (a, b):
                    x = mat[source][j]
                    if x is None:
                        continue
                    t = mat[target][j]
                    prod = factor * x
                    mat[target][j] = -prod if t is None else t - prod
                    if mat[target][j] is not None and mat[target][j].is_zero():
                        mat[target][j] = None

        for col in range(n):
            piv = None
            pinv = None
            for r in range(col, n):
                x = a[r][col]
                if x is None:
                    continue
                try:
                    pinv = x.inverse()
                except ArithmeticError:
                    continue
                piv = r
                break
            if piv is None:
                raise SingularMatrixError(col)
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            for j in range(n):
                if a[col][j] is not None:
                    a[col][j] = pinv * a[col][j]
                if b[col][j] is not None:
                    b[col][j] = pinv * b[col][j]
            for r in range(n):
                if r != col and a[r][col] is not None:
                    rowsub(r, a[r][col], col)
        rows = {}
        for i in range(n):
            row = {j: x for j, x in enumerate(b[i]) if x is not None and not x.is_zero()}
            if row:
                rows[i] = row
        return SparseMat(n, n, rows)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "nrows": self.nrows,
            "ncols": self.ncols,
            "entries": [[i, j, str(x)] for i, j, x in self.entries()],
        }

    def __str__(self):
        return "\n".join(f"[{i},{j}] = {x}" for i, j, x in self.entries())


# -- tensor-leg bookkeeping -------------------------------------------------


def embed_leg(op: SparseMat, legs, N: int) -> SparseMat:
    """Embed an operator on C^N (x) C^N into legs (a, b) of C^N^(x)3.

    legs is a pair of distinct 1-based leg labels from {1, 2, 3}; the
    operator acts on those legs (in order) and as identity on the third.
    """
    a, b = legs
    if a == b or not {a, b} <= {1, 2, 3}:
        raise MatrixError(f"bad legs {legs}")
    if op.nrows != N * N or op.ncols != N * N:
        raise MatrixError("embed_leg expects an N^2 x N^2 operator")
    c = ({1, 2, 3} - {a, b}).pop()
    rows = {}
    stride = {1: N * N, 2: N, 3: 1}
    for rc, row in op.rows.items():
        i, k = divmod(rc, N)
        for cc, x in row.items():
            j, l = divmod(cc, N)
            for m in range(N):
                r = i * stride[a] + k * stride[b] + m * stride[c]
                s = j * stride[a] + l * stride[b] + m * stride[c]
                rows.setdefault(r, {})[s] = x
    return SparseMat(N**3, N**3, rows)


def transpose_t(m: SparseMat, alg) -> SparseMat:
    """The weighted transposition e_ij -> e_j'i' on an N x N matrix."""
    N = alg.N
    if m.nrows != N or m.ncols != N:
        raise MatrixError("transpose_t expects an N x N matrix")
    rows = {}
    for i, row in m.rows.items():
        for j, x in row.items():
            # e_ij component maps to e_{j', i'}: entry (i,j) -> (j', i')
            rows.setdefault(N - 1 - j, {})[N - 1 - i] = x
    return SparseMat(N, N, rows)


def transpose_t1(m: SparseMat, alg) -> SparseMat:
    """Partial transposition t applied to the first tensor factor of an
    operator on C^N (x) C^N."""
    N = alg.N
    if m.nrows != N * N or m.ncols != N * N:
        raise MatrixError("transpose_t1 expects an N^2 x N^2 operator")
    rows = {}
    for rc, row in m.rows.items():
        i, a = divmod(rc, N)
        for cc, x in row.items():
            j, b = divmod(cc, N)
            r = (N - 1 - j) * N + a
            s = (N - 1 - i) * N + b
            rows.setdefault(r, {})[s] = x
    return SparseMat(N * N, N * N, rows)


def dmat(alg) -> SparseMat:
    """The diagonal matrix D = diag(q^bar(1), ..., q^bar(N))."""
    return SparseMat(
        alg.N,
        alg.N,
        {i: {i: Scalar.q_pow(alg.bar(i + 1))} for i in range(alg.N)},
    )


def dmat_inverse(alg) -> SparseMat:
    return SparseMat(
        alg.N,
        alg.N,
        {i: {i: Scalar.q_pow(-alg.bar(i + 1))} for i in range(alg.N)},
    )
