"""Exact linear algebra over QQ and GF(p): rank, reduced echelon forms, kernels.

Rank over QQ uses fraction-free (Bareiss) elimination on integer rows after
clearing denominators. Over GF(p) plain Gaussian elimination on residues is
used. Kernels come out in reduced column echelon form, which is unique for a
given subspace, so results never depend on elimination details.
"""

from math import lcm

from .fields import QQ, PrimeField


class Matrix:
    """Immutable dense matrix with exact entries.

    ``data`` is a tuple of row tuples. ``rows``/``cols`` are stored
    separately so that 0-row and 0-column shapes survive.
    """

    __slots__ = ("rows", "cols", "data", "field")

    def __init__(self, rows, cols, data, field=QQ):
        data = tuple(tuple(field(x) for x in row) for row in data)
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not match shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.data = data
        self.field = field

    @classmethod
    def from_rows(cls, rows, field=QQ, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows, field)

    @classmethod
    def from_columns(cls, columns, nrows, field=QQ):
        columns = [list(c) for c in columns]
        data = [[c[i] for c in columns] for i in range(nrows)]
        return cls(nrows, len(columns), data, field)

    @classmethod
    def zeros(cls, rows, cols, field=QQ):
        z = field.zero
        return cls(rows, cols, [[z] * cols for _ in range(rows)], field)

    @classmethod
    def identity(cls, n, field=QQ):
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)], field)

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return Matrix(self.cols, self.rows, [self.column(j) for j in range(self.cols)], self.field)

    T = property(transpose)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                      self.field)

    def scale(self, c):
        return Matrix(self.rows, self.cols, [[c * a for a in r] for r in self.data], self.field)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            cols = other.columns()
            zero = self.field.zero
            return Matrix(self.rows, other.cols,
                          [[sum((a * b for a, b in zip(r, c)), zero) for c in cols]
                           for r in self.data],
                          self.field)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        zero = self.field.zero
        return tuple(sum((a * b for a, b in zip(r, vec)), zero) for r in self.data)

    def is_zero(self):
        return all(not x for r in self.data for x in r)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.data == other.data)

    def __hash__(self):
        return hash((self.shape, self.data))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.field!r})"

    def to_strings(self):
        from .fields import format_elem
        return [[format_elem(x) for x in r] for r in self.data]


def _integer_rows(data):
    out = []
    for r in data:
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append([x.numerator * (den // x.denominator) for x in r])
    return out


def bareiss_rank(int_rows, ncols):
    """Rank of an integer matrix by fraction-free elimination.

    Every division is exact: after step k each active entry equals a
    (k+1)-minor of the input.
    """
    a = [list(r) for r in int_rows]
    n = len(a)
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, n) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        prow = a[rank]
        for i in range(rank + 1, n):
            ri = a[i]
            f = ri[c]
            for j in range(c + 1, ncols):
                ri[j] = (ri[j] * p - f * prow[j]) // prev
            ri[c] = 0
        prev = p
        rank += 1
        if rank == n:
            break
    return rank


def _rank_mod_p(data, ncols, p):
    a = [[x.v for x in r] for r in data]
    n = len(a)
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, n) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        prow = a[rank]
        for i in range(rank + 1, n):
            f = a[i][c] * inv % p
            if f:
                ri = a[i]
                for j in range(c, ncols):
                    ri[j] = (ri[j] - f * prow[j]) % p
        rank += 1
        if rank == n:
            break
    return rank


def rank(m):
    if m.rows == 0 or m.cols == 0:
        return 0
    if isinstance(m.field, PrimeField):
        return _rank_mod_p(m.data, m.cols, m.field.p)
    # keep the wide dimension as columns: cheaper elimination
    data = m.data if m.rows <= m.cols else m.transpose().data
    ncols = max(m.rows, m.cols)
    return bareiss_rank(_integer_rows(data), ncols)


def rref(m):
    """Reduced row echelon form over the field. Returns (matrix, pivot columns)."""
    a = [list(r) for r in m.data]
    n = m.rows
    pivots = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        prow = a[r]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return Matrix(m.rows, m.cols, a, m.field), pivots


def _nullspace_vectors(m):
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    zero, one = m.field.zero, m.field.one
    vecs = []
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i, f]
        vecs.append(v)
    return vecs


def column_echelon(vectors, length, field=QQ):
    """Canonical basis of span(vectors) as columns in reduced column echelon form."""
    if not vectors:
        return Matrix(length, 0, [[] for _ in range(length)], field)
    red, pivots = rref(Matrix.from_rows(vectors, field, cols=length))
    basis = [red.row(i) for i in range(len(pivots))]
    return Matrix.from_columns(basis, length, field)


def right_kernel(m):
    """Basis of {v : m v = 0} as columns, reduced column echelon form, pivots 1."""
    return column_echelon(_nullspace_vectors(m), m.cols, m.field)


def left_kernel(m):
    """Basis of {w : w^T m = 0} as columns (right kernel of the transpose)."""
    return right_kernel(m.transpose())


def column_space(m):
    """Canonical basis of the column span, reduced column echelon form."""
    return column_echelon(m.columns(), m.rows, m.field)

