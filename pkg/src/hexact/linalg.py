"""Exact dense matrices over a :class:`~hexact.rings.Ring`.

Matrices are small (desk-scale homological algebra), so everything is plain
Python lists of ring elements; integers are arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .rings import Ring


class ExactMatrix:
    """Immutable ``rows x cols`` matrix with entries in ``ring``.

    Empty shapes (0 rows or 0 columns) are valid and common.
    """

    __slots__ = ("ring", "rows", "cols", "data", "_hash")

    def __init__(self, ring: Ring, rows: int, cols: int, data: Iterable[Sequence] | None = None):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        if data is None:
            z = ring.zero
            self.data = tuple((z,) * cols for _ in range(rows))
        else:
            self.data = tuple(tuple(ring(x) for x in row) for row in data)
            if len(self.data) != rows or any(len(r) != cols for r in self.data):
                raise ValueError(f"entries do not fit shape {rows}x{cols}")
        self._hash = None

    @classmethod
    def _raw(cls, ring, rows, cols, data) -> "ExactMatrix":
        m = cls.__new__(cls)
        m.ring, m.rows, m.cols = ring, rows, cols
        m.data = tuple(map(tuple, data))
        m._hash = None
        return m

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise ValueError("column count needed for a matrix without rows")
            cols = len(rows[0])
        return cls(ring, len(rows), cols, rows)

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "ExactMatrix":
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "ExactMatrix":
        z, o = ring.zero, ring.one
        return cls._raw(ring, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, ring: Ring, n: int, c) -> "ExactMatrix":
        return cls.identity(ring, n) * c

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.data)
        return f"ExactMatrix({self.ring}, {self.rows}x{self.cols}, [{body}])"

    def _check_same(self, other):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        red = self.ring.reduce
        return ExactMatrix._raw(self.ring, self.rows, self.cols,
                                [[red(a + b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        red = self.ring.reduce
        return ExactMatrix._raw(self.ring, self.rows, self.cols,
                                [[red(a - b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self) -> "ExactMatrix":
        red = self.ring.reduce
        return ExactMatrix._raw(self.ring, self.rows, self.cols, [[red(-a) for a in r] for r in self.data])

    def __mul__(self, c) -> "ExactMatrix":
        c = self.ring(c)
        red = self.ring.reduce
        return ExactMatrix._raw(self.ring, self.rows, self.cols, [[red(c * a) for a in r] for r in self.data])

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        red = self.ring.reduce
        z = self.ring.zero
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            out.append([red(sum((a * b for a, b in zip(r, c) if a and b), z)) for c in cols])
        return ExactMatrix._raw(self.ring, self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix._raw(self.ring, self.cols, self.rows, list(zip(*self.data)) if self.rows else [[]] * self.cols)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "ExactMatrix":
        return ExactMatrix._raw(self.ring, r1 - r0, c1 - c0, [r[c0:c1] for r in self.data[r0:r1]])

    def column(self, j: int) -> list:
        return [r[j] for r in self.data]


def hstack(ring: Ring, rows: int, mats: Sequence[ExactMatrix]) -> ExactMatrix:
    """Concatenate matrices side by side; ``rows`` fixes the shape when empty."""
    for m in mats:
        if m.rows != rows:
            raise ValueError(f"hstack: expected {rows} rows, got {m.rows}")
    data = [sum((m.data[i] for m in mats), ()) for i in range(rows)]
    return ExactMatrix._raw(ring, rows, sum(m.cols for m in mats), data)


def vstack(ring: Ring, cols: int, mats: Sequence[ExactMatrix]) -> ExactMatrix:
    for m in mats:
        if m.cols != cols:
            raise ValueError(f"vstack: expected {cols} columns, got {m.cols}")
    data = [r for m in mats for r in m.data]
    return ExactMatrix._raw(ring, sum(m.rows for m in mats), cols, data)


def block(ring: Ring, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: dict) -> ExactMatrix:
    """Assemble a block matrix; ``blocks[(i, j)]`` fills block row i, column j, missing blocks are 0."""
    row_mats = []
    for i, r in enumerate(row_sizes):
        parts = []
        for j, c in enumerate(col_sizes):
            b = blocks.get((i, j))
            if b is None:
                b = ExactMatrix.zeros(ring, r, c)
            elif b.shape != (r, c):
                raise ValueError(f"block {(i, j)} has shape {b.shape}, expected {(r, c)}")
            parts.append(b)
        row_mats.append(hstack(ring, r, parts))
    return vstack(ring, sum(col_sizes), row_mats)


def block_diag(ring: Ring, mats: Sequence[ExactMatrix]) -> ExactMatrix:
    return block(ring, [m.rows for m in mats], [m.cols for m in mats], {(i, i): m for i, m in enumerate(mats)})


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    red = a.ring.reduce
    data = []
    for ra in a.data:
        for rb in b.data:
            data.append([red(x * y) for x in ra for y in rb])
    return ExactMatrix._raw(a.ring, a.rows * b.rows, a.cols * b.cols, data)


def vec(m: ExactMatrix) -> list:
    """Row-major flattening; ``vec(P X Q) = kron(P, Q.T) @ vec(X)``."""
    return [x for r in m.data for x in r]


def unvec(ring: Ring, values: Sequence, rows: int, cols: int) -> ExactMatrix:
    return ExactMatrix._raw(ring, rows, cols, [list(values[i * cols:(i + 1) * cols]) for i in range(rows)])


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with ``S`` diagonal and ``divisors`` its nonzero diagonal.

    ``U_inv`` is the inverse of ``U``; it is kept because column spaces and
    module isomorphisms need it.
    """

    U: ExactMatrix
    S: ExactMatrix
    V: ExactMatrix
    U_inv: ExactMatrix
    divisors: tuple

    @property
    def rank(self) -> int:
        return len(self.divisors)


def smith_normal_form(A: ExactMatrix) -> SmithDecomposition:
    """Diagonalise ``A`` by invertible row and column operations.

    Pivots are chosen with smallest Euclidean norm to limit entry growth.
    Over a field the result is the rank normal form (a 0/1 diagonal).
    """
    R = A.ring
    m, n = A.rows, A.cols
    red = R.reduce
    a = [list(r) for r in A.data]
    zero, one = R.zero, R.one
    U = [[one if i == j else zero for j in range(m)] for i in range(m)]
    Ui = [[one if i == j else zero for j in range(m)] for i in range(m)]
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]
    norm = R.norm

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ad, asrc = a[dst], a[src]
        for k in range(n):
            if asrc[k]:
                ad[k] = red(ad[k] + q * asrc[k])
        ud, us = U[dst], U[src]
        for k in range(m):
            if us[k]:
                ud[k] = red(ud[k] + q * us[k])
        for row in Ui:  # inverse: col_src -= q * col_dst
            if row[dst]:
                row[src] = red(row[src] - q * row[dst])

    def add_col(dst, src, q):
        for row in a:
            if row[src]:
                row[dst] = red(row[dst] + q * row[src])
        for row in V:
            if row[src]:
                row[dst] = red(row[dst] + q * row[src])

    divisors = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            ai = a[i]
            for j in range(t, n):
                x = ai[j]
                if x and (best is None or norm(x) < best[0]):
                    best = (norm(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, red(-R.quo(a[i][t], p)))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, red(-R.quo(a[t][j], p)))
                    if a[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t + 1, m):
                    if a[i][t] and (best is None or norm(a[i][t]) < best[0]):
                        best = (norm(a[i][t]), i, "r")
                for j in range(t + 1, n):
                    if a[t][j] and (best is None or norm(a[t][j]) < best[0]):
                        best = (norm(a[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            if not R.is_field:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] and not R.divides(p, a[i][j]):
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    add_row(t, bad, one)
                    continue
            break
        u = R.normalize_unit(a[t][t])
        if u != one:
            a[t] = [red(u * x) for x in a[t]]
            U[t] = [red(u * x) for x in U[t]]
            ui = R.inverse(u)
            for row in Ui:
                row[t] = red(row[t] * ui)
        divisors.append(a[t][t])
        t += 1

    return SmithDecomposition(
        U=ExactMatrix._raw(R, m, m, U),
        S=ExactMatrix._raw(R, m, n, a),
        V=ExactMatrix._raw(R, n, n, V),
        U_inv=ExactMatrix._raw(R, m, m, Ui),
        divisors=tuple(divisors),
    )


def solve_matrix_equation(A: ExactMatrix, B: ExactMatrix, snf: SmithDecomposition | None = None) -> ExactMatrix | None:
    """Return some ``X`` with ``A @ X == B`` over the ring, or ``None`` if there is none.

    The returned solution depends linearly on ``B`` (free variables are set to
    zero), so solving column blocks separately or together gives the same
    matrix.
    """
    if A.rows != B.rows:
        raise ValueError(f"dimension mismatch: A has {A.rows} rows, B has {B.rows}")
    R = A.ring
    if snf is None:
        snf = smith_normal_form(A)
    C = snf.U @ B
    r = snf.rank
    for i in range(r, A.rows):
        if any(C.data[i]):
            return None
    y = []
    for i in range(A.cols):
        if i < r:
            d = snf.divisors[i]
            row = []
            for x in C.data[i]:
                if not R.divides(d, x):
                    return None
                row.append(R.quo(x, d) if R.is_field else x // d)
            y.append(row)
        else:
            y.append([R.zero] * B.cols)
    return snf.V @ ExactMatrix._raw(R, A.cols, B.cols, y)


def nullspace(A: ExactMatrix, snf: SmithDecomposition | None = None) -> ExactMatrix:
    """Columns form a basis of ``{x : A x = 0}`` (a lattice basis over Z)."""
    if snf is None:
        snf = smith_normal_form(A)
    return snf.V.submatrix(0, A.cols, snf.rank, A.cols)


def column_space_basis(A: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of the submodule spanned by the columns of ``A``."""
    snf = smith_normal_form(A)
    R = A.ring
    cols = []
    for i, d in enumerate(snf.divisors):
        cols.append([R.reduce(d * x) for x in snf.U_inv.column(i)])
    return ExactMatrix._raw(R, A.rows, len(cols), list(zip(*cols)) if cols else [[]] * A.rows)
