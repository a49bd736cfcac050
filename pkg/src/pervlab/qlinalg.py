"""Exact linear algebra over the rationals.

Every matrix is an immutable :class:`RatMatrix` of :class:`fractions.Fraction`
entries.  Row reduction is plain Gauss-Jordan with leftmost-pivot selection,
so every derived basis (kernels, images, cokernel complements) is
deterministic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "RatMatrix",
    "Subspace",
    "Cokernel",
    "SingularMatrixError",
    "to_rational",
    "to_rational_vector",
    "identity",
    "zeros",
    "column",
    "rref",
    "rank",
    "kernel_basis",
    "image_basis",
    "unipotency_index",
    "inverse",
    "solve",
    "cokernel_projection",
    "block_diag",
    "kron",
    "tensor_identity",
    "parse_matrix",
    "parse_vector",
    "matrix_to_json",
    "vector_to_json",
]


class SingularMatrixError(ValueError):
    pass


def to_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise ValueError(f"not a rational literal: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count is ambiguous for an empty row list")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix literal")
        return cls(len(rows), cols, tuple(to_rational(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RatMatrix":
        columns = [list(c) for c in columns]
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def _check_same_shape(self, other: "RatMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "RatMatrix":
        c = to_rational(c)
        return RatMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            for j in range(m):
                s = Fraction(0)
                for t in range(k):
                    x = arow[t]
                    if x:
                        s += x * b[t * m + j]
                out.append(s)
        return RatMatrix(n, m, tuple(out))

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for a {self.shape} matrix")
        v = [to_rational(x) for x in v]
        return tuple(
            sum((self.entries[i * self.cols + j] * v[j] for j in range(self.cols)), Fraction(0))
            for i in range(self.rows)
        )

    def power(self, k: int) -> "RatMatrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        out = identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack row mismatch")
        return RatMatrix.from_rows(
            [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack column mismatch")
        return RatMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def select_rows(self, idx: Iterable[int]) -> "RatMatrix":
        idx = list(idx)
        return RatMatrix.from_rows([self.row(i) for i in idx], cols=self.cols)

    def select_cols(self, idx: Iterable[int]) -> "RatMatrix":
        return self.T.select_rows(idx).T

    def __str__(self) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"<{self.rows}x{self.cols} empty>"
        cells = [[str(x) for x in self.row(i)] for i in range(self.rows)]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(w) for c in r) + " ]" for r in cells)


def to_rational_vector(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(to_rational(x) for x in v)


def identity(n: int) -> RatMatrix:
    return RatMatrix(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))


def zeros(rows: int, cols: int) -> RatMatrix:
    return RatMatrix(rows, cols, (Fraction(0),) * (rows * cols))


def column(v: Sequence) -> RatMatrix:
    return RatMatrix(len(v), 1, tuple(to_rational(x) for x in v))


def rref(M: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns (leftmost pivots)."""
    a = M.to_rows()
    pivots = []
    r = 0
    for c in range(M.cols):
        if r == M.rows:
            break
        p = next((i for i in range(r, M.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(M.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RatMatrix.from_rows(a, cols=M.cols), tuple(pivots)


def rank(M: RatMatrix) -> int:
    return len(rref(M)[1])


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: RatMatrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise ValueError("basis rows must equal the ambient dimension")
        if rank(self.basis) != self.basis.cols:
            raise ValueError("basis columns are linearly dependent")

    @property
    def dim(self) -> int:
        return self.basis.cols

    def contains(self, other: "Subspace | RatMatrix") -> bool:
        B = other.basis if isinstance(other, Subspace) else other
        return rank(self.basis.hstack(B)) == self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and self.contains(other)
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))


def kernel_basis(M: RatMatrix) -> Subspace:
    R, pivots = rref(M)
    free = [j for j in range(M.cols) if j not in pivots]
    cols = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        cols.append(v)
    return Subspace(M.cols, RatMatrix.from_columns(cols, M.cols))


def image_basis(M: RatMatrix) -> Subspace:
    """Column space, spanned by the pivot columns of ``M`` itself."""
    _, pivots = rref(M)
    return Subspace(M.rows, M.select_cols(pivots))


def unipotency_index(T: RatMatrix) -> int | None:
    """Least k >= 1 with (T - I)^k = 0, or None if T is not unipotent."""
    if not T.is_square():
        raise ValueError("unipotency_index needs a square matrix")
    N = T - identity(T.rows)
    P = N
    for k in range(1, max(T.rows, 1) + 1):
        if P.is_zero():
            return k
        P = P @ N
    return None


def inverse(M: RatMatrix) -> RatMatrix:
    if not M.is_square():
        raise SingularMatrixError("non-square matrix has no inverse")
    n = M.rows
    R, pivots = rref(M.hstack(identity(n)))
    if pivots[:n] != tuple(range(n)):
        raise SingularMatrixError("matrix is singular")
    return R.select_cols(range(n, 2 * n))


def solve(A: RatMatrix, B: RatMatrix) -> RatMatrix | None:
    """A particular solution X of A X = B, or None if inconsistent.

    Free variables are set to zero.
    """
    if A.rows != B.rows:
        raise ValueError("row mismatch in solve")
    R, pivots = rref(A.hstack(B))
    if any(p >= A.cols for p in pivots):
        return None
    X = [[Fraction(0)] * B.cols for _ in range(A.cols)]
    for i, p in enumerate(pivots):
        for j in range(B.cols):
            X[p][j] = R[i, A.cols + j]
    return RatMatrix.from_rows(X, cols=B.cols)


@dataclass(frozen=True)
class Cokernel:
    """Quotient ``Q^m / im(M)`` realised on a coordinate complement.

    ``projection`` is (m - r) x m with ``projection @ M == 0``; ``section``
    is the m x (m - r) inclusion of the complement coordinates, so that
    ``projection @ section`` is the identity.
    """

    projection: RatMatrix
    section: RatMatrix
    complement: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.projection.rows

    def induced(self, g: RatMatrix, source: "Cokernel") -> RatMatrix:
        """Map ``coker(source) -> coker(self)`` induced by ``g``.

        ``g`` must carry the image killed by ``source`` into the image
        killed by ``self``; this is checked.
        """
        out = self.projection @ g @ source.section
        if not (self.projection @ g @ source.killed).is_zero():
            raise ValueError("map does not descend to the cokernels")
        return out

    @property
    def killed(self) -> RatMatrix:
        # basis of the image being quotiented out
        m = self.projection.cols
        return kernel_basis(self.projection).basis if m else zeros(0, 0)


def cokernel_projection(M: RatMatrix) -> Cokernel:
    """Projection onto the coordinate complement of ``im(M)``.

    The complement is spanned by the standard basis vectors at the non-pivot
    positions of the reduced echelon form of ``M^T``.
    """
    m = M.rows
    _, pivots = rref(M.T)
    complement = tuple(i for i in range(m) if i not in pivots)
    if pivots:
        B = image_basis(M).basis
    else:
        B = zeros(m, 0)
    C = identity(m).select_cols(complement) if complement else zeros(m, 0)
    full = B.hstack(C)
    r = B.cols
    inv = inverse(full) if m else zeros(0, 0)
    P = inv.select_rows(range(r, m)) if complement else zeros(0, m)
    return Cokernel(P, C, complement)


def block_diag(*mats: RatMatrix) -> RatMatrix:
    rows = sum(A.rows for A in mats)
    cols = sum(A.cols for A in mats)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for A in mats:
        for i in range(A.rows):
            for j in range(A.cols):
                out[r0 + i][c0 + j] = A[i, j]
        r0 += A.rows
        c0 += A.cols
    return RatMatrix.from_rows(out, cols=cols)


def kron(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    rows, cols = A.rows * B.rows, A.cols * B.cols
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for i in range(A.rows):
        for j in range(A.cols):
            a = A[i, j]
            if not a:
                continue
            for k in range(B.rows):
                for l in range(B.cols):
                    out[i * B.rows + k][j * B.cols + l] = a * B[k, l]
    return RatMatrix.from_rows(out, cols=cols)


def tensor_identity(g: RatMatrix, k: int) -> RatMatrix:
    """``g ⊗ I_k``: the map ``g`` acting on ``k`` copies, blocked by g-index."""
    return kron(g, identity(k))


# -- literal syntax -----------------------------------------------------------

def parse_matrix(obj, rows: int | None = None, cols: int | None = None) -> RatMatrix:
    """Build a matrix from a JSON array-of-arrays (or its text).

    Entries may be integers or ``"p/q"`` strings.  ``[]`` is accepted for
    empty matrices when the shape is supplied.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ValueError("matrix literal must be an array of arrays")
    if all(not r for r in obj):
        rows = len(obj) if rows is None else rows
        cols = 0 if cols is None else cols
        if rows * cols != 0 or (obj and len(obj) != rows):
            raise ValueError(f"empty literal for a {rows}x{cols} matrix")
        return zeros(rows, cols)
    M = RatMatrix.from_rows(obj)
    if rows is not None and M.rows != rows or cols is not None and M.cols != cols:
        raise ValueError(f"expected a {rows}x{cols} matrix, got {M.rows}x{M.cols}")
    return M


def parse_vector(obj) -> tuple[Fraction, ...]:
    """Parse ``[1, "1/2"]``, ``"(1,0)"`` or ``"[1,0]"``."""
    if isinstance(obj, str):
        s = obj.strip()
        if s.startswith("(") and s.endswith(")"):
            s = "[" + s[1:-1] + "]"
        parts = [p.strip() for p in s.strip("[]").split(",") if p.strip()]
        return tuple(to_rational(p) for p in parts)
    return tuple(to_rational(x) for x in obj)


def _rat_json(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_json(M: RatMatrix) -> list:
    return [[_rat_json(x) for x in M.row(i)] for i in range(M.rows)]


def vector_to_json(v: Sequence[Fraction]) -> list:
    return [_rat_json(to_rational(x)) for x in v]
