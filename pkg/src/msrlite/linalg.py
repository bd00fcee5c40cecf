"""Dense matrices over GF(2^w): product, rank, solve."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InconsistentInput, SingularMatrix
from .field import FieldSpec


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    spec: FieldSpec
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.int64)
        if data.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {data.shape}")
        if data.size and (data.min() < 0 or data.max() >= self.spec.order):
            raise ValueError(f"entries outside GF(2^{self.spec.w})")
        object.__setattr__(self, "data", data)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self.spec, self.data.T.copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.data, other.data)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return FieldMatrix(self.spec, self.data ^ other.data)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        return mat_mul(self, other)

    def __getitem__(self, key):
        return self.data[key]

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> "FieldMatrix":
        return cls(spec, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, spec: FieldSpec, size: int) -> "FieldMatrix":
        return cls(spec, np.eye(size, dtype=np.int64))

    def nnz(self) -> int:
        return int(np.count_nonzero(self.data))


def mat_mul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return FieldMatrix(a.spec, matmul_array(a.spec, a.data, b.data))


def matmul_array(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0],) + b.shape[1:], dtype=np.int64)
    for j in range(a.shape[1]):
        col = a[:, j]
        if not col.any():
            continue
        if b.ndim == 1:
            out ^= spec.mul_array(col, b[j])
        else:
            out ^= spec.outer(col, b[j])
    return out


def row_reduce(spec: FieldSpec, m: np.ndarray, ncols: int | None = None,
               full: bool = True) -> tuple[np.ndarray, list[int]]:
    """Gaussian elimination on a copy of ``m``, pivoting on the first ``ncols`` columns.

    Returns the reduced matrix and pivot columns. With ``full`` the result is
    in reduced row echelon form, otherwise only rows below each pivot are cleared.
    """
    m = np.array(m, dtype=np.int64, copy=True)
    nrows = m.shape[0]
    ncols = m.shape[1] if ncols is None else ncols
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.flatnonzero(m[row:, col])
        if nz.size == 0:
            continue
        p = row + int(nz[0])
        if p != row:
            m[[row, p]] = m[[p, row]]
        lead = int(m[row, col])
        if lead != 1:
            m[row] = spec.mul_array(m[row], spec.inv(lead))
        factors = m[:, col].copy()
        factors[row] = 0
        if not full:
            factors[:row] = 0
        targets = np.flatnonzero(factors)
        if targets.size:
            m[targets] ^= spec.outer(factors[targets], m[row])
        pivots.append(col)
        row += 1
    return m, pivots


def mat_rank(m: FieldMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = row_reduce(m.spec, m.data, full=False)
    return len(pivots)


def batch_full_rank(spec: FieldSpec, mats: np.ndarray) -> np.ndarray:
    """Full-rank flags for a stack of square matrices, shape (B, m, m)."""
    a = np.array(mats, dtype=np.int64, copy=True)
    nb, m, _ = a.shape
    ok = np.ones(nb, dtype=bool)
    idx = np.arange(nb)
    for c in range(m):
        nz = a[:, c:, c] != 0
        ok &= nz.any(axis=1)
        piv = c + np.argmax(nz, axis=1)
        top = a[idx, c].copy()
        a[idx, c] = a[idx, piv]
        a[idx, piv] = top
        inv = spec.inv_array(a[:, c, c])
        a[:, c] = spec.mul_array(a[:, c], inv[:, None])
        factors = a[:, :, c].copy()
        factors[:, :c + 1] = 0
        a ^= spec.mul_array(factors[:, :, None], a[:, None, c, :])
    return ok


def mat_solve(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """x with a @ x == b for square invertible ``a``."""
    if a.rows != a.cols:
        raise DimensionMismatch(f"mat_solve needs a square matrix, got {a.shape}")
    if b.rows != a.rows:
        raise DimensionMismatch(f"right-hand side has {b.rows} rows, expected {a.rows}")
    n = a.rows
    reduced, pivots = row_reduce(a.spec, np.hstack([a.data, b.data]), ncols=n)
    if len(pivots) < n:
        raise SingularMatrix(f"rank {len(pivots)} < {n}")
    return FieldMatrix(a.spec, reduced[:, n:])


def mat_inv(a: FieldMatrix) -> FieldMatrix:
    return mat_solve(a, FieldMatrix.identity(a.spec, a.rows))


def left_solver(a: FieldMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Factor a tall full-column-rank ``a`` (m x c, m >= c) for repeated solves.

    Returns ``(T, C)``: for any consistent right-hand side y, x = T @ y is the
    unique solution of a @ x = y and C @ y == 0. A nonzero C @ y means y is
    outside the column space.
    """
    m, c = a.shape
    if m < c:
        raise DimensionMismatch(f"system {a.shape} is underdetermined")
    aug = np.hstack([a.data, np.eye(m, dtype=np.int64)])
    reduced, pivots = row_reduce(a.spec, aug, ncols=c)
    if len(pivots) < c:
        raise SingularMatrix(f"column rank {len(pivots)} < {c}")
    return reduced[:c, c:], reduced[c:, c:]


def solve_consistent(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """Unique x with a @ x == b for tall ``a``; raises if b is out of range."""
    t, check = left_solver(a)
    if check.size and matmul_array(a.spec, check, b.data).any():
        raise InconsistentInput("right-hand side is not in the column space")
    return FieldMatrix(a.spec, matmul_array(a.spec, t, b.data))
