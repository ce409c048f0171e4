"""Bit-packed dense matrices over GF(2).

Rows are packed little-endian into uint64 words: column ``c`` lives in word
``c // 64`` at bit ``c % 64``.  Elimination is vectorised across rows, and
products go through a float BLAS product reduced mod 2 (exact while the inner
dimension stays below 2**53).
"""

from __future__ import annotations

import numpy as np

_WORD = 64


def _nwords(ncols: int) -> int:
    return max(1, (ncols + _WORD - 1) // _WORD)


def pack_rows(dense: np.ndarray) -> np.ndarray:
    dense = np.asarray(dense, dtype=np.uint8) & 1
    if dense.ndim != 2:
        raise ValueError("expected a 2-d array")
    r, c = dense.shape
    w = _nwords(c)
    padded = np.zeros((r, w * _WORD), dtype=np.uint8)
    padded[:, :c] = dense
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).reshape(r, w)


def unpack_rows(bits: np.ndarray, ncols: int) -> np.ndarray:
    r, w = bits.shape
    as_bytes = np.ascontiguousarray(bits).view(np.uint8).reshape(r, w * 8)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :ncols]


class Gf2Matrix:
    """An r x c matrix over GF(2)."""

    __slots__ = ("bits", "nrows", "ncols")

    def __init__(self, bits: np.ndarray, ncols: int):
        self.bits = np.ascontiguousarray(bits, dtype=np.uint64)
        self.nrows = self.bits.shape[0]
        self.ncols = ncols

    # construction ----------------------------------------------------------
    @classmethod
    def from_dense(cls, dense) -> Gf2Matrix:
        dense = np.asarray(dense)
        if dense.ndim == 1:
            dense = dense[None, :]
        return cls(pack_rows(dense % 2), dense.shape[1])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Gf2Matrix:
        return cls(np.zeros((nrows, _nwords(ncols)), dtype=np.uint64), ncols)

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def permutation(cls, images: np.ndarray) -> Gf2Matrix:
        """Matrix P with P[i, images[i]] = 1, so (v P)[images[i]] = v[i]."""
        n = len(images)
        dense = np.zeros((n, n), dtype=np.uint8)
        dense[np.arange(n), images] = 1
        return cls.from_dense(dense)

    # views -----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self.bits, self.ncols)

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.nrows}x{self.ncols}, rank={self.rank()})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.bits, other.bits)

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.bits.any()

    @property
    def T(self) -> Gf2Matrix:
        return Gf2Matrix.from_dense(self.to_dense().T)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Gf2Matrix(self.bits ^ other.bits, self.ncols)

    __sub__ = __add__

    def __matmul__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a = self.to_dense().astype(np.float64)
        b = other.to_dense().astype(np.float64)
        prod = np.rint(a @ b).astype(np.int64) & 1
        return Gf2Matrix(pack_rows(prod.astype(np.uint8)), other.ncols)

    def power(self, e: int) -> Gf2Matrix:
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        result = Gf2Matrix.identity(self.nrows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def permute_columns(self, images: np.ndarray) -> Gf2Matrix:
        """Right-multiply by the permutation matrix of ``images``."""
        dense = self.to_dense()
        out = np.zeros_like(dense)
        out[:, images] = dense
        return Gf2Matrix.from_dense(out)

    def vstack(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        return Gf2Matrix(np.vstack([self.bits, other.bits]), self.ncols)

    def select_rows(self, idx) -> Gf2Matrix:
        return Gf2Matrix(self.bits[np.asarray(idx, dtype=np.int64)], self.ncols)

    def submatrix(self, rows, cols) -> Gf2Matrix:
        return Gf2Matrix.from_dense(self.to_dense()[np.ix_(rows, cols)])

    # elimination -----------------------------------------------------------
    def rref(self) -> tuple[Gf2Matrix, list[int]]:
        """Reduced row echelon form (zero rows dropped) and pivot columns."""
        A = self.bits.copy()
        nrows = A.shape[0]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            if r == nrows:
                break
            w = c // _WORD
            mask = np.uint64(1) << np.uint64(c % _WORD)
            colbits = (A[r:, w] & mask) != 0
            nz = np.flatnonzero(colbits)
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                A[[r, p]] = A[[p, r]]
            hits = (A[:, w] & mask) != 0
            hits[r] = False
            if hits.any():
                A[hits] ^= A[r]
            pivots.append(c)
            r += 1
        return Gf2Matrix(A[:r], self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def row_basis(self) -> Gf2Matrix:
        return self.rref()[0]

    def nullspace(self) -> Gf2Matrix:
        """Rows spanning {v : self @ v^T = 0}."""
        R, piv = self.rref()
        free = [c for c in range(self.ncols) if c not in set(piv)]
        dense = R.to_dense()
        out = np.zeros((len(free), self.ncols), dtype=np.uint8)
        for k, f in enumerate(free):
            out[k, f] = 1
            for i, p in enumerate(piv):
                out[k, p] = dense[i, f]
        return Gf2Matrix.from_dense(out) if free else Gf2Matrix.zeros(0, self.ncols)

    def left_nullspace(self) -> Gf2Matrix:
        """Rows spanning {u : u @ self = 0}."""
        return self.T.nullspace()

    def solve_rows(self, targets: Gf2Matrix) -> Gf2Matrix:
        """Coordinates C with C @ self == targets; self must have independent rows."""
        k = self.nrows
        aug = Gf2Matrix.from_dense(np.hstack([self.to_dense().T, targets.to_dense().T]))
        R, piv = aug.rref()
        if any(p >= k for p in piv) or len(piv) != k:
            raise ValueError("targets not in the row space, or rows dependent")
        dense = R.to_dense()
        return Gf2Matrix.from_dense(dense[:k, k:].T)


def rank(m: Gf2Matrix) -> int:
    return m.rank()


def span_contains(basis: Gf2Matrix, vectors: Gf2Matrix) -> bool:
    return basis.vstack(vectors).rank() == basis.rank()
