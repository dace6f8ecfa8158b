"""Dense linear algebra over GF(2) on bit-packed rows."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from . import _kernels


def _nwords(cols: int) -> int:
    return max(1, (cols + 63) // 64)


def pack_rows(dense: np.ndarray, cols: int | None = None) -> np.ndarray:
    """Pack a 0/1 array of shape (rows, cols) into uint64 words.

    ``cols`` may exceed the array width to reserve spare zero columns.
    """
    dense = np.asarray(dense, dtype=np.uint8)
    rows, width = dense.shape
    cols = width if cols is None else cols
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * 64), dtype=np.uint8)
    padded[:, :width] = dense & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").astype(np.uint64).reshape(rows, nw)


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


class BinMatrix:
    """Immutable binary matrix with rows packed into 64-bit words.

    Vectors are 1 x n matrices. Equality compares entries, never packing.
    """

    __slots__ = ("_words", "rows", "cols")

    def __init__(self, words: np.ndarray, rows: int, cols: int):
        if cols < 1 or rows < 0:
            raise ValueError(f"invalid shape ({rows}, {cols})")
        words = np.array(words, dtype=np.uint64, copy=True).reshape(rows, _nwords(cols))
        words.flags.writeable = False
        self._words = words
        self.rows = rows
        self.cols = cols

    @classmethod
    def from_dense(cls, dense) -> BinMatrix:
        arr = np.asarray(dense)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ValueError("expected a 1-D or 2-D array")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        return cls(pack_rows(arr.astype(np.uint8)), arr.shape[0], arr.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BinMatrix:
        return cls(np.zeros((rows, _nwords(cols)), np.uint64), rows, cols)

    @classmethod
    def identity(cls, n: int) -> BinMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def shift(cls, n: int) -> BinMatrix:
        """Cyclic shift: the identity with its columns rolled right by one."""
        return cls.from_dense(np.roll(np.eye(n, dtype=np.uint8), 1, axis=1))

    @property
    def words(self) -> np.ndarray:
        return self._words

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self._words, self.cols)

    def row(self, i: int) -> BinMatrix:
        return BinMatrix(self._words[i : i + 1], 1, self.cols)

    def row_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=1)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return int((int(self._words[i, j >> 6]) >> (j & 63)) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BinMatrix({self.rows}x{self.cols})"

    def __add__(self, other: BinMatrix) -> BinMatrix:
        return matadd(self, other)

    def __matmul__(self, other: BinMatrix) -> BinMatrix:
        return matmul(self, other)

    @property
    def T(self) -> BinMatrix:
        return BinMatrix.from_dense(self.to_dense().T)

    def is_zero(self) -> bool:
        return not self._words.any()


def _as_vector(v, n: int | None = None) -> np.ndarray:
    if isinstance(v, BinMatrix):
        if v.rows != 1:
            raise ValueError("vector must be a 1 x n matrix")
        arr = v.to_dense()[0]
    else:
        arr = np.asarray(v, dtype=np.uint8).ravel() & 1
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"vector length {arr.shape[0]} does not match {n} columns")
    return arr


def matadd(M: BinMatrix, N: BinMatrix) -> BinMatrix:
    if M.shape != N.shape:
        raise ValueError(f"shape mismatch {M.shape} vs {N.shape}")
    return BinMatrix(M.words ^ N.words, M.rows, M.cols)


def matmul(M: BinMatrix, N: BinMatrix) -> BinMatrix:
    if M.cols != N.rows:
        raise ValueError(f"cannot multiply {M.shape} by {N.shape}")
    prod = M.to_dense().astype(np.int64) @ N.to_dense().astype(np.int64)
    return BinMatrix.from_dense((prod & 1).astype(np.uint8))


def hstack(blocks: Iterable[BinMatrix]) -> BinMatrix:
    return BinMatrix.from_dense(np.hstack([b.to_dense() for b in blocks]))


def vstack(blocks: Iterable[BinMatrix]) -> BinMatrix:
    return BinMatrix.from_dense(np.vstack([b.to_dense() for b in blocks]))


def kron(M: BinMatrix, N: BinMatrix) -> BinMatrix:
    return BinMatrix.from_dense(np.kron(M.to_dense(), N.to_dense()))


def row_reduce(M: BinMatrix) -> tuple[BinMatrix, list[int]]:
    """Reduced row echelon form with leftmost pivots.

    Zero rows sink to the bottom, so ``echelon`` keeps the shape of ``M``.
    """
    W = np.array(M.words, copy=True)
    pivots = _kernels.rref_inplace(W, np.arange(M.cols, dtype=np.int64))
    return BinMatrix(W, M.rows, M.cols), [int(p) for p in pivots]


def rank(M: BinMatrix) -> int:
    if M.rows == 0:
        return 0
    W = np.array(M.words, copy=True)
    return int(_kernels.rref_inplace(W, np.arange(M.cols, dtype=np.int64)).shape[0])


def kernel_basis(M: BinMatrix) -> BinMatrix:
    """Rows spanning the right null space ``{v : M v^T = 0}``."""
    echelon, pivots = row_reduce(M)
    R = echelon.to_dense()
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = np.zeros((len(free), M.cols), dtype=np.uint8)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, p in enumerate(pivots):
            basis[t, p] = R[i, f]
    return BinMatrix.from_dense(basis.reshape(len(free), M.cols))


class RowSpace:
    """Cached echelon form answering rowspace-membership queries."""

    def __init__(self, M: BinMatrix):
        echelon, pivots = row_reduce(M)
        self.cols = M.cols
        self.rank = len(pivots)
        self._rows = echelon.to_dense()[: self.rank]
        self._pivots = np.array(pivots, dtype=np.int64)

    def reduce(self, v) -> np.ndarray:
        """Residue of ``v`` after clearing every pivot position."""
        r = _as_vector(v, self.cols).copy()
        for i, p in enumerate(self._pivots):
            if r[p]:
                r ^= self._rows[i]
        return r

    def contains(self, v) -> bool:
        return not self.reduce(v).any()


def in_rowspace(M: BinMatrix, v) -> bool:
    return RowSpace(M).contains(v)


def syndrome(H: BinMatrix, v) -> np.ndarray:
    """``H v^T`` as a 0/1 vector."""
    x = _as_vector(v, H.cols).astype(np.int64)
    return ((H.to_dense().astype(np.int64) @ x) & 1).astype(np.uint8)
