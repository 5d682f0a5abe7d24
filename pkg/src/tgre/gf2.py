"""Bit-packed GF(2) linear algebra and symplectic inner products.

Matrices are stored row-major in 64-bit words; column index 0 is the lowest
bit of word 0.  Row reduction uses a deterministic pivot rule (lowest-index
nonzero column, topmost available row), so reduced forms are bit-identical
across runs — several golden tests depend on that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_ONE = np.uint64(1)


def pack_bits(bits: Sequence[int] | np.ndarray) -> np.ndarray:
    """Pack a 0/1 vector into uint64 words, bit i -> word i//64, bit i%64."""
    arr = np.asarray(bits, dtype=np.uint8)
    n = arr.shape[-1]
    words = (n + 63) // 64
    padded = np.zeros(arr.shape[:-1] + (words * 64,), dtype=np.uint8)
    padded[..., :n] = arr
    # np.packbits is big-endian within bytes; ask for little to match bit i = lowest
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return packed.view(np.uint64).reshape(arr.shape[:-1] + (words,))


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of pack_bits: first n bits as a uint8 vector (or matrix)."""
    w = np.ascontiguousarray(words, dtype=np.uint64)
    bits = np.unpackbits(w.view(np.uint8), axis=-1, bitorder="little")
    return bits[..., :n]


def popcount_words(words: np.ndarray) -> int:
    """Total number of set bits across an array of uint64 words."""
    return int(np.bitwise_count(words).sum())


class BitMatrix:
    """Dense bit matrix over GF(2), packed 64 columns per word.

    data has shape (rows, words) with words = ceil(cols/64); bits beyond
    `cols` in the last word are kept zero.
    """

    __slots__ = ("rows", "cols", "words", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = rows
        self.cols = cols
        self.words = (cols + 63) // 64
        if data is None:
            self.data = np.zeros((rows, self.words), dtype=np.uint64)
        else:
            if data.shape != (rows, self.words):
                raise ValueError(f"data shape {data.shape} != {(rows, self.words)}")
            self.data = np.ascontiguousarray(data, dtype=np.uint64)

    # ── constructors ──────────────────────────────────────────────────

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int) -> "BitMatrix":
        """Build from an iterable of column-index iterables (supports)."""
        rows = list(rows)
        m = cls(len(rows), cols)
        for r, support in enumerate(rows):
            for c in support:
                if not 0 <= c < cols:
                    raise ValueError(f"column {c} out of range 0..{cols - 1}")
                m.data[r, c >> 6] |= _ONE << np.uint64(c & 63)
        return m

    @classmethod
    def from_dense(cls, arr: np.ndarray) -> "BitMatrix":
        arr = np.atleast_2d(np.asarray(arr, dtype=np.uint8))
        m = cls(arr.shape[0], arr.shape[1])
        if arr.size:
            m.data = pack_bits(arr).reshape(arr.shape[0], m.words)
        return m

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            m.data[i, i >> 6] = _ONE << np.uint64(i & 63)
        return m

    # ── element access ────────────────────────────────────────────────

    def get(self, r: int, c: int) -> int:
        return int((self.data[r, c >> 6] >> np.uint64(c & 63)) & _ONE)

    def set(self, r: int, c: int, value: int) -> None:
        if value & 1:
            self.data[r, c >> 6] |= _ONE << np.uint64(c & 63)
        else:
            self.data[r, c >> 6] &= ~(_ONE << np.uint64(c & 63))

    def row_support(self, r: int) -> list[int]:
        """Sorted column indices of the set bits in row r."""
        return [int(c) for c in np.flatnonzero(unpack_bits(self.data[r], self.cols))]

    def row_weight(self, r: int) -> int:
        return int(np.bitwise_count(self.data[r]).sum())

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        return unpack_bits(self.data, self.cols)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def mul_vector(self, v: Sequence[int] | np.ndarray) -> np.ndarray:
        """m·v over GF(2); v has length cols, result length rows (uint8)."""
        vw = pack_bits(np.asarray(v, dtype=np.uint8))
        if len(vw) != self.words:
            raise ValueError("length mismatch")
        acc = np.bitwise_count(self.data & vw[None, :]).sum(axis=1)
        return (acc & 1).astype(np.uint8)


def _reduce_packed(data: np.ndarray, cols: int) -> tuple[np.ndarray, list[int]]:
    """In-place RREF on packed words; returns (data, pivot column list)."""
    nrows = data.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == nrows:
            break
        w = c >> 6
        shift = np.uint64(c & 63)
        col = (data[r:, w] >> shift) & _ONE
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        # clear column c everywhere except the pivot row
        full = (data[:, w] >> shift) & _ONE
        full[r] = 0
        sel = np.flatnonzero(full)
        if sel.size:
            data[sel] ^= data[r]
        pivots.append(c)
        r += 1
    return data, pivots


def row_reduce(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row-echelon form over GF(2).

    Returns (reduced, pivots); pivot columns are strictly increasing and each
    pivot column has a single 1, in the pivot row.  Zero rows sink to the
    bottom.  Deterministic for a given input.
    """
    data, pivots = _reduce_packed(m.data.copy(), m.cols)
    return BitMatrix(m.rows, m.cols, data), pivots


def rank(m: BitMatrix) -> int:
    """GF(2) row rank."""
    return len(row_reduce(m)[1])


def in_row_space(m: BitMatrix, v: Sequence[int] | np.ndarray) -> bool:
    """True iff v (length m.cols, 0/1 entries) is a GF(2) combination of m's rows."""
    v = np.asarray(v, dtype=np.uint8)
    if v.shape != (m.cols,):
        raise ValueError(f"vector length {v.shape} != cols {m.cols}")
    reduced, pivots = row_reduce(m)
    residual = pack_bits(v)
    for i, c in enumerate(pivots):
        if (residual[c >> 6] >> np.uint64(c & 63)) & _ONE:
            residual ^= reduced.data[i]
    return not residual.any()


def solve(m: BitMatrix, b: Sequence[int] | np.ndarray) -> np.ndarray | None:
    """Some x with m·x = b over GF(2), or None if the system is inconsistent."""
    b = np.asarray(b, dtype=np.uint8)
    if b.shape != (m.rows,):
        raise ValueError(f"rhs length {b.shape} != rows {m.rows}")
    # augment with b as an extra column and reduce
    aug = BitMatrix(m.rows, m.cols + 1)
    if m.rows:
        aug.data[:, : m.words] = m.data
        # clear any bits of b column that overlap the last data word
        for r in np.flatnonzero(b):
            aug.set(int(r), m.cols, 1)
    reduced, pivots = row_reduce(aug)
    if m.cols in pivots:
        return None
    x = np.zeros(m.cols, dtype=np.uint8)
    for i, c in enumerate(pivots):
        x[c] = reduced.get(i, m.cols)
    return x


@dataclass(frozen=True)
class SymplecticVector:
    """Binary image (x_part | z_part) of an n-qubit Pauli operator."""

    n: int
    x_part: tuple[int, ...]  # sorted positions with an X (or Y) component
    z_part: tuple[int, ...]  # sorted positions with a Z (or Y) component

    def __post_init__(self):
        for pos in (*self.x_part, *self.z_part):
            if not 0 <= pos < self.n:
                raise ValueError(f"position {pos} outside 0..{self.n - 1}")

    @property
    def weight(self) -> int:
        return len(set(self.x_part) | set(self.z_part))


def symplectic_product(u: SymplecticVector, v: SymplecticVector) -> int:
    """⟨u.x, v.z⟩ ⊕ ⟨u.z, v.x⟩ (mod 2); 0 exactly when the Paulis commute."""
    if u.n != v.n:
        raise ValueError(f"length mismatch: {u.n} != {v.n}")
    ux, uz = set(u.x_part), set(u.z_part)
    vx, vz = set(v.x_part), set(v.z_part)
    return (len(ux & vz) + len(uz & vx)) & 1
