"""Exact GF(2) linear algebra.

Two engines share the deterministic pivot discipline:

* :class:`BitMatrix` — dense rows bit-packed into uint64 words, for
  desk-scale exact work (ranks, kernels, lexicographically-least solves).
* :class:`SparseGF2` / :class:`Echelon` — sparse column reduction for large
  boundary matrices, with optional combination witnesses.

Hot loops live in :mod:`obstructor._kernels`; set ``OBSTRUCTOR_NO_NUMBA=1``
to run the pure-numpy fallback.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from ._kernels import dense as _dense
from ._kernels import sparse as _sparse
from ._kernels import backend_name

__all__ = [
    "BitMatrix",
    "SparseGF2",
    "Echelon",
    "csr_from_columns",
    "backend_name",
]

# Dense work above this many bits is refused rather than silently thrashing.
_DENSE_BIT_BUDGET = 1 << 33


class ResourceLimitError(RuntimeError):
    """Raised when a dense exact computation would exceed the desk-scale budget."""


def _nwords(ncols: int) -> int:
    return max(1, (ncols + 63) >> 6)


def _check_budget(nrows: int, nbits: int) -> None:
    if nrows * max(nbits, 1) > _DENSE_BIT_BUDGET:
        raise ResourceLimitError(
            f"dense GF(2) work of {nrows} x {nbits} bits exceeds the desk-scale "
            "budget; use the sparse engine"
        )


class BitMatrix:
    """Immutable-by-convention GF(2) matrix with bit-packed rows."""

    __slots__ = ("words", "nrows", "ncols")

    def __init__(self, words: np.ndarray, nrows: int, ncols: int):
        self.words = words
        self.nrows = nrows
        self.ncols = ncols

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        _check_budget(nrows, ncols)
        return cls(np.zeros((nrows, _nwords(ncols)), np.uint64), nrows, ncols)

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        a = np.asarray(arr, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        n, m = a.shape
        out = cls.zeros(n, m)
        if m:
            packed = np.packbits(a, axis=1, bitorder="little")
            pad = out.words.shape[1] * 8 - packed.shape[1]
            if pad:
                packed = np.pad(packed, ((0, 0), (0, pad)))
            out.words[:] = packed.view("<u8")
        return out

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], ncols: int) -> "BitMatrix":
        out = cls.zeros(len(rows), ncols)
        for i, support in enumerate(rows):
            for c in support:
                out.set(i, int(c))
        return out

    @classmethod
    def from_columns(cls, cols: Sequence[Iterable[int]], nrows: int) -> "BitMatrix":
        out = cls.zeros(nrows, len(cols))
        for j, support in enumerate(cols):
            for r in support:
                out.set(int(r), j)
        return out

    # -- element access ----------------------------------------------------

    def get(self, i: int, j: int) -> int:
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, i: int, j: int, value: int = 1) -> None:
        m = np.uint64(1) << np.uint64(j & 63)
        if value & 1:
            self.words[i, j >> 6] |= m
        else:
            self.words[i, j >> 6] &= ~m

    def row_support(self, i: int) -> np.ndarray:
        bits = np.unpackbits(
            self.words[i : i + 1].view(np.uint8), axis=1, bitorder="little"
        )[0, : self.ncols]
        return np.nonzero(bits)[0].astype(np.int64)

    def to_dense(self) -> np.ndarray:
        if self.ncols == 0:
            return np.zeros((self.nrows, 0), np.uint8)
        bits = np.unpackbits(self.words.view(np.uint8), axis=1, bitorder="little")
        return bits[:, : self.ncols].astype(np.uint8)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.words.copy(), self.nrows, self.ncols)

    def row_hex(self, i: int) -> str:
        return "".join(format(int(w), "016x") for w in self.words[i])

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.shape == other.shape
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):  # pragma: no cover - identity based, rarely used
        return id(self)

    # -- linear algebra ----------------------------------------------------

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        work = self.words.copy()
        return len(_dense.echelon(work, self.ncols))

    def rref(self) -> tuple:
        """Copy in reduced row-echelon form, plus its pivot columns."""
        work = self.words.copy()
        pivots = (
            _dense.echelon(work, self.ncols)
            if self.nrows and self.ncols
            else np.empty(0, np.int64)
        )
        return BitMatrix(work, self.nrows, self.ncols), pivots

    def mul(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        if self.nrows == 0 or other.nrows == 0:
            return BitMatrix.zeros(self.nrows, other.ncols)
        out = _dense.mat_mul(self.words, other.words)
        return BitMatrix(out, self.nrows, other.ncols)

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def is_zero(self) -> bool:
        return not self.words.any()

    def _augmented_transpose(self) -> tuple:
        """[self^T | I] packed; used for column-space and kernel work."""
        width = self.nrows + self.ncols
        _check_budget(self.ncols, width)
        aug = BitMatrix.zeros(self.ncols, width)
        dense = self.to_dense()
        for j in range(self.ncols):
            for r in np.nonzero(dense[:, j])[0]:
                aug.set(j, int(r))
            aug.set(j, self.nrows + j)
        return aug

    def kernel_basis(self) -> list:
        """Column-kernel basis, reduced, as sorted column-index arrays.

        Basis vectors are returned in increasing order of leading column and
        are mutually reduced, so greedy reduction against them yields the
        lexicographically least member of any coset.
        """
        if self.ncols == 0:
            return []
        aug = self._augmented_transpose()
        _dense.echelon(aug.words, self.nrows if self.nrows else 0)
        kernel = []
        for i in range(aug.nrows):
            support = aug.row_support(i)
            if support.size and support[0] >= self.nrows:
                kernel.append(support - self.nrows)
        if not kernel:
            return []
        # RREF the kernel rows over the column coordinates
        kb = BitMatrix.from_rows(kernel, self.ncols)
        _dense.echelon(kb.words, self.ncols)
        out = [kb.row_support(i) for i in range(kb.nrows)]
        out = [s for s in out if s.size]
        out.sort(key=lambda s: int(s[0]))
        return out

    def solve(self, b: Iterable[int], lexmin: bool = False) -> Optional[np.ndarray]:
        """Columns XORing to b, or None.  With lexmin, the least such set."""
        b_support = set(int(r) for r in b)
        aug = self._augmented_transpose()
        _dense.echelon(aug.words, self.nrows if self.nrows else 0)
        # express b against echelon rows
        wit = np.zeros((1, aug.words.shape[1]), np.uint64)
        target = BitMatrix(wit, 1, aug.ncols)
        for r in b_support:
            if r >= self.nrows:
                raise ValueError("row index out of range")
            target.set(0, r)
        for i in range(aug.nrows):
            support = aug.row_support(i)
            if support.size == 0 or support[0] >= self.nrows:
                continue
            lead = int(support[0])
            if target.get(0, lead):
                target.words[0] ^= aug.words[i]
        lead_bits = target.row_support(0)
        if lead_bits.size and lead_bits[0] < self.nrows:
            return None
        solution = lead_bits - self.nrows
        if lexmin:
            for k in self.kernel_basis():
                lead = int(k[0])
                if (solution == lead).any():
                    solution = np.setxor1d(solution, k, assume_unique=True)
        return solution.astype(np.int64)


def csr_from_columns(cols: Sequence, n_rows: int) -> tuple:
    """CSR (col_ptr, col_rows) from per-column sorted row-index arrays."""
    ptr = np.zeros(len(cols) + 1, np.int64)
    for i, c in enumerate(cols):
        ptr[i + 1] = ptr[i] + len(c)
    if len(cols):
        data = np.concatenate([np.asarray(c, np.int32) for c in cols]) if ptr[-1] else np.empty(0, np.int32)
    else:
        data = np.empty(0, np.int32)
    return ptr, data


class SparseGF2:
    """Reduced state of a sparse GF(2) matrix given by CSR columns.

    Reduction happens once, eagerly, with the deterministic low-pivot order.
    ``witnesses`` keeps per-pivot combinations (needed by :meth:`solve`);
    ``kernel_witnesses`` additionally keeps a combination for every column
    that reduces to zero (a kernel basis).
    """

    def __init__(
        self,
        col_ptr: np.ndarray,
        col_rows: np.ndarray,
        n_rows: int,
        witnesses: bool = False,
        kernel_witnesses: bool = False,
    ):
        want_pw = bool(witnesses or kernel_witnesses)
        want_kw = bool(kernel_witnesses)
        self.n_rows = int(n_rows)
        self.n_cols = int(len(col_ptr) - 1)
        (
            self.pivot_slot,
            self.slot_col,
            self.r_ptr,
            self.r_data,
            self.v_ptr,
            self.v_data,
            self.zero_cols,
            self.kz_ptr,
            self.kz_data,
        ) = _sparse.reduce_all(
            np.asarray(col_ptr, np.int64),
            np.asarray(col_rows, np.int32),
            self.n_rows,
            want_pw,
            want_kw,
        )
        self._has_witness = want_pw
        self._has_kernel = want_kw

    @property
    def rank(self) -> int:
        return int(len(self.slot_col))

    def pivot_column(self, slot: int) -> np.ndarray:
        return self.r_data[self.r_ptr[slot] : self.r_ptr[slot + 1]]

    def reduce(self, rows: Iterable[int]) -> np.ndarray:
        vec = np.asarray(sorted(int(r) for r in rows), np.int32)
        if vec.size == 0:
            return vec
        return _sparse.reduce_vector(vec, self.pivot_slot, self.r_ptr, self.r_data)

    def in_span(self, rows: Iterable[int]) -> bool:
        return self.reduce(rows).size == 0

    def solve(self, rows: Iterable[int]) -> Optional[np.ndarray]:
        """Original column indices XORing to the vector, or None."""
        if not self._has_witness:
            raise ValueError("reduction was built without witnesses")
        vec = np.asarray(sorted(int(r) for r in rows), np.int32)
        if vec.size == 0:
            return np.empty(0, np.int64)
        residual, wit = _sparse.reduce_vector_witness(
            vec, self.pivot_slot, self.r_ptr, self.r_data, self.v_ptr, self.v_data
        )
        if residual.size:
            return None
        return np.sort(wit.astype(np.int64))

    def kernel_vectors(self) -> list:
        """Kernel basis as sorted original-column-index arrays."""
        if not self._has_kernel:
            raise ValueError("reduction was built without kernel witnesses")
        out = []
        for i in range(len(self.zero_cols)):
            out.append(
                np.sort(self.kz_data[self.kz_ptr[i] : self.kz_ptr[i + 1]]).astype(
                    np.int64
                )
            )
        return out


class Echelon:
    """Incremental GF(2) echelon: a fixed reduced base plus an overlay.

    The base contributes untagged directions (typically a boundary space);
    overlay insertions carry tags, and :meth:`coords` expresses a vector as
    a tag combination modulo the base.
    """

    def __init__(self, n_rows: int, base: Optional[SparseGF2] = None):
        self.n_rows = int(n_rows)
        self._base = base
        self._over = {}  # low -> (vector, frozenset of tags)

    def _reduce_full(self, vec: np.ndarray):
        tags = frozenset()
        while True:
            if self._base is not None and vec.size:
                vec = _sparse.reduce_vector(
                    np.asarray(vec, np.int32),
                    self._base.pivot_slot,
                    self._base.r_ptr,
                    self._base.r_data,
                )
            if vec.size == 0:
                return vec, tags
            low = int(vec[-1])
            hit = self._over.get(low)
            if hit is None:
                return vec, tags
            vec = np.setxor1d(vec, hit[0], assume_unique=True).astype(np.int32)
            tags = tags ^ hit[1]

    def insert(self, rows: Iterable[int], tag) -> bool:
        """Insert a vector; True if it added a new direction."""
        vec = np.asarray(sorted(int(r) for r in rows), np.int32)
        vec, tags = self._reduce_full(vec)
        if vec.size == 0:
            return False
        self._over[int(vec[-1])] = (vec, tags ^ frozenset([tag]))
        return True

    def coords(self, rows: Iterable[int]):
        """Tags expressing the vector modulo the base, or None if outside."""
        vec = np.asarray(sorted(int(r) for r in rows), np.int32)
        vec, tags = self._reduce_full(vec)
        if vec.size:
            return None
        return tags
