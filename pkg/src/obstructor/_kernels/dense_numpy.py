"""Pure-numpy bit-packed GF(2) row reduction (fallback path)."""

import numpy as np


def echelon(words: np.ndarray, ncols: int) -> np.ndarray:
    """Reduce packed rows to reduced row-echelon form, in place.

    ``words`` is (nrows, nwords) uint64; bit c of a row lives in word
    ``c >> 6`` at position ``c & 63``.  Only the first ``ncols`` columns are
    eligible as pivots; higher bits (augmented data) are carried along.
    Returns the pivot column indices in increasing order.
    """
    nrows = words.shape[0]
    pivots = []
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        w = c >> 6
        m = np.uint64(1) << np.uint64(c & 63)
        col = (words[:, w] & m) != 0
        hits = np.nonzero(col[rank:])[0]
        if hits.size == 0:
            continue
        p = rank + int(hits[0])
        if p != rank:
            words[[rank, p]] = words[[p, rank]]
            col[[rank, p]] = col[[p, rank]]
        col[rank] = False
        if col.any():
            words[col] ^= words[rank]
        pivots.append(c)
        rank += 1
    return np.asarray(pivots, dtype=np.int64)


def mat_mul(a_words: np.ndarray, b_words: np.ndarray) -> np.ndarray:
    """GF(2) product: row i of result = XOR of b-rows where a has bit set.

    ``a_words`` packs an (n x k) matrix, ``b_words`` packs (k x m); the k
    dimension is the a-column / b-row index.
    """
    n = a_words.shape[0]
    k = b_words.shape[0]
    out = np.zeros((n, b_words.shape[1]), dtype=np.uint64)
    for j in range(k):
        w = j >> 6
        m = np.uint64(1) << np.uint64(j & 63)
        rows = (a_words[:, w] & m) != 0
        if rows.any():
            out[rows] ^= b_words[j]
    return out
