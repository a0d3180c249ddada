"""Numba-jitted bit-packed GF(2) row reduction (hot path)."""

import numpy as np
from numba import njit


@njit(cache=True)
def echelon(words, ncols):
    """In-place RREF of packed rows; see dense_numpy.echelon for the contract."""
    nrows, nwords = words.shape
    cap = nrows if nrows < ncols else ncols
    pivots = np.empty(cap, np.int64)
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        w = c >> 6
        m = np.uint64(1) << np.uint64(c & 63)
        p = -1
        for r in range(rank, nrows):
            if words[r, w] & m:
                p = r
                break
        if p < 0:
            continue
        if p != rank:
            for t in range(nwords):
                tmp = words[rank, t]
                words[rank, t] = words[p, t]
                words[p, t] = tmp
        for r in range(nrows):
            if r != rank and (words[r, w] & m):
                for t in range(nwords):
                    words[r, t] ^= words[rank, t]
        pivots[rank] = c
        rank += 1
    return pivots[:rank]


@njit(cache=True)
def mat_mul(a_words, b_words):
    """GF(2) matrix product on packed rows; see dense_numpy.mat_mul."""
    n = a_words.shape[0]
    k = b_words.shape[0]
    mw = b_words.shape[1]
    out = np.zeros((n, mw), dtype=np.uint64)
    for i in range(n):
        for j in range(k):
            if a_words[i, j >> 6] & (np.uint64(1) << np.uint64(j & 63)):
                for t in range(mw):
                    out[i, t] ^= b_words[j, t]
    return out
