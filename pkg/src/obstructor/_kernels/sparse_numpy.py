"""Pure-numpy mirror of the sparse GF(2) reduction kernels.

Same algorithm, same outputs as sparse_numba; kept simple rather than fast.
"""

import numpy as np

_EMPTY = np.empty(0, np.int32)


def _sxor_arr(a, b):
    return np.setxor1d(a, b, assume_unique=True).astype(np.int32)


def reduce_all(col_ptr, col_rows, n_rows, want_pw, want_kw):
    n_cols = col_ptr.shape[0] - 1
    pivot_slot = np.full(n_rows, -1, np.int64)
    slot_col = []
    r_cols = []
    v_cols = []
    zero_cols = []
    kz_cols = []
    for j in range(n_cols):
        cur = col_rows[col_ptr[j] : col_ptr[j + 1]].astype(np.int32)
        wit = np.array([j], np.int32) if (want_pw or want_kw) else _EMPTY
        while cur.size > 0:
            p = pivot_slot[cur[-1]]
            if p < 0:
                pivot_slot[cur[-1]] = len(r_cols)
                slot_col.append(j)
                r_cols.append(cur)
                v_cols.append(wit if want_pw else _EMPTY)
                cur = None
                break
            cur = _sxor_arr(cur, r_cols[p])
            if want_pw:
                wit = _sxor_arr(wit, v_cols[p])
        if cur is not None:
            zero_cols.append(j)
            if want_kw:
                kz_cols.append(wit)

    def _cat(chunks):
        ptr = np.zeros(len(chunks) + 1, np.int64)
        for i, c in enumerate(chunks):
            ptr[i + 1] = ptr[i] + len(c)
        data = np.concatenate(chunks).astype(np.int32) if chunks else _EMPTY.copy()
        return ptr, data

    r_ptr, r_data = _cat(r_cols)
    v_ptr, v_data = _cat(v_cols)
    kz_ptr, kz_data = _cat(kz_cols)
    return (
        pivot_slot,
        np.asarray(slot_col, np.int64),
        r_ptr,
        r_data,
        v_ptr,
        v_data,
        np.asarray(zero_cols, np.int64),
        kz_ptr,
        kz_data,
    )


def reduce_vector(rows, pivot_slot, r_ptr, r_data):
    cur = np.asarray(rows, np.int32)
    while cur.size > 0:
        p = pivot_slot[cur[-1]]
        if p < 0:
            break
        cur = _sxor_arr(cur, r_data[r_ptr[p] : r_ptr[p + 1]])
    return cur


def reduce_vector_witness(rows, pivot_slot, r_ptr, r_data, v_ptr, v_data):
    cur = np.asarray(rows, np.int32)
    wit = _EMPTY
    while cur.size > 0:
        p = pivot_slot[cur[-1]]
        if p < 0:
            break
        cur = _sxor_arr(cur, r_data[r_ptr[p] : r_ptr[p + 1]])
        wit = _sxor_arr(wit, v_data[v_ptr[p] : v_ptr[p + 1]])
    return cur, wit
