"""Numba kernels for sparse GF(2) column reduction.

Columns are sorted int32 row-index arrays in CSR-like storage.  The
reduction is the deterministic low-pivot scheme: columns are processed left
to right; a column is repeatedly XORed with the stored pivot column sharing
its largest row index until it either becomes zero or claims a fresh pivot.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _sxor(a, na, b, out):
    """Symmetric difference of sorted a[:na] and sorted b into out; new length."""
    nb = b.shape[0]
    i = 0
    j = 0
    k = 0
    while i < na and j < nb:
        x = a[i]
        y = b[j]
        if x < y:
            out[k] = x
            i += 1
            k += 1
        elif x > y:
            out[k] = y
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < na:
        out[k] = a[i]
        i += 1
        k += 1
    while j < nb:
        out[k] = b[j]
        j += 1
        k += 1
    return k


@njit(cache=True)
def reduce_all(col_ptr, col_rows, n_rows, want_pw, want_kw):
    """Reduce every column; returns the full reduction state.

    want_pw: keep, per pivot, the set of original columns XORed into it.
    want_kw: keep, per zero-reduced column, its kernel combination.
    """
    n_cols = col_ptr.shape[0] - 1
    nnz = col_rows.shape[0]
    pivot_slot = np.full(n_rows, -1, np.int64)
    slot_col = np.empty(n_rows + 1, np.int64)
    r_ptr = np.zeros(n_rows + 2, np.int64)
    r_cap = 2 * nnz + 64
    r_data = np.empty(r_cap, np.int32)
    r_len = 0
    npiv = 0

    v_ptr = np.zeros(n_rows + 2, np.int64)
    v_cap = (2 * nnz + 64) if want_pw else 8
    v_data = np.empty(v_cap, np.int32)
    v_len = 0

    zero_cols = np.empty(n_cols + 1, np.int64)
    nzero = 0
    kz_ptr = np.zeros(n_cols + 2, np.int64)
    kz_cap = (2 * nnz + 64) if want_kw else 8
    kz_data = np.empty(kz_cap, np.int32)
    kz_len = 0

    cap = 1024
    cur = np.empty(cap, np.int32)
    tmp = np.empty(cap, np.int32)
    wcap = 1024
    wcur = np.empty(wcap, np.int32)
    wtmp = np.empty(wcap, np.int32)

    track = want_pw or want_kw

    for j in range(n_cols):
        s = col_ptr[j]
        e = col_ptr[j + 1]
        n_cur = e - s
        if n_cur > cap:
            while cap < n_cur:
                cap *= 2
            cur = np.empty(cap, np.int32)
            tmp = np.empty(cap, np.int32)
        for t in range(n_cur):
            cur[t] = col_rows[s + t]
        n_wit = 0
        if track:
            wcur[0] = j
            n_wit = 1
        while n_cur > 0:
            low = cur[n_cur - 1]
            p = pivot_slot[low]
            if p < 0:
                pivot_slot[low] = npiv
                slot_col[npiv] = j
                if r_len + n_cur > r_cap:
                    new_cap = r_cap * 2
                    while new_cap < r_len + n_cur:
                        new_cap *= 2
                    nd = np.empty(new_cap, np.int32)
                    nd[:r_len] = r_data[:r_len]
                    r_data = nd
                    r_cap = new_cap
                for t in range(n_cur):
                    r_data[r_len + t] = cur[t]
                r_len += n_cur
                r_ptr[npiv + 1] = r_len
                if want_pw:
                    if v_len + n_wit > v_cap:
                        new_cap = v_cap * 2
                        while new_cap < v_len + n_wit:
                            new_cap *= 2
                        nd = np.empty(new_cap, np.int32)
                        nd[:v_len] = v_data[:v_len]
                        v_data = nd
                        v_cap = new_cap
                    for t in range(n_wit):
                        v_data[v_len + t] = wcur[t]
                    v_len += n_wit
                v_ptr[npiv + 1] = v_len
                npiv += 1
                n_cur = -1
                break
            ps = r_ptr[p]
            pe = r_ptr[p + 1]
            need = n_cur + (pe - ps)
            if need > cap:
                new_cap = cap * 2
                while new_cap < need:
                    new_cap *= 2
                nc = np.empty(new_cap, np.int32)
                nc[:n_cur] = cur[:n_cur]
                cur = nc
                tmp = np.empty(new_cap, np.int32)
                cap = new_cap
            n_new = _sxor(cur, n_cur, r_data[ps:pe], tmp)
            sw = cur
            cur = tmp
            tmp = sw
            n_cur = n_new
            if want_pw:
                vs = v_ptr[p]
                ve = v_ptr[p + 1]
                need = n_wit + (ve - vs)
                if need > wcap:
                    new_cap = wcap * 2
                    while new_cap < need:
                        new_cap *= 2
                    nc = np.empty(new_cap, np.int32)
                    nc[:n_wit] = wcur[:n_wit]
                    wcur = nc
                    wtmp = np.empty(new_cap, np.int32)
                    wcap = new_cap
                n_wit = _sxor(wcur, n_wit, v_data[vs:ve], wtmp)
                sw = wcur
                wcur = wtmp
                wtmp = sw
        if n_cur == 0:
            zero_cols[nzero] = j
            if want_kw:
                if kz_len + n_wit > kz_cap:
                    new_cap = kz_cap * 2
                    while new_cap < kz_len + n_wit:
                        new_cap *= 2
                    nd = np.empty(new_cap, np.int32)
                    nd[:kz_len] = kz_data[:kz_len]
                    kz_data = nd
                    kz_cap = new_cap
                for t in range(n_wit):
                    kz_data[kz_len + t] = wcur[t]
                kz_len += n_wit
            kz_ptr[nzero + 1] = kz_len
            nzero += 1

    return (
        pivot_slot,
        slot_col[:npiv].copy(),
        r_ptr[: npiv + 1].copy(),
        r_data[:r_len].copy(),
        v_ptr[: npiv + 1].copy(),
        v_data[:v_len].copy(),
        zero_cols[:nzero].copy(),
        kz_ptr[: nzero + 1].copy(),
        kz_data[:kz_len].copy(),
    )


@njit(cache=True)
def reduce_vector(rows, pivot_slot, r_ptr, r_data):
    """Reduce a sorted vector against the stored pivots; returns the residual."""
    n_cur = rows.shape[0]
    cap = 1024
    while cap < n_cur:
        cap *= 2
    cur = np.empty(cap, np.int32)
    tmp = np.empty(cap, np.int32)
    for t in range(n_cur):
        cur[t] = rows[t]
    while n_cur > 0:
        low = cur[n_cur - 1]
        p = pivot_slot[low]
        if p < 0:
            break
        ps = r_ptr[p]
        pe = r_ptr[p + 1]
        need = n_cur + (pe - ps)
        if need > cap:
            new_cap = cap * 2
            while new_cap < need:
                new_cap *= 2
            nc = np.empty(new_cap, np.int32)
            nc[:n_cur] = cur[:n_cur]
            cur = nc
            tmp = np.empty(new_cap, np.int32)
            cap = new_cap
        n_new = _sxor(cur, n_cur, r_data[ps:pe], tmp)
        sw = cur
        cur = tmp
        tmp = sw
        n_cur = n_new
    return cur[:n_cur].copy()


@njit(cache=True)
def reduce_vector_witness(rows, pivot_slot, r_ptr, r_data, v_ptr, v_data):
    """Like reduce_vector but also accumulates the original-column combination."""
    n_cur = rows.shape[0]
    cap = 1024
    while cap < n_cur:
        cap *= 2
    cur = np.empty(cap, np.int32)
    tmp = np.empty(cap, np.int32)
    for t in range(n_cur):
        cur[t] = rows[t]
    wcap = 1024
    wcur = np.empty(wcap, np.int32)
    wtmp = np.empty(wcap, np.int32)
    n_wit = 0
    while n_cur > 0:
        low = cur[n_cur - 1]
        p = pivot_slot[low]
        if p < 0:
            break
        ps = r_ptr[p]
        pe = r_ptr[p + 1]
        need = n_cur + (pe - ps)
        if need > cap:
            new_cap = cap * 2
            while new_cap < need:
                new_cap *= 2
            nc = np.empty(new_cap, np.int32)
            nc[:n_cur] = cur[:n_cur]
            cur = nc
            tmp = np.empty(new_cap, np.int32)
            cap = new_cap
        n_new = _sxor(cur, n_cur, r_data[ps:pe], tmp)
        sw = cur
        cur = tmp
        tmp = sw
        n_cur = n_new
        vs = v_ptr[p]
        ve = v_ptr[p + 1]
        need = n_wit + (ve - vs)
        if need > wcap:
            new_cap = wcap * 2
            while new_cap < need:
                new_cap *= 2
            nc = np.empty(new_cap, np.int32)
            nc[:n_wit] = wcur[:n_wit]
            wcur = nc
            wtmp = np.empty(new_cap, np.int32)
            wcap = new_cap
        n_wit = _sxor(wcur, n_wit, v_data[vs:ve], wtmp)
        sw = wcur
        wcur = wtmp
        wtmp = sw
    return cur[:n_cur].copy(), wcur[:n_wit].copy()
