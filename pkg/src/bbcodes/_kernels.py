"""Compiled inner loops shared by the GF(2), decoder and distance modules.

Rows are stored bit-packed in ``uint64`` words, column ``j`` living in word
``j >> 6`` at bit ``j & 63``.
"""

from __future__ import annotations

import numba as nb
import numpy as np

LLR_CLAMP = 50.0

_ONE = np.uint64(1)


@nb.njit(cache=True, nogil=True)
def rref_inplace(W, order):
    """Reduced row echelon form of ``W`` in place.

    Pivot columns are searched in the sequence given by ``order``; the
    returned array lists them in row order.
    """
    nrows, nw = W.shape
    pivots = np.empty(min(nrows, order.shape[0]), np.int64)
    r = 0
    for t in range(order.shape[0]):
        if r == nrows:
            break
        c = order[t]
        wi = c >> 6
        bit = _ONE << np.uint64(c & 63)
        p = -1
        for i in range(r, nrows):
            if W[i, wi] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(nw):
                tmp = W[r, k]
                W[r, k] = W[p, k]
                W[p, k] = tmp
        for i in range(nrows):
            if i != r and (W[i, wi] & bit):
                for k in range(nw):
                    W[i, k] ^= W[r, k]
        pivots[r] = c
        r += 1
    return pivots[:r]


@nb.njit(cache=True, nogil=True)
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@nb.njit(cache=True, nogil=True)
def min_sum(chk_ptr, chk_var, chk_edge, var_ptr, var_edge, n, syndrome, prior,
            max_iter, alpha_fixed, variable, stop_early):
    """Flooding min-sum on a Tanner graph given in CSR form.

    Returns ``(hard, posterior_llr, converged, iterations)``.
    """
    m = chk_ptr.shape[0] - 1
    n_edges = chk_var.shape[0]
    v2c = np.empty(n_edges, np.float64)
    c2v = np.zeros(n_edges, np.float64)
    edge_var = np.empty(n_edges, np.int64)
    for c in range(m):
        for t in range(chk_ptr[c], chk_ptr[c + 1]):
            edge_var[chk_edge[t]] = chk_var[t]
    for e in range(n_edges):
        v2c[e] = prior[edge_var[e]]
    posterior = prior.copy()
    hard = np.zeros(n, np.uint8)
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        if variable:
            alpha = 1.0 - 2.0 ** (-it)
        else:
            alpha = alpha_fixed
        for c in range(m):
            sgn = -1.0 if syndrome[c] else 1.0
            min1 = np.inf
            min2 = np.inf
            arg = -1
            for t in range(chk_ptr[c], chk_ptr[c + 1]):
                msg = v2c[chk_edge[t]]
                if msg < 0.0:
                    sgn = -sgn
                    mag = -msg
                else:
                    mag = msg
                if mag < min1:
                    min2 = min1
                    min1 = mag
                    arg = t
                elif mag < min2:
                    min2 = mag
            for t in range(chk_ptr[c], chk_ptr[c + 1]):
                e = chk_edge[t]
                s = sgn
                if v2c[e] < 0.0:
                    s = -s
                mag = min2 if t == arg else min1
                c2v[e] = s * alpha * mag
        for v in range(n):
            total = prior[v]
            for t in range(var_ptr[v], var_ptr[v + 1]):
                total += c2v[var_edge[t]]
            if total > LLR_CLAMP:
                total = LLR_CLAMP
            elif total < -LLR_CLAMP:
                total = -LLR_CLAMP
            posterior[v] = total
            hard[v] = 1 if total < 0.0 else 0
            for t in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[t]
                msg = total - c2v[e]
                if msg > LLR_CLAMP:
                    msg = LLR_CLAMP
                elif msg < -LLR_CLAMP:
                    msg = -LLR_CLAMP
                v2c[e] = msg
        ok = True
        for c in range(m):
            par = 0
            for t in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= hard[chk_var[t]]
            if par != syndrome[c]:
                ok = False
                break
        if ok:
            converged = True
            if stop_early:
                break
    return hard, posterior, converged, it


@nb.njit(cache=True, nogil=True)
def osd_solve(H, syndrome, order, n, cs_order, sweep):
    """Ordered-statistics solve of ``H x = syndrome``.

    ``H`` is bit-packed with one spare column (index ``n``) that receives the
    syndrome. Pivots are taken greedily along ``order``. With ``sweep`` the
    candidate set adds all weight-1 flips of non-pivot bits and all weight-2
    flips among the first ``cs_order`` non-pivot bits in ``order``.
    """
    m, nw = H.shape
    W = H.copy()
    sw = n >> 6
    sbit = _ONE << np.uint64(n & 63)
    for i in range(m):
        if syndrome[i]:
            W[i, sw] |= sbit
        else:
            W[i, sw] &= ~sbit
    pivots = rref_inplace(W, order)
    r = pivots.shape[0]
    is_pivot = np.zeros(n, np.bool_)
    for i in range(r):
        is_pivot[pivots[i]] = True
    free = np.empty(n - r, np.int64)
    f = 0
    for t in range(order.shape[0]):
        c = order[t]
        if not is_pivot[c]:
            free[f] = c
            f += 1
    # pivot-space columns: bit i set when row i of the reduced matrix has column c
    rw = (r + 63) >> 6
    if rw == 0:
        rw = 1
    base = np.zeros(rw, np.uint64)
    for i in range(r):
        if W[i, sw] & sbit:
            base[i >> 6] |= _ONE << np.uint64(i & 63)
    cols = np.zeros((f, rw), np.uint64)
    for j in range(f):
        c = free[j]
        cw = c >> 6
        cb = _ONE << np.uint64(c & 63)
        for i in range(r):
            if W[i, cw] & cb:
                cols[j, i >> 6] |= _ONE << np.uint64(i & 63)
    best_a = -1
    best_b = -1
    best_w = 0
    for k in range(rw):
        best_w += popcount64(base[k])
    if sweep:
        for j in range(f):
            w = 1
            for k in range(rw):
                w += popcount64(base[k] ^ cols[j, k])
            if w < best_w:
                best_w = w
                best_a = j
                best_b = -1
        lim = min(cs_order, f)
        for a in range(lim):
            for b in range(a + 1, lim):
                w = 2
                for k in range(rw):
                    w += popcount64(base[k] ^ cols[a, k] ^ cols[b, k])
                if w < best_w:
                    best_w = w
                    best_a = a
                    best_b = b
    x = np.zeros(n, np.uint8)
    sol = base.copy()
    if best_a >= 0:
        x[free[best_a]] = 1
        for k in range(rw):
            sol[k] ^= cols[best_a, k]
    if best_b >= 0:
        x[free[best_b]] = 1
        for k in range(rw):
            sol[k] ^= cols[best_b, k]
    for i in range(r):
        if sol[i >> 6] & (_ONE << np.uint64(i & 63)):
            x[pivots[i]] = 1
    return x


@nb.njit(cache=True, nogil=True)
def enum_subsets(cols, h, anchor, need_anchor, out_keys, out_sup):
    """Write XOR keys and supports of all subsets of size <= h.

    With ``need_anchor`` only subsets meeting ``anchor`` are kept (the empty
    set is then skipped). Returns the number written.
    """
    n, nw = cols.shape
    t = 0
    if not need_anchor:
        for k in range(nw):
            out_keys[t, k] = 0
        for s in range(h):
            out_sup[t, s] = -1
        t += 1
    if h == 0:
        return t
    idx = np.empty(h, np.int64)
    acc = np.zeros((h + 1, nw), np.uint64)
    nanch = np.zeros(h + 1, np.int64)
    d = 0
    idx[0] = -1
    while d >= 0:
        idx[d] += 1
        if idx[d] >= n:
            d -= 1
            continue
        j = idx[d]
        for k in range(nw):
            acc[d + 1, k] = acc[d, k] ^ cols[j, k]
        nanch[d + 1] = nanch[d] + anchor[j]
        if nanch[d + 1] > 0 or not need_anchor:
            for k in range(nw):
                out_keys[t, k] = acc[d + 1, k]
            for s in range(h):
                out_sup[t, s] = idx[s] if s <= d else -1
            t += 1
        if d + 1 < h and j + 1 < n:
            d += 1
            idx[d] = j
    return t


@nb.njit(cache=True, nogil=True)
def _hash_words(keys, i, ws):
    x = np.uint64(0x9E3779B97F4A7C15)
    for k in range(ws):
        x ^= keys[i, k]
        x *= np.uint64(0xBF58476D1CE4E5B9)
        x ^= x >> np.uint64(31)
    return x


@nb.njit(cache=True, nogil=True)
def build_table(keys, ws, size):
    """Open-addressing table over ``keys`` hashed on their first ``ws`` words."""
    table = np.full(size, -1, np.int64)
    mask = np.uint64(size - 1)
    for i in range(keys.shape[0]):
        slot = _hash_words(keys, i, ws) & mask
        while table[slot] >= 0:
            slot = (slot + np.uint64(1)) & mask
        table[slot] = i
    return table


@nb.njit(cache=True, nogil=True)
def probe_subsets(cols, h, ws, keys, table):
    """Search subsets of size <= h for a key whose syndrome words equal a
    stored key's but whose remaining words differ.

    Returns ``(stored_index, support)``; ``stored_index`` is -1 if none.
    """
    n, nw = cols.shape
    mask = np.uint64(table.shape[0] - 1)
    idx = np.empty(max(h, 1), np.int64)
    acc = np.zeros((h + 1, nw), np.uint64)
    d = 0
    idx[0] = -1
    first = True
    while d >= 0:
        if first:
            level = 0
            first = False
        else:
            idx[d] += 1
            if idx[d] >= n:
                d -= 1
                continue
            j = idx[d]
            for k in range(nw):
                acc[d + 1, k] = acc[d, k] ^ cols[j, k]
            level = d + 1
        x = np.uint64(0x9E3779B97F4A7C15)
        for k in range(ws):
            x ^= acc[level, k]
            x *= np.uint64(0xBF58476D1CE4E5B9)
            x ^= x >> np.uint64(31)
        slot = x & mask
        while table[slot] >= 0:
            e = table[slot]
            same = True
            for k in range(ws):
                if keys[e, k] != acc[level, k]:
                    same = False
                    break
            if same:
                for k in range(ws, nw):
                    if keys[e, k] != acc[level, k]:
                        sup = np.empty(level, np.int64)
                        for s in range(level):
                            sup[s] = idx[s]
                        return e, sup
            slot = (slot + np.uint64(1)) & mask
        if level > 0 and d + 1 < h and idx[d] + 1 < n:
            d += 1
            idx[d] = idx[d - 1]
        elif level == 0 and h == 0:
            break
    return -1, np.empty(0, np.int64)
