"""Compiled kernels.  Every function here has a numpy twin in ``_numpy``."""

import numpy as np
from numba import njit, prange

MODE_IMAGES = 0
MODE_COUNT = 1


@njit(cache=True, nogil=True)
def _dot(u, x, add, mul):
    acc = 0
    for i in range(u.shape[0]):
        acc = add[acc, mul[u[i], x[i]]]
    return acc


@njit(cache=True, nogil=True)
def _walk_row0(
    n, q, add, mul, neg, inv, row0, allvecs, targets, code_to_label,
    mode, out, out_start, seq_len, counts,
):
    """Enumerate invertible matrices with first row ``row0``.

    Rows 1..n run over all vectors in lexicographic order, skipping those in
    the span of the rows above (kept as an echelon basis).  At each leaf the
    images of ``targets`` are labelled; mode MODE_IMAGES stores them in
    ``out[out_start + leaf]`` and MODE_COUNT increments ``counts[j]`` when the
    j-th consecutive block of ``seq_len`` images is strictly increasing.
    Returns the number of leaves.
    """
    d = n + 1
    k = targets.shape[0]
    nvec = allvecs.shape[0]
    ech = np.zeros((d, d), dtype=np.int64)
    piv = np.zeros(d, dtype=np.int64)
    img = np.zeros((d, k), dtype=np.int64)
    idx = np.zeros(d, dtype=np.int64)
    work = np.zeros(d, dtype=np.int64)
    labels = np.zeros(k, dtype=np.int64)

    for c in range(d):
        ech[0, c] = row0[c]
    for c in range(d):
        if row0[c] != 0:
            piv[0] = c
            break
    for j in range(k):
        img[0, j] = _dot(row0, targets[j], add, mul)

    leaves = 0
    level = 1
    idx[1] = -1
    while level >= 1:
        idx[level] += 1
        if idx[level] == nvec:
            level -= 1
            continue
        v = allvecs[idx[level]]
        for c in range(d):
            work[c] = v[c]
        for b in range(level):
            coef = work[piv[b]]
            if coef != 0:
                nc = neg[coef]
                for c in range(d):
                    work[c] = add[work[c], mul[nc, ech[b, c]]]
        pc = -1
        for c in range(d):
            if work[c] != 0:
                pc = c
                break
        if pc < 0:
            continue
        s = inv[work[pc]]
        for c in range(d):
            ech[level, c] = mul[s, work[c]]
        piv[level] = pc
        for j in range(k):
            img[level, j] = _dot(v, targets[j], add, mul)
        if level < n:
            level += 1
            idx[level] = -1
            continue

        # leaf: label the image of every target
        for j in range(k):
            lead = 0
            for i in range(d):
                if img[i, j] != 0:
                    lead = img[i, j]
                    break
            s = inv[lead]
            code = 0
            for i in range(d):
                code = code * q + mul[s, img[i, j]]
            labels[j] = code_to_label[code]
        if mode == MODE_IMAGES:
            for j in range(k):
                out[out_start + leaves, j] = labels[j]
        else:
            nseq = k // seq_len
            for b in range(nseq):
                asc = True
                for i in range(b * seq_len + 1, (b + 1) * seq_len):
                    if labels[i - 1] >= labels[i]:
                        asc = False
                        break
                if asc:
                    counts[b] += 1
        leaves += 1
    return leaves


@njit(cache=True, parallel=True)
def pgl_images(n, q, add, mul, neg, inv, row0s, allvecs, targets, code_to_label, per_row0):
    m = row0s.shape[0]
    out = np.empty((m * per_row0, targets.shape[0]), dtype=np.int32)
    dummy = np.zeros(1, dtype=np.int64)
    done = np.zeros(m, dtype=np.int64)
    for i in prange(m):
        done[i] = _walk_row0(
            n, q, add, mul, neg, inv, row0s[i], allvecs, targets, code_to_label,
            MODE_IMAGES, out, i * per_row0, 1, dummy,
        )
    return out, done


@njit(cache=True, parallel=True)
def pgl_count_ascending(n, q, add, mul, neg, inv, row0s, allvecs, targets, code_to_label, seq_len):
    m = row0s.shape[0]
    nseq = targets.shape[0] // seq_len
    counts = np.zeros((m, nseq), dtype=np.int64)
    done = np.zeros(m, dtype=np.int64)
    dummy = np.zeros((1, 1), dtype=np.int32)
    for i in prange(m):
        done[i] = _walk_row0(
            n, q, add, mul, neg, inv, row0s[i], allvecs, targets, code_to_label,
            MODE_COUNT, dummy, 0, seq_len, counts[i],
        )
    return counts.sum(axis=0), done


@njit(cache=True, nogil=True)
def _cover_rows(perms, lo, hi, t, v, radix, hist):
    pos = np.zeros(t, dtype=np.int64)
    partial = np.zeros(t + 1, dtype=np.int64)
    for row in range(lo, hi):
        word = perms[row]
        level = 0
        pos[0] = -1
        while level >= 0:
            pos[level] += 1
            if pos[level] > v - t + level:
                level -= 1
                continue
            x = word[pos[level]]
            digit = x
            for i in range(level):
                if word[pos[i]] < x:
                    digit -= 1
            partial[level + 1] = partial[level] * radix[level] + digit
            if level == t - 1:
                hist[partial[t]] += 1
            else:
                level += 1
                pos[level] = pos[level - 1]


@njit(cache=True, parallel=True)
def coverage_counts(perms, t, size, nchunks):
    """Subset-method coverage histogram indexed by sequence rank."""
    N, v = perms.shape
    radix = np.empty(t, dtype=np.int64)
    for i in range(t):
        radix[i] = v - i
    hists = np.zeros((nchunks, size), dtype=np.int64)
    step = (N + nchunks - 1) // nchunks
    for c in prange(nchunks):
        lo = c * step
        hi = min(N, lo + step)
        if lo < hi:
            _cover_rows(perms, lo, hi, t, v, radix, hists[c])
    return hists.sum(axis=0)
