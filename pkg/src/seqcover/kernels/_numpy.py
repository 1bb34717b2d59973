"""Pure-numpy versions of the compiled kernels, selected by ``SEQCOVER_NO_NUMBA=1``.

They enumerate in the same order as the compiled kernels, so outputs are
identical array for array.
"""

from itertools import combinations, permutations, product

import numpy as np


def _perm_parity(p):
    parity = 0
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            parity ^= 1
    return parity


def _determinant_nonzero(mats, add, mul, neg):
    """Leibniz determinant over the order-code tables, batched on axis 0."""
    d = mats.shape[1]
    det = np.zeros(mats.shape[0], dtype=np.int64)
    for p in permutations(range(d)):
        term = mats[:, 0, p[0]]
        for i in range(1, d):
            term = mul[term, mats[:, i, p[i]]]
        if _perm_parity(p):
            term = neg[term]
        det = add[det, term]
    return det != 0


def _label_images(mats, targets, q, add, mul, inv, code_to_label):
    # img[b, i, j] = row i of matrix b dotted with target j
    d = mats.shape[1]
    img = np.zeros((mats.shape[0], d, targets.shape[0]), dtype=np.int64)
    for l in range(d):
        img = add[img, mul[mats[:, :, l][:, :, None], targets[:, l][None, None, :]]]
    first = np.argmax(img != 0, axis=1)
    lead = np.take_along_axis(img, first[:, None, :], axis=1)[:, 0, :]
    scaled = mul[inv[lead][:, None, :], img]
    weights = q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    codes = np.einsum("bij,i->bj", scaled, weights)
    return code_to_label[codes]


def _leaf_batches(n, q, add, mul, neg, row0, allvecs):
    """Yield batches of invertible matrices with first row ``row0`` in lexicographic order."""
    d = n + 1
    nvec = allvecs.shape[0]
    free = min(n, 2)  # rows enumerated as one vectorized block
    outer = n - free
    block = np.array(list(product(range(nvec), repeat=free)), dtype=np.int64)
    for prefix in product(range(nvec), repeat=outer):
        fixed = [row0] + [allvecs[i] for i in prefix]
        mats = np.empty((len(block), d, d), dtype=np.int64)
        for i, row in enumerate(fixed):
            mats[:, i, :] = row
        for i in range(free):
            mats[:, outer + 1 + i, :] = allvecs[block[:, i]]
        keep = _determinant_nonzero(mats, add, mul, neg)
        if keep.any():
            yield mats[keep]


def pgl_images(n, q, add, mul, neg, inv, row0s, allvecs, targets, code_to_label, per_row0):
    out = np.empty((len(row0s) * per_row0, targets.shape[0]), dtype=np.int32)
    done = np.zeros(len(row0s), dtype=np.int64)
    for i, row0 in enumerate(row0s):
        pos = i * per_row0
        for mats in _leaf_batches(n, q, add, mul, neg, row0, allvecs):
            labels = _label_images(mats, targets, q, add, mul, inv, code_to_label)
            out[pos : pos + len(labels)] = labels
            pos += len(labels)
        done[i] = pos - i * per_row0
    return out, done


def pgl_count_ascending(n, q, add, mul, neg, inv, row0s, allvecs, targets, code_to_label, seq_len):
    nseq = targets.shape[0] // seq_len
    counts = np.zeros(nseq, dtype=np.int64)
    done = np.zeros(len(row0s), dtype=np.int64)
    for i, row0 in enumerate(row0s):
        for mats in _leaf_batches(n, q, add, mul, neg, row0, allvecs):
            labels = _label_images(mats, targets, q, add, mul, inv, code_to_label)
            blocks = labels.reshape(len(labels), nseq, seq_len)
            asc = (np.diff(blocks, axis=2) > 0).all(axis=2)
            counts += asc.sum(axis=0)
            done[i] += len(labels)
    return counts, done


def sequence_rank(seqs, v):
    """Rank of each row of ``seqs`` (shape (..., t)) in S_{v,t}."""
    seqs = np.asarray(seqs, dtype=np.int64)
    t = seqs.shape[-1]
    rank = np.zeros(seqs.shape[:-1], dtype=np.int64)
    for j in range(t):
        digit = seqs[..., j] - (seqs[..., :j] < seqs[..., j : j + 1]).sum(axis=-1)
        rank = rank * (v - j) + digit
    return rank


def coverage_counts(perms, t, size, nchunks, rows_per_batch=2048):
    N, v = perms.shape
    combos = np.array(list(combinations(range(v), t)), dtype=np.int64).reshape(-1, t)
    hist = np.zeros(size, dtype=np.int64)
    for lo in range(0, N, rows_per_batch):
        seqs = perms[lo : lo + rows_per_batch][:, combos]
        hist += np.bincount(sequence_rank(seqs, v).ravel(), minlength=size)
    return hist
