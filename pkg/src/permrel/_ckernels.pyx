# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``: one-word bitsets (n <= 64)."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.string cimport memset

ctypedef unsigned long long u64

MAX_WORD_DEGREE = 64

cnp.import_array()


cdef void _fill_tables(object perm, int n, u64* tables) except *:
    # tables[b * 256 + bv] = image of bv at bv position b
    cdef int nb = (n + 7) // 8
    cdef int b, bv, bit, pt
    cdef u64 m
    cdef int[64] p
    for pt in range(n):
        p[pt] = perm[pt]
    for b in range(nb):
        for bv in range(256):
            m = 0
            for bit in range(8):
                pt = b * 8 + bit
                if (bv >> bit) & 1 and pt < n:
                    m |= (<u64>1) << p[pt]
            tables[b * 256 + bv] = m


cdef inline u64 _apply(const u64* tables, int nb, u64 mask) noexcept nogil:
    cdef u64 out = 0
    cdef int b
    for b in range(nb):
        out |= tables[b * 256 + ((mask >> (8 * b)) & 255)]
    return out


cdef inline u64 _rank(u64 mask, const u64* binom, int stride) noexcept nogil:
    # colex rank: sum over the i-th set bit (position p, i from 1) of C(p, i)
    cdef u64 r = 0
    cdef int i = 1
    cdef int p
    while mask:
        p = __builtin_ctzll(mask)
        r += binom[p * stride + i]
        i += 1
        mask &= mask - 1
    return r


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef u64* _all_tables(object gens, int n, int* ngen_out) except NULL:
    cdef int ng = len(gens)
    cdef int nb = (n + 7) // 8
    cdef u64* tables = <u64*> malloc(sizeof(u64) * 256 * max(nb, 1) * max(ng, 1))
    if tables == NULL:
        raise MemoryError()
    cdef int gi
    for gi in range(ng):
        _fill_tables(gens[gi], n, tables + gi * 256 * nb)
    ngen_out[0] = ng
    return tables


def mask_images(perm, masks):
    cdef int n = len(perm)
    cdef int nb = (n + 7) // 8
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] src = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] out = np.empty_like(src)
    cdef u64* tables = <u64*> malloc(sizeof(u64) * 256 * max(nb, 1))
    cdef Py_ssize_t i, size = src.shape[0]
    try:
        _fill_tables(perm, n, tables)
        with nogil:
            for i in range(size):
                out[i] = _apply(tables, nb, src[i])
    finally:
        free(tables)
    return out


def kset_orbits(gens, int n, int k, group_order, bint collect=False):
    if n > 64:
        raise ValueError("degree above one machine word")
    cdef int stride = k + 2
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] binom_arr = np.zeros((n + 1) * stride, dtype=np.uint64)
    cdef int a, b
    for a in range(n + 1):
        for b in range(stride):
            binom_arr[a * stride + b] = _py_comb(a, b)
    cdef u64* binom = <u64*> binom_arr.data
    cdef u64 total = _py_comb(n, k)
    cdef int ng = 0
    cdef int nb = (n + 7) // 8
    cdef u64* tables = _all_tables(gens, n, &ng)
    cdef unsigned char* seen = <unsigned char*> malloc(total if total > 0 else 1)
    cdef u64* stack = <u64*> malloc(sizeof(u64) * (total if total > 0 else 1))
    if seen == NULL or stack == NULL:
        free(tables); free(seen); free(stack)
        raise MemoryError()
    memset(seen, 0, total)
    cdef u64 gorder = <u64> group_order if group_order < (1 << 63) else 0
    cdef u64 count = 0, max_len = 0, length, r, top
    cdef long long witness = -1
    cdef u64 mask, cur, img
    cdef int gi
    cdef u64 limit
    reps = []
    lengths = []
    try:
        if k == 0:
            mask = 0
        else:
            mask = ((<u64>1) << k) - 1 if k < 64 else <u64>(-1)
        limit = (<u64>1) << n if n < 64 else 0
        while True:
            r = _rank(mask, binom, stride)
            if not seen[r]:
                seen[r] = 1
                stack[0] = mask
                top = 1
                length = 0
                with nogil:
                    while top:
                        top -= 1
                        cur = stack[top]
                        length += 1
                        for gi in range(ng):
                            img = _apply(tables + gi * 256 * nb, nb, cur)
                            r = _rank(img, binom, stride)
                            if not seen[r]:
                                seen[r] = 1
                                stack[top] = img
                                top += 1
                count += 1
                if length > max_len:
                    max_len = length
                if witness < 0 and length == gorder:
                    witness = <long long> mask
                if collect:
                    reps.append(mask)
                    lengths.append(length)
            # next mask with the same popcount (Gosper's hack)
            if k == 0 or k == n:
                break
            cur = mask & (~mask + 1)
            img = mask + cur
            if img == 0 or (limit and img >= limit):
                break
            mask = (((img ^ mask) >> 2) // cur) | img
            if limit and mask >= limit:
                break
    finally:
        free(tables)
        free(seen)
        free(stack)
    return int(count), int(max_len), int(witness), reps, lengths


def powerset_orbit_ids(gens, int n):
    if n > 30:
        raise ValueError("power set too large")
    cdef u64 size = (<u64>1) << n
    cdef cnp.ndarray[cnp.int32_t, ndim=1] ids = np.full(size, -1, dtype=np.int32)
    cdef int ng = 0
    cdef int nb = (n + 7) // 8
    cdef u64* tables = _all_tables(gens, n, &ng)
    cdef u64* stack = <u64*> malloc(sizeof(u64) * size)
    cdef u64 m, cur, img, top
    cdef int gi
    cdef int label = 0
    try:
        with nogil:
            for m in range(size):
                if ids[m] >= 0:
                    continue
                ids[m] = label
                stack[0] = m
                top = 1
                while top:
                    top -= 1
                    cur = stack[top]
                    for gi in range(ng):
                        img = _apply(tables + gi * 256 * nb, nb, cur)
                        if ids[img] < 0:
                            ids[img] = label
                            stack[top] = img
                            top += 1
                label += 1
    finally:
        free(tables)
        free(stack)
    return ids


def relation_preserved(perm, sorted_masks):
    cdef int n = len(perm)
    cdef int nb = (n + 7) // 8
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] src = np.ascontiguousarray(sorted_masks, dtype=np.uint64)
    cdef Py_ssize_t size = src.shape[0]
    cdef Py_ssize_t i, lo, hi, mid
    cdef u64 img
    cdef bint ok = True
    if size == 0:
        return True
    cdef u64* tables = <u64*> malloc(sizeof(u64) * 256 * max(nb, 1))
    try:
        _fill_tables(perm, n, tables)
        with nogil:
            for i in range(size):
                img = _apply(tables, nb, src[i])
                lo = 0
                hi = size
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if src[mid] < img:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo == size or src[lo] != img:
                    ok = False
                    break
    finally:
        free(tables)
    return bool(ok)


cdef u64 _py_comb(int n, int k):
    if k < 0 or k > n:
        return 0
    cdef u64 r = 1
    cdef int i
    if k > n - k:
        k = n - k
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r


def binomial(int n, int k):
    return int(_py_comb(n, k))
