# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the sumset and exact set-cover kernels."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc
from libcpp.unordered_set cimport unordered_set

from ..errors import ResourceLimitError

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


# code spaces up to this many elements use a bitmap (16 MiB) instead of a hash set
cdef int64_t BITMAP_LIMIT = 1 << 27


def sumset_codes(a, b, moduli, Py_ssize_t cap):
    cdef int64_t[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef int64_t[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t na = av.shape[0], nb = bv.shape[0], L = len(moduli)
    if na == 0 or nb == 0:
        return np.empty(0, dtype=np.int64)
    cdef int64_t[::1] mod = np.asarray(moduli, dtype=np.int64)
    cdef int64_t[::1] w = np.ones(L, dtype=np.int64)
    cdef Py_ssize_t i, j, k
    for k in range(L - 2, -1, -1):
        w[k] = w[k + 1] * mod[k + 1]
    cdef int64_t total = w[0] * mod[0] if L else 1
    # digits of b, row-major nb x L
    cdef int64_t[:, ::1] bd = np.empty((nb, L), dtype=np.int64)
    cdef int64_t x, s, da
    for j in range(nb):
        x = bv[j]
        for k in range(L):
            bd[j, k] = (x // w[k]) % mod[k]
    cdef int64_t[::1] ad = np.empty(L, dtype=np.int64)
    cdef bint over = False
    cdef bint use_bitmap = total <= BITMAP_LIMIT
    cdef uint64_t* bits = NULL
    cdef uint64_t bit
    cdef Py_ssize_t count = 0
    cdef unordered_set[int64_t] seen
    if use_bitmap:
        bits = <uint64_t*>calloc(<size_t>((total + 63) >> 6), sizeof(uint64_t))
        if bits == NULL:
            raise MemoryError()
    else:
        seen.reserve(<size_t>min(<Py_ssize_t>(na * nb), cap + 1))
    try:
        with nogil:
            for i in range(na):
                x = av[i]
                for k in range(L):
                    ad[k] = (x // w[k]) % mod[k]
                for j in range(nb):
                    s = 0
                    for k in range(L):
                        da = ad[k] + bd[j, k]
                        if da >= mod[k]:
                            da = da - mod[k]
                        s += da * w[k]
                    if use_bitmap:
                        bit = (<uint64_t>1) << (s & 63)
                        if not (bits[s >> 6] & bit):
                            bits[s >> 6] |= bit
                            count += 1
                    else:
                        seen.insert(s)
                if not use_bitmap:
                    count = <Py_ssize_t>seen.size()
                if count > cap:
                    over = True
                    break
        if over:
            raise ResourceLimitError(f"sumset exceeds cap of {cap} elements")
        out = np.empty(count, dtype=np.int64)
        fill(out, bits, total, seen, use_bitmap)
        return out
    finally:
        free(bits)


cdef void fill(int64_t[::1] out, const uint64_t* bits, int64_t total, unordered_set[int64_t]& seen, bint use_bitmap):
    cdef Py_ssize_t i = 0, q
    cdef uint64_t word
    cdef int64_t s
    if use_bitmap:
        for q in range((total + 63) >> 6):
            word = bits[q]
            while word:
                out[i] = (q << 6) + __builtin_ctzll(word)
                word &= word - 1
                i += 1
        return
    for s in seen:
        out[i] = s
        i += 1
    np.asarray(out).sort()


cdef inline int popcount_and(const uint64_t* a, const uint64_t* b, Py_ssize_t n) noexcept nogil:
    cdef int c = 0
    cdef Py_ssize_t t
    for t in range(n):
        c += __builtin_popcountll(a[t] & b[t])
    return c


cdef struct CoverState:
    Py_ssize_t nw
    Py_ssize_t nm
    Py_ssize_t nord
    uint64_t* members      # nm x nw
    uint64_t* nbh          # nbits x nw, union of the members containing each element
    Py_ssize_t* order      # element indices, branching order
    Py_ssize_t* em_start   # CSR of element -> members
    Py_ssize_t* em_idx
    uint64_t* work         # (depth + 1) x nw scratch
    uint64_t* blocked      # nw scratch for the packing bound
    Py_ssize_t* stack
    Py_ssize_t* best
    Py_ssize_t best_n


cdef inline bint _subset(const uint64_t* a, const uint64_t* b, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t t
    for t in range(n):
        if a[t] & ~b[t]:
            return False
    return True


cdef void _rec(CoverState* st, Py_ssize_t depth) noexcept nogil:
    cdef Py_ssize_t nw = st.nw, t, i, j, k, x, e = -1, c, maxcov = 0, total = 0, room, packed = 0
    cdef Py_ssize_t nc = 0, deg
    cdef uint64_t* left = st.work + depth * nw
    cdef uint64_t* nxt
    cdef uint64_t* r
    cdef uint64_t* cand
    cdef Py_ssize_t* cidx
    cdef int* cpop
    cdef bint dup
    for t in range(nw):
        total += __builtin_popcountll(left[t])
    if total == 0:
        if depth < st.best_n:
            st.best_n = depth
            for k in range(depth):
                st.best[k] = st.stack[k]
        return
    room = st.best_n - depth
    if room <= 1:
        return
    for i in range(st.nm):
        c = popcount_and(st.members + i * nw, left, nw)
        if c > maxcov:
            maxcov = c
    if maxcov == 0 or (total + maxcov - 1) // maxcov >= room:
        return
    for t in range(nw):
        st.blocked[t] = 0
    for k in range(st.nord):
        x = st.order[k]
        if (left[x >> 6] >> (x & 63)) & 1:
            if e < 0:
                e = x
            if not ((st.blocked[x >> 6] >> (x & 63)) & 1):
                packed += 1
                for t in range(nw):
                    st.blocked[t] |= st.nbh[x * nw + t]
    if packed >= room:
        return
    deg = st.em_start[e + 1] - st.em_start[e]
    cand = <uint64_t*>malloc(deg * nw * sizeof(uint64_t))
    cidx = <Py_ssize_t*>malloc(deg * sizeof(Py_ssize_t))
    cpop = <int*>malloc(deg * sizeof(int))
    # restricted candidates, first index kept among equal ones, stable by size
    for k in range(st.em_start[e], st.em_start[e + 1]):
        i = st.em_idx[k]
        r = cand + nc * nw
        for t in range(nw):
            r[t] = st.members[i * nw + t] & left[t]
        dup = False
        for j in range(nc):
            if _subset(r, cand + j * nw, nw) and _subset(cand + j * nw, r, nw):
                dup = True
                break
        if dup:
            continue
        c = popcount_and(r, r, nw)
        j = nc
        while j > 0 and cpop[j - 1] < c:
            j -= 1
        if j < nc:
            # shift [j, nc) up by one and insert at j
            for x in range(nc, j, -1):
                cidx[x] = cidx[x - 1]
                cpop[x] = cpop[x - 1]
                for t in range(nw):
                    cand[x * nw + t] = cand[(x - 1) * nw + t]
            for t in range(nw):
                cand[j * nw + t] = st.members[i * nw + t] & left[t]
        cidx[j] = i
        cpop[j] = c
        nc += 1
    nxt = left + nw
    for k in range(nc):
        r = cand + k * nw
        dup = False
        for j in range(k):
            if _subset(r, cand + j * nw, nw):
                dup = True
                break
        if dup:
            continue
        for t in range(nw):
            nxt[t] = left[t] & ~r[t]
        st.stack[depth] = cidx[k]
        _rec(st, depth + 1)
    free(cand)
    free(cidx)
    free(cpop)


def min_cover(universe, members, Py_ssize_t nbits):
    from ._pykernels import _greedy, _neighbourhoods

    if not universe:
        return []
    members = list(members)
    cdef Py_ssize_t nm = len(members), nw = (nbits + 63) // 64, i, e, t, k
    greedy = _greedy(universe, members)
    elem_members = [[i for i in range(nm) if (members[i] >> e) & 1] for e in range(nbits)]
    nbh = _neighbourhoods(members, elem_members)
    order = sorted((e for e in range(nbits) if (universe >> e) & 1), key=lambda e: (len(elem_members[e]), e))
    cdef CoverState st
    st.nw = nw
    st.nm = nm
    st.nord = len(order)
    st.members = <uint64_t*>malloc(max(1, nm * nw) * sizeof(uint64_t))
    st.nbh = <uint64_t*>malloc(max(1, nbits * nw) * sizeof(uint64_t))
    st.order = <Py_ssize_t*>malloc(max(1, len(order)) * sizeof(Py_ssize_t))
    st.em_start = <Py_ssize_t*>malloc((nbits + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t nnz = sum(len(x) for x in elem_members)
    st.em_idx = <Py_ssize_t*>malloc(max(1, nnz) * sizeof(Py_ssize_t))
    st.work = <uint64_t*>malloc((len(greedy) + 2) * nw * sizeof(uint64_t))
    st.blocked = <uint64_t*>malloc(max(1, nw) * sizeof(uint64_t))
    st.stack = <Py_ssize_t*>malloc((len(greedy) + 1) * sizeof(Py_ssize_t))
    st.best = <Py_ssize_t*>malloc((len(greedy) + 1) * sizeof(Py_ssize_t))
    mask = (1 << 64) - 1
    try:
        for i in range(nm):
            v = members[i]
            for t in range(nw):
                st.members[i * nw + t] = <uint64_t>((v >> (64 * t)) & mask)
        for e in range(nbits):
            v = nbh[e]
            for t in range(nw):
                st.nbh[e * nw + t] = <uint64_t>((v >> (64 * t)) & mask)
        for t in range(nw):
            st.work[t] = <uint64_t>((universe >> (64 * t)) & mask)
        for k in range(len(order)):
            st.order[k] = order[k]
        k = 0
        for e in range(nbits):
            st.em_start[e] = k
            for i in elem_members[e]:
                st.em_idx[k] = i
                k += 1
        st.em_start[nbits] = k
        st.best_n = len(greedy)
        for k in range(len(greedy)):
            st.best[k] = greedy[k]
        with nogil:
            _rec(&st, 0)
        return [st.best[k] for k in range(st.best_n)]
    finally:
        free(st.members)
        free(st.nbh)
        free(st.order)
        free(st.em_start)
        free(st.em_idx)
        free(st.work)
        free(st.blocked)
        free(st.stack)
        free(st.best)
