# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same API and results as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t
from libc.string cimport memset

cnp.import_array()

BACKEND = "cython"

cdef int POP[256]
cdef int EXC[256]
cdef int MIN1[256]
cdef int MINC1[256]
cdef int MINF1[256]
cdef int MINL1[256]
cdef int MINSEL1[256][9]
cdef int MIN0[256]
cdef int LASTEQ0[256][17]
cdef int FIRSTEQ[256][9]
cdef int SEL0[256][9]
cdef int TRIT[243][5]


def _init_tables():
    from . import _pykernels as P
    cdef int v, k
    for v in range(256):
        POP[v] = P.POP[v]
        EXC[v] = P.EXC[v]
        MIN1[v] = P.MIN1[v]
        MINC1[v] = P.MINC1[v]
        MINF1[v] = P.MINF1[v]
        MINL1[v] = P.MINL1[v]
        MIN0[v] = P.MIN0[v]
        for k in range(9):
            MINSEL1[v][k] = P.MINSEL1[v][k] if k < len(P.MINSEL1[v]) else 0
            FIRSTEQ[v][k] = P.FIRSTEQ[v][k]
            SEL0[v][k] = P.SEL0[v][k] if k < len(P.SEL0[v]) else 0
        for k in range(17):
            LASTEQ0[v][k] = P.LASTEQ0[v][k]
    for v in range(243):
        for k in range(5):
            TRIT[v][k] = P.TRITS[v][k]


_init_tables()


cdef inline int _bit(const uint8_t* p, Py_ssize_t j) nogil:
    return (p[j >> 3] >> (7 - (j & 7))) & 1


cdef inline Py_ssize_t _ones(const uint8_t* p, Py_ssize_t j) nogil:
    cdef Py_ssize_t nb = j >> 3, i, ones = 0
    for i in range(nb):
        ones += POP[p[i]]
    if j & 7:
        ones += POP[p[nb] >> (8 - (j & 7))]
    return ones


def prefix(bytes blk, Py_ssize_t j):
    cdef const uint8_t* p = <const uint8_t*>blk
    return j - 2 * _ones(p, j)


def rank0(bytes blk, Py_ssize_t j):
    cdef const uint8_t* p = <const uint8_t*>blk
    return j - _ones(p, j)


def select0(bytes blk, Py_ssize_t k):
    cdef const uint8_t* p = <const uint8_t*>blk
    cdef Py_ssize_t i, n = len(blk), z
    for i in range(n):
        z = 8 - POP[p[i]]
        if k <= z:
            return 8 * i + SEL0[p[i]][k]
        k -= z
    return 0


def select1(bytes blk, Py_ssize_t k):
    cdef const uint8_t* p = <const uint8_t*>blk
    cdef Py_ssize_t i, n = len(blk), z
    for i in range(n):
        z = POP[p[i]]
        if k <= z:
            return 8 * i + SEL0[255 - p[i]][k]
        k -= z
    return 0


def fwd(bytes blk, Py_ssize_t nbits, Py_ssize_t j0, Py_ssize_t t):
    cdef const uint8_t* p = <const uint8_t*>blk
    cdef Py_ssize_t cur = 0, j = j0
    cdef int v
    while j < nbits and (j & 7):
        cur += -1 if _bit(p, j) else 1
        j += 1
        if cur == t:
            return j
    while j + 8 <= nbits:
        v = p[j >> 3]
        if cur + MIN1[v] <= t:
            return j + FIRSTEQ[v][cur - t]
        cur += EXC[v]
        j += 8
    while j < nbits:
        cur += -1 if _bit(p, j) else 1
        j += 1
        if cur == t:
            return j
    return 0


def bwd(bytes blk, Py_ssize_t j0, Py_ssize_t t):
    cdef const uint8_t* p = <const uint8_t*>blk
    cdef Py_ssize_t cur = 0, j = j0, base
    cdef int v
    while j & 7:
        j -= 1
        cur += 1 if _bit(p, j) else -1
        if cur == t:
            return j
    while j >= 8:
        v = p[(j >> 3) - 1]
        base = cur - EXC[v]
        if base + MIN0[v] <= t:
            return j - 8 + LASTEQ0[v][t - base + 8]
        cur = base
        j -= 8
    return 0


def rmin(bytes blk, Py_ssize_t a, Py_ssize_t b):
    cdef const uint8_t* p = <const uint8_t*>blk
    cdef Py_ssize_t cur = a - 2 * _ones(p, a)
    cdef Py_ssize_t mn = cur, cnt = 1, first = a, last = a, j = a, m
    cdef int v
    while j < b and (j & 7):
        cur += -1 if _bit(p, j) else 1
        j += 1
        if cur < mn:
            mn = cur; cnt = 1; first = j; last = j
        elif cur == mn:
            cnt += 1; last = j
    while j + 8 <= b:
        v = p[j >> 3]
        m = cur + MIN1[v]
        if m < mn:
            mn = m; cnt = MINC1[v]; first = j + MINF1[v]; last = j + MINL1[v]
        elif m == mn:
            cnt += MINC1[v]; last = j + MINL1[v]
        cur += EXC[v]
        j += 8
    while j < b:
        cur += -1 if _bit(p, j) else 1
        j += 1
        if cur < mn:
            mn = cur; cnt = 1; first = j; last = j
        elif cur == mn:
            cnt += 1; last = j
    return mn, cnt, first, last


def selmin(bytes blk, Py_ssize_t a, Py_ssize_t b, Py_ssize_t m, Py_ssize_t r):
    cdef const uint8_t* p = <const uint8_t*>blk
    cdef Py_ssize_t cur = a - 2 * _ones(p, a), j = a, c
    cdef int v
    if cur == m:
        if r == 1:
            return a
        r -= 1
    while j < b and (j & 7):
        cur += -1 if _bit(p, j) else 1
        j += 1
        if cur == m:
            if r == 1:
                return j
            r -= 1
    while j + 8 <= b:
        v = p[j >> 3]
        if cur + MIN1[v] == m:
            c = MINC1[v]
            if r <= c:
                return j + MINSEL1[v][r]
            r -= c
        cur += EXC[v]
        j += 8
    while j < b:
        cur += -1 if _bit(p, j) else 1
        j += 1
        if cur == m:
            if r == 1:
                return j
            r -= 1
    return 0


def count_pattern(bytes blk, Py_ssize_t j, unsigned int carry, int clen,
                  unsigned int pat, int plen):
    cdef const uint8_t* p = <const uint8_t*>blk
    cdef unsigned int window = carry
    cdef unsigned int mask = (1u << plen) - 1
    cdef int have = clen
    cdef Py_ssize_t i, cnt = 0
    for i in range(j):
        window = ((window << 1) | _bit(p, i)) & mask
        have += 1
        if have >= plen and window == pat:
            cnt += 1
    return cnt


# ---------------------------------------------------------------- bulk kernels

def heap_pass(values, bint is_max):
    cdef int64_t[:] vals = np.ascontiguousarray(values, dtype=np.int64)
    cdef Py_ssize_t n = vals.shape[0], i, top, c, last
    parent_a = np.zeros(n + 1, dtype=np.int64)
    pops_a = np.zeros(n + 1, dtype=np.int64)
    red_a = np.zeros(n + 1, dtype=np.uint8)
    stack_a = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[:] parent = parent_a
    cdef int64_t[:] pops = pops_a
    cdef uint8_t[:] red = red_a
    cdef int64_t[:] stack = stack_a
    cdef int64_t v
    parent[0] = -1
    top = 0
    stack[0] = 0
    for i in range(1, n + 1):
        v = vals[i - 1]
        c = 0
        last = 0
        if is_max:
            while top > 0 and vals[stack[top] - 1] <= v:
                last = stack[top]
                top -= 1
                c += 1
        else:
            while top > 0 and vals[stack[top] - 1] >= v:
                last = stack[top]
                top -= 1
                c += 1
        parent[i] = stack[top]
        pops[i] = c
        if c and vals[last - 1] != v:
            red[i] = 1
        top += 1
        stack[top] = i
    return parent_a, pops_a, red_a


def sibling_pass(parent_in, red_in):
    cdef int64_t[:] par = np.ascontiguousarray(parent_in, dtype=np.int64)
    cdef uint8_t[:] rd = np.ascontiguousarray(red_in, dtype=np.uint8)
    cdef Py_ssize_t n = par.shape[0] - 1, i, p
    cr_a = np.zeros(n + 1, dtype=np.int64)
    prs_a = np.zeros(n + 1, dtype=np.int64)
    nrs_a = np.zeros(n + 1, dtype=np.int64)
    cnt_a = np.zeros(n + 1, dtype=np.int64)
    last_a = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[:] cr = cr_a
    cdef int64_t[:] prs = prs_a
    cdef int64_t[:] nrs = nrs_a
    cdef int64_t[:] cnt = cnt_a
    cdef int64_t[:] last = last_a
    for i in range(1, n + 1):
        p = par[i]
        cnt[p] += 1
        cr[i] = cnt[p]
        prs[i] = last[p]
        if rd[i]:
            last[p] = i
    last[:] = 0
    for i in range(n, 0, -1):
        p = par[i]
        nrs[i] = last[p]
        if rd[i]:
            last[p] = i
    return cr_a, prs_a, nrs_a


def bp_parents(bytes raw, Py_ssize_t nbits):
    cdef const uint8_t* p = <const uint8_t*>raw
    cdef Py_ssize_t nodes = nbits // 2, b, top = -1, node = 0
    parent_a = np.zeros(nodes, dtype=np.int64)
    stack_a = np.zeros(nodes + 1, dtype=np.int64)
    cdef int64_t[:] parent = parent_a
    cdef int64_t[:] stack = stack_a
    for b in range(nbits):
        if _bit(p, b):
            top -= 1
        else:
            parent[node] = stack[top] if top >= 0 else -1
            top += 1
            stack[top] = node
            node += 1
    return parent_a


# ---------------------------------------------------------------- g and h

cdef inline void _set_ones(uint8_t* out, Py_ssize_t a, Py_ssize_t b) nogil:
    # set bits [a, b)
    while a < b and (a & 7):
        out[a >> 3] |= 0x80 >> (a & 7)
        a += 1
    while a + 8 <= b:
        out[a >> 3] = 0xFF
        a += 8
    while a < b:
        out[a >> 3] |= 0x80 >> (a & 7)
        a += 1


cdef inline void _emit_ones(uint8_t* out, Py_ssize_t L, Py_ssize_t t,
                            Py_ssize_t r, Py_ssize_t nout) nogil:
    cdef Py_ssize_t a = L - r, b = L + t - r
    if a < 0:
        a = 0
    if b > nout:
        b = nout
    if a < b:
        _set_ones(out, a, b)


cdef inline Py_ssize_t _run(const uint8_t* p, Py_ssize_t nbits, Py_ssize_t pos,
                            bint* ok) nogil:
    cdef Py_ssize_t t = 0
    while pos < nbits and (pos & 7):
        if not _bit(p, pos):
            ok[0] = True
            return t
        t += 1
        pos += 1
    while pos + 8 <= nbits and p[pos >> 3] == 0xFF:
        t += 8
        pos += 8
    while pos < nbits:
        if not _bit(p, pos):
            ok[0] = True
            return t
        t += 1
        pos += 1
    ok[0] = False
    return t


def g_decode(bytes u, bytes d, bytes e, Py_ssize_t elen, Py_ssize_t nseg,
             Py_ssize_t alpha, Py_ssize_t eps, Py_ssize_t r, int b,
             bint filtered, Py_ssize_t nout):
    cdef const uint8_t* up = <const uint8_t*>u
    cdef const uint8_t* dp = <const uint8_t*>d
    cdef const uint8_t* ep = <const uint8_t*>e
    cdef Py_ssize_t nby = (nout + 7) >> 3
    res = bytearray(nby)
    cdef uint8_t* out = <uint8_t*>(<char*>res)
    cdef Py_ssize_t need = nout + r, L = 0, seg = alpha, epos = eps, idx, t
    cdef int ub, dt
    cdef bint ok
    if alpha == 0:
        L = 2
        seg = 1
    with nogil:
        while L < need and seg <= nseg:
            idx = seg - 1
            ub = _bit(up, idx)
            dt = TRIT[dp[idx // 5]][idx % 5]
            seg += 1
            if ub == b:
                if dt == 0:
                    _emit_ones(out, L, 1, r, nout)
                    L += 2
                elif dt == 1:
                    _emit_ones(out, L, 2, r, nout)
                    L += 3
                else:
                    t = _run(ep, elen, epos, &ok)
                    _emit_ones(out, L, t + 3, r, nout)
                    if ok:
                        L += t + 4
                        epos += t + 1
                    else:
                        L += t + 3
                        epos += t
                        break
            else:
                L += 1
                if dt == 2 and not filtered:
                    t = _run(ep, elen, epos, &ok)
                    epos += t + (1 if ok else 0)
        if L < need:
            _emit_ones(out, L, need - L, r, nout)
    return bytes(res)


def h_decode(bytes bw, Py_ssize_t nb, bytes cw, Py_ssize_t nc, bint c_final,
             Py_ssize_t skip, Py_ssize_t nout):
    cdef const uint8_t* bp = <const uint8_t*>bw
    cdef const uint8_t* cp = <const uint8_t*>cw
    cdef Py_ssize_t nby = (nout + 7) >> 3
    res = bytearray(nby)
    cdef uint8_t* out = <uint8_t*>(<char*>res)
    cdef Py_ssize_t need = nout + skip, L = 0, bpos = 0, ci = 0, t, a, k
    cdef bint ok
    with nogil:
        while L < need and ci < nc:
            if _bit(cp, ci):
                _emit_ones(out, L, 1, skip, nout)
                L += 2
            else:
                t = _run(bp, nb, bpos, &ok)
                _emit_ones(out, L, t, skip, nout)
                L += t + (1 if ok else 0)
                bpos += t + (1 if ok else 0)
            ci += 1
        if L < need and c_final:
            while bpos < nb and L < need:
                if _bit(bp, bpos):
                    _emit_ones(out, L, 1, skip, nout)
                L += 1
                bpos += 1
    return bytes(res)
