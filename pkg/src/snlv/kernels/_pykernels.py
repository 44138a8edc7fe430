"""Pure-Python kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature and results. Bit blocks are ``bytes`` objects read MSB-first,
so bit ``b`` of a block lives in byte ``b >> 3`` at shift ``7 - (b & 7)``.

Excess convention: a 0 bit is +1 and a 1 bit is -1. For a block, ``p(j)``
is the excess of its first ``j`` bits, so ``p(0) = 0`` and bit ``j - 1``
moves the prefix from ``p(j - 1)`` to ``p(j)``.
"""

import numpy as np

BACKEND = "python"

POP = [bin(v).count("1") for v in range(256)]
EXC = [8 - 2 * POP[v] for v in range(256)]


def _tables():
    pre = []
    for v in range(256):
        row = [0]
        for k in range(8):
            row.append(row[-1] + (-1 if (v >> (7 - k)) & 1 else 1))
        pre.append(row)
    min1, minc1, minf1, minl1, minsel1 = [], [], [], [], []
    min0, lasteq0, firsteq = [], [], []
    for v in range(256):
        row = pre[v]
        vals = row[1:]
        m = min(vals)
        ks = [k + 1 for k, x in enumerate(vals) if x == m]
        min1.append(m)
        minc1.append(len(ks))
        minf1.append(ks[0])
        minl1.append(ks[-1])
        minsel1.append([0] + ks)
        min0.append(min(row[:8]))
        # lasteq0[v][d + 8]: last k in 0..7 with pre == d
        le = [0] * 17
        for d in range(-8, 9):
            best = -1
            for k in range(8):
                if row[k] == d:
                    best = k
            le[d + 8] = best
        lasteq0.append(le)
        # firsteq[v][-d]: first k in 1..8 with pre == d, for d in -1..-8
        fe = [0] * 9
        for d in range(1, 9):
            for k in range(1, 9):
                if row[k] == -d:
                    fe[d] = k
                    break
        firsteq.append(fe)
    return pre, min1, minc1, minf1, minl1, minsel1, min0, lasteq0, firsteq


PRE, MIN1, MINC1, MINF1, MINL1, MINSEL1, MIN0, LASTEQ0, FIRSTEQ = _tables()
SEL0 = []
for _v in range(256):
    _row = [0]
    for _k in range(8):
        if not (_v >> (7 - _k)) & 1:
            _row.append(_k + 1)
    SEL0.append(_row)


def _bit(blk, j):
    return (blk[j >> 3] >> (7 - (j & 7))) & 1


def prefix(blk, j):
    """Excess of the first ``j`` bits."""
    nb = j >> 3
    ones = int.from_bytes(blk[:nb], "big").bit_count()
    r = j & 7
    if r:
        ones += POP[blk[nb] >> (8 - r)]
    return j - 2 * ones


def rank0(blk, j):
    """Zeros among the first ``j`` bits."""
    nb = j >> 3
    ones = int.from_bytes(blk[:nb], "big").bit_count()
    r = j & 7
    if r:
        ones += POP[blk[nb] >> (8 - r)]
    return j - ones


def select0(blk, k):
    """Smallest ``j`` with ``rank0(blk, j) == k`` (k >= 1), or 0."""
    for i, v in enumerate(blk):
        z = 8 - POP[v]
        if k <= z:
            return 8 * i + SEL0[v][k]
        k -= z
    return 0


def select1(blk, k):
    """Smallest ``j`` with ``j - rank0(blk, j) == k`` (k >= 1), or 0."""
    for i, v in enumerate(blk):
        z = POP[v]
        if k <= z:
            return 8 * i + SEL0[255 - v][k]
        k -= z
    return 0


def fwd(blk, nbits, j0, t):
    """Smallest ``j`` in ``(j0, nbits]`` with ``p(j) - p(j0) == t``; 0 if none.

    Requires ``t < 0``.
    """
    cur = 0
    j = j0
    while j < nbits and (j & 7):
        cur += -1 if _bit(blk, j) else 1
        j += 1
        if cur == t:
            return j
    while j + 8 <= nbits:
        v = blk[j >> 3]
        if cur + MIN1[v] <= t:
            return j + FIRSTEQ[v][cur - t]
        cur += EXC[v]
        j += 8
    while j < nbits:
        cur += -1 if _bit(blk, j) else 1
        j += 1
        if cur == t:
            return j
    return 0


def bwd(blk, j0, t):
    """Largest ``j`` in ``[1, j0)`` with ``p(j) - p(j0) == t``; 0 if none.

    Requires ``t <= 0``, and for ``t == 0`` the bit before ``j0`` must be 1.
    """
    cur = 0
    j = j0
    while j & 7:
        j -= 1
        cur += 1 if _bit(blk, j) else -1
        if cur == t:
            return j
    while j >= 8:
        v = blk[(j >> 3) - 1]
        base = cur - EXC[v]
        if base + MIN0[v] <= t:
            return j - 8 + LASTEQ0[v][t - base + 8]
        cur = base
        j -= 8
    return 0


def rmin(blk, a, b):
    """``(min, count, first, last)`` of ``p(j)`` over ``j`` in ``[a, b]``."""
    cur = prefix(blk, a)
    mn = cur
    cnt = 1
    first = last = a
    j = a
    while j < b and (j & 7):
        cur += -1 if _bit(blk, j) else 1
        j += 1
        if cur < mn:
            mn, cnt, first, last = cur, 1, j, j
        elif cur == mn:
            cnt += 1
            last = j
    while j + 8 <= b:
        v = blk[j >> 3]
        m = cur + MIN1[v]
        if m < mn:
            mn, cnt, first, last = m, MINC1[v], j + MINF1[v], j + MINL1[v]
        elif m == mn:
            cnt += MINC1[v]
            last = j + MINL1[v]
        cur += EXC[v]
        j += 8
    while j < b:
        cur += -1 if _bit(blk, j) else 1
        j += 1
        if cur < mn:
            mn, cnt, first, last = cur, 1, j, j
        elif cur == mn:
            cnt += 1
            last = j
    return mn, cnt, first, last


def selmin(blk, a, b, m, r):
    """The ``r``-th ``j`` in ``[a, b]`` with ``p(j) == m``; 0 if none.

    Requires ``m`` to be at most the minimum over the range.
    """
    cur = prefix(blk, a)
    if cur == m:
        if r == 1:
            return a
        r -= 1
    j = a
    while j < b and (j & 7):
        cur += -1 if _bit(blk, j) else 1
        j += 1
        if cur == m:
            if r == 1:
                return j
            r -= 1
    while j + 8 <= b:
        v = blk[j >> 3]
        if cur + MIN1[v] == m:
            c = MINC1[v]
            if r <= c:
                return j + MINSEL1[v][r]
            r -= c
        cur += EXC[v]
        j += 8
    while j < b:
        cur += -1 if _bit(blk, j) else 1
        j += 1
        if cur == m:
            if r == 1:
                return j
            r -= 1
    return 0


def count_pattern(blk, j, carry, clen, pat, plen):
    """Occurrences of ``pat`` ending at block bit index < ``j``.

    ``carry`` holds the ``clen`` bits preceding the block (its lowest bit
    is the bit right before the block); occurrences may start there.
    """
    if j <= 0:
        return 0
    nb = (j + 7) >> 3
    val = int.from_bytes(blk[:nb], "big") >> (8 * nb - j)
    full = (carry << j) | val
    allm = (1 << (j + clen)) - 1
    m = allm
    for k in range(plen):
        s = full >> (plen - 1 - k)
        if (pat >> (plen - 1 - k)) & 1:
            m &= s
        else:
            m &= ~s
    m &= (1 << j) - 1
    lack = plen - 1 - clen
    if lack > 0:
        if lack >= j:
            return 0
        m &= (1 << (j - lack)) - 1
    return m.bit_count()


# ---------------------------------------------------------------- bulk kernels

def heap_pass(values, is_max):
    """Stack pass building a 2d min- or max-heap over ``values``.

    Returns ``(parent, pops, red)`` indexed by node (0 is the root).
    ``pops[i]`` is the number of stack pops at step ``i``.
    """
    vals = [int(x) for x in values]
    n = len(vals)
    parent = [0] * (n + 1)
    pops = [0] * (n + 1)
    red = [0] * (n + 1)
    parent[0] = -1
    stack = [0]
    sv = [0]
    for i in range(1, n + 1):
        v = vals[i - 1]
        c = 0
        last = 0
        if is_max:
            while len(stack) > 1 and sv[-1] <= v:
                last = stack.pop()
                sv.pop()
                c += 1
        else:
            while len(stack) > 1 and sv[-1] >= v:
                last = stack.pop()
                sv.pop()
                c += 1
        parent[i] = stack[-1]
        pops[i] = c
        if c and vals[last - 1] != v:
            red[i] = 1
        stack.append(i)
        sv.append(v)
    return (np.array(parent, dtype=np.int64), np.array(pops, dtype=np.int64),
            np.array(red, dtype=np.uint8))


def sibling_pass(parent, red):
    """Child ranks and nearest red siblings on both sides (0 = none)."""
    par = [int(x) for x in parent]
    rd = [int(x) for x in red]
    n = len(par) - 1
    cr = [0] * (n + 1)
    prs = [0] * (n + 1)
    nrs = [0] * (n + 1)
    cnt = [0] * (n + 1)
    last = [0] * (n + 1)
    for i in range(1, n + 1):
        p = par[i]
        cnt[p] += 1
        cr[i] = cnt[p]
        prs[i] = last[p]
        if rd[i]:
            last[p] = i
    nxt = [0] * (n + 1)
    for i in range(n, 0, -1):
        p = par[i]
        nrs[i] = nxt[p]
        if rd[i]:
            nxt[p] = i
    return (np.array(cr, dtype=np.int64), np.array(prs, dtype=np.int64),
            np.array(nrs, dtype=np.int64))


def bp_parents(raw, nbits):
    """Parent array of the ordinal tree encoded by a BP bit string."""
    nodes = nbits // 2
    parent = [0] * nodes
    stack = []
    node = 0
    for b in range(nbits):
        if (raw[b >> 3] >> (7 - (b & 7))) & 1:
            stack.pop()
        else:
            parent[node] = stack[-1] if stack else -1
            stack.append(node)
            node += 1
    return np.array(parent, dtype=np.int64)


# ---------------------------------------------------------------- g and h

def _run_ones(raw, nbits, pos):
    """Length of the run of ones at ``pos`` and whether a zero ends it."""
    t = 0
    while pos < nbits:
        nb = pos >> 3
        chunk = int.from_bytes(raw[nb:nb + 8], "big")
        width = 8 * len(raw[nb:nb + 8])
        sh = pos & 7
        avail = min(width - sh, nbits - pos)
        x = (chunk >> (width - sh - avail)) & ((1 << avail) - 1)
        inv = ~x & ((1 << avail) - 1)
        if inv:
            run = avail - inv.bit_length()
            return t + run, True
        t += avail
        pos += avail
    return t, False


def _g_ops(u, d, b):
    """Operations for one segment with U bit ``u`` and trit ``d``."""
    if u == b:
        if d == 0:
            return ((0b10 << 4) | 2,)
        if d == 1:
            return ((0b110 << 4) | 3,)
        return (-1,)
    if d == 2:
        return ((0 << 4) | 1, -2)
    return ((0 << 4) | 1,)


def _g_table():
    tab = {}
    for b in (0, 1):
        rows = []
        for dbyte in range(243):
            trits = TRITS[dbyte]
            row = []
            for u5 in range(32):
                ops = []
                for s in range(5):
                    ub = (u5 >> (4 - s)) & 1
                    ops.extend(_g_ops(ub, trits[s], b))
                merged = []
                for op in ops:
                    if op >= 0 and merged and merged[-1] >= 0 and (merged[-1] & 15) + (op & 15) <= 15:
                        pv, pl = merged[-1] >> 4, merged[-1] & 15
                        merged[-1] = (((pv << (op & 15)) | (op >> 4)) << 4) | (pl + (op & 15))
                    else:
                        merged.append(op)
                row.append(tuple(merged))
            rows.append(row)
        tab[b] = rows
    return tab


TRITS = []
for _v in range(243):
    _t = []
    _x = _v
    for _ in range(5):
        _t.append(_x % 3)
        _x //= 3
    TRITS.append(tuple(reversed(_t)))
G = _g_table()


def g_decode(u, d, e, elen, nseg, alpha, eps, r, b, filtered, nout):
    """Decode ``nout`` bits of a BP from its U/D/E segment stream.

    ``alpha`` is the 1-based segment to start from (0 means the block
    holding the root, which first emits ``00``), ``eps`` the bit offset in
    ``e`` and ``r`` the number of leading bits of the first segment to drop.
    With ``filtered`` set, ``e`` holds only the bits of non-relevant
    segments, so relevant D=2 segments do not consume any. Past the last
    segment, or when ``e`` runs dry, the output is padded with ones.
    Returns ``bytes`` of ``ceil(nout / 8)`` bytes.
    """
    need = nout + r
    out = 0
    olen = 0
    seg = alpha
    if alpha == 0:
        olen = 2
        seg = 1
    ep = eps
    dry = False
    while olen < need and seg <= nseg and not dry:
        idx = seg - 1
        if idx % 5 == 0 and seg + 4 <= nseg:
            ub = (u[idx >> 3] << 8 | (u[(idx >> 3) + 1] if (idx >> 3) + 1 < len(u) else 0))
            u5 = (ub >> (11 - (idx & 7))) & 31
            ops = G[b][d[idx // 5]][u5]
            seg += 5
        else:
            ubit = (u[idx >> 3] >> (7 - (idx & 7))) & 1
            ops = _g_ops(ubit, TRITS[d[idx // 5]][idx % 5], b)
            seg += 1
        for op in ops:
            if op >= 0:
                ln = op & 15
                out = (out << ln) | (op >> 4)
                olen += ln
            elif op == -1:
                t, ok = _run_ones(e, elen, ep)
                if ok:
                    ln = t + 4
                    out = (out << ln) | (((1 << (t + 3)) - 1) << 1)
                    ep += t + 1
                else:
                    ln = t + 3
                    out = (out << ln) | ((1 << ln) - 1)
                    ep += t
                    dry = True
                    break
                olen += ln
            elif not filtered:
                t, ok = _run_ones(e, elen, ep)
                ep += t + (1 if ok else 0)
    if olen < need:
        pad = need - olen
        out = (out << pad) | ((1 << pad) - 1)
        olen = need
    out &= (1 << (olen - r)) - 1
    out >>= olen - r - nout
    nby = (nout + 7) >> 3
    return (out << (8 * nby - nout)).to_bytes(nby, "big")


def _h_table():
    rows = []
    for cb in range(256):
        ops = []
        for s in range(8):
            if (cb >> (7 - s)) & 1:
                if ops and ops[-1] >= 0 and (ops[-1] & 15) + 2 <= 15:
                    pv, pl = ops[-1] >> 4, ops[-1] & 15
                    ops[-1] = (((pv << 2) | 0b10) << 4) | (pl + 2)
                else:
                    ops.append((0b10 << 4) | 2)
            else:
                ops.append(-1)
        rows.append(tuple(ops))
    return rows


H = _h_table()


def h_decode(bw, nb, cw, nc, c_final, skip, nout):
    """Decode ``nout`` bits of a BP over A from the BP over A' and C.

    ``bw``/``nb`` is a window of BP(A') bits, ``cw``/``nc`` a window of C
    bits (``c_final`` tells whether C ends with this window). Each C bit 1
    inserts ``10``; each C bit 0 copies one run ``1^t 0`` from the BP
    window; after C ends the rest of the window is copied. The first
    ``skip`` output bits are dropped.
    """
    need = nout + skip
    out = 0
    olen = 0
    bp = 0
    ci = 0
    while olen < need and ci < nc:
        if (ci & 7) == 0 and ci + 8 <= nc:
            ops = H[cw[ci >> 3]]
            ci += 8
        else:
            ops = H[0b10000000 if (cw[ci >> 3] >> (7 - (ci & 7))) & 1 else 0][:1]
            ci += 1
        for op in ops:
            if op >= 0:
                ln = op & 15
                out = (out << ln) | (op >> 4)
                olen += ln
            else:
                t, ok = _run_ones(bw, nb, bp)
                ln = t + 1 if ok else t
                out = (out << ln) | (((1 << t) - 1) << (1 if ok else 0))
                bp += ln
                olen += ln
    if olen < need and c_final and bp < nb:
        take = min(nb - bp, need - olen)
        nbyte = bp >> 3
        chunk = int.from_bytes(bw[nbyte:], "big")
        width = 8 * (len(bw) - nbyte)
        x = (chunk >> (width - (bp & 7) - take)) & ((1 << take) - 1)
        out = (out << take) | x
        olen += take
    if olen < need:
        pad = need - olen
        out <<= pad
        olen = need
    out &= (1 << (olen - skip)) - 1
    out >>= olen - skip - nout
    nby = (nout + 7) >> 3
    return (out << (8 * nby - nout)).to_bytes(nby, "big")
