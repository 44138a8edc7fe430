"""Navigation over balanced parentheses (0 = open, 1 = close).

A ``BpTree`` reads its bits through a block source: any object with a
``length`` attribute and a ``block(k)`` method returning bits
``512k+1 .. 512k+512`` as 64 MSB-first bytes. ``BitVector`` is one such
source; the codec's virtual BPs are another.

Excess ``E(p)`` is (#0 - #1) over positions ``1..p`` with ``E(0) = 0``.
Node ``i`` (preorder, root 0) opens at ``f(i) = select0(i + 1)`` and has
depth ``E(f(i)) - 1``.
"""

from bisect import bisect_left

import numpy as np

from .bitvec import BitVector, unpack_bits
from .kernels import get_backend

BLOCK = 512
_INF = 1 << 62


class BpTree:
    """Excess directories over a BP block source plus tree navigation."""

    def __init__(self, source, *, backend=None):
        self._k = get_backend(backend)
        self.src = source
        self._blk = source.block
        N = int(source.length)
        if N < 2 or N % 2:
            raise ValueError("BP length must be even and at least 2")
        self.length = N
        self.nodes = N // 2
        nb = (N + BLOCK - 1) // BLOCK
        self.nblocks = nb
        self._last_nbits = N - BLOCK * (nb - 1)
        blocks = [source.block(k) for k in range(nb)]
        self._build(unpack_bits(b"".join(blocks), N))
        # in-memory sources are served from a block list; others (whose
        # block method may change once warmed up) are asked each time
        self._blk = blocks.__getitem__ if isinstance(source, BitVector) else source.block

    def _build(self, bits):
        N, nb = self.length, self.nblocks
        steps = 1 - 2 * bits.astype(np.int64)
        P = np.concatenate([[0], np.cumsum(steps)])
        if P[-1] != 0 or P[1:].min(initial=0) < 0 or (N > 0 and P[1:-1].min(initial=1) < 1):
            raise ValueError("bits are not a balanced parentheses sequence of one tree")
        starts = np.minimum(np.arange(nb + 1) * BLOCK, N)
        exc0 = P[starts]
        padded = np.full(nb * BLOCK, _INF, dtype=np.int64)
        padded[:N] = P[1:]
        blocks = padded.reshape(nb, BLOCK)
        bmin = blocks.min(axis=1)
        bcnt = (blocks == bmin[:, None]).sum(axis=1)
        self._exc0 = exc0.tolist()
        self._r0 = ((starts + exc0) // 2).tolist()
        # "110" occurrences ending before each block and the 2 carry bits
        ind = np.zeros(N + 1, dtype=np.int64)
        if N >= 3:
            ind[3:] = (bits[:-2] == 1) & (bits[1:-1] == 1) & (bits[2:] == 0)
        c110 = np.cumsum(ind)
        self._r110 = c110[starts[:-1]].tolist()
        carry = []
        for k in range(nb):
            s = k * BLOCK
            carry.append((int(bits[s - 2]) << 1 | int(bits[s - 1])) if s >= 2 else 0)
        self._carry = carry
        S = 1
        while S < nb:
            S <<= 1
        self._S = S
        tmin = [_INF] * (2 * S)
        tcnt = [0] * (2 * S)
        tmin[S:S + nb] = bmin.tolist()
        tcnt[S:S + nb] = bcnt.tolist()
        for i in range(S - 1, 0, -1):
            a, b = tmin[2 * i], tmin[2 * i + 1]
            if a < b:
                tmin[i], tcnt[i] = a, tcnt[2 * i]
            elif b < a:
                tmin[i], tcnt[i] = b, tcnt[2 * i + 1]
            else:
                tmin[i], tcnt[i] = a, tcnt[2 * i] + tcnt[2 * i + 1]
        self._tmin = tmin
        self._tcnt = tcnt

    # ------------------------------------------------------------ accounting

    def directory_bits(self):
        """Bits a packed layout of these directories would take."""
        nb = self.nblocks
        lg = max(1, self.length.bit_length())
        per_block = 2 * lg + lg + 10 + 10 + 2  # excess, rank0, 110-rank, min, count, carry
        return nb * per_block + (2 * self._S - 1) * (lg + lg)

    # ------------------------------------------------------------ bit level

    def _nbits(self, k):
        return BLOCK if k < self.nblocks - 1 else self._last_nbits

    def bit(self, p):
        k = (p - 1) >> 9
        j = p - 1 - (k << 9)
        return (self._blk(k)[j >> 3] >> (7 - (j & 7))) & 1

    def rank0(self, p):
        """Zeros among positions 1..p."""
        if p <= 0:
            return 0
        k = (p - 1) >> 9
        return self._r0[k] + self._k.rank0(self._blk(k), p - (k << 9))

    def select0(self, x):
        """Position of the x-th zero."""
        k = bisect_left(self._r0, x) - 1
        return (k << 9) + self._k.select0(self._blk(k), x - self._r0[k])

    def excess(self, p):
        return 2 * self.rank0(p) - p

    def rank110(self, p):
        """Occurrences of "110" ending at positions ≤ p."""
        if p <= 0:
            return 0
        k = (p - 1) >> 9
        s = k << 9
        return self._r110[k] + self._k.count_pattern(
            self._blk(k), p - s, self._carry[k], min(2, s), 0b110, 3)

    # ------------------------------------------------------------ segment tree

    def _first_le(self, a, T):
        """Smallest block k ≥ a with min excess ≤ T, or -1."""
        if a >= self.nblocks:
            return -1
        S, tmin = self._S, self._tmin
        i = a + S
        while True:
            if tmin[i] <= T:
                while i < S:
                    i <<= 1
                    if tmin[i] > T:
                        i += 1
                return i - S
            while i & 1:
                i >>= 1
            if i == 0:
                return -1
            i += 1

    def _last_le(self, b, T):
        """Largest block k ≤ b with min excess ≤ T, or -1."""
        if b < 0:
            return -1
        S, tmin = self._S, self._tmin
        i = b + S
        while True:
            if tmin[i] <= T:
                while i < S:
                    i = (i << 1) + 1
                    if tmin[i] > T:
                        i -= 1
                return i - S
            while not i & 1:
                i >>= 1
            if i == 1:
                return -1
            i -= 1

    def _st_range(self, a, b):
        S, tmin, tcnt = self._S, self._tmin, self._tcnt
        l, r = a + S, b + S + 1
        mn, cnt = _INF, 0
        while l < r:
            if l & 1:
                v = tmin[l]
                if v < mn:
                    mn, cnt = v, tcnt[l]
                elif v == mn:
                    cnt += tcnt[l]
                l += 1
            if r & 1:
                r -= 1
                v = tmin[r]
                if v < mn:
                    mn, cnt = v, tcnt[r]
                elif v == mn:
                    cnt += tcnt[r]
            l >>= 1
            r >>= 1
        return mn, cnt

    def _st_select(self, a, b, m, r):
        """Block holding the r-th position with excess m in blocks a..b."""
        S, tmin, tcnt = self._S, self._tmin, self._tcnt
        l, rr = a + S, b + S + 1
        left, right = [], []
        while l < rr:
            if l & 1:
                left.append(l)
                l += 1
            if rr & 1:
                rr -= 1
                right.append(rr)
            l >>= 1
            rr >>= 1
        for node in left + right[::-1]:
            if tmin[node] != m:
                continue
            c = tcnt[node]
            if r > c:
                r -= c
                continue
            while node < S:
                node <<= 1
                if tmin[node] == m:
                    if r <= tcnt[node]:
                        continue
                    r -= tcnt[node]
                node += 1
            return node - S, r
        return -1, r

    # ------------------------------------------------------------ excess search

    def fwd_search(self, p, d):
        """Smallest q > p with E(q) = E(p) + d (d < 0), or 0."""
        K = self._k
        if p >= 1:
            k = (p - 1) >> 9
            j0 = p - (k << 9)
            blk = self._blk(k)
            nbits = self._nbits(k)
            if j0 < nbits:
                r = K.fwd(blk, nbits, j0, d)
                if r:
                    return (k << 9) + r
            T = self._exc0[k] + K.prefix(blk, j0) + d
            k2 = self._first_le(k + 1, T)
        else:
            T = d
            k2 = self._first_le(0, T)
        if k2 < 0:
            return 0
        return (k2 << 9) + K.fwd(self._blk(k2), self._nbits(k2), 0, T - self._exc0[k2])

    def bwd_search(self, p, d):
        """Largest q < p (q ≥ 0) with E(q) = E(p) + d, or -1.

        Requires d < 0, or d = 0 with a close at p.
        """
        K = self._k
        if p <= 0:
            return -1
        k = (p - 1) >> 9
        j0 = p - (k << 9)
        blk = self._blk(k)
        r = K.bwd(blk, j0, d)
        if r:
            return (k << 9) + r
        exc0 = self._exc0
        T = exc0[k] + K.prefix(blk, j0) + d
        if exc0[k] == T:
            return k << 9
        k2 = self._last_le(k - 1, T)
        if k2 < 0:
            return 0 if T == 0 else -1
        end = (k2 + 1) << 9
        if exc0[k2 + 1] == T:
            return end
        return (k2 << 9) + K.bwd(self._blk(k2), BLOCK, T - exc0[k2 + 1])

    # ------------------------------------------------------------ range min

    def _parts(self, lo, hi):
        kl, kr = (lo - 1) >> 9, (hi - 1) >> 9
        return kl, kr, lo - (kl << 9), hi - (kr << 9)

    def min_excess(self, lo, hi):
        """(min E, count) over positions lo..hi."""
        K = self._k
        kl, kr, jl, jr = self._parts(lo, hi)
        if kl == kr:
            m, c, _, _ = K.rmin(self._blk(kl), jl, jr)
            return m + self._exc0[kl], c
        m1, c1, _, _ = K.rmin(self._blk(kl), jl, BLOCK)
        m1 += self._exc0[kl]
        m2, c2, _, _ = K.rmin(self._blk(kr), 1, jr)
        m2 += self._exc0[kr]
        if m2 < m1:
            m1, c1 = m2, c2
        elif m2 == m1:
            c1 += c2
        if kl + 1 <= kr - 1:
            m3, c3 = self._st_range(kl + 1, kr - 1)
            if m3 < m1:
                m1, c1 = m3, c3
            elif m3 == m1:
                c1 += c3
        return m1, c1

    def rightmost_min(self, lo, hi):
        """(min E, rightmost position attaining it) over lo..hi."""
        K = self._k
        exc0 = self._exc0
        kl, kr, jl, jr = self._parts(lo, hi)
        if kl == kr:
            m, _, _, last = K.rmin(self._blk(kl), jl, jr)
            return m + exc0[kl], (kl << 9) + last
        mr, _, _, lr = K.rmin(self._blk(kr), 1, jr)
        mr += exc0[kr]
        ml, _, _, ll = K.rmin(self._blk(kl), jl, BLOCK)
        ml += exc0[kl]
        mm = self._st_range(kl + 1, kr - 1)[0] if kl + 1 <= kr - 1 else _INF
        mn = min(ml, mr, mm)
        if mr == mn:
            return mn, (kr << 9) + lr
        if mm == mn:
            k = self._last_le(kr - 1, mn)
            return mn, (k << 9) + K.rmin(self._blk(k), 1, BLOCK)[3]
        return mn, (kl << 9) + ll

    def leftmost_min(self, lo, hi):
        """(min E, leftmost position attaining it) over lo..hi."""
        K = self._k
        exc0 = self._exc0
        kl, kr, jl, jr = self._parts(lo, hi)
        if kl == kr:
            m, _, first, _ = K.rmin(self._blk(kl), jl, jr)
            return m + exc0[kl], (kl << 9) + first
        ml, _, fl, _ = K.rmin(self._blk(kl), jl, BLOCK)
        ml += exc0[kl]
        mr, _, fr, _ = K.rmin(self._blk(kr), 1, jr)
        mr += exc0[kr]
        mm = self._st_range(kl + 1, kr - 1)[0] if kl + 1 <= kr - 1 else _INF
        mn = min(ml, mr, mm)
        if ml == mn:
            return mn, (kl << 9) + fl
        if mm == mn:
            k = self._first_le(kl + 1, mn)
            return mn, (k << 9) + K.rmin(self._blk(k), 1, BLOCK)[2]
        return mn, (kr << 9) + fr

    def count_excess(self, lo, hi, m):
        """Positions in lo..hi with E == m, where m ≤ every E in the range."""
        if hi < lo:
            return 0
        mn, cnt = self.min_excess(lo, hi)
        return cnt if mn == m else 0

    def select_excess(self, lo, hi, m, r):
        """The r-th position in lo..hi with E == m (m ≤ range min), or 0."""
        if hi < lo or r < 1:
            return 0
        K = self._k
        exc0 = self._exc0
        kl, kr, jl, jr = self._parts(lo, hi)
        if kl == kr:
            x = K.selmin(self._blk(kl), jl, jr, m - exc0[kl], r)
            return (kl << 9) + x if x else 0
        blk = self._blk(kl)
        ml, cl, _, _ = K.rmin(blk, jl, BLOCK)
        if ml + exc0[kl] == m:
            if r <= cl:
                return (kl << 9) + K.selmin(blk, jl, BLOCK, m - exc0[kl], r)
            r -= cl
        if kl + 1 <= kr - 1:
            k, r = self._st_select(kl + 1, kr - 1, m, r)
            if k >= 0:
                return (k << 9) + K.selmin(self._blk(k), 1, BLOCK, m - exc0[k], r)
        x = K.selmin(self._blk(kr), 1, jr, m - exc0[kr], r)
        return (kr << 9) + x if x else 0

    # ------------------------------------------------------------ nodes

    def _check(self, i):
        if not 0 <= i < self.nodes:
            raise ValueError(f"node {i} outside 0..{self.nodes - 1}")

    def open_pos(self, i):
        self._check(i)
        return self.select0(i + 1)

    def close_pos(self, i):
        self._check(i)
        return self.fwd_search(self.select0(i + 1), -1)

    def depth(self, i):
        self._check(i)
        return 2 * (i + 1) - self.select0(i + 1) - 1

    def parent(self, i):
        self._check(i)
        if i == 0:
            return None
        q = self.bwd_search(self.select0(i + 1), -2) + 1
        return self.rank0(q) - 1

    def subtree_size(self, i):
        self._check(i)
        f = self.select0(i + 1)
        return (self.fwd_search(f, -1) - f + 1) // 2

    def is_leaf(self, i):
        self._check(i)
        return self.bit(self.select0(i + 1) + 1) == 1

    def degree(self, i):
        self._check(i)
        f = self.select0(i + 1)
        c = self.fwd_search(f, -1)
        return self.count_excess(f + 1, c - 1, 2 * (i + 1) - f)

    def child_rank(self, i):
        """1-based rank of ``i`` among its siblings (root: None)."""
        self._check(i)
        if i == 0:
            return None
        f = self.select0(i + 1)
        e = 2 * (i + 1) - f - 1
        fp = self.bwd_search(f, -2) + 1
        return 1 + self.count_excess(fp + 1, f - 1, e)

    def child_select(self, i, r):
        """The r-th child of ``i`` (1-based), or None."""
        self._check(i)
        if r < 1:
            raise ValueError("child rank must be ≥ 1")
        f = self.select0(i + 1)
        if f + 1 > self.length or self.bit(f + 1):
            return None
        if r == 1:
            return i + 1
        c = self.fwd_search(f, -1)
        x = self.select_excess(f + 1, c - 1, 2 * (i + 1) - f, r - 1)
        if not x or x + 1 >= c:
            return None
        return self.rank0(x)

    def next_sibling(self, i):
        self._check(i)
        if i == 0:
            return None
        f = self.select0(i + 1)
        c = self.fwd_search(f, -1)
        if c < self.length and self.bit(c + 1) == 0:
            return i + (c - f + 1) // 2
        return None

    def prev_sibling(self, i):
        self._check(i)
        if i == 0:
            return None
        f = self.select0(i + 1)
        if self.bit(f - 1) == 0:
            return None
        o = self.bwd_search(f - 1, 0) + 1
        return self.rank0(o) - 1

    def level_ancestor(self, i, d):
        """Ancestor ``d`` levels above ``i``."""
        self._check(i)
        if d == 0:
            return i
        f = self.select0(i + 1)
        if not 0 < d <= 2 * (i + 1) - f - 1:
            raise ValueError(f"level {d} exceeds depth of node {i}")
        q = self.bwd_search(f, -d - 1) + 1
        return self.rank0(q) - 1

    # ------------------------------------------------------------ range min nodes

    def _range_check(self, i, j):
        if not 1 <= i <= j < self.nodes:
            raise ValueError(f"need 1 ≤ i ≤ j ≤ {self.nodes - 1}, got ({i}, {j})")

    def range_min_node(self, i, j):
        """Rightmost position of the minimum over nodes i..j.

        The BP alone cannot tell equal values from smaller ones among
        siblings, so only the rightmost minimum is determined by it.
        """
        self._range_check(i, j)
        if i == j:
            return i
        fi = self.select0(i + 1)
        m, x = self.rightmost_min(fi, self.select0(j + 1) - 1)
        if m >= 2 * (i + 1) - fi:
            return i
        return self.rank0(x)

    def range_leftmost_min_node(self, i, j, color):
        """Leftmost position of the minimum over nodes i..j.

        ``color(v)`` must return True for red nodes: a blue non-leftmost
        sibling carries the same value as its left sibling.
        """
        self._range_check(i, j)
        if i == j:
            return i
        fi = self.select0(i + 1)
        m, x = self.rightmost_min(fi, self.select0(j + 1) - 1)
        if m >= 2 * (i + 1) - fi:
            return i
        v = self.rank0(x)
        first = i
        di = 2 * (i + 1) - fi - 1
        if di > m:
            first = self.next_sibling(self.level_ancestor(i, di - m))
        while v > first and not color(v):
            pv = self.prev_sibling(v)
            if pv is None or pv < first:
                break
            v = pv
        return v


def bp_tree(source, backend=None):
    return BpTree(source, backend=backend)
