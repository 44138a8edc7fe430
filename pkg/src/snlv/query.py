"""Query engine over the colored min- and max-heaps of an array.

All eight queries reduce to navigation on one of the two BPs plus node
colors. A node is red iff its value is strictly below (min side) or
above (max side) its left sibling's; blue siblings repeat the value of
their left neighbour. Nearest red siblings (PRS/NRS) are found by a short
sibling scan followed by at most one jump per marking level.
"""

import math
from operator import index
from dataclasses import dataclass

import numpy as np

from .bitvec import BitVector, EliasFano, PackedInts
from .bp import BpTree
from .codec import DEFAULT_BLOCK, SIDES, encode_array
from .kernels import get_backend

KINDS = {"rmin": 2, "rmax": 2, "rminq": 3, "rmaxq": 3, "psv": 1, "nsv": 1, "plv": 1, "nlv": 1}


def _lg(x):
    return math.log2(max(x, 2))


def moduli(n, levels):
    """Sibling-rank moduli t_1 > ... > t_levels; level 1 is the coarsest."""
    if not 1 <= levels <= 4:
        raise ValueError(f"levels must be in 1..4, got {levels}")
    logs = [_lg(n)]
    for _ in range(levels):
        logs.append(_lg(logs[-1]))
    return [max(2, math.ceil(logs[i] * logs[i + 1])) for i in range(levels)]


@dataclass
class Trace:
    """Work done by one PRS/NRS call."""
    scan: int = 0
    jumps: int = 0


class MarkLevels:
    """Per-level marks (child rank a multiple of t_i) and their jump tables.

    Level 1 stores explicit (PRS, NRS) node ids, 0 meaning none. Level
    i > 1 stores how far to move so as to land on the nearest red sibling
    or on the nearest level-(i-1) mark, whichever comes first.
    """

    def __init__(self, parent, red, levels, backend=None):
        K = get_backend(backend)
        n = parent.size - 1
        self.n = n
        self.levels = levels
        self.t = moduli(n, levels)
        cr, prs, nrs = K.sibling_pass(parent, red)
        par = parent.copy()
        par[0] = 0
        deg = np.bincount(par[1:], minlength=n + 1)
        self.ids = []
        self.p_prs = []
        self.p_nrs = []
        for lvl in range(1, levels + 1):
            t = self.t[lvl - 1]
            ids = np.flatnonzero(cr % t == 0)
            ids = ids[ids > 0]
            self.ids.append(EliasFano(ids, universe=n + 1))
            if lvl == 1:
                w = max(1, int(n).bit_length())
                self.p_prs.append(PackedInts(prs[ids], width=w))
                self.p_nrs.append(PackedInts(nrs[ids], width=w))
                continue
            tp = self.t[lvl - 2]
            c = cr[ids]
            pre = ((c - 1) // tp) * tp
            c_prs = np.where(prs[ids] > 0, cr[prs[ids]], 0)
            dp = deg[par[ids]] + 1
            nxt = np.minimum((c // tp + 1) * tp, dp)
            c_nrs = np.where(nrs[ids] > 0, cr[nrs[ids]], dp)
            w = int(tp).bit_length()
            self.p_prs.append(PackedInts(c - np.maximum(pre, c_prs), width=w))
            self.p_nrs.append(PackedInts(np.minimum(c_nrs, nxt) - c, width=w))

    def size_bits(self):
        return sum(e.size_bits() + e.directory_bits() for e in self.ids) + sum(
            p.size_bits() for p in self.p_prs + self.p_nrs)


class SideIndex:
    """One heap: BP navigation, colors and PRS/NRS marks."""

    def __init__(self, tree, colors, offset, C, marks):
        self.t = tree
        self.n = tree.nodes - 1
        self._c = colors
        self._off = offset
        self._C = C
        self.marks = marks
        self._top = marks.t[-1]

    # ------------------------------------------------------------ colors

    def red_at(self, v, f):
        """Color of node ``v`` opening at ``f`` (True = red)."""
        t = self.t
        if not t.bit(f - 1):
            return False
        if f > 2 and t.bit(f - 2):
            return self._c.get(self._off + t.rank110(f)) == 1
        if self._C is not None and self._C.get(v):
            return False
        return True

    def red(self, v):
        return self.red_at(v, self.t.select0(v + 1))

    # ------------------------------------------------------------ siblings

    def _prev(self, f):
        t = self.t
        if not t.bit(f - 1):
            return 0
        return t.bwd_search(f - 1, 0) + 1

    def _next(self, f):
        t = self.t
        c = t.fwd_search(f, -1)
        if c < t.length and not t.bit(c + 1):
            return c + 1
        return 0

    def _child_rank(self, v, f):
        t = self.t
        fp = t.bwd_search(f, -2) + 1
        return 1 + t.count_excess(fp + 1, f - 1, 2 * (v + 1) - f - 1)

    def prs(self, v, f=None, trace=None, floor=0):
        """Nearest red sibling left of ``v``, or None.

        A scan that reaches sibling ``floor`` stops there and returns it.
        """
        t = self.t
        if f is None:
            f = t.select0(v + 1)
        tr = trace if trace is not None else Trace()
        cr = self._child_rank(v, f)
        top = self._top
        while True:
            if cr == 1:
                return None
            f = self._prev(f)
            v = t.rank0(f) - 1
            cr -= 1
            tr.scan += 1
            if v <= floor or self.red_at(v, f):
                return v
            if cr % top == 0:
                break
        M = self.marks
        p = t.parent(v)
        for lvl in range(M.levels, 0, -1):
            tr.jumps += 1
            j = M.ids[lvl - 1].index(v)
            if lvl == 1:
                ans = M.p_prs[0][j]
                return ans or None
            tp = M.t[lvl - 2]
            crp = cr - M.p_prs[lvl - 1][j]
            if crp == 0:
                return None
            u = t.child_select(p, crp)
            if crp != ((cr - 1) // tp) * tp or self.red(u):
                return u
            v, cr = u, crp
        raise AssertionError("unreachable")

    def nrs(self, v, f=None, trace=None):
        """Nearest red sibling right of ``v``, or None."""
        t = self.t
        if f is None:
            f = t.select0(v + 1)
        tr = trace if trace is not None else Trace()
        cr = 0
        top = self._top
        while True:
            f = self._next(f)
            if not f:
                return None
            v = t.rank0(f) - 1
            tr.scan += 1
            if self.red_at(v, f):
                return v
            if not cr:
                cr = self._child_rank(v, f)
            else:
                cr += 1
            if cr % top == 0:
                break
        M = self.marks
        p = t.parent(v)
        for lvl in range(M.levels, 0, -1):
            tr.jumps += 1
            j = M.ids[lvl - 1].index(v)
            if lvl == 1:
                ans = M.p_nrs[0][j]
                return ans or None
            tp = M.t[lvl - 2]
            crp = cr + M.p_nrs[lvl - 1][j]
            u = t.child_select(p, crp)
            if u is None:
                return None
            if crp != (cr // tp + 1) * tp or self.red(u):
                return u
            v, cr = u, crp
        raise AssertionError("unreachable")

    # ------------------------------------------------------------ queries

    def parent(self, i):
        return self.t.parent(i)

    def next_smaller(self, i):
        r = self.nrs(i)
        if r is not None:
            return r
        p = self.t.parent(i)
        return p + self.t.subtree_size(p)

    def _range(self, i, j):
        """Leftmost range-min node ``p1`` and, if it is not unique, (x, m)."""
        t = self.t
        if i == j:
            return i, None
        fi = t.select0(i + 1)
        m, x = t.rightmost_min(fi, t.select0(j + 1) - 1)
        if m >= 2 * (i + 1) - fi:
            return i, None
        # rightmost minimum opens at x+1; its run of equal siblings starts at
        # the nearest red sibling at or before it
        qr = t.rank0(x)
        di = 2 * (i + 1) - fi - 1
        first = i if di == m else t.next_sibling(t.level_ancestor(i, di - m))
        if qr == first or self.red_at(qr, x + 1):
            return qr, (x, m)
        return max(first, self.prs(qr, x + 1, floor=first) or 0), (x, m)

    def range_min(self, i, j):
        return self._range(i, j)[0]

    def range_min_q(self, i, j, q):
        p1, xm = self._range(i, j)
        if xm is None or q == 1:
            return p1
        x, m = xm
        t = self.t
        lo = t.select0(p1 + 1) - 1
        k = t.count_excess(lo, x, m)
        return t.rank0(t.select_excess(lo, x, m, min(q, k)))


class QueryIndex:
    """Answers rmin/rmax, q-th rmin/rmax, psv/nsv/plv/nlv on one array."""

    def __init__(self, enc, *, virtual=True, levels=None, cache_blocks=256, backend=None):
        self.enc = enc
        self.n = enc.n
        self.levels = levels if levels is not None else enc.levels
        self.virtual = virtual
        self.backend = get_backend(backend).BACKEND
        self.sides = {}
        for s in SIDES:
            bits = enc.full_bits(s)
            src = enc.source(s, cache_blocks) if virtual else BitVector(bits, rank=False)
            tree = BpTree(src, backend=backend)
            parent = get_backend(backend).bp_parents(np.packbits(bits).tobytes(), bits.size)
            red = node_colors(bits, enc.colors(s), enc.C.to_array() if enc.general else None)
            marks = MarkLevels(parent, red, self.levels, backend=backend)
            off = 0 if s == "min" else enc.split
            self.sides[s] = SideIndex(tree, enc.cmm, off, enc.C, marks)

    @classmethod
    def build(cls, values, levels=2, block_size=DEFAULT_BLOCK, virtual=True, *, backend=None):
        enc = encode_array(values, block_size, levels, backend=backend)
        return cls(enc, virtual=virtual, levels=levels, backend=backend)

    @classmethod
    def from_encoding(cls, enc, virtual=True, *, levels=None, backend=None):
        return cls(enc, virtual=virtual, levels=levels, backend=backend)

    # ------------------------------------------------------------ argument checks

    def _pos(self, i):
        try:
            i = index(i)
        except TypeError:
            raise ValueError(f"position must be an integer, got {i!r}") from None
        if not 0 < i <= self.n:
            raise ValueError(f"position {i} outside 1..{self.n}")
        return i

    def _span(self, i, j):
        try:
            i, j = index(i), index(j)
        except TypeError:
            raise ValueError(f"range ends must be integers, got {i!r}, {j!r}") from None
        if not 0 < i <= j <= self.n:
            raise ValueError(f"need 1 ≤ i ≤ j ≤ {self.n}, got [{i}, {j}]")
        return i, j

    def _side(self, side):
        if side not in self.sides:
            raise ValueError(f"side must be 'min' or 'max', not {side!r}")
        return self.sides[side]

    # ------------------------------------------------------------ queries

    def psv(self, i):
        return self.sides["min"].parent(self._pos(i))

    def plv(self, i):
        return self.sides["max"].parent(self._pos(i))

    def nsv(self, i):
        return self.sides["min"].next_smaller(self._pos(i))

    def nlv(self, i):
        return self.sides["max"].next_smaller(self._pos(i))

    def rmin(self, i, j):
        return self.sides["min"].range_min(*self._span(i, j))

    def rmax(self, i, j):
        return self.sides["max"].range_min(*self._span(i, j))

    def _q(self, q):
        try:
            q = index(q)
        except TypeError:
            raise ValueError(f"q must be an integer, got {q!r}") from None
        if q < 1:
            raise ValueError(f"q must be ≥ 1, got {q}")
        return q

    def rmin_q(self, i, j, q):
        i, j = self._span(i, j)
        return self.sides["min"].range_min_q(i, j, self._q(q))

    def rmax_q(self, i, j, q):
        i, j = self._span(i, j)
        return self.sides["max"].range_min_q(i, j, self._q(q))

    def color(self, side, i):
        return "red" if self._side(side).red(self._pos(i)) else "blue"

    def prs(self, side, i):
        return self._side(side).prs(self._pos(i))

    def nrs(self, side, i):
        return self._side(side).nrs(self._pos(i))

    def prs_traced(self, side, i):
        """``(answer, Trace)`` for PRS."""
        tr = Trace()
        return self._side(side).prs(self._pos(i), trace=tr), tr

    def nrs_traced(self, side, i):
        tr = Trace()
        return self._side(side).nrs(self._pos(i), trace=tr), tr

    def query(self, kind, *args):
        """Dispatch by name: rmin, rmax, rminq, rmaxq, psv, nsv, plv, nlv."""
        if kind not in KINDS:
            raise ValueError(f"unknown query kind {kind!r}")
        if len(args) != KINDS[kind]:
            raise ValueError(f"{kind} takes {KINDS[kind]} arguments, got {len(args)}")
        fn = {"rminq": self.rmin_q, "rmaxq": self.rmax_q}.get(kind) or getattr(self, kind)
        return fn(*args)

    # ------------------------------------------------------------ accounting

    def space_report(self):
        """Codec report plus navigation directories and marks."""
        rep = self.enc.space_report()
        nav = 0
        for s, side in self.sides.items():
            rep[f"nav_{s}_bp_dirs"] = side.t.directory_bits()
            rep[f"nav_{s}_marks"] = side.marks.size_bits()
            nav += rep[f"nav_{s}_bp_dirs"] + rep[f"nav_{s}_marks"]
        rep["nav_total"] = nav
        rep["nav_per_n"] = nav / self.n
        return rep


def node_colors(bits, colors, C=None):
    """Red flags per node (index 0 unused) from a BP, valid-node colors and C."""
    f = np.flatnonzero(bits == 0) + 1
    fv = f[1:]
    b1 = bits[fv - 2]
    b2 = np.where(fv > 2, bits[np.maximum(fv - 3, 0)], 0)
    valid = (b1 == 1) & (b2 == 1)
    colors = np.asarray(colors, dtype=np.uint8)
    if int(valid.sum()) != colors.size:
        raise ValueError("color array does not match the BP's valid nodes")
    red = np.zeros(fv.size + 1, dtype=np.uint8)
    r = b1.astype(np.uint8)
    if C is not None:
        r &= 1 - np.asarray(C, dtype=np.uint8)
    r[valid] = colors
    red[1:] = r
    return red
