"""Colored 2d min/max heaps and their balanced-parentheses sequences.

Node ``i`` (1..n) stands for ``A[i]``; node 0 is an out-of-band root
holding -inf (min kind) or +inf (max kind). The parent of ``i`` is its
previous smaller (min) or previous larger (max) value. BP uses 0 for an
open and 1 for a close, in preorder.
"""

from dataclasses import dataclass

import numpy as np

from .bitvec import BitVector
from .kernels import get_backend

MIN, MAX = "min", "max"


@dataclass
class ColoredHeap:
    kind: str
    n: int
    bp: BitVector          # 2(n+1) bits, "110" registered
    parent: np.ndarray     # parent[0] = -1
    pops: np.ndarray       # stack pops at step i; pops[0] = 0
    red: np.ndarray        # 1 = red, 0 = blue; index 0 unused

    @property
    def valid(self):
        v = self.pops >= 2
        v[0] = False
        return v

    def open_positions(self):
        """f(i) for i = 0..n."""
        return np.arange(self.n + 1) + 1 + np.cumsum(self.pops)

    def children(self, i):
        return [int(c) for c in np.flatnonzero(self.parent == i)]

    def color(self, i):
        return "red" if self.red[i] else "blue"


def _check_kind(kind):
    if kind not in (MIN, MAX):
        raise ValueError(f"kind must be 'min' or 'max', not {kind!r}")


def bp_bits_from_pops(pops):
    """BP bit array (uint8) from per-node pop counts."""
    pops = np.asarray(pops, dtype=np.int64)
    n = pops.size - 1
    f = np.arange(n + 1) + 1 + np.cumsum(pops)
    bits = np.ones(2 * (n + 1), dtype=np.uint8)
    bits[f - 1] = 0
    return bits


def build_colored_heap(A, kind, *, backend=None):
    """Build cMin(A) (``kind="min"``) or cMax(A) (``kind="max"``) in one stack pass."""
    _check_kind(kind)
    vals = np.asarray(A, dtype=np.int64).reshape(-1)
    if vals.size == 0:
        raise ValueError("array must not be empty")
    K = get_backend(backend)
    parent, pops, red = K.heap_pass(vals, kind == MAX)
    bp = BitVector(bp_bits_from_pops(pops), {"110"}, backend=backend)
    return ColoredHeap(kind, int(vals.size), bp, parent, pops, red)


def extract_color_array(h):
    """Colors of the valid nodes in preorder (1 = red)."""
    return BitVector(h.red[h.valid])


def is_valid(h, i):
    """True iff node ``i`` is neither a leftmost child nor right after a leaf sibling."""
    if not 1 <= i <= h.n:
        raise ValueError(f"node {i} outside 1..{h.n}")
    f = int(h.open_positions()[i])
    return f > 2 and h.bp.get(f - 2) == 1 and h.bp.get(f - 1) == 1
