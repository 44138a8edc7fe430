"""Packed bit arrays with rank/select, trit arrays and monotone sequences.

Positions are 1-indexed like the bit strings they model. Bits are packed
MSB-first into ``bytes``; serialization converts to 64-bit little-endian
words.
"""

from bisect import bisect_left

import numpy as np

from .kernels import get_backend

SUPER = 512
WORD = 64
SAMPLE = 4096


def _as_bits(bits):
    """Normalize a bit sequence (str, iterable of 0/1, array) to uint8 array."""
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        if arr.size and arr.max() > 1:
            raise ValueError("bit strings may only contain 0 and 1")
        return arr.astype(np.uint8)
    arr = np.asarray(list(bits) if not hasattr(bits, "__len__") else bits, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return arr.reshape(-1)


def pack_bits(arr):
    """Pack a 0/1 array into MSB-first bytes."""
    return np.packbits(np.asarray(arr, dtype=np.uint8)).tobytes()


def unpack_bits(raw, length):
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), count=length)


def _parse_pattern(p):
    if isinstance(p, str):
        if not p or len(p) > 8 or set(p) - {"0", "1"}:
            raise ValueError(f"invalid pattern {p!r}")
        return p
    raise ValueError(f"invalid pattern {p!r}")


class BitVector:
    """Bit array with rank/select for "0", "1" and registered short patterns.

    Pattern ranks count occurrences by the position of their last bit, so
    ``rank("110", i)`` includes an occurrence ending exactly at ``i``.
    """

    def __init__(self, bits=(), patterns=(), *, rank=True, backend=None):
        arr = _as_bits(bits)
        self._init(pack_bits(arr), int(arr.size), patterns if rank else None, backend, arr)

    @classmethod
    def from_bytes(cls, raw, length, patterns=(), *, rank=True, backend=None):
        self = cls.__new__(cls)
        raw = bytes(raw[: (length + 7) >> 3])
        raw += b"\0" * (((length + 7) >> 3) - len(raw))
        if length & 7:
            last = raw[-1] & (0xFF << (8 - (length & 7))) & 0xFF
            raw = raw[:-1] + bytes([last])
        self._init(raw, length, patterns if rank else None, backend, None)
        return self

    def _init(self, raw, length, patterns, backend, arr):
        self._k = get_backend(backend)
        self.raw = raw
        self.length = length
        if patterns is None:
            # access-only vector: no rank/select directories
            self.patterns = ()
            self._dirs = {}
            return
        pats = ["0", "1"]
        for p in patterns:
            p = _parse_pattern(p)
            if p not in pats:
                pats.append(p)
        self.patterns = tuple(pats)
        if arr is None:
            arr = unpack_bits(raw, length)
        self._dirs = {p: self._build_dir(arr, p) for p in pats}

    def _build_dir(self, arr, p):
        n = self.length
        plen = len(p)
        if plen == 1:
            ind = arr if p == "1" else (1 - arr)
        else:
            ind = np.zeros(n, dtype=np.uint8)
            if n >= plen:
                ok = np.ones(n - plen + 1, dtype=bool)
                for k, ch in enumerate(p):
                    ok &= arr[k:n - plen + 1 + k] == int(ch)
                ind[plen - 1:] = ok
        nw = (n + WORD - 1) // WORD
        padded = np.zeros(nw * WORD, dtype=np.int64)
        padded[:n] = ind
        per_word = padded.reshape(nw, WORD).sum(axis=1) if nw else np.zeros(0, np.int64)
        cum = np.concatenate([[0], np.cumsum(per_word)]).astype(np.int64)
        per_sb = SUPER // WORD
        sb_abs = cum[::per_sb].copy()
        rel = (cum - np.repeat(sb_abs, per_sb)[:nw + 1]).astype(np.uint16)
        total = int(cum[-1])
        # select samples: superblock holding occurrence 1, 1+SAMPLE, ...
        targets = np.arange(1, total + 1, SAMPLE)
        samples = np.searchsorted(sb_abs, targets, side="left") - 1
        return {
            "abs": sb_abs.tolist(),
            "rel": rel.tolist(),
            "total": total,
            "samples": samples.tolist(),
            "plen": plen,
            "pat": int(p, 2),
        }

    # ------------------------------------------------------------ basics

    def __len__(self):
        return self.length

    def get(self, i):
        """Bit at 1-indexed position ``i``."""
        if not 1 <= i <= self.length:
            raise IndexError(f"position {i} outside 1..{self.length}")
        i -= 1
        return (self.raw[i >> 3] >> (7 - (i & 7))) & 1

    def to_str(self):
        return "".join(map(str, unpack_bits(self.raw, self.length)))

    def to_array(self):
        return unpack_bits(self.raw, self.length)

    def access_word(self, pos, w):
        """The ``w`` (≤ 64) bits starting at ``pos`` as an integer."""
        if w < 0 or w > 64 or pos < 1 or pos + w - 1 > self.length:
            raise ValueError(f"word [{pos}, {pos + w - 1}] outside 1..{self.length}")
        if w == 0:
            return 0
        s = pos - 1
        b0 = s >> 3
        b1 = (s + w + 7) >> 3
        x = int.from_bytes(self.raw[b0:b1], "big")
        return (x >> (8 * (b1 - b0) - (s & 7) - w)) & ((1 << w) - 1)

    def bits(self, pos, w):
        """Like ``access_word`` but without the 64-bit limit (0-padded past the end)."""
        if w <= 0:
            return 0
        s = pos - 1
        b0 = s >> 3
        b1 = (s + w + 7) >> 3
        chunk = self.raw[b0:b1]
        x = int.from_bytes(chunk, "big") << (8 * (b1 - b0 - len(chunk)))
        return (x >> (8 * (b1 - b0) - (s & 7) - w)) & ((1 << w) - 1)

    def window(self, pos, w):
        """``w`` bits from ``pos`` as MSB-first bytes (0-padded past the end)."""
        nby = (w + 7) >> 3
        return (self.bits(pos, w) << (8 * nby - w)).to_bytes(nby, "big")

    def block(self, k):
        """512-bit block ``k`` (bits ``512k+1 .. 512k+512``) as 64 bytes."""
        b = self.raw[64 * k: 64 * k + 64]
        if len(b) < 64:
            b = b + b"\0" * (64 - len(b))
        return b

    # ------------------------------------------------------------ rank/select

    def _dir(self, p):
        try:
            return self._dirs[p]
        except KeyError:
            raise ValueError(f"pattern {p!r} is not registered") from None

    def rank(self, p, i):
        """Occurrences of pattern ``p`` whose last bit is at position ≤ ``i``."""
        d = self._dir(p)
        if i < 0 or i > self.length:
            raise ValueError(f"position {i} outside 0..{self.length}")
        w = i >> 6
        cnt = d["abs"][w >> 3] + d["rel"][w]
        r = i & 63
        if r == 0:
            return cnt
        s = w << 6
        chunk = self.raw[s >> 3: (s >> 3) + 8]
        if d["plen"] == 1:
            x = int.from_bytes(chunk, "big") >> (8 * len(chunk) - r)
            ones = x.bit_count()
            return cnt + (ones if p == "1" else r - ones)
        plen = d["plen"]
        clen = min(plen - 1, s)
        carry = self.bits(s - clen + 1, clen) if clen else 0
        return cnt + self._k.count_pattern(chunk, r, carry, clen, d["pat"], plen)

    def rank1(self, i):
        return self.rank("1", i)

    def rank0(self, i):
        return self.rank("0", i)

    def count(self, p="1"):
        return self._dir(p)["total"]

    def select(self, p, j):
        """Start position of the ``j``-th occurrence of ``p`` (left to right)."""
        d = self._dir(p)
        if not 1 <= j <= d["total"]:
            raise LookupError(f"occurrence {j} of {p!r} does not exist")
        ab = d["abs"]
        s = (j - 1) // SAMPLE
        lo = d["samples"][s]
        hi = d["samples"][s + 1] + 1 if s + 1 < len(d["samples"]) else len(ab)
        sb = bisect_left(ab, j, lo, hi) - 1
        rel = d["rel"]
        w = sb << 3
        wend = min(w + 8, len(rel))
        base = ab[sb]
        while w + 1 < wend and base + rel[w + 1] < j:
            w += 1
        k = j - base - rel[w]
        s0 = w << 6
        chunk = self.raw[s0 >> 3: (s0 >> 3) + 8]
        plen = d["plen"]
        if plen == 1:
            end = (self._k.select1 if p == "1" else self._k.select0)(chunk, k)
            return s0 + end
        clen = min(plen - 1, s0)
        carry = self.bits(s0 - clen + 1, clen) if clen else 0
        nb = min(64, self.length - s0)
        lo_j, hi_j = 1, nb
        cp = self._k.count_pattern
        while lo_j < hi_j:
            mid = (lo_j + hi_j) // 2
            if cp(chunk, mid, carry, clen, d["pat"], plen) >= k:
                hi_j = mid
            else:
                lo_j = mid + 1
        return s0 + lo_j - plen + 1

    def select1(self, j):
        return self.select("1", j)

    def select0(self, j):
        return self.select("0", j)

    # ------------------------------------------------------------ accounting

    def size_bits(self):
        """Raw payload bits (what an encoding must persist)."""
        return self.length

    def directory_bits(self):
        """Bits taken by rank/select directories."""
        tot = 0
        for d in self._dirs.values():
            tot += 64 * len(d["abs"]) + 16 * len(d["rel"]) + 64 * len(d["samples"])
        return tot

    def __eq__(self, other):
        return isinstance(other, BitVector) and self.length == other.length and self.raw == other.raw

    def __repr__(self):
        s = self.to_str() if self.length <= 64 else self.to_str()[:61] + "..."
        return f"BitVector({s!r}, n={self.length})"


def build_bitvector(bits, patterns=()):
    """Build a ``BitVector`` supporting "0", "1" and ``patterns``."""
    return BitVector(bits, patterns)


def rank_pattern(bv, p, i):
    if not 1 <= i <= bv.length:
        raise ValueError(f"position {i} outside 1..{bv.length}")
    return bv.rank(p, i)


def select_pattern(bv, p, j):
    return bv.select(p, j)


def access_word(bv, pos, w):
    return bv.access_word(pos, w)


# ---------------------------------------------------------------- trits

_TRIT_POW = np.array([81, 27, 9, 3, 1], dtype=np.int64)
_TRIT_DEC = np.array([[(v // p) % 3 for p in (81, 27, 9, 3, 1)] for v in range(243)],
                     dtype=np.uint8)


class TritArray:
    """Sequence over {0, 1, 2} packed five trits per byte."""

    def __init__(self, values=()):
        arr = np.asarray(list(values) if not hasattr(values, "__len__") else values,
                         dtype=np.int64).reshape(-1)
        if arr.size and (arr.min() < 0 or arr.max() > 2):
            raise ValueError("trits must be 0, 1 or 2")
        self.length = int(arr.size)
        pad = (-self.length) % 5
        grp = np.concatenate([arr, np.zeros(pad, np.int64)]).reshape(-1, 5)
        self.raw = (grp @ _TRIT_POW).astype(np.uint8).tobytes()

    @classmethod
    def from_bytes(cls, raw, length):
        self = cls.__new__(cls)
        self.length = length
        self.raw = bytes(raw[: (length + 4) // 5])
        if any(b > 242 for b in self.raw):
            raise ValueError("corrupt trit payload")
        return self

    def __len__(self):
        return self.length

    def get(self, i):
        """Trit at 1-indexed position ``i``."""
        if not 1 <= i <= self.length:
            raise IndexError(f"position {i} outside 1..{self.length}")
        i -= 1
        return int(_TRIT_DEC[self.raw[i // 5], i % 5])

    def to_array(self):
        if not self.length:
            return np.zeros(0, dtype=np.uint8)
        return _TRIT_DEC[np.frombuffer(self.raw, dtype=np.uint8)].reshape(-1)[: self.length]

    def size_bits(self):
        return 8 * len(self.raw)


# ---------------------------------------------------------------- fixed width

class PackedInts:
    """Fixed-width unsigned integers, 0-indexed."""

    def __init__(self, values, width=None):
        vals = np.asarray(values, dtype=np.int64).reshape(-1)
        if vals.size and vals.min() < 0:
            raise ValueError("values must be non-negative")
        need = int(vals.max()).bit_length() if vals.size else 0
        self.width = need if width is None else width
        if need > self.width:
            raise ValueError("width too small")
        self.length = int(vals.size)
        w = self.width
        if w and self.length:
            shifts = np.arange(w - 1, -1, -1, dtype=np.int64)
            bits = ((vals[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)
            self.raw = pack_bits(bits)
        else:
            self.raw = b""

    def __len__(self):
        return self.length

    def __getitem__(self, k):
        if not 0 <= k < self.length:
            raise IndexError(k)
        w = self.width
        if not w:
            return 0
        s = k * w
        b0 = s >> 3
        b1 = (s + w + 7) >> 3
        x = int.from_bytes(self.raw[b0:b1], "big")
        return (x >> (8 * (b1 - b0) - (s & 7) - w)) & ((1 << w) - 1)

    def to_array(self):
        return np.array([self[k] for k in range(self.length)], dtype=np.int64)

    def size_bits(self):
        return self.length * self.width


# ---------------------------------------------------------------- Elias-Fano

class EliasFano:
    """Non-decreasing integer sequence in Elias-Fano form, 0-indexed."""

    def __init__(self, values, universe=None):
        vals = np.asarray(values, dtype=np.int64).reshape(-1)
        if vals.size and (vals.min() < 0 or np.any(np.diff(vals) < 0)):
            raise ValueError("values must be non-negative and non-decreasing")
        m = int(vals.size)
        u = int(vals[-1]) + 1 if m else 1
        if universe is not None:
            u = max(u, int(universe))
        self.length = m
        self.universe = u
        low = max(0, (u // max(m, 1)).bit_length() - 1)
        self.low_width = low
        self._low = PackedInts(vals & ((1 << low) - 1), width=low)
        hi = vals >> low
        nh = m + (int(hi[-1]) if m else 0) + 1
        hb = np.zeros(nh, dtype=np.uint8)
        if m:
            hb[hi + np.arange(m)] = 1
        self._high = BitVector(hb)

    def __len__(self):
        return self.length

    def __getitem__(self, k):
        if not 0 <= k < self.length:
            raise IndexError(k)
        h = self._high.select1(k + 1) - 1 - k
        return (h << self.low_width) | self._low[k]

    def rank_lt(self, x):
        """Number of values strictly below ``x``."""
        if x <= 0 or not self.length:
            return 0
        h = x >> self.low_width
        # values with high part < h come before the h-th zero
        if h == 0:
            k = 0
        else:
            zeros = self._high.count("0")
            if h > zeros:
                return self.length
            k = self._high.select0(h) - h
        while k < self.length and self[k] < x:
            k += 1
        return k

    def index(self, x):
        """Position of value ``x`` or ``-1``."""
        k = self.rank_lt(x)
        return k if k < self.length and self[k] == x else -1

    def to_array(self):
        return np.array([self[k] for k in range(self.length)], dtype=np.int64)

    def size_bits(self):
        return self._low.size_bits() + self._high.length

    def directory_bits(self):
        return self._high.directory_bits()
