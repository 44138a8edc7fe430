"""Joint encoding of the min- and max-heap BPs, and block decoding.

For an array with no two equal neighbours, node ``i`` (1 ≤ i < n) is
internal in exactly one of the two heaps; that heap is its *relevant*
tree, where ``f(i+1) = f(i) + 1``. In the other heap the BP between the
two opens is ``1^k 0``. The encoding stores

* ``U[i]`` = 0 if the min heap is relevant for ``i``, else 1,
* ``D[i]`` = min(k - 1, 2) as a trit,
* ``E``   = the entries ``1^(k-3) 0`` for every ``D[i] = 2``,
* ``c_minmax`` = colors of the valid nodes of both heaps.

Arrays with equal neighbours are reduced with ``C[i] = [A[i] == A[i-1]]``
to the compacted array ``A'``; the BP over ``A`` follows from the BP over
``A'`` by inserting ``10`` before each repeated node.

Any block of either BP can be decoded from a few directory entries; see
``CombinedEncoding.decode_block``.
"""

import math
import struct
from dataclasses import dataclass

import numpy as np

from .bitvec import BitVector, EliasFano, PackedInts, TritArray, pack_bits, unpack_bits
from .heap import bp_bits_from_pops
from .kernels import get_backend

SIDES = ("min", "max")
# U bit value marking segments where a side is NOT relevant
SIDE_FLAG = {"min": 1, "max": 0}
BAD_FACTOR = 9
DEFAULT_BLOCK = 256
MAGIC = b"SNLV"
VERSION = 1


def check_block_size(L):
    if L < 64 or L & (L - 1):
        raise ValueError(f"block size must be a power of two ≥ 64, got {L}")
    return L


def _bits_of(x):
    if isinstance(x, BitVector):
        return x.to_array()
    if isinstance(x, str):
        return (np.frombuffer(x.encode("ascii"), dtype=np.uint8) - ord("0")).astype(np.uint8)
    return np.asarray(x, dtype=np.uint8).reshape(-1)


def _lg(x):
    return max(1, int(x).bit_length())


# ---------------------------------------------------------------- reference g and h

def g(u, d, e, b):
    """Reference segment decoder, one case at a time.

    ``u`` and ``e`` are bit strings, ``d`` a trit sequence. A segment whose
    ``e`` entry is cut off (``e = 1^t`` with no closing 0) yields ``1^t``
    and ends the output.
    """
    u = [int(x) for x in u]
    d = [int(x) for x in d]
    e = [int(x) for x in e]
    out = []
    ep = 0
    for ub, dt in zip(u, d):
        if ub != b:
            out.append("0")
            if dt == 2:
                while ep < len(e) and e[ep] == 1:
                    ep += 1
                ep += 1
        elif dt == 0:
            out.append("10")
        elif dt == 1:
            out.append("110")
        else:
            t = 0
            while ep + t < len(e) and e[ep + t] == 1:
                t += 1
            if ep + t >= len(e):
                out.append("1" * t)
                break
            out.append("1" * (t + 3) + "0")
            ep += t + 1
    return "".join(out)


def h(b, c):
    """Reference expansion of a BP over A' into a BP over A, one case at a time."""
    out = []
    bp = 0
    for cb in c:
        if cb in (1, "1"):
            out.append("10")
            continue
        t = 0
        while bp + t < len(b) and b[bp + t] in (1, "1"):
            t += 1
        if bp + t >= len(b):
            out.append("1" * t)
            break
        out.append("1" * t + "0")
        bp += t + 1
    return "".join(out)


# ---------------------------------------------------------------- core arrays

def _core_arrays(bits_min, bits_max):
    """U, D, k, E bits and E offsets from two BPs over one distinct-adjacent array."""
    if bits_min.size != bits_max.size or bits_min.size < 4 or bits_min.size % 2:
        raise ValueError("BPs must have the same even length ≥ 4")
    fmin = np.flatnonzero(bits_min == 0) + 1
    fmax = np.flatnonzero(bits_max == 0) + 1
    if fmin.size != bits_min.size // 2 or fmax.size != fmin.size:
        raise ValueError("BPs are not balanced")
    gmin = fmin[2:] - fmin[1:-1] - 1
    gmax = fmax[2:] - fmax[1:-1] - 1
    clash = (gmin == 0) == (gmax == 0)
    if clash.any():
        i = int(np.flatnonzero(clash)[0]) + 1
        raise ValueError(f"node {i} is relevant in both or neither heap; "
                         "the array has equal neighbours")
    U = (gmin != 0).astype(np.uint8)
    k = (gmin + gmax).astype(np.int64)
    D = np.minimum(k - 1, 2).astype(np.uint8)
    lens = np.where(D == 2, k - 2, 0)
    es = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
    E = np.ones(int(es[-1]), dtype=np.uint8)
    E[es[1:][D == 2] - 1] = 0
    return U, D, k, E, es


def _bp_from_core(U, D, E, side):
    """Full BP over A' from U/D/E (vectorized inverse of the encoding)."""
    n1 = U.size + 1
    two = D == 2
    zeros = np.flatnonzero(E == 0)
    if zeros.size != int(two.sum()):
        raise ValueError("E entries do not match the D=2 segments")
    starts = np.concatenate([[0], zeros[:-1] + 1]) if zeros.size else np.zeros(0, np.int64)
    k = D.astype(np.int64) + 1
    k[two] = (zeros - starts + 1) + 2
    nonrel = U == SIDE_FLAG[side]
    pops = np.zeros(n1 + 1, dtype=np.int64)
    pops[2:] = np.where(nonrel, k, 0)
    return bp_bits_from_pops(pops)


def _pops_of(bits):
    f = np.flatnonzero(bits == 0)
    pops = np.zeros(f.size, dtype=np.int64)
    pops[1:] = f[1:] - f[:-1] - 1
    return pops


def _expand_bp(bits_core, C):
    """BP over A from the BP over A' and the repeat marks C."""
    pc = _pops_of(bits_core)
    n = C.size
    pops = np.zeros(n + 1, dtype=np.int64)
    rep = C.astype(bool)
    pops[1:][rep] = 1
    pops[1:][~rep] = pc[1:]
    return bp_bits_from_pops(pops)


# ---------------------------------------------------------------- directories

@dataclass
class CoreDirectory:
    """Per-block decode state of one side's BP over A'."""
    nblk: int
    alpha: EliasFano      # segment holding each block's first bit
    eps: EliasFano        # E offset at each block start
    R: PackedInts         # leading segment bits to drop (0..3)
    bad: BitVector        # blocks whose E span is too long
    F: BitVector          # concatenated E extracts of bad blocks
    foff: EliasFano       # extract offsets in F

    def sizes(self):
        return {
            "alpha": self.alpha.size_bits() + self.alpha.directory_bits(),
            "eps": self.eps.size_bits() + self.eps.directory_bits(),
            "R": self.R.size_bits(),
            "bad": self.bad.size_bits() + self.bad.directory_bits(),
            "F": self.F.size_bits(),
            "F_offsets": self.foff.size_bits() + self.foff.directory_bits(),
        }


@dataclass
class GeneralDirectory:
    """Per-block h-decode state of one side's BP over A."""
    nblk: int
    pb: EliasFano         # BP' position feeding each block
    pc: EliasFano         # C position feeding each block
    skip: BitVector       # drop the first decoded bit

    def sizes(self):
        return {
            "M_Bprime": self.pb.size_bits() + self.pb.directory_bits(),
            "M_C": self.pc.size_bits() + self.pc.directory_bits(),
            "first_bit": self.skip.size_bits(),
        }


def _core_directory(bits, U, D, es, side, L):
    N = bits.size
    n1 = N // 2 - 1
    b = SIDE_FLAG[side]
    nblk = -(-N // L)
    f = np.flatnonzero(bits == 0) + 1
    zc = np.cumsum(bits == 0)
    P = np.arange(1, nblk, dtype=np.int64) * L + 1
    alpha = zc[P - 2] - 1
    inseg = alpha <= n1 - 1
    aidx = np.clip(alpha - 1, 0, max(U.size - 1, 0))
    o = P - f[np.minimum(alpha, n1)] - 1
    if U.size:
        nonrel = inseg & (U[aidx] == b)
        two = D[aidx] == 2
        base = es[np.clip(alpha - 1, 0, es.size - 1)]
    else:
        nonrel = two = np.zeros(P.size, dtype=bool)
        base = np.zeros(P.size, dtype=np.int64)
    eps = np.where(inseg, base + np.where(nonrel & two, np.maximum(o - 3, 0), 0), es[-1])
    r = np.where(inseg, np.minimum(o, 3), 0)
    alpha_all = np.concatenate([[0], alpha]).astype(np.int64)
    eps_all = np.concatenate([[0], eps]).astype(np.int64)
    r_all = np.concatenate([[0], r]).astype(np.int64)
    eps_next = np.concatenate([eps_all[1:], [es[-1]]])
    bad = (eps_next - eps_all) >= BAD_FACTOR * L
    pieces = []
    offs = [0]
    for i in np.flatnonzero(bad):
        a0 = max(int(alpha_all[i]), 1)
        a1 = int(alpha_all[i + 1]) if i + 1 < nblk else n1 - 1
        a1 = min(a1, n1 - 1)
        lo, hi = int(eps_all[i]), int(eps_next[i])
        segs = np.arange(a0, a1 + 1)
        segs = segs[(U[segs - 1] == b) & (D[segs - 1] == 2)]
        got = 0
        for s in segs:
            x0, x1 = max(lo, int(es[s - 1])), min(hi, int(es[s]))
            if x1 > x0:
                pieces.append((x0, x1))
                got += x1 - x0
        offs.append(offs[-1] + got)
    return nblk, alpha_all, eps_all, r_all, bad, pieces, offs


def _general_directory(bits_a, C, L):
    N = bits_a.size
    nblk = -(-N // L)
    f = np.flatnonzero(bits_a == 0) + 1
    is_add = np.zeros(N, dtype=bool)
    rep = np.flatnonzero(C) + 1          # 1-indexed repeated nodes
    is_add[f[rep] - 2] = True
    is_add[f[rep] - 1] = True
    orig = np.cumsum(~is_add)
    zc = np.cumsum(bits_a == 0)
    P = np.arange(1, nblk, dtype=np.int64) * L + 1
    pb = np.concatenate([[1], orig[P - 2] + 1]).astype(np.int64)
    pc = np.concatenate([[0], zc[P - 2]]).astype(np.int64)
    skip = np.concatenate([[0], (is_add[P - 1] & (bits_a[P - 1] == 0))]).astype(np.uint8)
    return GeneralDirectory(nblk, EliasFano(pb), EliasFano(pc), BitVector(skip))


# ---------------------------------------------------------------- encoding

class CombinedEncoding:
    """U/D/E core, colors, optional C, and per-side decode directories."""

    def __init__(self, U, D, E, cmm, split, fvals, n, C=None, block_size=DEFAULT_BLOCK,
                 levels=2, *, bits=None, backend=None):
        """Assemble from core arrays (uint8 numpy arrays).

        ``bits`` optionally supplies the already known BPs over A' as a
        dict side -> array; otherwise they are reconstructed.
        """
        self._k = get_backend(backend)
        self.block_size = check_block_size(block_size)
        self.levels = levels
        self.n = int(n)
        self.n1 = int(U.size) + 1
        self.general = C is not None
        self.U = BitVector(U, rank=False)
        self.D = TritArray(D)
        self.E = BitVector(E, rank=False)
        self.cmm = BitVector(cmm, rank=False)
        self.split = int(split)
        self.fvals = tuple(int(x) for x in fvals)
        self.C = BitVector(C, rank=False) if C is not None else None
        Uarr = np.asarray(U, dtype=np.uint8)
        Darr = np.asarray(D, dtype=np.uint8)
        lens = np.zeros(Uarr.size, dtype=np.int64)
        Earr = np.asarray(E, dtype=np.uint8)
        if Uarr.size != self.n1 - 1 or Darr.size != Uarr.size:
            raise ValueError("U and D lengths disagree")
        zeros = np.flatnonzero(Earr == 0)
        if zeros.size != int((Darr == 2).sum()) or (Earr.size and Earr[-1] != 0):
            raise ValueError("E entries do not match the D=2 segments")
        if Uarr.size:
            lens[Darr == 2] = np.diff(np.concatenate([[-1], zeros]))
        es = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
        if bits is None:
            bits = {s: _bp_from_core(Uarr, Darr, Earr, s) for s in SIDES}
        self.dirs = {}
        for s in SIDES:
            nblk, al, ep, rr, bad, pieces, offs = _core_directory(
                bits[s], Uarr, Darr, es, s, self.block_size)
            Fbits = (np.concatenate([Earr[a:b] for a, b in pieces])
                     if pieces else np.zeros(0, np.uint8))
            self.dirs[s] = CoreDirectory(
                nblk, EliasFano(al), EliasFano(ep), PackedInts(rr, width=2),
                BitVector(bad.astype(np.uint8)), BitVector(Fbits, rank=False), EliasFano(offs))
        self.gdirs = {}
        if self.general:
            Carr = np.asarray(C, dtype=np.uint8)
            for s in SIDES:
                self.gdirs[s] = _general_directory(_expand_bp(bits[s], Carr), Carr,
                                                   self.block_size)
        self._core_src = {}

    # ------------------------------------------------------------ facts

    @property
    def bp_length(self):
        """Length of either BP over the original array."""
        return 2 * (self.n + 1)

    def colors(self, side):
        """Valid-node colors of one side as a 0/1 array."""
        a = self.cmm.to_array()
        return a[: self.split] if side == "min" else a[self.split:]

    def full_bits(self, side):
        """Whole BP over A of one side as a 0/1 array (bulk decode)."""
        bits = _bp_from_core(self.U.to_array(), self.D.to_array(), self.E.to_array(), side)
        if self.general:
            bits = _expand_bp(bits, self.C.to_array())
        return bits

    # ------------------------------------------------------------ decoding

    def _decode_core(self, side, i):
        d = self.dirs[side]
        if not 0 <= i < d.nblk:
            raise ValueError(f"block {i} outside 0..{d.nblk - 1}")
        L = self.block_size
        if i == 0:
            alpha = eps = r = 0
        else:
            alpha, eps, r = d.alpha[i], d.eps[i], d.R[i]
        if d.bad.get(i + 1):
            j = d.bad.rank1(i + 1) - 1
            f0, f1 = d.foff[j], d.foff[j + 1]
            e, elen, eps, filt = d.F.window(f0 + 1, f1 - f0), f1 - f0, 0, True
        else:
            e, elen, filt = self.E.raw, self.E.length, False
        out = self._k.g_decode(self.U.raw, self.D.raw, e, elen, self.n1 - 1, alpha, eps, r,
                               SIDE_FLAG[side], filt, L)
        return _clip(out, L, 2 * (self.n1 + 1) - i * L)

    def _decode_general(self, side, i):
        d = self.gdirs[side]
        if not 0 <= i < d.nblk:
            raise ValueError(f"block {i} outside 0..{d.nblk - 1}")
        L = self.block_size
        if i == 0:
            pb, pc, skip, nout = 2, 1, 0, L - 1
        else:
            pb, pc, skip, nout = d.pb[i], d.pc[i], d.skip.get(i + 1), L
        inner = self.core_source(side)
        nb = max(0, min(L + 64, inner.length - pb + 1))
        bw = inner.window(pb, nb) if nb else b""
        nc = max(0, min(L + 8, self.n - pc + 1))
        cw = self.C.window(pc, nc) if nc else b""
        out = self._k.h_decode(bw, nb, cw, nc, pc + nc > self.n, skip, nout)
        if i == 0:
            out = (int.from_bytes(out, "big") >> 1).to_bytes(L // 8, "big")
        return _clip(out, L, self.bp_length - i * L)

    def decode_block(self, side, i):
        """Bits ``iL+1 .. (i+1)L`` of ``side``'s BP over A as ``L/8`` bytes.

        Bits past the end of the BP are 0.
        """
        if side not in SIDES:
            raise ValueError(f"side must be 'min' or 'max', not {side!r}")
        if self.general:
            return self._decode_general(side, i)
        return self._decode_core(side, i)

    def num_blocks(self, side="min"):
        return (self.gdirs if self.general else self.dirs)[side].nblk

    def core_source(self, side):
        src = self._core_src.get(side)
        if src is None:
            src = self._core_src[side] = VirtualBp(self, side, core=True)
        return src

    def source(self, side, cache_blocks=256):
        """A block source over ``side``'s BP over A."""
        return VirtualBp(self, side, cache_blocks=cache_blocks)

    # ------------------------------------------------------------ accounting

    def space_report(self):
        """Bit counts per component; core and auxiliary totals."""
        n = self.n
        lgN = _lg(2 * (self.n1 + 1))
        rep = {
            "n": n,
            "n_core": self.n1,
            "U": self.U.length,
            "D": self.D.size_bits(),
            "D_ideal": math.ceil((self.n1 - 1) * math.log2(3)) if self.n1 > 1 else 0,
            "E": self.E.length,
            "c_minmax": self.cmm.length,
            "f_values": 2 * lgN + _lg(self.cmm.length + 1),
            "C": self.C.length if self.general else 0,
        }
        if self.general:
            kc = int(self.C.to_array().sum())
            rep["C_entropy"] = _log2_binom(n, kc)
        rep["core_total"] = sum(rep[k] for k in ("U", "D", "E", "c_minmax", "f_values", "C"))
        rep["core_per_n"] = rep["core_total"] / n
        aux = 0
        for s in SIDES:
            for name, v in self.dirs[s].sizes().items():
                rep[f"dir_{s}_{name}"] = v
                aux += v
            if self.general:
                for name, v in self.gdirs[s].sizes().items():
                    rep[f"dir_{s}_{name}"] = v
                    aux += v
        rep["aux_total"] = aux
        rep["aux_per_n"] = aux / n
        return rep

    # ------------------------------------------------------------ serialization

    def to_bytes(self):
        flags = 1 if self.general else 0
        head = MAGIC + struct.pack("<HHQQBxxxI", VERSION, flags, self.n, self.n1,
                                   self.levels, self.block_size)
        secs = [
            (b"U   ", self.U.length, self.U.raw),
            (b"D   ", self.D.length, self.D.raw),
            (b"E   ", self.E.length, self.E.raw),
            (b"CMM ", self.cmm.length, self.cmm.raw),
            (b"FN  ", 3, _words_to_raw([self.fvals[0], self.fvals[1], self.split])),
        ]
        if self.general:
            secs.append((b"C   ", self.C.length, self.C.raw))
        body = [head]
        for tag, length, raw in secs:
            words = _raw_to_le_words(raw)
            body.append(tag + struct.pack("<QQ", length, len(words) // 8) + words)
        return b"".join(body)

    @classmethod
    def from_bytes(cls, data, *, backend=None):
        if data[:4] != MAGIC:
            raise ValueError("not an index file (bad magic)")
        try:
            version, flags, n, n1, levels, L = struct.unpack_from("<HHQQBxxxI", data, 4)
        except struct.error:
            raise ValueError("truncated index header") from None
        if version != VERSION:
            raise ValueError(f"unsupported index version {version}")
        pos = 4 + struct.calcsize("<HHQQBxxxI")
        secs = {}
        while pos < len(data):
            if pos + 20 > len(data):
                raise ValueError("truncated section header")
            tag = data[pos:pos + 4]
            length, nw = struct.unpack_from("<QQ", data, pos + 4)
            pos += 20
            if pos + 8 * nw > len(data):
                raise ValueError(f"truncated section {tag!r}")
            secs[tag] = (length, _le_words_to_raw(data[pos:pos + 8 * nw]))
            pos += 8 * nw
        need = [b"U   ", b"D   ", b"E   ", b"CMM ", b"FN  "] + ([b"C   "] if flags & 1 else [])
        for t in need:
            if t not in secs:
                raise ValueError(f"missing section {t!r}")
        U = unpack_bits(secs[b"U   "][1], secs[b"U   "][0])
        D = TritArray.from_bytes(secs[b"D   "][1], secs[b"D   "][0]).to_array()
        E = unpack_bits(secs[b"E   "][1], secs[b"E   "][0])
        cmm = unpack_bits(secs[b"CMM "][1], secs[b"CMM "][0])
        fm, fx, split = _raw_to_words(secs[b"FN  "][1], 3)
        C = unpack_bits(secs[b"C   "][1], secs[b"C   "][0]) if flags & 1 else None
        if U.size != n1 - 1 or D.size != n1 - 1:
            raise ValueError("section lengths disagree with header")
        return cls(U, D, E, cmm, split, (fm, fx), n, C, L, levels, backend=backend)

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path, *, backend=None):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read(), backend=backend)


def _clip(out, L, valid):
    if valid >= L:
        return out
    x = int.from_bytes(out, "big")
    x &= ~((1 << (L - max(valid, 0))) - 1)
    return x.to_bytes(L // 8, "big")


def _log2_binom(n, k):
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)


def _raw_to_le_words(raw):
    pad = (-len(raw)) % 8
    arr = np.frombuffer(raw + b"\0" * pad, dtype=">u8")
    return arr.astype("<u8").tobytes()


def _le_words_to_raw(data):
    return np.frombuffer(data, dtype="<u8").astype(">u8").tobytes()


def _words_to_raw(vals):
    return np.array(vals, dtype=">u8").tobytes()


def _raw_to_words(raw, k):
    return [int(x) for x in np.frombuffer(raw[:8 * k], dtype=">u8")]


# ---------------------------------------------------------------- builders

def encode(bp_min, bp_max, c_min, c_max, block_size=DEFAULT_BLOCK, levels=2, *, backend=None):
    """Encode two BPs over one distinct-adjacent array plus their colors."""
    bmin, bmax = _bits_of(bp_min), _bits_of(bp_max)
    U, D, k, E, es = _core_arrays(bmin, bmax)
    cmin, cmax = _bits_of(c_min), _bits_of(c_max)
    fmin = int(np.flatnonzero(bmin == 0)[-1]) + 1
    fmax = int(np.flatnonzero(bmax == 0)[-1]) + 1
    cmm = np.concatenate([cmin, cmax]).astype(np.uint8)
    n = bmin.size // 2 - 1
    return CombinedEncoding(U, D, E, cmm, cmin.size, (fmin, fmax), n, None, block_size, levels,
                            bits={"min": bmin, "max": bmax}, backend=backend)


def repeat_marks(A):
    """C[i] = 1 iff i > 1 and A[i] equals A[i-1]."""
    A = np.asarray(A, dtype=np.int64).reshape(-1)
    C = np.zeros(A.size, dtype=np.uint8)
    C[1:] = A[1:] == A[:-1]
    return C


def encode_array(A, block_size=DEFAULT_BLOCK, levels=2, *, backend=None):
    """Encode any non-empty array; C is kept only if it has a repeat."""
    A = np.asarray(A, dtype=np.int64).reshape(-1)
    if A.size == 0:
        raise ValueError("array must not be empty")
    K = get_backend(backend)
    C = repeat_marks(A)
    core = A[C == 0]
    bits, cols = {}, {}
    for s in SIDES:
        _, pops, red = K.heap_pass(core, s == "max")
        bits[s] = bp_bits_from_pops(pops)
        cols[s] = red[pops >= 2]
    U, D, k, E, es = _core_arrays(bits["min"], bits["max"])
    cmm = np.concatenate([cols["min"], cols["max"]]).astype(np.uint8)
    fv = tuple(int(np.flatnonzero(bits[s] == 0)[-1]) + 1 for s in SIDES)
    general = bool(C.any())
    return CombinedEncoding(U, D, E, cmm, cols["min"].size, fv, A.size,
                            C if general else None, block_size, levels,
                            bits=bits, backend=backend)


def encode_general(A, block_size=DEFAULT_BLOCK, levels=2, *, backend=None):
    """Encode an arbitrary array; returns the encoding and its C vector."""
    enc = encode_array(A, block_size, levels, backend=backend)
    C = enc.C if enc.general else BitVector(np.zeros(enc.n, dtype=np.uint8), rank=False)
    return enc, C


def decode_block(enc, side, block):
    """Block ``block`` of ``side``'s BP as a bit string (clipped at the BP end)."""
    L = enc.block_size
    raw = enc.decode_block(side, block)
    nbits = min(L, enc.bp_length - block * L)
    return "".join(map(str, unpack_bits(raw, nbits)))


def space_report(enc):
    return enc.space_report()


# ---------------------------------------------------------------- virtual BP

class VirtualBp:
    """Block source over a BP that is decoded on demand from an encoding."""

    def __init__(self, enc, side, core=False, cache_blocks=256):
        if side not in SIDES:
            raise ValueError(f"side must be 'min' or 'max', not {side!r}")
        self.enc = enc
        self.side = side
        self.core = core or not enc.general
        self.length = 2 * ((enc.n1 if self.core else enc.n) + 1)
        self._L = enc.block_size
        self._nblk = -(-self.length // self._L)
        self._dec = enc._decode_core if self.core else enc._decode_general
        self._cache = {}
        self._big = {}
        self._n512 = -(-self.length // 512)
        self._cap = max(cache_blocks, 1)
        self.decodes = 0

    def _codec_block(self, i):
        if i >= self._nblk:
            return b"\0" * (self._L // 8)
        self.decodes += 1
        return self._dec(self.side, i)

    def block(self, k):
        """512-bit block ``k`` as 64 bytes."""
        b = self._cache.get(k)
        if b is not None:
            return b
        if len(self._cache) >= self._cap:
            self._cache.clear()
        L = self._L
        if L <= 512:
            per = 512 // L
            b = b"".join(self._codec_block(k * per + t) for t in range(per))
        else:
            ci = (k * 512) // L
            big = self._big.get(ci)
            if big is None:
                if len(self._big) >= 8:
                    self._big.clear()
                big = self._big[ci] = self._codec_block(ci)
            off = ((k * 512) % L) // 8
            b = big[off:off + 64]
        self._cache[k] = b
        if len(self._cache) == self._n512:
            # fully decoded: serve straight from the cache from now on
            self.block = self._cache.__getitem__
        return b

    def bits(self, pos, w):
        """``w`` bits from ``pos`` as an integer (0 past the end)."""
        if w <= 0:
            return 0
        k0 = (pos - 1) >> 9
        k1 = (pos + w - 2) >> 9
        raw = b"".join(self.block(k) for k in range(k0, k1 + 1))
        x = int.from_bytes(raw, "big")
        shift = 8 * len(raw) - (pos - 1 - (k0 << 9)) - w
        return (x >> shift) & ((1 << w) - 1)

    def window(self, pos, w):
        nby = (w + 7) >> 3
        return (self.bits(pos, w) << (8 * nby - w)).to_bytes(nby, "big")

    def access_word(self, pos, w):
        if w < 0 or w > 64 or pos < 1 or pos + w - 1 > self.length:
            raise ValueError(f"word [{pos}, {pos + w - 1}] outside 1..{self.length}")
        return self.bits(pos, w)

    def to_str(self):
        return "".join(str((self.block((p - 1) >> 9)[((p - 1) & 511) >> 3] >> (7 - ((p - 1) & 7))) & 1)
                       for p in range(1, self.length + 1))
