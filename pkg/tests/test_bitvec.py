import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from snlv.bitvec import (BitVector, EliasFano, PackedInts, TritArray, access_word,
                         build_bitvector, rank_pattern, select_pattern)

SAMPLE_BP = "00100110100010111011"


def scan_ends(s, p):
    return [e + 1 for e in range(len(p) - 1, len(s)) if s[e - len(p) + 1:e + 1] == p]


def test_examples():
    bv = build_bitvector(SAMPLE_BP, {"110"})
    # oracle: scan for occurrences ending at each position
    ends = scan_ends(SAMPLE_BP, "110")
    assert rank_pattern(bv, "110", 8) == sum(e <= 8 for e in ends) == 1
    # scan finds occurrences ending at 8 and 18 only
    assert rank_pattern(bv, "110", 20) == len(ends) == 2
    assert rank_pattern(bv, "110", 2) == 0
    assert rank_pattern(build_bitvector("0000"), "1", 4) == 0
    assert select_pattern(build_bitvector("0101"), "1", 2) == 4
    b2 = build_bitvector("110110", {"110"})
    assert rank_pattern(b2, "110", 6) == 2
    assert select_pattern(b2, "110", 2) == 4
    assert select_pattern(build_bitvector("0101"), "0", 1) == 1
    assert select_pattern(build_bitvector("0001"), "1", 1) == 4
    assert access_word(bv, 1, 4) == 0b0010
    assert access_word(bv, 20, 1) == 1
    assert access_word(build_bitvector("01011010"), 5, 3) == 0b101


def test_errors():
    with pytest.raises(ValueError):
        build_bitvector("0101", {""})
    with pytest.raises(ValueError):
        build_bitvector("0101", {"010101010"})
    bv = build_bitvector("0101")
    with pytest.raises(ValueError):
        rank_pattern(bv, "1", 5)
    with pytest.raises(LookupError):
        select_pattern(bv, "1", 3)
    with pytest.raises(ValueError):
        access_word(bv, 3, 3)


@settings(max_examples=60, deadline=None)
@given(s=st.text(alphabet="01", min_size=1, max_size=64))
def test_small_bruteforce(s):
    pats = ["".join(t) for k in (1, 2, 3) for t in itertools.product("01", repeat=k)]
    bv = BitVector(s, pats)
    for p in pats:
        ends = scan_ends(s, p)
        for i in range(1, len(s) + 1):
            assert bv.rank(p, i) == sum(e <= i for e in ends)
        for j, e in enumerate(ends, 1):
            assert bv.select(p, j) == e - len(p) + 1
        assert bv.count(p) == len(ends)


@pytest.mark.parametrize("n", [511, 512, 513, 4096 * 3 + 17, 70000])
def test_large_rank_select(n):
    rng = np.random.default_rng(n)
    arr = (rng.random(n) < 0.4).astype(np.uint8)
    bv = BitVector(arr, {"110"})
    s = "".join(map(str, arr))
    ones = np.flatnonzero(arr) + 1
    zeros = np.flatnonzero(arr == 0) + 1
    ends = np.array(scan_ends(s, "110"))
    for i in list(rng.integers(1, n + 1, 300)) + [n, 1]:
        i = int(i)
        assert bv.rank1(i) == int(arr[:i].sum())
        assert bv.rank0(i) == i - int(arr[:i].sum())
        assert bv.rank("110", i) == int((ends <= i).sum())
    for j in list(rng.integers(1, len(ones) + 1, 200)) + [len(ones)]:
        assert bv.select1(int(j)) == ones[j - 1]
    for j in list(rng.integers(1, len(zeros) + 1, 200)):
        assert bv.select0(int(j)) == zeros[j - 1]
    for j in list(rng.integers(1, len(ends) + 1, 100)):
        assert bv.select("110", int(j)) == ends[j - 1] - 2
    for pos in rng.integers(1, n - 64, 100):
        pos = int(pos)
        w = int(rng.integers(1, 65))
        assert bv.access_word(pos, w) == int(s[pos - 1:pos - 1 + w], 2)


def test_from_bytes_roundtrip():
    bv = BitVector("1011001110001")
    bv2 = BitVector.from_bytes(bv.raw, bv.length)
    assert bv == bv2 and bv2.to_str() == "1011001110001"


def test_trits_exhaustive_and_random():
    for n in range(0, 11):
        for vals in itertools.product(range(3), repeat=n):
            assert tuple(TritArray(vals).to_array()) == vals
    rng = np.random.default_rng(1)
    for n in range(8, 21):
        for _ in range(50):
            vals = rng.integers(0, 3, n)
            t = TritArray(vals)
            assert list(t.to_array()) == list(vals)
            assert [t.get(i) for i in range(1, n + 1)] == list(vals)
            assert t.size_bits() <= -(-n * 8 // 5) + 8


@settings(max_examples=60, deadline=None)
@given(vals=st.lists(st.integers(0, 10**6), max_size=80))
def test_elias_fano(vals):
    vals = sorted(vals)
    ef = EliasFano(vals)
    assert [ef[k] for k in range(len(vals))] == vals
    for x in set(vals) | {0, 5, 10**6 + 1}:
        assert ef.rank_lt(x) == sum(v < x for v in vals)
        assert ef.index(x) == (vals.index(x) if x in vals else -1)


def test_packed_ints():
    vals = [0, 5, 3, 7, 1, 6]
    pk = PackedInts(vals)
    assert pk.width == 3 and [pk[k] for k in range(6)] == vals
    assert PackedInts([0, 0]).size_bits() == 0
