"""Both kernel backends against string-level scans."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from snlv.kernels import BACKENDS

BK = list(BACKENDS.values())
bits_st = st.text(alphabet="01", min_size=1, max_size=200)


def to_bytes(s):
    pad = (-len(s)) % 8
    s2 = s + "0" * pad
    return int(s2, 2).to_bytes(len(s2) // 8, "big") if s2 else b""


def pref(s, j):
    return s[:j].count("0") - s[:j].count("1")


@pytest.mark.parametrize("K", BK, ids=lambda k: k.BACKEND)
@settings(max_examples=150, deadline=None)
@given(s=bits_st, data=st.data())
def test_block_scans(K, s, data):
    n = len(s)
    blk = to_bytes(s)
    j = data.draw(st.integers(0, n))
    assert K.prefix(blk, j) == pref(s, j)
    assert K.rank0(blk, j) == s[:j].count("0")
    z = s.count("0")
    if z:
        k = data.draw(st.integers(1, z))
        assert K.select0(blk, k) == [i + 1 for i, c in enumerate(s) if c == "0"][k - 1]
    o = s.count("1")
    if o:
        k = data.draw(st.integers(1, o))
        assert K.select1(blk, k) == [i + 1 for i, c in enumerate(s) if c == "1"][k - 1]
    t = data.draw(st.integers(-6, -1))
    want = next((q for q in range(j + 1, n + 1) if pref(s, q) - pref(s, j) == t), 0)
    assert K.fwd(blk, n, j, t) == want
    t0 = data.draw(st.integers(-6, 0))
    if t0 < 0 or (j >= 1 and s[j - 1] == "1"):
        want = next((q for q in range(j - 1, 0, -1) if pref(s, q) - pref(s, j) == t0), 0)
        assert K.bwd(blk, j, t0) == want


@pytest.mark.parametrize("K", BK, ids=lambda k: k.BACKEND)
@settings(max_examples=150, deadline=None)
@given(s=bits_st, data=st.data())
def test_range_min(K, s, data):
    n = len(s)
    blk = to_bytes(s)
    a = data.draw(st.integers(1, n))
    b = data.draw(st.integers(a, n))
    vals = [pref(s, q) for q in range(a, b + 1)]
    mn = min(vals)
    pos = [a + k for k, v in enumerate(vals) if v == mn]
    assert K.rmin(blk, a, b) == (mn, len(pos), pos[0], pos[-1])
    r = data.draw(st.integers(1, len(pos) + 1))
    assert K.selmin(blk, a, b, mn, r) == (pos[r - 1] if r <= len(pos) else 0)


@pytest.mark.parametrize("K", BK, ids=lambda k: k.BACKEND)
@settings(max_examples=150, deadline=None)
@given(s=bits_st, pat=st.text(alphabet="01", min_size=1, max_size=3),
       carry=st.text(alphabet="01", max_size=2), data=st.data())
def test_count_pattern(K, s, pat, carry, data):
    j = data.draw(st.integers(0, len(s)))
    full = carry + s[:j]
    want = sum(1 for e in range(len(carry), len(full))
               if e + 1 >= len(pat) and full[e + 1 - len(pat):e + 1] == pat)
    c = int(carry, 2) if carry else 0
    assert K.count_pattern(to_bytes(s), j, c, len(carry), int(pat, 2), len(pat)) == want


@pytest.mark.parametrize("K", BK, ids=lambda k: k.BACKEND)
def test_bulk_kernels_agree(K):
    rng = np.random.default_rng(5)
    ref = BACKENDS["python"]
    for _ in range(20):
        a = rng.integers(0, 4, size=int(rng.integers(1, 60)))
        for is_max in (False, True):
            got = K.heap_pass(a, is_max)
            exp = ref.heap_pass(a, is_max)
            for x, y in zip(got, exp):
                assert np.array_equal(x, y)
            cr = K.sibling_pass(got[0], got[2])
            cr2 = ref.sibling_pass(exp[0], exp[2])
            for x, y in zip(cr, cr2):
                assert np.array_equal(x, y)
