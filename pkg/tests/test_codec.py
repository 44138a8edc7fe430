import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from snlv.codec import (SIDES, CombinedEncoding, VirtualBp, check_block_size, decode_block,
                        encode, encode_array, encode_general, g, h, repeat_marks, space_report)
from snlv.heap import build_colored_heap, extract_color_array
from snlv.selftest import distinct_adjacent, with_repeats

from conftest import SAMPLE, all_arrays


def direct_bp(A, side):
    return build_colored_heap(A, side).bp.to_str()


def all_blocks(enc, side):
    return "".join(decode_block(enc, side, b) for b in range(enc.num_blocks(side)))


def test_sample_core_arrays():
    enc = encode_array(SAMPLE)
    U, D, E = enc.U.to_array(), enc.D.to_array(), enc.E.to_str()
    assert U[6 - 1] == 0          # node 6 is internal in the min heap
    assert D[6 - 1] == 2          # its max-side segment is 110
    assert E.split("0")[0] == ""  # first E entry is the bare 0
    assert len(U) == len(D) == 8
    assert enc.cmm.length == enc.split + len(enc.colors("max"))


def test_encode_from_bps_matches_encode_array():
    hs = {s: build_colored_heap(SAMPLE, s) for s in SIDES}
    enc = encode(hs["min"].bp, hs["max"].bp, extract_color_array(hs["min"]),
                 extract_color_array(hs["max"]))
    ref = encode_array(SAMPLE)
    for name in ("U", "E", "cmm"):
        assert getattr(enc, name) == getattr(ref, name)
    assert list(enc.D.to_array()) == list(ref.D.to_array())
    assert enc.fvals == ref.fvals


def test_encode_rejects_mismatched_bps():
    a = build_colored_heap([1, 2, 3], "min").bp
    b = build_colored_heap([1, 2, 3, 4], "max").bp
    with pytest.raises(ValueError):
        encode(a, b, "", "")
    same = build_colored_heap([1, 2, 3], "min").bp
    with pytest.raises(ValueError):
        encode(a, same, "", "")


def test_g_cases():
    assert g("", "", "", 1) == ""
    assert g("1", "0", "", 1) == "10"
    assert g("0", "1", "", 1) == "0"
    assert g("1", "1", "", 1) == "110"
    assert g("1", "2", "0", 1) == "1110"
    assert g("1", "2", "110", 1) == "111110"
    assert g("1", "2", "11", 1) == "11"          # entry cut off
    assert g("01", "22", "100", 1) == "0" + "1110"


def test_h_cases():
    assert h("0", "10") == "100"
    for b in ("0110", "10", "1110"):
        assert h(b, "0" * b.count("0")) == b
    assert h("110", "01") == "11010"


def test_general_example():
    A = [7, 7, 2, 2, 2, 9]
    enc, C = encode_general(A)
    assert C.to_str() == "010110"
    assert enc.general and enc.n == 6 and enc.n1 == 3
    core = encode_array([7, 2, 9])
    assert core.U == enc.U and core.E == enc.E
    for s in SIDES:
        assert all_blocks(enc, s) == direct_bp(A, s)


def test_distinct_adjacent_has_no_c():
    enc, C = encode_general(SAMPLE)
    assert not enc.general and C.to_str() == "0" * 9
    assert list(repeat_marks(SAMPLE)) == [0] * 9


@pytest.mark.parametrize("side", SIDES)
def test_sample_single_block(side):
    enc = encode_array(SAMPLE, 64)
    assert enc.num_blocks(side) == 1
    assert decode_block(enc, side, 0) == direct_bp(SAMPLE, side)


def test_exhaustive_small_arrays_decode():
    for A in all_arrays(1, 7):
        enc = encode_array(list(A), 64)
        for s in SIDES:
            assert all_blocks(enc, s) == direct_bp(A, s), (A, s)


@pytest.mark.parametrize("seed", range(4))
def test_multi_block_with_bad_blocks(seed):
    rng = np.random.default_rng(seed)
    # a long descent closed by one large value gives an E entry longer
    # than nine blocks, so both sides get a bad block
    saw = np.concatenate([np.arange(1000, 0, -1), [5000], np.arange(1000, 2000), [-5],
                          rng.integers(0, 5, 400)])
    arrays = [saw, distinct_adjacent(rng, 3000, 4), with_repeats(rng, 3000, 0.3, 50)]
    for A in arrays:
        enc = encode_array(A, 64)
        for s in SIDES:
            assert all_blocks(enc, s) == direct_bp(A, s)
    enc = encode_array(saw, 64)
    assert all(enc.dirs[s].bad.count() for s in SIDES)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=400),
       st.sampled_from([64, 128, 256]))
def test_decode_property(A, L):
    enc = encode_array(A, L)
    for s in SIDES:
        assert all_blocks(enc, s) == direct_bp(A, s)
        assert "".join(map(str, enc.full_bits(s))) == direct_bp(A, s)


def test_virtual_bp_matches():
    rng = np.random.default_rng(7)
    A = with_repeats(rng, 5000, 0.3, 100)
    enc = encode_array(A, 64)
    for s in SIDES:
        v = VirtualBp(enc, s, cache_blocks=2)
        exp = direct_bp(A, s)
        assert v.to_str() == exp
        for pos in (1, 63, 64, 65, 500, len(exp) - 10):
            w = min(40, len(exp) - pos + 1)
            assert v.access_word(pos, w) == int(exp[pos - 1:pos - 1 + w], 2)
        assert v.decodes > enc.num_blocks(s)


def test_block_errors():
    enc = encode_array(SAMPLE, 64)
    with pytest.raises(ValueError):
        enc.decode_block("min", 1)
    with pytest.raises(ValueError):
        enc.decode_block("median", 0)
    with pytest.raises(ValueError):
        check_block_size(100)
    with pytest.raises(ValueError):
        check_block_size(32)
    with pytest.raises(ValueError):
        encode_array([])
    with pytest.raises(ValueError):
        encode_array([1, 2, 3], 96)


def test_inconsistent_core_rejected():
    enc = encode_array(SAMPLE)
    E = enc.E.to_array().copy()
    E[-1] = 1
    with pytest.raises(ValueError):
        CombinedEncoding(enc.U.to_array(), enc.D.to_array(), E, enc.cmm.to_array(),
                         enc.split, enc.fvals, enc.n)


@pytest.mark.parametrize("A", [SAMPLE, [7, 7, 2, 2, 2, 9], [4], [3, 3, 3]])
def test_serialization_round_trip(A, tmp_path):
    enc = encode_array(A, 64, levels=3)
    path = tmp_path / "ix.snlv"
    enc.save(path)
    back = CombinedEncoding.load(path)
    assert back.to_bytes() == enc.to_bytes()
    assert back.general == enc.general and back.levels == 3 and back.block_size == 64
    for s in SIDES:
        assert all_blocks(back, s) == direct_bp(A, s)


def test_serialization_errors():
    data = encode_array(SAMPLE).to_bytes()
    with pytest.raises(ValueError):
        CombinedEncoding.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(ValueError):
        CombinedEncoding.from_bytes(data[:-3])


def test_space_report_fields():
    rep = space_report(encode_array(SAMPLE))
    assert rep["U"] == 8 and rep["E"] == 2 and rep["c_minmax"] == 4 and rep["C"] == 0
    assert rep["core_total"] == sum(rep[k] for k in ("U", "D", "E", "c_minmax", "f_values", "C"))
    assert rep["aux_total"] == sum(v for k, v in rep.items() if k.startswith("dir_"))
    gen = space_report(encode_array([7, 7, 2, 2, 2, 9]))
    assert gen["C"] == 6 and gen["C_entropy"] > 0


def test_space_bounds_moderate_n():
    rng = np.random.default_rng(3)
    rep = space_report(encode_array(rng.permutation(50_000)))
    assert rep["core_per_n"] <= 3.605
    rep = space_report(encode_array(with_repeats(rng, 50_000, 0.3)))
    assert rep["core_per_n"] <= 3.721
