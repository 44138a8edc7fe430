import numpy as np
import pytest

from snlv.heap import build_colored_heap, extract_color_array, is_valid

from conftest import SAMPLE, NaiveTree, all_arrays


def test_sample_examples():
    h = build_colored_heap(SAMPLE, "min")
    assert h.children(0) == [1, 2, 4, 5, 9]
    assert h.color(9) == "blue"
    assert h.bp.to_str() == "00100110100010111011"
    assert extract_color_array(h).to_str() == "10"
    assert [is_valid(h, i) for i in (4, 5, 1)] == [True, False, False]
    path = build_colored_heap([1, 2, 3], "min")
    assert list(path.parent) == [-1, 0, 1, 2]
    assert not path.red.any()
    assert extract_color_array(path).to_str() == ""
    hm = build_colored_heap(SAMPLE, "max")
    assert hm.parent[3] == 0
    assert len(extract_color_array(hm)) == hm.bp.count("110")


def test_errors():
    with pytest.raises(ValueError):
        build_colored_heap([], "min")
    with pytest.raises(ValueError):
        build_colored_heap([1], "median")
    with pytest.raises(ValueError):
        is_valid(build_colored_heap([1, 2], "min"), 0)


@pytest.mark.parametrize("kind", ["min", "max"])
def test_exhaustive_against_pointer_tree(kind):
    for A in all_arrays(1, 8):
        h = build_colored_heap(A, kind)
        t = NaiveTree(A, kind)
        assert h.bp.to_str() == t.bp
        assert list(h.parent[1:]) == t.parent[1:]
        assert [bool(x) for x in h.red[1:]] == t.red[1:]
        f = h.open_positions()
        bp = t.bp
        for i in range(1, len(A) + 1):
            by_bits = f[i] > 2 and bp[f[i] - 3] == "1" and bp[f[i] - 2] == "1"
            assert bool(h.valid[i]) == by_bits == t.valid(i)
            # internal node i has i+1 as its leftmost child
            if t.children[i]:
                assert t.children[i][0] == i + 1
        # extracted colors: length equals "110" count
        assert len(extract_color_array(h)) == h.bp.count("110")


def test_relevant_tree_exclusive():
    # with no equal neighbors, node i < n is internal in exactly one heap
    for A in all_arrays(2, 8):
        if any(a == b for a, b in zip(A, A[1:])):
            continue
        tmin, tmax = NaiveTree(A, "min"), NaiveTree(A, "max")
        for i in range(1, len(A)):
            assert bool(tmin.children[i]) != bool(tmax.children[i])


def test_strict_parent_values():
    rng = np.random.default_rng(0)
    A = rng.integers(0, 50, 2000)
    for kind in ("min", "max"):
        h = build_colored_heap(A, kind)
        for i in range(1, len(A) + 1):
            p = h.parent[i]
            if p:
                assert (A[p - 1] < A[i - 1]) if kind == "min" else (A[p - 1] > A[i - 1])
