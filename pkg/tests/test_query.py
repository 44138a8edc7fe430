import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from snlv.codec import encode_array
from snlv.oracle import NaiveOracle
from snlv.query import KINDS, QueryIndex, moduli
from snlv.selftest import SuiteResult, check_all_queries, make_queries, with_repeats

from conftest import SAMPLE, NaiveTree, all_arrays


@pytest.fixture(scope="module")
def sample():
    return QueryIndex.build(SAMPLE)


def test_sample_colors(sample):
    assert sample.color("min", 9) == "blue"
    assert sample.color("min", 3) == "blue"
    assert sample.color("min", 5) == "red"


def test_sample_red_siblings(sample):
    assert sample.prs("min", 9) == 5
    assert sample.nrs("min", 9) is None
    assert sample.prs("min", 2) is None


def test_sample_queries(sample):
    assert sample.psv(7) == 6 and sample.psv(4) == 0 and sample.psv(1) == 0
    assert sample.plv(8) == 7
    assert sample.nsv(4) == 5 and sample.nsv(9) == 10 and sample.nsv(8) == 9
    assert sample.rmin(1, 9) == 5 and sample.rmax(1, 9) == 7
    assert all(sample.rmin(i, i) == i for i in range(1, 10))
    assert sample.rmin_q(1, 9, 2) == 9 and sample.rmin_q(1, 9, 3) == 9
    assert sample.rmax_q(1, 9, 2) == 7


def test_query_dispatch(sample):
    assert sample.query("rminq", 1, 9, 3) == 9
    assert sample.query("nlv", 6) == 7
    with pytest.raises(ValueError):
        sample.query("median", 1, 2)
    with pytest.raises(ValueError):
        sample.query("rmin", 1)


@pytest.mark.parametrize("call", [
    lambda ix: ix.psv(0), lambda ix: ix.nsv(10), lambda ix: ix.rmin(5, 4),
    lambda ix: ix.rmax(0, 3), lambda ix: ix.rmin_q(1, 9, 0), lambda ix: ix.rmax_q(1, 9, -2),
    lambda ix: ix.psv(1.5), lambda ix: ix.color("mid", 1), lambda ix: ix.color("min", 12),
])
def test_invalid_arguments(sample, call):
    with pytest.raises(ValueError):
        call(sample)


def test_moduli():
    assert moduli(10**6, 2)[0] > moduli(10**6, 2)[1] >= 2
    assert moduli(4, 4) == [2, 2, 2, 2]
    for bad in (0, 5):
        with pytest.raises(ValueError):
            moduli(100, bad)


def test_single_element():
    ix = QueryIndex.build([42])
    assert (ix.psv(1), ix.nsv(1), ix.plv(1), ix.nlv(1)) == (0, 2, 0, 2)
    assert ix.rmin(1, 1) == ix.rmax_q(1, 1, 5) == 1


@pytest.mark.parametrize("virtual", [True, False])
def test_exhaustive_small(virtual):
    res = SuiteResult("small")
    for A in all_arrays(1, 6):
        ix = QueryIndex(encode_array(list(A), 64), virtual=virtual)
        check_all_queries(ix, A, res)
    assert res.ok, res.failures


@pytest.mark.parametrize("levels", [1, 2, 3, 4])
def test_levels_agree_with_oracle(levels):
    rng = np.random.default_rng(levels)
    for A in (with_repeats(rng, 3000, 0.3, 4), rng.integers(0, 3, 3000), rng.permutation(3000)):
        ix = QueryIndex.build(A, levels=levels, block_size=64)
        o = NaiveOracle(A)
        for kind, args in make_queries(rng, A.size, 1500):
            assert ix.query(kind, *args) == o.query(kind, *args), (kind, args)


def naive_red_sibling(t, i, step):
    s = t.siblings(i)
    k = s.index(i) + step
    while 0 <= k < len(s):
        if t.red[s[k]]:
            return s[k]
        k += step
    return None


@pytest.mark.parametrize("levels", [1, 2, 3])
def test_prs_nrs_against_pointer_tree(levels):
    rng = np.random.default_rng(11)
    # a flat array over few values gives long sibling lists
    A = [int(x) for x in rng.integers(0, 3, 2500)]
    A[0] = -1
    ix = QueryIndex.build(A, levels=levels, block_size=64)
    top = moduli(len(A), levels)[-1]
    for side in ("min", "max"):
        t = NaiveTree(A, side)
        for i in range(1, len(A) + 1):
            p, tp = ix.prs_traced(side, i)
            q, tq = ix.nrs_traced(side, i)
            assert p == naive_red_sibling(t, i, -1)
            assert q == naive_red_sibling(t, i, 1)
            assert ix.color(side, i) == ("red" if t.red[i] else "blue")
            for tr in (tp, tq):
                assert tr.scan <= top and tr.jumps <= levels + 1


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=60), st.data())
def test_scaling_invariance(A, data):
    B = [5 * x ** 3 + 1000 for x in A]      # strictly increasing transform
    ia, ib = QueryIndex.build(A), QueryIndex.build(B)
    n = len(A)
    for _ in range(20):
        kind = data.draw(st.sampled_from(sorted(KINDS)))
        i = data.draw(st.integers(1, n))
        j = data.draw(st.integers(i, n))
        args = (i,) if KINDS[kind] == 1 else (i, j) if KINDS[kind] == 2 else (i, j, 2)
        assert ia.query(kind, *args) == ib.query(kind, *args)


def test_equal_minima_are_blue_sibling_runs():
    for A in all_arrays(2, 7):
        t = NaiveTree(A, "min")
        o = NaiveOracle(A)
        n = len(A)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                occ = o.occurrences(i, j)
                sib = t.siblings(occ[0])
                k = sib.index(occ[0])
                assert sib[k:k + len(occ)] == occ
                assert not any(t.red[p] for p in occ[1:])


def test_space_report_has_nav(sample):
    rep = sample.space_report()
    assert rep["nav_total"] == sum(v for k, v in rep.items()
                                   if k.startswith("nav_") and k not in ("nav_total", "nav_per_n"))
