"""Oracle-equivalence, decode-equivalence, Baxter and reconstruction suites.

Each suite returns a ``SuiteResult`` with the number of checks made and
the first few failure witnesses, so that tests and the CLI can report
them the same way.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .codec import SIDES, CombinedEncoding, encode_array
from .heap import build_colored_heap
from .oracle import (CountingAccess, NaiveOracle, UnsupportedInstance, baxter_permutations,
                     dense_rank, enumerate_An, reconstruct_from_queries, sample_An)
from .query import KINDS, QueryIndex

BAXTER_COUNTS = (1, 2, 6, 22, 92, 422, 2074)
MAX_WITNESSES = 5


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.failures

    def fail(self, witness):
        if len(self.failures) < MAX_WITNESSES:
            self.failures.append(witness)
        else:
            self.extra["more_failures"] = self.extra.get("more_failures", 0) + 1


# ---------------------------------------------------------------- arrays

def exhaustive_arrays(lo=2, hi=9, alphabet=(1, 2, 3)):
    for n in range(lo, hi + 1):
        yield from itertools.product(alphabet, repeat=n)


def distinct_adjacent(rng, n, sigma):
    """Random array over ``0..sigma-1`` with no two equal neighbours."""
    A = np.empty(n, dtype=np.int64)
    A[0] = rng.integers(0, sigma)
    steps = rng.integers(1, sigma, n)
    A[1:] = steps[1:]
    return np.cumsum(A) % sigma if sigma > 1 else A


def with_repeats(rng, n, p, sigma=10**9):
    """Random array where each element repeats its left neighbour with probability p."""
    A = rng.integers(0, sigma, n)
    rep = rng.random(n) < p
    rep[0] = False
    idx = np.where(rep, 0, np.arange(n))
    idx = np.maximum.accumulate(idx)
    return A[idx]


def random_workload(seed=42, count=100, n=10_000, queries=10_000):
    """Suite arrays (half distinct-adjacent, half with repeats) and their queries."""
    rng = np.random.default_rng(seed)
    sigmas = (3, 10, 1000, 10**9)
    for k in range(count):
        if k < count // 2:
            A = distinct_adjacent(rng, n, sigmas[k % len(sigmas)])
        else:
            A = with_repeats(rng, n, 0.3, sigmas[k % len(sigmas)])
        yield A, make_queries(rng, n, queries)


def make_queries(rng, n, count):
    kinds = list(KINDS)
    out = []
    ks = rng.integers(0, len(kinds), count)
    ij = np.sort(rng.integers(1, n + 1, (count, 2)), axis=1)
    qs = rng.integers(1, 8, count)
    for t in range(count):
        kind = kinds[ks[t]]
        ar = KINDS[kind]
        i, j = int(ij[t, 0]), int(ij[t, 1])
        args = (i,) if ar == 1 else (i, j) if ar == 2 else (i, j, int(qs[t]))
        out.append((kind, args))
    return out


# ---------------------------------------------------------------- suites

def check_all_queries(ix, A, res):
    """Every query at every argument tuple (q up to n) against the oracle."""
    o = NaiveOracle(A)
    n = o.n
    for i in range(1, n + 1):
        for kind in ("psv", "plv", "nsv", "nlv"):
            got, exp = getattr(ix, kind)(i), getattr(o, kind)(i)
            res.checks += 1
            if got != exp:
                res.fail((list(A), kind, (i,), got, exp))
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for largest, rq, qq in ((False, ix.rmin, ix.rmin_q), (True, ix.rmax, ix.rmax_q)):
                occ = o.occurrences(i, j, largest)
                k = len(occ)
                name = "rmax" if largest else "rmin"
                res.checks += n + 1
                if rq(i, j) != occ[0]:
                    res.fail((list(A), name, (i, j), rq(i, j), occ[0]))
                for q in range(1, n + 1):
                    got = qq(i, j, q)
                    if got != occ[min(q, k) - 1]:
                        res.fail((list(A), name + "q", (i, j, q), got, occ[min(q, k) - 1]))


def _index(A, mutate, build):
    enc = encode_array(A, **build)
    if mutate is not None:
        enc = mutate(enc)
    return QueryIndex(enc)


def exhaustive_suite(lo=2, hi=9, alphabet=(1, 2, 3), mutate=None, **build):
    """All queries on every array of length lo..hi over ``alphabet``.

    ``mutate`` may alter each encoding before the index is built, to
    check that corruption is caught.
    """
    res = SuiteResult("exhaustive")
    for A in exhaustive_arrays(lo, hi, alphabet):
        res.extra["arrays"] = res.extra.get("arrays", 0) + 1
        try:
            check_all_queries(_index(list(A), mutate, build), A, res)
        except (ValueError, IndexError) as e:
            res.fail((list(A), "error", repr(e)))
    return res


def flip_e_bit(enc):
    """Copy of ``enc`` with one E entry shortened and the next lengthened.

    The first "10" in E becomes "01", which keeps the entry count, so
    the damage shows in the decoded trees. Without such a spot the middle
    bit is inverted instead. An empty E is left unchanged.
    """
    E = enc.E.to_array().copy()
    if not E.size:
        return enc
    hits = np.flatnonzero((E[:-1] == 1) & (E[1:] == 0))
    if hits.size:
        k = int(hits[0])
        E[k], E[k + 1] = 0, 1
    else:
        E[E.size // 2] ^= 1
    return CombinedEncoding(enc.U.to_array(), enc.D.to_array(), E, enc.cmm.to_array(),
                            enc.split, enc.fvals, enc.n,
                            enc.C.to_array() if enc.general else None,
                            enc.block_size, enc.levels)


def run_workload(ix, A, queries, res, other=None):
    """Answer ``queries`` with ``ix``; compare to the oracle or to ``other``."""
    ref = other if other is not None else NaiveOracle(A)
    for kind, args in queries:
        got = ix.query(kind, *args)
        exp = ref.query(kind, *args)
        res.checks += 1
        if got != exp:
            res.fail((kind, args, got, exp))


def random_suite(seed=42, count=100, n=10_000, queries=10_000, mutate=None, **build):
    res = SuiteResult("random")
    for A, qs in random_workload(seed, count, n, queries):
        try:
            run_workload(_index(A, mutate, build), A, qs, res)
        except (ValueError, IndexError) as e:
            res.fail((f"array of length {len(A)}", "error", repr(e)))
    return res


def virtual_suite(seed=42, count=100, n=10_000, queries=10_000, cache_blocks=4):
    """Virtual-BP index against an explicit-BP index on the random workload.

    A small block cache makes most queries decode their blocks afresh.
    """
    res = SuiteResult("virtual")
    for A, qs in random_workload(seed, count, n, queries):
        enc = encode_array(A)
        exp = QueryIndex(enc, virtual=False)
        got = QueryIndex(enc, virtual=True, cache_blocks=cache_blocks)
        run_workload(got, A, qs, res, other=exp)
        res.extra["decoded_blocks"] = res.extra.get("decoded_blocks", 0) + sum(
            got.sides[s].t.src.decodes for s in SIDES)
    return res


def decode_suite(arrays, block_size=64):
    """Every block of both decoded BPs against the directly built BP."""
    res = SuiteResult("decode")
    for A in arrays:
        enc = encode_array(A, block_size)
        for s in SIDES:
            direct = build_colored_heap(A, s).bp
            L = block_size
            for b in range(enc.num_blocks(s)):
                got = enc.decode_block(s, b)
                exp = direct.window(b * L + 1, min(L, direct.length - b * L))
                exp = exp + b"\0" * (L // 8 - len(exp))
                res.checks += 1
                if got != exp:
                    res.fail((len(A), s, b))
    return res


def baxter_suite(counts=BAXTER_COUNTS):
    res = SuiteResult("baxter")
    for m, exp in enumerate(counts, start=1):
        got = len(baxter_permutations(m))
        res.checks += 1
        if got != exp:
            res.fail((m, got, exp))
    return res


def reconstruction_suite(nmax=6, sample_n=7, sample=1000, seed=0, engine=True):
    """Reconstruct every A_n instance (n ≤ nmax) plus a sample of A_{sample_n}."""
    res = SuiteResult("reconstruction")
    inst = [x for n in range(2, nmax + 1) for x in enumerate_An(n)]
    if sample:
        inst += sample_An(sample_n, sample, seed)
    for x in inst:
        src = QueryIndex.build(list(x.array)) if engine else NaiveOracle(x.array)
        acc = CountingAccess(src, x.n)
        res.checks += 1
        try:
            got = reconstruct_from_queries(acc)
        except UnsupportedInstance as e:
            res.fail((x.array, str(e)))
            continue
        if got != dense_rank(x.array):
            res.fail((x.array, got))
        res.extra["queries"] = res.extra.get("queries", 0) + acc.calls
    return res
