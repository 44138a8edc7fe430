"""Ground truth by linear scans, Baxter permutations and the class A_n.

``NaiveOracle`` answers every query straight from its definition.
``enumerate_An`` lists the arrays built from a Baxter permutation by
copying left neighbours into some positions, and
``reconstruct_from_queries`` recovers such an array up to order
isomorphism from range q-th minimum and maximum queries alone.
"""

import itertools
import math
import random
from dataclasses import dataclass
from functools import cmp_to_key, lru_cache

import numpy as np

QUERY_ARITY = {"rmin": 2, "rmax": 2, "rminq": 3, "rmaxq": 3,
               "psv": 1, "nsv": 1, "plv": 1, "nlv": 1}


class UnsupportedInstance(Exception):
    """The hidden array cannot be reconstructed (it lies outside A_n)."""


# ---------------------------------------------------------------- naive oracle

class NaiveOracle:
    """Linear-scan answers over a raw array (positions are 1-based)."""

    def __init__(self, values):
        self.A = np.asarray(values, dtype=np.int64).reshape(-1)
        if not self.A.size:
            raise ValueError("array must not be empty")
        self.n = int(self.A.size)

    def _pos(self, i):
        if not isinstance(i, (int, np.integer)) or not 1 <= i <= self.n:
            raise ValueError(f"position {i} outside 1..{self.n}")
        return int(i)

    def _span(self, i, j):
        i, j = self._pos(i), self._pos(j)
        if i > j:
            raise ValueError(f"empty range [{i}, {j}]")
        return i, j

    def _prev(self, i, hit):
        i = self._pos(i)
        h = np.flatnonzero(hit(self.A[:i - 1], self.A[i - 1]))
        return int(h[-1]) + 1 if h.size else 0

    def _next(self, i, hit):
        i = self._pos(i)
        h = np.flatnonzero(hit(self.A[i:], self.A[i - 1]))
        return i + int(h[0]) + 1 if h.size else self.n + 1

    def psv(self, i):
        return self._prev(i, np.less)

    def plv(self, i):
        return self._prev(i, np.greater)

    def nsv(self, i):
        return self._next(i, np.less)

    def nlv(self, i):
        return self._next(i, np.greater)

    def occurrences(self, i, j, largest=False):
        """Positions in [i, j] holding the range minimum (or maximum), ascending."""
        i, j = self._span(i, j)
        seg = self.A[i - 1:j]
        m = seg.max() if largest else seg.min()
        return (np.flatnonzero(seg == m) + i).tolist()

    def rmin(self, i, j):
        return self.occurrences(i, j)[0]

    def rmax(self, i, j):
        return self.occurrences(i, j, True)[0]

    def _qth(self, occ, q):
        if not isinstance(q, (int, np.integer)) or q < 1:
            raise ValueError(f"q must be a positive integer, got {q}")
        return occ[min(q, len(occ)) - 1]

    def rmin_q(self, i, j, q):
        return self._qth(self.occurrences(i, j), q)

    def rmax_q(self, i, j, q):
        return self._qth(self.occurrences(i, j, True), q)

    def query(self, kind, *args):
        return oracle_query(self, kind, *args)


def oracle_query(o, kind, *args):
    """Dispatch one of the eight query kinds by name."""
    if kind not in QUERY_ARITY:
        raise ValueError(f"unknown query kind {kind!r}")
    if len(args) != QUERY_ARITY[kind]:
        raise ValueError(f"{kind} takes {QUERY_ARITY[kind]} arguments, got {len(args)}")
    fn = {"rminq": o.rmin_q, "rmaxq": o.rmax_q}.get(kind) or getattr(o, kind)
    return fn(*args)


# ---------------------------------------------------------------- Baxter permutations

def _check_perm(perm):
    p = list(perm)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError("not a permutation of 1..m")
    return p


def is_baxter(perm):
    """True iff ``perm`` avoids the vincular patterns 2-41-3 and 3-14-2."""
    s = _check_perm(perm)
    m = len(s)
    for j in range(m - 1):
        a, b = s[j], s[j + 1]
        lo, hi = min(a, b), max(a, b)
        if hi - lo < 3:
            continue
        left = [v for v in s[:j] if lo < v < hi]
        if not left:
            continue
        right = [v for v in s[j + 2:] if lo < v < hi]
        for x in left:
            for z in right:
                # 2-41-3: s[j+1] < x < z < s[j];  3-14-2: s[j] < z < x < s[j+1]
                if (a > b and x < z) or (a < b and z < x):
                    return False
    return True


@lru_cache(maxsize=None)
def baxter_permutations(m):
    """All Baxter permutations of size ``m`` as tuples (lexicographic)."""
    if m < 0:
        raise ValueError("size must be ≥ 0")
    return tuple(p for p in itertools.permutations(range(1, m + 1)) if is_baxter(p))


# ---------------------------------------------------------------- the class A_n

@dataclass(frozen=True)
class AnInstance:
    n: int
    picked: tuple        # positions in 2..n copying their left neighbour
    base: tuple          # Baxter permutation over the unpicked positions
    array: tuple


def materialize(n, picked, base):
    picked = set(picked)
    out = []
    it = iter(base)
    for p in range(1, n + 1):
        out.append(out[-1] if p in picked else next(it))
    return tuple(out)


def _check_n(n, hi=9):
    if not isinstance(n, int) or not 2 <= n <= hi:
        raise ValueError(f"n must be in 2..{hi}, got {n}")


def enumerate_An(n, stats=None):
    """Every distinct array of A_n, as ``AnInstance`` records.

    ``stats`` (a dict) receives ``generated`` and ``collisions`` counts.
    """
    _check_n(n)
    seen = set()
    gen = 0
    for k in range(n):
        for picked in itertools.combinations(range(2, n + 1), k):
            for base in baxter_permutations(n - k):
                gen += 1
                arr = materialize(n, picked, base)
                if arr in seen:
                    continue
                seen.add(arr)
                yield AnInstance(n, picked, base, arr)
    if stats is not None:
        stats["generated"] = gen
        stats["collisions"] = gen - len(seen)


def an_size_formula(n):
    """Sum over k of Baxter(n-k) * C(n-1, k)."""
    return sum(len(baxter_permutations(n - k)) * math.comb(n - 1, k) for k in range(n))


def sample_An(n, count, seed=0):
    """``count`` instances of A_n drawn uniformly without replacement."""
    pool = list(enumerate_An(n))
    rng = random.Random(seed)
    return rng.sample(pool, min(count, len(pool)))


# ---------------------------------------------------------------- reconstruction

class CountingAccess:
    """Query access restricted to chosen kinds, with a call counter."""

    def __init__(self, source, n, kinds=("rminq", "rmaxq")):
        self._src = source
        self.n = n
        self.kinds = frozenset(kinds)
        self.calls = 0

    def query(self, kind, *args):
        if kind not in self.kinds:
            raise PermissionError(f"query kind {kind!r} is not available")
        self.calls += 1
        return oracle_query(self._src, kind, *args)


def _occurrences(acc, kind, i, j):
    occ = [acc.query(kind, i, j, 1)]
    q = 2
    while True:
        p = acc.query(kind, i, j, q)
        if p == occ[-1]:
            return occ
        occ.append(p)
        q += 1


def _resolve(rel, a, i, b):
    """Sign of A[a] - A[b] implied by known relations to A[i], or None."""
    ra, rb = rel[a][i], rel[i][b]   # sign(A[a]-A[i]), sign(A[i]-A[b])
    if ra < 0 and rb <= 0 or ra <= 0 and rb < 0:
        return -1
    if ra > 0 and rb >= 0 or ra >= 0 and rb > 0:
        return 1
    if ra == 0 and rb == 0:
        return 0
    return None


def reconstruct_from_queries(acc, n=None):
    """Dense ranking order-isomorphic to the hidden array behind ``acc``.

    ``acc`` must offer ``query(kind, i, j, q)`` for ``rminq`` and
    ``rmaxq``. Raises ``UnsupportedInstance`` if the answers do not
    determine a consistent order.
    """
    n = acc.n if n is None else n
    if n < 1:
        raise ValueError("n must be ≥ 1")
    rel = [[0] * (n + 1) for _ in range(n + 1)]
    seen = {}

    def put(a, b, s):
        rel[a][b], rel[b][a] = s, -s

    for gap in range(1, n):
        for a in range(1, n - gap + 1):
            b = a + gap
            omin = _occurrences(acc, "rminq", a, b)
            omax = _occurrences(acc, "rmaxq", a, b)
            seen[a, b] = (omin, omax)
            s = None
            for occ, sign in ((omin, -1), (omax, 1)):
                ina, inb = a in occ, b in occ
                if ina and inb:
                    s = 0
                elif ina:
                    s = sign
                elif inb:
                    s = -sign
                if s is not None:
                    break
            if s is None:
                x, y = omin[-1], omax[-1]
                for i in range(min(x, y), max(x, y) + 1):
                    s = _resolve(rel, a, i, b)
                    if s is not None:
                        break
                if s is None:
                    s = -1 if x < y else 1
            put(a, b, s)
    order = sorted(range(1, n + 1), key=cmp_to_key(lambda u, v: rel[u][v]))
    rank = [0] * (n + 1)
    r = 0
    for k, p in enumerate(order):
        if k == 0 or rel[p][order[k - 1]] != 0:
            r += 1
        rank[p] = r
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (rank[u] > rank[v]) - (rank[u] < rank[v]) != rel[u][v]:
                raise UnsupportedInstance(f"inconsistent relation between {u} and {v}")
    out = rank[1:]
    check = NaiveOracle(out)
    for (a, b), (omin, omax) in seen.items():
        if check.occurrences(a, b) != omin or check.occurrences(a, b, True) != omax:
            raise UnsupportedInstance(f"answers on [{a}, {b}] contradict the reconstruction")
    if not in_An(out):
        raise UnsupportedInstance("reconstruction lies outside A_n")
    return out


def in_An(values):
    """True iff equal values are consecutive and the run pattern is Baxter."""
    runs = [v for k, v in enumerate(values) if k == 0 or values[k - 1] != v]
    if len(set(runs)) != len(runs):
        return False
    return is_baxter(dense_rank(runs))


def dense_rank(values):
    """Values replaced by 1..d keeping ties and order."""
    keys = sorted(set(values))
    pos = {v: k + 1 for k, v in enumerate(keys)}
    return [pos[v] for v in values]
