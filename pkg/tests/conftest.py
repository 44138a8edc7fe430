import itertools
import os

import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=100, deadline=None)
settings.register_profile("dev", max_examples=25, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

SAMPLE = [5, 4, 5, 3, 1, 2, 6, 3, 1]


def all_arrays(lo, hi, alphabet=(1, 2, 3)):
    for n in range(lo, hi + 1):
        yield from itertools.product(alphabet, repeat=n)


class NaiveTree:
    """Pointer tree from the literal previous-smaller/larger definition."""

    def __init__(self, A, kind):
        n = len(A)
        self.n = n
        less = (lambda a, b: a < b) if kind == "min" else (lambda a, b: a > b)
        self.parent = [None] + [
            next((j for j in range(i - 1, 0, -1) if less(A[j - 1], A[i - 1])), 0)
            for i in range(1, n + 1)]
        self.children = [[] for _ in range(n + 1)]
        for i in range(1, n + 1):
            self.children[self.parent[i]].append(i)
        self.red = [False] * (n + 1)
        for p in range(n + 1):
            ch = self.children[p]
            for a, b in zip(ch, ch[1:]):
                self.red[b] = A[a - 1] != A[b - 1]
        bits, opens, closes = [], [0] * (n + 1), [0] * (n + 1)

        def walk(v):
            bits.append("0")
            opens[v] = len(bits)
            for c in self.children[v]:
                walk(c)
            bits.append("1")
            closes[v] = len(bits)

        walk(0)
        self.bp = "".join(bits)
        self.open, self.close = opens, closes
        self.depth = [0] * (n + 1)
        for i in range(1, n + 1):
            self.depth[i] = self.depth[self.parent[i]] + 1
        self.size = [(closes[i] - opens[i] + 1) // 2 for i in range(n + 1)]

    def siblings(self, i):
        return self.children[self.parent[i]]

    def child_rank(self, i):
        return self.siblings(i).index(i) + 1

    def next_sibling(self, i):
        s = self.siblings(i)
        k = s.index(i)
        return s[k + 1] if k + 1 < len(s) else None

    def prev_sibling(self, i):
        s = self.siblings(i)
        k = s.index(i)
        return s[k - 1] if k > 0 else None

    def ancestor(self, i, d):
        for _ in range(d):
            i = self.parent[i]
        return i

    def valid(self, i):
        s = self.siblings(i)
        k = s.index(i)
        return k > 0 and bool(self.children[s[k - 1]])


# ---------------------------------------------------------------- acceptance report

_REPORT = pytest.StashKey()


@pytest.fixture(scope="session")
def criterion_report(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash.setdefault(_REPORT, {})

    def record(k, ok, detail):
        line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[k] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_REPORT, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
