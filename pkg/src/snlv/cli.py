"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 data error, 3 self-test failure.
With ``--format json`` every output line is a record
``{"cmd", "n", "metric", "value"}``.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import selftest
from .arrayfile import read_array
from .codec import DEFAULT_BLOCK, CombinedEncoding, check_block_size
from .oracle import (CountingAccess, NaiveOracle, UnsupportedInstance, an_size_formula,
                     baxter_permutations, dense_rank, enumerate_An, reconstruct_from_queries,
                     sample_An)
from .query import KINDS, QueryIndex, moduli

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SELFTEST = 0, 1, 2, 3
BYTES_PER_ELEMENT = 400  # rough peak memory of a build


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """Argument errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Out:
    def __init__(self, fmt, cmd, stream=None):
        self.fmt = fmt
        self.cmd = cmd
        self.stream = stream or sys.stdout

    def emit(self, n, metric, value):
        if self.fmt == "json":
            rec = {"cmd": self.cmd, "n": n, "metric": metric, "value": value}
            print(json.dumps(rec, sort_keys=True), file=self.stream)
        else:
            if isinstance(value, float):
                value = f"{value:.6g}"
            print(f"{metric}: {value}", file=self.stream)


# ---------------------------------------------------------------- helpers

def _levels(x):
    v = int(x)
    if not 1 <= v <= 4:
        raise argparse.ArgumentTypeError("levels must be in 1..4")
    return v


def _block(x):
    try:
        return check_block_size(int(x))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _report(out, rep, n):
    for k, v in rep.items():
        if k != "n":
            out.emit(n, k, v)


# ---------------------------------------------------------------- commands

def cmd_build(args, out):
    A = read_array(args.input)
    enc_t0 = time.perf_counter()
    ix = QueryIndex.build(A, levels=args.levels, block_size=args.block_size)
    build_s = time.perf_counter() - enc_t0
    ix.enc.save(args.output)
    n = int(A.size)
    out.emit(n, "general", bool(ix.enc.general))
    out.emit(n, "build_seconds", round(build_s, 6))
    _report(out, ix.space_report(), n)
    return EXIT_OK


def _load(path, levels):
    enc = CombinedEncoding.load(path)
    return QueryIndex(enc, levels=levels)


def cmd_query(args, out):
    if args.kind not in KINDS:
        raise UsageError(f"unknown query kind {args.kind!r}; choose from {', '.join(KINDS)}")
    if len(args.args) != KINDS[args.kind]:
        raise UsageError(f"{args.kind} takes {KINDS[args.kind]} arguments, got {len(args.args)}")
    ix = _load(args.index, args.levels)
    try:
        ans = ix.query(args.kind, *args.args)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if out.fmt == "json":
        out.emit(ix.n, args.kind + " " + " ".join(map(str, args.args)), ans)
    else:
        print(ans)
    return EXIT_OK


def _print_result(out, res, stream):
    out.emit(None, f"{res.name}.checks", res.checks)
    out.emit(None, f"{res.name}.pass", res.ok)
    for w in res.failures:
        print(f"FAIL {res.name}: {w}", file=stream)


def cmd_selftest(args, out):
    mutate = selftest.flip_e_bit if args.inject_fault else None
    results = []
    if args.scope == "exhaustive":
        results.append(selftest.exhaustive_suite(2, args.max_len, mutate=mutate))
        arrays = [list(a) for a in selftest.exhaustive_arrays(2, min(args.max_len, 7))]
        results.append(selftest.decode_suite(arrays))
        results.append(selftest.reconstruction_suite(nmax=min(args.max_len, 6), sample=0,
                                                     engine=False))
    else:
        results.append(selftest.random_suite(args.seed, args.count, args.n, args.queries,
                                             mutate=mutate))
        arrays = [A for A, _ in selftest.random_workload(args.seed, args.count, args.n, 0)]
        results.append(selftest.decode_suite(arrays))
        results.append(selftest.reconstruction_suite(nmax=5, sample_n=7, sample=50,
                                                     seed=args.seed))
    results.append(selftest.baxter_suite())
    for r in results:
        _print_result(out, r, sys.stderr)
    ok = all(r.ok for r in results)
    out.emit(None, "selftest.pass", ok)
    return EXIT_OK if ok else EXIT_SELFTEST


def _percentiles(xs):
    a = np.asarray(xs, dtype=np.float64)
    return {p: float(np.percentile(a, p)) for p in (50, 90, 99)}


def cmd_bench(args, out):
    n = args.n
    if n < 1:
        raise UsageError("n must be ≥ 1")
    if n * BYTES_PER_ELEMENT > args.cap_bytes:
        print(f"bench: n={n} needs about {n * BYTES_PER_ELEMENT} bytes, over the cap "
              f"of {args.cap_bytes}; aborting", file=sys.stderr)
        return EXIT_DATA
    rng = np.random.default_rng(args.seed)
    if args.dist == "distinct":
        A = rng.permutation(n)
    else:
        A = selftest.with_repeats(rng, n, args.p)
    t0 = time.perf_counter()
    ix = QueryIndex.build(A, levels=args.levels, block_size=args.block_size)
    out.emit(n, "build_seconds", round(time.perf_counter() - t0, 6))
    rep = ix.space_report()
    out.emit(n, "core_bits_per_n", rep["core_per_n"])
    out.emit(n, "aux_bits_per_n", rep["aux_per_n"])
    out.emit(n, "nav_bits_per_n", rep["nav_per_n"])
    qs = selftest.make_queries(rng, n, args.queries)
    lat = {k: [] for k in KINDS}
    for kind, qargs in qs:
        t = time.perf_counter_ns()
        ix.query(kind, *qargs)
        lat[kind].append((time.perf_counter_ns() - t) / 1000)
    for kind, xs in lat.items():
        if xs:
            for p, v in _percentiles(xs).items():
                out.emit(n, f"latency_us.{kind}.p{p}", round(v, 3))
    out.emit(n, "mark_moduli", moduli(n, args.levels))
    nodes = rng.integers(1, n + 1, min(n, args.queries))
    for side in ("min", "max"):
        for op in ("prs", "nrs"):
            scans, jumps = [], []
            for v in nodes:
                _, tr = getattr(ix, op + "_traced")(side, int(v))
                scans.append(tr.scan)
                jumps.append(tr.jumps)
            out.emit(n, f"{op}_{side}.scan_hist", _hist(scans))
            out.emit(n, f"{op}_{side}.jump_hist", _hist(jumps))
            out.emit(n, f"{op}_{side}.scan_p999", float(np.percentile(scans, 99.9)))
    return EXIT_OK


def _hist(xs):
    vals, cnt = np.unique(np.asarray(xs), return_counts=True)
    return {str(int(v)): int(c) for v, c in zip(vals, cnt)}


def cmd_baxter(args, out):
    for m in range(1, args.max_m + 1):
        out.emit(m, "baxter_count", len(baxter_permutations(m)))
    return EXIT_OK


def cmd_enumerate(args, out):
    stats = {}
    count = sum(1 for _ in enumerate_An(args.n, stats))
    out.emit(args.n, "instances", count)
    out.emit(args.n, "formula", an_size_formula(args.n))
    out.emit(args.n, "collisions", stats["collisions"])
    return EXIT_OK


def cmd_reconstruct(args, out):
    inst = sample_An(args.n, args.sample, args.seed) if args.sample else list(enumerate_An(args.n))
    ok = 0
    calls = 0
    for x in inst:
        src = NaiveOracle(x.array) if args.oracle else QueryIndex.build(list(x.array))
        acc = CountingAccess(src, x.n)
        try:
            got = reconstruct_from_queries(acc)
        except UnsupportedInstance:
            got = None
        calls += acc.calls
        if got == dense_rank(x.array):
            ok += 1
        else:
            print(f"FAIL reconstruct: {list(x.array)} -> {got}", file=sys.stderr)
    out.emit(args.n, "instances", len(inst))
    out.emit(args.n, "reconstructed", ok)
    out.emit(args.n, "queries", calls)
    return EXIT_OK if ok == len(inst) else EXIT_SELFTEST


# ---------------------------------------------------------------- parser

def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--levels", type=_levels, default=2, help="marking levels (1..4)")
    common.add_argument("--block-size", type=_block, default=DEFAULT_BLOCK,
                        help="codec block size in bits (power of two ≥ 64)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--cap-bytes", type=int, default=8 << 30,
                        help="memory cap for bench builds")

    p = Parser(prog="snlv", description="Succinct range-min/max and nearest-smaller index.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=Parser)

    b = sub.add_parser("build", parents=[common], help="build an index from an array file")
    b.add_argument("input")
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", parents=[common], help="answer one query")
    q.add_argument("index")
    q.add_argument("kind")
    q.add_argument("args", nargs="*", type=int)
    q.set_defaults(func=cmd_query)

    s = sub.add_parser("selftest", parents=[common], help="run the equivalence suites")
    s.add_argument("--scope", choices=("exhaustive", "random"), default="random")
    s.add_argument("--max-len", type=int, default=9)
    s.add_argument("--count", type=int, default=6)
    s.add_argument("--n", type=int, default=2000)
    s.add_argument("--queries", type=int, default=2000)
    s.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)

    be = sub.add_parser("bench", parents=[common], help="time a build and random queries")
    be.add_argument("--n", type=int, default=10**5)
    be.add_argument("--dist", choices=("distinct", "repeats"), default="distinct")
    be.add_argument("--p", type=float, default=0.3, help="repeat probability")
    be.add_argument("--queries", type=int, default=2000)
    be.set_defaults(func=cmd_bench)

    bx = sub.add_parser("baxter", parents=[common], help="count Baxter permutations")
    bx.add_argument("--max-m", type=int, default=7)
    bx.set_defaults(func=cmd_baxter)

    en = sub.add_parser("enumerate", parents=[common], help="enumerate the class A_n")
    en.add_argument("n", type=int)
    en.set_defaults(func=cmd_enumerate)

    rc = sub.add_parser("reconstruct", parents=[common],
                        help="rebuild A_n arrays from q-th min/max queries")
    rc.add_argument("n", type=int)
    rc.add_argument("--sample", type=int, default=0)
    rc.add_argument("--oracle", action="store_true", help="query the naive oracle instead")
    rc.set_defaults(func=cmd_reconstruct)
    return p


def main(argv=None):
    p = make_parser()
    args = p.parse_args(argv)
    out = Out(args.format, args.cmd)
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"snlv {args.cmd}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        print(f"snlv {args.cmd}: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
