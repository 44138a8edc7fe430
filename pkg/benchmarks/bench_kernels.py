"""Compare the compiled and pure-Python kernel backends.

Times index construction, whole-BP block decoding and a random query
mix on the same arrays with each backend, and checks that both give the
same answers.

    python3 benchmarks/bench_kernels.py --n 20000 --queries 2000
"""

import argparse
import time

import numpy as np

from snlv.codec import SIDES, encode_array
from snlv.kernels import BACKENDS
from snlv.query import QueryIndex
from snlv.selftest import make_queries, with_repeats


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def run_backend(name, A, queries, block_size):
    enc, t_enc = timed(encode_array, A, block_size, backend=name)
    t_dec = 0.0
    for s in SIDES:
        t = time.perf_counter()
        for b in range(enc.num_blocks(s)):
            enc.decode_block(s, b)
        t_dec += time.perf_counter() - t
    ix, t_ix = timed(QueryIndex, enc, backend=name)
    t = time.perf_counter()
    answers = [ix.query(kind, *args) for kind, args in queries]
    t_q = time.perf_counter() - t
    nblk = sum(enc.num_blocks(s) for s in SIDES)
    return answers, {"encode_s": t_enc, "decode_us_per_block": 1e6 * t_dec / nblk,
                     "index_s": t_ix, "query_us": 1e6 * t_q / max(1, len(queries))}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--n", type=int, default=20_000)
    p.add_argument("--queries", type=int, default=2_000)
    p.add_argument("--block-size", type=int, default=256)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    arrays = {"distinct": rng.permutation(args.n),
              "repeats": with_repeats(rng, args.n, 0.3, 1000)}
    if "cython" not in BACKENDS:
        print("compiled kernels are not built; only the Python backend is timed")
    print(f"{'array':<10}{'backend':<9}{'encode s':>10}{'decode us/blk':>15}"
          f"{'index s':>10}{'query us':>10}")
    for label, A in arrays.items():
        queries = make_queries(rng, args.n, args.queries)
        ref = None
        for name in BACKENDS:
            answers, t = run_backend(name, A, queries, args.block_size)
            if ref is None:
                ref = answers
            elif answers != ref:
                raise SystemExit(f"backends disagree on {label}")
            print(f"{label:<10}{name:<9}{t['encode_s']:>10.3f}{t['decode_us_per_block']:>15.2f}"
                  f"{t['index_s']:>10.3f}{t['query_us']:>10.1f}")


if __name__ == "__main__":
    main()
