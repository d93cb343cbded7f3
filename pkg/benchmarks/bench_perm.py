"""Compare the compiled permutation kernels with the pure-Python fallback.

    python benchmarks/bench_perm.py            # both backends, side by side
    python benchmarks/bench_perm.py --worker   # the current backend only

Each backend runs in its own interpreter because the choice is made once,
at import time, from ``RESCALC_PURE``.
"""
import argparse
import itertools
import json
import os
import subprocess
import sys
import timeit


def _cases():
    from rescalc import perm
    from rescalc.perm import _k

    blocks = (2, 2, 3)
    sigmas = [p.images for p in perm.all_permutations(7)]
    shuffles = [p.images for p in perm.enumerate_shuffles(blocks)]
    pairs = list(zip(sigmas, reversed(sigmas)))

    def compose():
        for a, b in pairs:
            _k.compose(a, b)

    def decompose():
        for s in sigmas:
            _k.decompose(s, blocks)

    def is_shuffle():
        for s in sigmas:
            _k.is_shuffle(s, blocks)

    def enumerate_():
        for sizes in itertools.product(range(4), repeat=3):
            _k.shuffles(sizes)

    def block_sum():
        for t in shuffles:
            _k.block_sum([t, (2, 3, 1), (1,)])

    return perm.BACKEND, {"compose x5040": compose, "decompose x5040": decompose,
                          "is_shuffle x5040": is_shuffle, "shuffles (<=3,<=3,<=3)": enumerate_,
                          "block_sum x210": block_sum}


def worker(repeat):
    backend, cases = _cases()
    out = {"backend": backend}
    for name, fn in cases.items():
        out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(json.dumps(out))


def run(pure, repeat):
    env = dict(os.environ)
    env.pop("RESCALC_PURE", None)
    if pure:
        env["RESCALC_PURE"] = "1"
    r = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                       env=env, capture_output=True, text=True, check=True)
    return json.loads(r.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--worker", action="store_true")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if args.worker:
        worker(args.repeat)
        return 0
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    if fast["backend"] != "compiled":
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':<24} {fast['backend']:>10} {slow['backend']:>10} {'speedup':>8}")
    for name in fast:
        if name == "backend":
            continue
        print(f"{name:<24} {fast[name] * 1e3:>8.2f}ms {slow[name] * 1e3:>8.2f}ms "
              f"{slow[name] / fast[name]:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
