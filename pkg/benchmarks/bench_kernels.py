"""Compare the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--size WxH] [--repeats N]
"""

import argparse
import timeit

import numpy as np

from qrhull import _fallback, kernels


def bench(fn, *args, repeats: int, number: int = 5) -> float:
    best = min(timeit.repeat(lambda: fn(*args), repeat=repeats, number=number))
    return best / number


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", default="1920x1080")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    width, height = (int(v) for v in args.size.lower().split("x"))

    rng = np.random.default_rng(7)
    a = rng.integers(0, 256, (height, width), dtype=np.uint8)
    b = rng.integers(0, 256, (height, width), dtype=np.uint8)

    if kernels.BACKEND != "native":
        print("compiled extension not available; timing fallback only")
    print(f"plane {width}x{height}, best of {args.repeats} repeats\n")
    print(f"{'kernel':<16}{'native (ms)':>14}{'fallback (ms)':>16}{'speedup':>10}")
    cases = [
        ("sq_err_sum", (a, b)),
        ("diff_moments", (a, b)),
        ("sobel_moments", (a,)),
    ]
    for name, call_args in cases:
        fb = bench(getattr(_fallback, name), *call_args, repeats=args.repeats)
        if kernels.BACKEND == "native":
            nat = bench(getattr(kernels, name), *call_args, repeats=args.repeats)
            print(f"{name:<16}{nat * 1e3:>14.3f}{fb * 1e3:>16.3f}{fb / nat:>9.1f}x")
        else:
            print(f"{name:<16}{'-':>14}{fb * 1e3:>16.3f}{'-':>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
