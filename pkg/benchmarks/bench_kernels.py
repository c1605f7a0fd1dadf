"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--trials N]

Prints per-kernel timings, then an end-to-end Monte-Carlo run under each
backend (the second run uses VSSCONTROL_PURE=1 in a subprocess).
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from vsscontrol import _pure

try:
    from vsscontrol import _core
except ImportError:
    _core = None


def cases():
    rng = random.Random(1)
    coeffs = [rng.randrange(65521) for _ in range(9)]
    xs = list(range(1, 9))
    ys = [rng.randrange(65521) for _ in xs]
    rows = [rng.getrandbits(41) for _ in range(60)]
    table = [rng.getrandbits(1) for _ in range(1 << 12)]
    return {
        "horner (deg 8, p=65521)": (lambda k: k.horner(coeffs, 12345, 65521), 20000),
        "lagrange_at_zero (8 pts)": (lambda k: k.lagrange_at_zero(xs, ys, 65521), 5000),
        "gf2_rref (60x40)": (lambda k: k.gf2_rref(rows, 40), 2000),
        "walsh_spectrum (l=12)": (lambda k: k.walsh_spectrum(table), 100),
    }


E2E = (
    "import time;"
    "from vsscontrol import BACKEND;"
    "from vsscontrol.access import build_vtn_structure, AuthorizedSet;"
    "from vsscontrol.sharing import ShamirInstance;"
    "from vsscontrol.control import TableControl, example_table;"
    "from vsscontrol.analysis import EstimateConfig, TamperModel, estimate_detection_rate;"
    "cfg = EstimateConfig(ShamirInstance(31, 3, 4), build_vtn_structure(2, 3, 4),"
    " TableControl([example_table()]), auth=AuthorizedSet((1, 2, 3)), scope='protocol');"
    "t = time.perf_counter(); e = estimate_detection_rate(cfg, TamperModel(), {trials}, seed=1);"
    "print(f'{{BACKEND:>9}}  monte-carlo      {{time.perf_counter() - t:8.3f}} s  rate={{e.rate:.4f}}');"
    "from vsscontrol.control import complete_table, nonlinearity;"
    "t = time.perf_counter(); tbl = complete_table(8, {{}}, seed=3, iterations=400);"
    "print(f'{{BACKEND:>9}}  table completion {{time.perf_counter() - t:8.3f}} s  nl={{nonlinearity(tbl)}}')"
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=2000)
    args = ap.parse_args()

    print(f"{'kernel':<28}{'pure us':>10}{'compiled us':>13}{'speedup':>9}")
    for name, (fn, number) in cases().items():
        t_pure = timeit.timeit(lambda: fn(_pure), number=number) / number * 1e6
        if _core is None:
            print(f"{name:<28}{t_pure:>10.2f}{'n/a':>13}{'':>9}")
            continue
        assert fn(_pure) == fn(_core), name
        t_core = timeit.timeit(lambda: fn(_core), number=number) / number * 1e6
        print(f"{name:<28}{t_pure:>10.2f}{t_core:>13.2f}{t_pure / t_core:>8.1f}x")

    print(f"\nend-to-end: two-round detection estimate ({args.trials} trials), l=8 table completion",
          flush=True)
    code = E2E.format(trials=args.trials)
    for pure in ("0", "1"):
        env = dict(os.environ, VSSCONTROL_PURE=pure)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


if __name__ == "__main__":
    main()
