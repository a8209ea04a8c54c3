"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

Kernel timings call both backends in one process.  ``--end-to-end`` also
times a batch of rank-8 decompositions in two subprocesses, one with
``SEXTICWARING_DISABLE_NUMBA=1``.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from sexticwaring import kernels
from sexticwaring._accel import HAVE_NUMBA
from sexticwaring.flattening import _pf_tables
from sexticwaring.polycore import exponent_array

END_TO_END = """
import time
from sexticwaring import kernels
from sexticwaring.engine import decompose_via_kernel_cubics, random_form
kernels.warmup()
forms = [random_form(8, seed=s)[0] for s in range({n})]
t = time.perf_counter()
for s, F in enumerate(forms):
    decompose_via_kernel_cubics(F, seed=s)
print(time.perf_counter() - t)
"""


def cases(rng):
    E6, E9 = exponent_array(6), exponent_array(9)
    for n in (9, 100, 2000):
        P = rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))
        yield f"monomial_matrix n={n} d=6", lambda b, P=P: kernels.monomial_matrix(P, E6, backend=b)
        yield f"monomial_jacobian n={n} d=6", lambda b, P=P: kernels.monomial_jacobian(P, E6, backend=b)
    P = rng.standard_normal((200, 3)) + 0j
    yield "monomial_matrix n=200 d=9", lambda b: kernels.monomial_matrix(P, E9, backend=b)
    for deg in (9, 27):
        roots = rng.standard_normal(deg) + 1j * rng.standard_normal(deg)
        c = np.poly(roots)
        z0 = 1.5 * np.exp(2j * np.pi * (np.arange(deg) + 0.25) / deg)
        yield f"aberth degree={deg}", lambda b, c=c, z0=z0: kernels.aberth(c, z0, backend=b)
    src, dst, wt = _pf_tables()
    f = rng.standard_normal(28) + 0j
    w = wt.astype(np.complex128)
    yield "scatter P_f (36x36)", lambda b: kernels.scatter(f, src, w, dst, 36 * 36, backend=b)


def end_to_end(n: int) -> None:
    code = END_TO_END.format(n=n)
    for label, flag in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, SEXTICWARING_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        print(f"{'decompose rank 8 x ' + str(n):34s} {label:6s} {float(out.stdout):9.3f} s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--end-to-end", action="store_true")
    ap.add_argument("--forms", type=int, default=20)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba unavailable: only the numpy backend is timed")
    kernels.warmup()
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numpy':>11s} {'numba':>11s} {'speed-up':>9s}")
    for name, fn in cases(rng):
        t_np = min(timeit.repeat(lambda: fn("numpy"), number=1, repeat=args.repeat))
        if HAVE_NUMBA:
            fn("numba")
            t_nb = min(timeit.repeat(lambda: fn("numba"), number=1, repeat=args.repeat))
            print(f"{name:34s} {t_np * 1e6:9.1f}us {t_nb * 1e6:9.1f}us {t_np / t_nb:8.1f}x")
        else:
            print(f"{name:34s} {t_np * 1e6:9.1f}us {'-':>11s}")
    if args.end_to_end:
        end_to_end(args.forms)


if __name__ == "__main__":
    main()
