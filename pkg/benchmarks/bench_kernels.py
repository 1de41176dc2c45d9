"""Time the numba kernels against the numpy fallbacks.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Kernel timings call both flavours in-process.  The end-to-end PDE and ODE
timings run in subprocesses with WAVEPACK_NUMBA=1 and =0, since the flavour
is fixed at import.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from wavepack import kernels

END_TO_END = """
import time
from wavepack import variational as v
from wavepack.pde import PdeConfig, evolve
evolve(PdeConfig(t_end=0.01))
v.integrate_width(v.TrapParams(-0.8, 0.75), 0.5625, 0.0, 1.0)
t0 = time.perf_counter()
evolve(PdeConfig(potential_kind="harmonic", coupling=-1.625, delta0=0.5, t_end=5.0))
t1 = time.perf_counter()
for _ in range(20):
    v.integrate_width(v.TrapParams(-0.8, 0.75), 0.5625, 0.0, 50.0)
t2 = time.perf_counter()
print(t1 - t0, (t2 - t1) / 20)
"""


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(repeat):
    n_steps = 50_000
    t = np.empty(n_steps + 1)
    y = np.empty(n_steps + 1)
    vv = np.empty(n_steps + 1)
    args = (-2.25, -4.0, 1.625, 0.25, 0.0, 1e-3, n_steps, 1e-6, t, y, vv)
    rng = np.random.default_rng(0)
    amp = rng.normal(size=1024) + 1j * rng.normal(size=1024)
    x = np.linspace(-20, 20, 1024, endpoint=False)
    pot = 0.5 * x * x
    # warm the JIT
    kernels.rk4_width_numba(*args)
    kernels.phase_kick_numba(amp.copy(), pot, -4.07, 5e-4)
    kernels.real_space_moments_numba(amp, x, pot)
    rows = []
    for name, np_fn, nb_fn in (
        ("rk4 width, 5e4 steps", lambda: kernels.rk4_width_numpy(*args), lambda: kernels.rk4_width_numba(*args)),
        ("phase kick, n=1024 x1000",
         lambda: [kernels.phase_kick_numpy(amp, pot, -4.07, 5e-4) for _ in range(1000)],
         lambda: [kernels.phase_kick_numba(amp, pot, -4.07, 5e-4) for _ in range(1000)]),
        ("moments, n=1024 x1000",
         lambda: [kernels.real_space_moments_numpy(amp, x, pot) for _ in range(1000)],
         lambda: [kernels.real_space_moments_numba(amp, x, pot) for _ in range(1000)]),
    ):
        rows.append((name, best(np_fn, repeat), best(nb_fn, repeat)))
    return rows


def end_to_end():
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, WAVEPACK_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        out[flag] = [float(s) for s in res.stdout.split()]
    return [
        ("PDE evolve, n=1024, 5000 steps", out["0"][0], out["1"][0]),
        ("width ODE, 5e4 steps", out["0"][1], out["1"][1]),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")
    rows = kernel_rows(args.repeat) + end_to_end()
    print(f"{'case':34s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s}")
    for name, t_np, t_nb in rows:
        print(f"{name:34s} {t_np:11.4f} {t_nb:11.4f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
