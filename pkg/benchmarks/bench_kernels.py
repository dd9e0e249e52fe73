"""Time the IMUSIC accumulation kernel: compiled extension vs numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

The workload matches one default trial: 145 bins (16 ps window over
1-10 THz), 7201 search angles and an 8-element array.
"""

import argparse
import time

import numpy as np

from thzorder import kernels
from thzorder.array import ArrayConfig, build_frequency_grid
from thzorder.doa import AngleGrid


def workload(snapshot_duration, num_elements, seed=0):
    grid = build_frequency_grid((1e12, 10e12), snapshot_duration)
    config = ArrayConfig(num_elements)
    rng = np.random.default_rng(seed)
    n = num_elements
    x = rng.standard_normal((grid.bin_count, n, n)) + 1j * rng.standard_normal((grid.bin_count, n, n))
    _, vecs = np.linalg.eigh(x @ np.conj(np.swapaxes(x, 1, 2)))
    basis = np.ascontiguousarray(vecs[..., n - 1:])  # one-source signal subspace
    sin_angles = np.sin(np.radians(AngleGrid().angles))
    step = 2 * np.pi * config.spacing / config.light_speed
    return grid.bins, step, sin_angles, basis


def best_time(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args, True, 1e-18)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"backend: {kernels.BACKEND}")
    print(f"{'bins':>5} {'N':>3} {'numpy [ms]':>11} {'compiled [ms]':>14} {'speedup':>8} {'max rel diff':>13}")
    for dt, n in [(2e-12, 8), (16e-12, 8), (48e-12, 8), (16e-12, 16)]:
        data = workload(dt, n)
        slow, ref = best_time(kernels.imusic_accumulate_numpy, data, args.repeat)
        if kernels.BACKEND == "cython":
            fast, out = best_time(kernels.imusic_accumulate, data, args.repeat)
            diff = np.max(np.abs(out / ref - 1))
            print(f"{len(data[0]):5d} {n:3d} {slow * 1e3:11.1f} {fast * 1e3:14.1f} {slow / fast:8.1f} {diff:13.1e}")
        else:
            print(f"{len(data[0]):5d} {n:3d} {slow * 1e3:11.1f} {'n/a':>14}")


if __name__ == "__main__":
    main()
