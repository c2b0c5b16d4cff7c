"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Workloads are sized like one pipeline run: a 201-point Mie sweep of the
6-inch sphere near 25 GHz, the coherent sum for a 180-angle x 401-point
scan, and the GEV negative log-likelihood both on 10^4 samples and as\nthe many short calls a simplex fit makes.
"""
import argparse
import math
import timeit

import numpy as np

from compact_rcs import kernels
from compact_rcs.mie import SphereSpec, series_terms
from compact_rcs.units import SPEED_OF_LIGHT


def workloads(k):
    sphere = SphereSpec(0.1524)
    freqs = np.linspace(24.5e9, 25.5e9, 201)
    xs = 2 * math.pi * freqs / SPEED_OF_LIGHT * sphere.radius
    n_terms = np.array([series_terms(x) for x in xs])

    rng = np.random.default_rng(0)
    amps = np.sqrt(rng.uniform(0.01, 0.1, 8))
    pos = rng.uniform(-0.2, 0.2, (8, 2))
    wavenumbers = 2 * math.pi * np.linspace(24e9, 26e9, 401) / SPEED_OF_LIGHT
    angles = np.radians(np.arange(0, 360, 2.0))

    def scan():
        for phi in angles:
            ranges = 1.8288 - (pos[:, 0] * math.cos(phi) - pos[:, 1] * math.sin(phi))
            k.coherent_field(amps, ranges, wavenumbers)

    u = rng.uniform(size=10_000)
    gev = 0.1 * ((-np.log(u)) ** -0.1 - 1.0) / 0.1

    return {
        "mie sweep (201 freqs, ka~80)": lambda: k.mie_backscatter_sums(xs, n_terms),
        "coherent scan (180 x 401, 8 centers)": scan,
        "GEV nll (10^4 samples)": lambda: k.gev_nll(0.1, 0.0, 1.0, gev),
        # what one simplex fit does: many short evaluations
        "GEV nll x500 (180 samples)": lambda: [k.gev_nll(0.1, 0.0, 1.0, gev[:180]) for _ in range(500)],
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    backends = kernels.available_backends()
    results = {}
    for name, mod in sorted(backends.items()):
        for label, fn in workloads(mod).items():
            number = 3
            best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
            results.setdefault(label, {})[name] = best
    names = sorted(backends)
    print(f"{'workload':40s}" + "".join(f"{n:>12s}" for n in names) + ("   speedup" if len(names) > 1 else ""))
    for label, times in results.items():
        row = f"{label:40s}" + "".join(f"{times[n] * 1e3:10.3f}ms" for n in names)
        if "cython" in times and "python" in times:
            row += f"   {times['python'] / times['cython']:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
