"""Time the numba and numpy kernel backends on the case-study sweep workload.

Run with ``python3 benchmarks/bench_kernels.py [--points N] [--repeat R]``.
"""

import argparse
import time

import numpy as np

from gridsens import _kernels
from gridsens.casecli import Models, fixture_path, laplacian_for
from gridsens.inverters import network_factor_inverse_batch
from gridsens.netgraph import load_network
from gridsens.sensitivity import GridSpec


def _best(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    models = Models.load(fixture_path("table_a1.json"))
    m = models.gfm
    b = laplacian_for(load_network(fixture_path("three_inverter.json")), 1.0)
    omegas = GridSpec(points=args.points).omegas()
    w0 = models.params.filter.omega0
    finv = network_factor_inverse_batch(omegas, w0)
    y = _kernels.freqresp(m.a, m.b_in, m.c_out, m.d, omegas)
    yblocks = np.repeat(y[:, None], b.n, axis=1)
    binv = np.linalg.inv(b.b)

    impls = {"numpy": _kernels.numpy_impl}
    if _kernels.numba_impl is not None:
        impls["numba"] = _kernels.numba_impl

    print(f"{'kernel':<22}{'backend':<8}{'best [ms]':>12}")
    for name, impl in impls.items():
        t = _best(lambda: impl.freqresp(m.a, m.b_in, m.c_out, m.d.astype(complex), omegas), args.repeat)
        print(f"{'freqresp':<22}{name:<8}{t * 1e3:>12.2f}")
        t = _best(lambda: impl.sensitivity_min_sv(binv, finv, yblocks), args.repeat)
        print(f"{'sensitivity_min_sv':<22}{name:<8}{t * 1e3:>12.2f}")


if __name__ == "__main__":
    main()
