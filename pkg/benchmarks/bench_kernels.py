"""Compare the compiled and pure-Python heat-bath kernels.

Times ``heatbath_apply`` and ``heatbath_apply_pair`` on a square grid, checks
that both backends agree bit for bit, and then times a short run of monotone
doubling CFTP under each backend.

    python benchmarks/bench_kernels.py --size 10 --steps 200000
"""

import argparse
import time
from unittest import mock

import numpy as np

from perfect_sim import _ising_fallback, kernels
from perfect_sim.cftp import cftp_doubling, make_monotone_detector
from perfect_sim.ising import IsingHeatBath, grid_graph
from perfect_sim.randomness import stream_from_seed


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_timings(mod, update, block, repeat):
    args = (update._ptr, update._idx, update._prob_plus, update._max_deg, block)
    x = update.bottom()
    t_apply = best_of(lambda: mod.heatbath_apply(x.copy(), *args), repeat)
    t_pair = best_of(lambda: mod.heatbath_apply_pair(update.bottom(), update.top(), *args), repeat)
    return t_apply, t_pair


def cftp_timing(mod, update, n_samples, seed):
    det = make_monotone_detector(update.bottom(), update.top())
    stream = stream_from_seed(seed)
    with mock.patch("perfect_sim.ising.kernels", mod):
        t = time.perf_counter()
        out = [cftp_doubling(update, det, update.n, stream).value for _ in range(n_samples)]
        return time.perf_counter() - t, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=10, help="grid side length")
    ap.add_argument("--beta", type=float, default=0.3)
    ap.add_argument("--steps", type=int, default=200_000, help="heat-bath steps per kernel call")
    ap.add_argument("--samples", type=int, default=200, help="CFTP samples per backend")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    update = IsingHeatBath(grid_graph(args.size, args.size), args.beta)
    block = stream_from_seed(args.seed).uniforms(update.block_size(args.steps))

    backends = {"python": _ising_fallback}
    if kernels.compiled is not None:
        backends["cython"] = kernels.compiled
    else:
        print("compiled kernels not available; timing the fallback only")

    print(f"grid {args.size}x{args.size}, beta={args.beta}, {args.steps} steps per call")
    print(f"{'backend':<8} {'apply (s)':>10} {'pair (s)':>10} {'Msteps/s':>10} {'cftp (s)':>10}")
    rows, outputs = {}, {}
    for name, mod in backends.items():
        t_apply, t_pair = kernel_timings(mod, update, block, args.repeat)
        t_cftp, outputs[name] = cftp_timing(mod, update, args.samples, args.seed)
        rows[name] = (t_apply, t_pair, t_cftp)
        print(f"{name:<8} {t_apply:10.4f} {t_pair:10.4f} {args.steps / t_apply / 1e6:10.2f} {t_cftp:10.3f}")

    if len(rows) == 2:
        a, b = rows["python"], rows["cython"]
        print(f"speedup  {a[0] / b[0]:10.1f}x {a[1] / b[1]:9.1f}x {'':>10} {a[2] / b[2]:9.1f}x")
        same = all(np.array_equal(p, q) for p, q in zip(outputs["python"], outputs["cython"]))
        print(f"CFTP outputs identical across backends: {same}")


if __name__ == "__main__":
    main()
