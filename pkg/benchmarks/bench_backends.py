"""Timing comparison between the compiled kernels and the pure-Python twin.

Runs identical deterministic workloads through both backends and reports
per-call times and the speedup.  The two implementations are required to
agree bitwise-closely (see tests), so this only measures speed.

Usage: python benchmarks/bench_backends.py [--solves N] [--roots N] [--oracles N]
"""

from __future__ import annotations

import argparse
import random
import time

from extdicke import _kernels_py

try:
    from extdicke import _kernels
except ImportError:
    _kernels = None


def _draws(n: int, seed: int = 20240817) -> list[tuple[float, float, float, float]]:
    rng = random.Random(seed)
    return [(rng.uniform(0.0, 5.0), rng.uniform(-5.0, 5.0),
             rng.uniform(-3.0, 3.0), rng.uniform(0.0, 3.0)) for _ in range(n)]


def _time(fn, batch) -> float:
    t0 = time.perf_counter()
    for args in batch:
        fn(*args)
    return (time.perf_counter() - t0) / max(1, len(batch))


def run(n_solves: int, n_roots: int, n_oracles: int) -> None:
    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("compiled", _kernels))
    else:
        print("compiled extension not built; timing the pure-Python backend only")

    solve_batch = _draws(n_solves)
    root_batch = [(d, 2.0 * ((u + v) - r), 0.0, -2.0 * ((u + v) + r), -d)
                  for u, v, d, r in _draws(n_roots, seed=7)]
    oracle_batch = [(u, v, d, r, 4096) for u, v, d, r in _draws(n_oracles, seed=3)]

    results: dict[str, dict[str, float]] = {}
    for name, mod in backends:
        results[name] = {
            "solve_point": _time(mod.solve_point, solve_batch),
            "real_roots": _time(mod.real_roots, root_batch),
            "oracle_minimum": _time(mod.oracle_minimum, oracle_batch),
        }

    print(f"{'kernel':<16}{'python':>14}{'compiled':>14}{'speedup':>10}")
    for key in ("solve_point", "real_roots", "oracle_minimum"):
        py = results["python"][key]
        line = f"{key:<16}{py * 1e6:>12.2f}us"
        if "compiled" in results:
            cy = results["compiled"][key]
            line += f"{cy * 1e6:>12.2f}us{py / cy:>9.1f}x"
        print(line)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--solves", type=int, default=20000)
    ap.add_argument("--roots", type=int, default=50000)
    ap.add_argument("--oracles", type=int, default=200)
    args = ap.parse_args()
    run(args.solves, args.roots, args.oracles)


if __name__ == "__main__":
    main()
