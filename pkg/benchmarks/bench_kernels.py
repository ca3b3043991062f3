"""Timing comparison of the compiled stepping kernels against the NumPy
fallback, on the shapes the presets actually use.

Run:  python3 benchmarks/bench_kernels.py [--repeat 200]
Both backends are imported in one process (the compiled module directly,
the fallback from its module), so the numbers come from the same arrays.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from charax._kernels import _numpy as fallback

try:
    from charax._kernels import _compiled as compiled
except ImportError:
    compiled = None


def _time(fn, repeat: int) -> float:
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench_1d(n: int, repeat: int) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(7)
    q = np.ascontiguousarray(np.sin(2 * np.pi * np.arange(n) / n))
    s = np.ascontiguousarray(rng.uniform(-1.0, 1.0, n))
    fq = np.ascontiguousarray(0.5 * q * q)
    dx = 1.0 / n
    eps = 1e-3
    dt = 0.4 * dx * dx / (2 * eps)
    rows = []
    for name, args in (
            ("advective_1d", (q, s, eps, dt, dx, True, 0.0, 0.0, 0.0)),
            ("conservative_1d", (q, s, eps, dt, dx, True, 0.0, 0.0, 1.0)),
            ("flux_form_1d", (q, fq, s, eps, dt, dx, True, 0.0, 0.0, 0.0,
                              0.0, 1.0))):
        f_np = getattr(fallback, f"step_{name}")
        t_np = _time(lambda: f_np(*args), repeat)
        t_c = float("nan")
        if compiled is not None:
            f_c = getattr(compiled, f"step_{name}")
            t_c = _time(lambda: f_c(*args), repeat)
        rows.append((f"{name} n={n}", t_np, t_c))
    return rows


def bench_2d(n: int, repeat: int) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(11)
    q = np.ascontiguousarray(rng.uniform(-1.0, 1.0, (n, n)))
    s1 = np.ascontiguousarray(rng.uniform(-1.0, 1.0, (n, n)))
    s2 = np.ascontiguousarray(rng.uniform(-1.0, 1.0, (n, n)))
    fq = np.ascontiguousarray(0.5 * q * q)
    dx = 1.0 / n
    eps = 5e-3
    dt = 0.2 * dx * dx / (4 * eps)
    rows = []
    for name, args in (
            ("flux_form_2d", (q, fq, fq, s1, s2, eps, dt, dx, dx, 1.0)),
            ("conservative_2d", (q, s1, s2, eps, dt, dx, dx, 1.0))):
        f_np = getattr(fallback, f"step_{name}")
        t_np = _time(lambda: f_np(*args), repeat)
        t_c = float("nan")
        if compiled is not None:
            f_c = getattr(compiled, f"step_{name}")
            t_c = _time(lambda: f_c(*args), repeat)
        rows.append((f"{name} {n}x{n}", t_np, t_c))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()

    if compiled is None:
        print("compiled backend not importable; timing the fallback only")
    rows = []
    for n in (1024, 4096):
        rows += bench_1d(n, args.repeat)
    rows += bench_2d(128, args.repeat)

    print(f"{'kernel':28s} {'numpy':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name, t_np, t_c in rows:
        speed = t_np / t_c if t_c == t_c and t_c > 0 else float("nan")
        print(f"{name:28s} {t_np * 1e6:9.1f} us {t_c * 1e6:9.1f} us "
              f"{speed:7.1f}x")


if __name__ == "__main__":
    main()
