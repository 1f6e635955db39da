"""Benchmark the numba kernels against their pure-numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py

The same module-level kernels can be forced to the numpy path at import
time with ``PURSUITKB_NUMBA=0``; here both implementations are imported
explicitly and timed side by side, plus an end-to-end engine replay that
exercises whichever backend is active.
"""

from __future__ import annotations

import time

import numpy as np

from pursuitkb import kernels
from pursuitkb.engine import TypingEngine
from pursuitkb.layout import build_layout
from pursuitkb.prediction import train_model
from pursuitkb.simharness.phrases import default_phrase_text
from pursuitkb.simharness.planner import plan_actions
from pursuitkb.simharness.synth import synth_gaze
from pursuitkb.simharness.user import UserModel


def bench(label: str, fn, repeats: int = 5) -> float:
    fn()  # warm-up (includes JIT compilation for numba builds)
    best = min(_timed(fn) for _ in range(repeats))
    print(f"  {label:<28s} {best * 1000:9.2f} ms")
    return best


def _timed(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def bench_levenshtein() -> None:
    rng = np.random.default_rng(1)
    pairs = [
        (
            kernels.encode_text("".join(rng.choice(list("abcdefgh"), size=28))),
            kernels.encode_text("".join(rng.choice(list("abcdefgh"), size=28))),
        )
        for _ in range(2000)
    ]
    print("levenshtein: 2000 pairs of 28-char strings")
    t_np = bench("numpy fallback", lambda: [kernels.levenshtein_numpy(a, b) for a, b in pairs])
    t_nb = bench("numba @njit", lambda: [kernels.levenshtein_numba(a, b) for a, b in pairs])
    print(f"  speedup: {t_np / t_nb:.1f}x")


def bench_sample_geometry() -> None:
    rng = np.random.default_rng(2)
    n = 2_000_000
    xs = rng.uniform(0, 1920, n)
    ys = rng.uniform(0, 1200, n)
    starts = build_layout("L_WP").sector_starts
    print(f"sample_geometry: {n:,} samples, 8 sectors")
    t_np = bench(
        "numpy fallback", lambda: kernels.sample_geometry_numpy(xs, ys, 960, 600, 160, starts)
    )
    t_nb = bench(
        "numba @njit", lambda: kernels.sample_geometry_numba(xs, ys, 960, 600, 160, starts)
    )
    print(f"  speedup: {t_np / t_nb:.1f}x")


def bench_end_to_end() -> None:
    model = train_model(default_phrase_text())
    layout = build_layout("L_WP")
    user = UserModel()
    rng = np.random.default_rng(3)
    plan = plan_actions("the capital of our nation", layout, model, user, rng)
    ts, xs, ys = synth_gaze(plan, layout, model, user, rng)
    print(f"engine replay: {len(ts)} samples/trial, active backend = {kernels.BACKEND}")

    def replay():
        for _ in range(20):
            TypingEngine(layout, model).ingest_array(ts, xs, ys)

    best = bench("20 trial replays", replay)
    rate = 20 * len(ts) / best
    print(f"  throughput: {rate / 1e6:.2f} M samples/s")


if __name__ == "__main__":
    print(f"numba requested={kernels.NUMBA_REQUESTED} available={kernels.NUMBA_AVAILABLE}")
    bench_levenshtein()
    bench_sample_geometry()
    bench_end_to_end()
