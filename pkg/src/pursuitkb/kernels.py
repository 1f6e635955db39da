"""Numeric hot paths: edit distance and per-sample gaze geometry.

Each kernel exists twice: a numba ``@njit`` build and a vectorized
pure-numpy fallback. The active backend is chosen at import time by the
``PURSUITKB_NUMBA`` environment variable (``0`` forces the numpy path)
or automatically when numba is unavailable. ``benchmarks/bench_kernels.py``
times both builds side by side.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = os.environ.get("PURSUITKB_NUMBA", "1")
NUMBA_REQUESTED = _ENV_FLAG != "0"

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


# ---------------------------------------------------------------------------
# Levenshtein distance over integer code arrays
# ---------------------------------------------------------------------------


def levenshtein_numpy(a: np.ndarray, b: np.ndarray) -> int:
    """Unit-cost edit distance, one DP row per character of ``a``.

    The insertion recurrence cur[j] = min(cur[j], cur[j-1] + 1) is
    sequential; it collapses to a prefix minimum of (cur[k] - k) because
    each step adds exactly 1.
    """
    if a.size == 0:
        return int(b.size)
    if b.size == 0:
        return int(a.size)
    ladder = np.arange(b.size + 1, dtype=np.int64)
    prev = ladder.copy()
    cur = np.empty_like(prev)
    for i in range(a.size):
        cur[0] = i + 1
        np.minimum(prev[1:] + 1, prev[:-1] + (b != a[i]), out=cur[1:])
        cur = np.minimum.accumulate(cur - ladder) + ladder
        prev, cur = cur, prev
    return int(prev[-1])


@njit(cache=True)
def _levenshtein_jit(a: np.ndarray, b: np.ndarray) -> int:  # pragma: no cover
    n, m = a.size, b.size
    if n == 0:
        return m
    if m == 0:
        return n
    prev = np.arange(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(n):
        cur[0] = i + 1
        for j in range(1, m + 1):
            cost = 0 if a[i] == b[j - 1] else 1
            d = prev[j - 1] + cost
            if prev[j] + 1 < d:
                d = prev[j] + 1
            if cur[j - 1] + 1 < d:
                d = cur[j - 1] + 1
            cur[j] = d
        prev, cur = cur, prev
    return prev[m]


def levenshtein_numba(a: np.ndarray, b: np.ndarray) -> int:
    return int(_levenshtein_jit(a, b))


# ---------------------------------------------------------------------------
# Per-sample gaze geometry: idle-circle test + sector lookup
# ---------------------------------------------------------------------------
#
# Angles use the mathematical convention (0 deg = +x, 90 deg = screen-up),
# hence the negated screen-y delta. ``sector_starts`` is the sorted array of
# sector start angles; an angle below the first start wraps to the last
# sector. Samples at the exact center get angle 0; callers only consult the
# sector of samples outside the idle circle, which can never be the center.


def sample_geometry_numpy(
    xs: np.ndarray,
    ys: np.ndarray,
    cx: float,
    cy: float,
    idle_radius: float,
    sector_starts: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    dx = xs - cx
    dy = cy - ys
    inside = dx * dx + dy * dy < idle_radius * idle_radius
    angles = np.degrees(np.arctan2(dy, dx)) % 360.0
    pos = np.searchsorted(sector_starts, angles, side="right") - 1
    pos[pos < 0] = sector_starts.size - 1
    return inside, pos


@njit(cache=True)
def _sample_geometry_jit(xs, ys, cx, cy, idle_radius, sector_starts):  # pragma: no cover
    n = xs.size
    k = sector_starts.size
    inside = np.empty(n, dtype=np.bool_)
    pos = np.empty(n, dtype=np.int64)
    r2 = idle_radius * idle_radius
    for i in range(n):
        dx = xs[i] - cx
        dy = cy - ys[i]
        inside[i] = dx * dx + dy * dy < r2
        ang = np.degrees(np.arctan2(dy, dx)) % 360.0
        j = np.searchsorted(sector_starts, ang, side="right") - 1
        if j < 0:
            j = k - 1
        pos[i] = j
    return inside, pos


def sample_geometry_numba(xs, ys, cx, cy, idle_radius, sector_starts):
    return _sample_geometry_jit(xs, ys, cx, cy, idle_radius, sector_starts)


# ---------------------------------------------------------------------------
# Backend selection
# ---------------------------------------------------------------------------

if NUMBA_REQUESTED and NUMBA_AVAILABLE:
    BACKEND = "numba"
    levenshtein = levenshtein_numba
    sample_geometry = sample_geometry_numba
else:
    BACKEND = "numpy"
    levenshtein = levenshtein_numpy
    sample_geometry = sample_geometry_numpy


def encode_text(s: str) -> np.ndarray:
    """Code-point array for the edit-distance kernels."""
    return np.fromiter(map(ord, s), dtype=np.int64, count=len(s))
