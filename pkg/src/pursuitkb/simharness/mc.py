"""Monte-Carlo oracles for selection robustness.

Simulates isolated pursuit windows (onset fixation at the key home, then
tracking the key outward) under the accuracy/precision noise model and
scores how often ``classify_pursuit`` returns the pursued key. Used by the
acceptance suite and as the reference for engine-level robustness claims.
"""

from __future__ import annotations

import numpy as np

from ..engine import GazeSample, classify_pursuit
from ..layout import InterfaceLayout, key_position_at

SAMPLE_INTERVAL_MS = 1000.0 / 60.0


def pursuit_window(
    layout: InterfaceLayout,
    key_id: str,
    rng: np.random.Generator,
    sigma_deg: float,
    jitter_ratio: float = 0.05,
    gain: float = 1.0,
    latency_ms: float = 0.0,
) -> list[GazeSample]:
    """One synthetic movement window tracking ``key_id``.

    The tracking offset is drawn once per window (accuracy error of the
    episode); jitter is drawn per sample.
    """
    key = layout.keys_by_id[key_id]
    params = layout.params
    ppd = layout.screen.px_per_degree
    window_ms = key.travel_px / params.move_speed_px_s * 1000.0
    n = int(window_ms // SAMPLE_INTERVAL_MS) + 2
    offset = rng.normal(0.0, sigma_deg * ppd, 2)
    jitter = rng.normal(0.0, sigma_deg * jitter_ratio * ppd, (n, 2))
    samples = []
    for i in range(n):
        t = round(i * SAMPLE_INTERVAL_MS)
        kx, ky = key_position_at(key, max(0.0, t - latency_ms), params)
        hx, hy = key.home_position
        x = hx + gain * (kx - hx) + offset[0] + jitter[i, 0]
        y = hy + gain * (ky - hy) + offset[1] + jitter[i, 1]
        samples.append(GazeSample(t, x, y))
    return samples


def pursuit_accuracy(
    layout: InterfaceLayout,
    cluster_index: int,
    sigma_deg: float,
    n_per_key: int,
    seed: int = 0,
    jitter_ratio: float = 0.05,
    gain: float = 1.0,
    latency_ms: float = 0.0,
) -> float:
    """Fraction of simulated pursuits classified as the pursued key."""
    rng = np.random.default_rng(seed)
    cluster = layout.clusters[cluster_index]
    correct = 0
    total = 0
    for key in cluster.keys:
        for _ in range(n_per_key):
            window = pursuit_window(
                layout, key.id, rng, sigma_deg, jitter_ratio, gain, latency_ms
            )
            total += 1
            if classify_pursuit(window, cluster) == key.id:
                correct += 1
    return correct / total
