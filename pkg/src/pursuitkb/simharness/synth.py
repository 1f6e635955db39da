"""Closed-loop rendering of an action plan into a 60 Hz gaze trace.

For each planned pursuit the synthetic user reads the center area (typed
text and predictions live there, where gaze triggers nothing), optionally
wanders over the ring while searching, saccades to the target key's home,
holds through the dwell threshold and then tracks the key outward with a
latency and gain.

The synthesizer feeds every sample through a shadow engine and reacts to
its feedback exactly like a sighted user: a highlight on the wrong cluster
(the tracking offset can push the registered angle across a sector border)
is noticed after a short reaction time, gaze returns to the center and the
approach is retried with a fresh offset draw. This keeps the plan's commit
sequence and the engine's commit sequence in lockstep without giving the
synthesizer any authority over selection - the produced trace replays
through a fresh engine to the identical event log.

Traces are quantized to 0.01 px and integer milliseconds at generation
time so that persisted JSON reproduces the exact floats the engine saw.
"""

from __future__ import annotations

import numpy as np

from ..engine import HIGHLIGHT, IDLE, MOVING, TypingEngine
from ..layout import InterfaceLayout, unit_vector
from ..prediction import LanguageModel
from .planner import Action, TAG_INTENDED
from .user import UserModel

SAMPLE_INTERVAL_MS = 1000.0 / 60.0

# Samples before the user notices and abandons a wrong highlight.
REACTION_SAMPLES = 15
# Settling samples at the center between actions and after recoveries.
CENTER_SETTLE_SAMPLES = 8
MAX_HOLD_ATTEMPTS = 8


class SimulationError(RuntimeError):
    pass


def synth_gaze(
    plan: list[Action],
    layout: InterfaceLayout,
    model: LanguageModel,
    user: UserModel,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Render a plan to (t_ms, x, y) arrays of strictly increasing 60 Hz samples."""
    if not plan:
        raise SimulationError("plan is empty")
    synth = _Synth(layout, model, user, rng)
    synth.center_segment(CENTER_SETTLE_SAMPLES)
    for action in plan:
        synth.locate_phase(action)
        onset_t, offset = synth.hold_until_movement(action)
        synth.pursue(action, onset_t, offset)
    synth.center_segment(2)
    return (
        np.array(synth.ts, dtype=np.int64),
        np.array(synth.xs, dtype=np.float64),
        np.array(synth.ys, dtype=np.float64),
    )


class _Synth:
    def __init__(self, layout, model, user, rng) -> None:
        self.layout = layout
        self.user = user
        self.rng = rng
        self.shadow = TypingEngine(layout, model)
        self.keys = layout.keys_by_id
        self.center = layout.screen.center
        ppd = layout.screen.px_per_degree
        self.sigma_px = user.noise_sigma_px(ppd)
        self.jitter_px = user.jitter_sigma_px(ppd)
        self.speed = layout.params.move_speed_px_s
        self.ts: list[int] = []
        self.xs: list[float] = []
        self.ys: list[float] = []
        self.i = 0

    # -- primitives -----------------------------------------------------------

    def _draw_offset(self) -> tuple[float, float]:
        off = self.rng.normal(0.0, self.sigma_px, 2)
        return float(off[0]), float(off[1])

    def _push(self, x: float, y: float) -> None:
        t = round(self.i * 1000.0 / 60.0)
        x = round(x, 2)
        y = round(y, 2)
        self.shadow.ingest_xy(t, x, y)
        self.ts.append(t)
        self.xs.append(x)
        self.ys.append(y)
        self.i += 1

    def _fixation_segment(self, px: float, py: float, n: int) -> None:
        """n samples fixating one point: fresh episode offset, per-sample jitter."""
        if n <= 0:
            return
        ox, oy = self._draw_offset()
        jit = self.rng.normal(0.0, self.jitter_px, (n, 2))
        for k in range(n):
            self._push(px + ox + jit[k, 0], py + oy + jit[k, 1])

    def center_segment(self, n: int) -> None:
        self._fixation_segment(self.center[0], self.center[1], n)

    @staticmethod
    def _ms_to_samples(ms: float) -> int:
        return max(1, int(round(ms / SAMPLE_INTERVAL_MS)))

    # -- phases ----------------------------------------------------------------

    def locate_phase(self, action: Action) -> None:
        """Center reading plus search time before the saccade to the target."""
        user = self.user
        if action.tag == TAG_INTENDED:
            latency = self.rng.normal(user.locate_latency_ms, user.locate_latency_spread_ms)
            latency = max(200.0, float(latency))
        else:
            # Re-finding a key that was just used is fast.
            latency = max(150.0, min(600.0, user.locate_latency_ms / 4.0))
        total = 130.0 + latency + (user.prediction_scan_ms if action.scan_predictions else 0.0)
        n = self._ms_to_samples(total)
        wander = 0
        if action.tag == TAG_INTENDED and total > 1200.0 and self.rng.random() < 0.4:
            wander = self._ms_to_samples(float(self.rng.uniform(150.0, 330.0)))
        if wander and n - wander >= 4:
            first = (n - wander) // 2
            self.center_segment(first)
            cluster = self.layout.clusters[int(self.rng.integers(len(self.layout.clusters)))]
            bis = cluster.sector_start_deg + cluster.sector_width_deg / 2.0
            ux, uy = unit_vector(bis)
            r = self.layout.params.key_ring_radius_px
            self._fixation_segment(self.center[0] + r * ux, self.center[1] + r * uy, wander)
            self.center_segment(n - wander - first)
        else:
            self.center_segment(n)

    def hold_until_movement(self, action: Action) -> tuple[int, tuple[float, float]]:
        """Fixate the target key until its cluster starts moving.

        Returns the movement onset timestamp and the episode offset, which
        persists through the pursuit (the same tracking error stays on the
        eye for the whole episode - this is what net-displacement
        classification exploits).
        """
        key = self.keys[action.key_id]
        hx, hy = key.home_position
        target = action.cluster_index
        budget = 2 + self._ms_to_samples(self.layout.params.search_threshold_ms) + 30
        for _ in range(MAX_HOLD_ATTEMPTS):
            ox, oy = self._draw_offset()
            jit = self.rng.normal(0.0, self.jitter_px, (budget, 2))
            pushed = 0
            while pushed < budget:
                self._push(hx + ox + jit[pushed, 0], hy + oy + jit[pushed, 1])
                pushed += 1
                if self.shadow.phase == MOVING:
                    if self.shadow.moving_cluster == target:
                        return self.shadow.log[-1].t_ms, (ox, oy)
                    break  # wrong cluster launched; bail out immediately
                if (
                    self.shadow.phase == HIGHLIGHT
                    and self.shadow.highlighted_cluster != target
                    and pushed >= REACTION_SAMPLES
                ):
                    break  # noticed the wrong highlight
            self._recover_to_idle()
        raise SimulationError(f"could not select cluster {target} after {MAX_HOLD_ATTEMPTS} tries")

    def _recover_to_idle(self) -> None:
        ox, oy = self._draw_offset()
        jit = self.rng.normal(0.0, self.jitter_px, (60, 2))
        for k in range(60):
            self._push(self.center[0] + ox + jit[k, 0], self.center[1] + oy + jit[k, 1])
            if self.shadow.phase == IDLE and k >= CENTER_SETTLE_SAMPLES:
                return
        raise SimulationError("engine did not return to idle during recovery")

    def pursue(self, action: Action, onset_t: int, offset: tuple[float, float]) -> None:
        """Track the moving key until the engine closes the window."""
        key = self.keys[action.key_id]
        ux, uy = unit_vector(key.trajectory_angle_deg)
        hx, hy = key.home_position
        ox, oy = offset
        gain = self.user.pursuit_gain
        latency = self.user.pursuit_latency_ms
        budget = self._ms_to_samples(action.travel_px / self.speed * 1000.0) + 40
        jit = self.rng.normal(0.0, self.jitter_px, (budget, 2))
        pushed = 0
        while self.shadow.phase == MOVING:
            if pushed >= budget:
                raise SimulationError("pursuit window did not close")
            t = round(self.i * 1000.0 / 60.0)
            tau = max(0.0, t - onset_t - latency)
            dist = gain * min(self.speed * tau / 1000.0, action.travel_px)
            self._push(
                hx + dist * ux + ox + jit[pushed, 0],
                hy + dist * uy + oy + jit[pushed, 1],
            )
            pushed += 1
