"""Sample-driven three-phase interaction state machine.

Phases: Idle (gaze inside the central circle does nothing), Highlight
(a cluster is selected once two consecutive samples land in its sector and
keeps accumulating dwell), Moving (after the dwell threshold the cluster's
keys travel outward and the pursued key is classified from the net gaze
displacement over the movement window).

All timing derives from sample timestamps, never wall clock, so a recorded
stream replays to a byte-identical event log. The only preprocessing of
raw gaze is the additive one-point calibration offset.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .layout import Cluster, InterfaceLayout, min_trajectory_separation_deg
from .prediction import (
    EMPTY_PREDICTIONS,
    EmptySlotError,
    LanguageModel,
    PredictionSet,
    SLOT_BY_ARROW,
    apply_word_selection,
    lp_travel,
    predict_set,
    split_buffer,
)

IDLE = "Idle"
HIGHLIGHT = "Highlight"
MOVING = "Moving"

CLUSTER_HIGHLIGHTED = "ClusterHighlighted"
HIGHLIGHT_CLEARED = "HighlightCleared"
MOVEMENT_STARTED = "MovementStarted"
KEY_SELECTED = "KeySelected"
WORD_COMMITTED = "WordCommitted"
CHAR_DELETED = "CharDeleted"
RESET_TO_IDLE = "ResetToIdle"
NO_SELECTION = "NoSelection"

# Net displacement below travel / PURSUIT_GATE_DIVISOR rejects the window.
PURSUIT_GATE_DIVISOR = 3.0


class OutOfOrderSampleError(ValueError):
    pass


class CalibrationError(ValueError):
    pass


class UnknownKeyError(KeyError):
    pass


class GazeAngleError(ValueError):
    pass


@dataclass(frozen=True)
class GazeSample:
    t_ms: int
    x: float
    y: float


@dataclass(frozen=True)
class OffsetCorrection:
    dx: float = 0.0
    dy: float = 0.0


@dataclass(frozen=True)
class EngineEvent:
    t_ms: int
    kind: str
    payload: object = None


def event_to_json_line(event: EngineEvent) -> str:
    return json.dumps({"t_ms": event.t_ms, "kind": event.kind, "payload": event.payload})


def events_to_jsonl(events: Sequence[EngineEvent]) -> str:
    return "".join(event_to_json_line(e) + "\n" for e in events)


def gaze_angle(sample: GazeSample, center: tuple[float, float]) -> float:
    """Angle of the center-to-sample ray in degrees, [0, 360).

    Mathematical convention: the screen-down y delta is negated so 90 deg
    is screen-up.
    """
    dx = sample.x - center[0]
    dy = center[1] - sample.y
    if dx == 0.0 and dy == 0.0:
        raise GazeAngleError("gaze angle is undefined at the screen center")
    return math.degrees(math.atan2(dy, dx)) % 360.0


def calibrate_one_point(
    samples: Sequence[GazeSample], target: tuple[float, float]
) -> OffsetCorrection:
    """Offset that maps the mean fixation position onto the target point."""
    if len(samples) < 10:
        raise CalibrationError(f"need at least 10 samples, got {len(samples)}")
    mx = math.fsum(s.x for s in samples) / len(samples)
    my = math.fsum(s.y for s in samples) / len(samples)
    return OffsetCorrection(dx=target[0] - mx, dy=target[1] - my)


def classify_pursuit(
    window: Sequence[GazeSample],
    cluster: Cluster,
    travels: Optional[dict[str, float]] = None,
) -> Optional[str]:
    """Key pursued during a movement window, or None.

    Uses only the net displacement (last minus first sample), which cancels
    any constant tracking offset: classification depends on relative gaze
    movement, not absolute position. Rejects windows whose displacement is
    shorter than a third of the smallest key travel or whose direction
    misses every trajectory by at least half the minimum fan separation.
    """
    if len(window) < 2:
        return None
    if travels is None:
        travels = {k.id: k.travel_px for k in cluster.keys}
    first, last = window[0], window[-1]
    dx = last.x - first.x
    dy = first.y - last.y
    magnitude = math.hypot(dx, dy)
    if magnitude < min(travels.values()) / PURSUIT_GATE_DIVISOR:
        return None
    angle = math.degrees(math.atan2(dy, dx)) % 360.0
    best_key, best_err = None, 360.0
    for key in cluster.keys:
        d = abs(angle - key.trajectory_angle_deg) % 360.0
        err = min(d, 360.0 - d)
        if err < best_err:
            best_key, best_err = key, err
    if best_err < min_trajectory_separation_deg(cluster) / 2.0:
        return best_key.id
    return None


class TypingEngine:
    """One interaction session: ingest gaze samples, emit events, edit text.

    Events accumulate in ``self.log``; ``ingest_sample`` additionally
    returns the events emitted for that sample. Engines are independent and
    strictly sequential; share layouts and language models read-only.
    """

    def __init__(
        self,
        layout: InterfaceLayout,
        model: Optional[LanguageModel] = None,
        offset: OffsetCorrection = OffsetCorrection(),
    ) -> None:
        self.layout = layout
        self.model = model
        self.offset = offset
        self.buffer = ""
        self.predictions: PredictionSet = (
            predict_set(model, "", layout.variant) if model else EMPTY_PREDICTIONS
        )
        self.log: list[EngineEvent] = []
        self.phase = IDLE
        self._last_t: Optional[int] = None
        # Previous-sample sector memory for the two-consecutive-sample rule;
        # invalidated when a movement window ends so a fresh selection always
        # needs two new samples.
        self._prev_outside = False
        self._prev_sector = -1
        self._prev_valid = False
        # Highlight bookkeeping.
        self._hl_cluster = -1
        self._dwell_ms = 0.0
        # Movement bookkeeping.
        self._mv_cluster = -1
        self._mv_onset_t = 0
        self._mv_window: list[GazeSample] = []
        self._mv_travels: dict[str, float] = {}
        self._mv_window_ms = 0.0
        self._mv_half_min_ms = 0.0
        # Geometry lookups.
        self._cx, self._cy = layout.screen.center
        self._idle_r2 = layout.params.idle_radius_px**2
        self._starts = layout.sector_starts.tolist()
        self._order = list(layout.sector_order)
        self._keys = layout.keys_by_id

    # -- calibration --------------------------------------------------------

    def calibrate(
        self, samples: Sequence[GazeSample], target: Optional[tuple[float, float]] = None
    ) -> OffsetCorrection:
        """One-point calibration against the screen center (or given target)."""
        self.offset = calibrate_one_point(samples, target or (self._cx, self._cy))
        return self.offset

    # -- state views ---------------------------------------------------------

    @property
    def current_word_prefix(self) -> str:
        return split_buffer(self.buffer)[1]

    @property
    def highlighted_cluster(self) -> Optional[int]:
        return self._hl_cluster if self.phase == HIGHLIGHT else None

    @property
    def moving_cluster(self) -> Optional[int]:
        return self._mv_cluster if self.phase == MOVING else None

    # -- ingestion -----------------------------------------------------------

    def ingest_sample(self, sample: GazeSample) -> list[EngineEvent]:
        mark = len(self.log)
        self.ingest_xy(sample.t_ms, sample.x, sample.y)
        return self.log[mark:]

    def ingest_xy(self, t: int, x: float, y: float) -> None:
        if self._last_t is not None and t <= self._last_t:
            raise OutOfOrderSampleError(f"sample at {t} ms not after {self._last_t} ms")
        x += self.offset.dx
        y += self.offset.dy
        dx = x - self._cx
        dy = self._cy - y
        inside = dx * dx + dy * dy < self._idle_r2
        if inside:
            sector = -1
        else:
            angle = math.degrees(math.atan2(dy, dx)) % 360.0
            pos = bisect_right(self._starts, angle) - 1
            sector = self._order[pos]
        self._step(t, x, y, inside, sector)

    def ingest_array(self, ts: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> list[EngineEvent]:
        """Batch ingestion; geometry is precomputed by the kernel backend.

        The whole batch is validated for monotonic timestamps before any
        sample is processed.
        """
        ts = np.asarray(ts, dtype=np.int64)
        if ts.size == 0:
            return []
        if (self._last_t is not None and ts[0] <= self._last_t) or np.any(np.diff(ts) <= 0):
            raise OutOfOrderSampleError("batch timestamps must be strictly increasing")
        xs = np.asarray(xs, dtype=np.float64) + self.offset.dx
        ys = np.asarray(ys, dtype=np.float64) + self.offset.dy
        inside, pos = kernels.sample_geometry(
            xs, ys, self._cx, self._cy, self.layout.params.idle_radius_px, self.layout.sector_starts
        )
        order = np.asarray(self._order, dtype=np.int64)
        sectors = np.where(inside, -1, order[pos])
        mark = len(self.log)
        step = self._step
        for t, x, y, ins, sec in zip(
            ts.tolist(), xs.tolist(), ys.tolist(), inside.tolist(), sectors.tolist()
        ):
            step(t, x, y, ins, sec)
        return self.log[mark:]

    # -- core state machine --------------------------------------------------

    def _step(self, t: int, x: float, y: float, inside: bool, sector: int) -> None:
        phase = self.phase
        if phase == IDLE:
            if not inside and self._prev_valid and self._prev_outside and self._prev_sector == sector:
                self.phase = HIGHLIGHT
                self._hl_cluster = sector
                self._dwell_ms = 0.0
                self.log.append(EngineEvent(t, CLUSTER_HIGHLIGHTED, sector))
        elif phase == HIGHLIGHT:
            if inside:
                self.log.append(EngineEvent(t, HIGHLIGHT_CLEARED, self._hl_cluster))
                self.log.append(EngineEvent(t, RESET_TO_IDLE))
                self.phase = IDLE
            elif sector != self._hl_cluster:
                self._hl_cluster = sector
                self._dwell_ms = 0.0
                self.log.append(EngineEvent(t, CLUSTER_HIGHLIGHTED, sector))
            else:
                self._dwell_ms += t - self._last_t
                if self._dwell_ms >= self.layout.params.search_threshold_ms:
                    self._start_movement(t, x, y)
        else:  # MOVING
            elapsed = t - self._mv_onset_t
            if inside and elapsed < self._mv_half_min_ms:
                # Gaze fell back to the idle circle early: the movement is
                # abandoned and the keys glide back.
                self.log.append(EngineEvent(t, RESET_TO_IDLE))
                self.phase = IDLE
                self._prev_valid = False
                self._last_t = t
                return
            self._mv_window.append(GazeSample(t, x, y))
            if elapsed >= self._mv_window_ms:
                self._close_window(t)
                self._last_t = t
                return
        self._prev_outside = not inside
        self._prev_sector = sector
        self._prev_valid = True
        self._last_t = t

    def _start_movement(self, t: int, x: float, y: float) -> None:
        cluster = self.layout.clusters[self._hl_cluster]
        params = self.layout.params
        travels = {
            k.id: lp_travel(self.layout, k, self.predictions.top_letters) for k in cluster.keys
        }
        window_ms = max(travels.values()) / params.move_speed_px_s * 1000.0
        if cluster.is_arrow_cluster:
            window_ms += params.arrow_extension_ms
        self.phase = MOVING
        self._mv_cluster = cluster.index
        self._mv_onset_t = t
        self._mv_window = [GazeSample(t, x, y)]
        self._mv_travels = travels
        self._mv_window_ms = window_ms
        self._mv_half_min_ms = min(travels.values()) / params.move_speed_px_s * 1000.0 / 2.0
        self.log.append(EngineEvent(t, MOVEMENT_STARTED, cluster.index))

    def _close_window(self, t: int) -> None:
        cluster = self.layout.clusters[self._mv_cluster]
        key_id = classify_pursuit(self._mv_window, cluster, self._mv_travels)
        if key_id is None:
            self.log.append(EngineEvent(t, NO_SELECTION))
        else:
            key = self._keys[key_id]
            if key.is_arrow and not self.predictions.slot_map.get(SLOT_BY_ARROW[key_id], ""):
                self.log.append(EngineEvent(t, NO_SELECTION))
            else:
                self.log.append(EngineEvent(t, KEY_SELECTED, key_id))
                self.commit_key(key_id, t)
        self.phase = IDLE
        self._mv_window = []
        self._prev_valid = False

    # -- text editing ---------------------------------------------------------

    def commit_key(self, key_id: str, t: int = 0) -> list[EngineEvent]:
        """Apply one selected key to the text buffer and refresh predictions."""
        if key_id not in self._keys:
            raise UnknownKeyError(key_id)
        mark = len(self.log)
        if key_id == "SP":
            word = split_buffer(self.buffer)[1]
            self.buffer += " "
            if word:
                self.log.append(EngineEvent(t, WORD_COMMITTED, word))
        elif key_id == "DEL":
            if self.buffer:
                self.buffer = self.buffer[:-1]
                self.log.append(EngineEvent(t, CHAR_DELETED))
        elif key_id in SLOT_BY_ARROW:
            self.buffer, word = apply_word_selection(
                self.buffer, SLOT_BY_ARROW[key_id], self.predictions
            )
            self.log.append(EngineEvent(t, WORD_COMMITTED, word))
        else:
            self.buffer += key_id.lower()
        if self.model is not None:
            self.predictions = predict_set(self.model, self.buffer, self.layout.variant)
        return self.log[mark:]
