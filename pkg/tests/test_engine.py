import math

import numpy as np
import pytest

from pursuitkb.engine import (
    CLUSTER_HIGHLIGHTED,
    HIGHLIGHT_CLEARED,
    KEY_SELECTED,
    MOVEMENT_STARTED,
    NO_SELECTION,
    RESET_TO_IDLE,
    WORD_COMMITTED,
    CHAR_DELETED,
    CalibrationError,
    GazeAngleError,
    GazeSample,
    OutOfOrderSampleError,
    TypingEngine,
    calibrate_one_point,
    classify_pursuit,
    events_to_jsonl,
    gaze_angle,
)
from pursuitkb.layout import key_position_at
from pursuitkb.prediction import predict_set
from pursuitkb.simharness.mc import pursuit_accuracy


def t60(i: int) -> int:
    return round(i * 1000 / 60)


def feed(engine, points, start=0):
    events = []
    for i, (x, y) in enumerate(points):
        events.extend(engine.ingest_sample(GazeSample(t60(start + i), x, y)))
    return events


def kinds(events):
    return [e.kind for e in events]


CENTER = (960.0, 600.0)


class TestGazeAngle:
    def test_axes(self):
        assert gaze_angle(GazeSample(0, 999.0, 600.0), CENTER) == pytest.approx(0.0)
        assert gaze_angle(GazeSample(0, 960.0, 561.0), CENTER) == pytest.approx(90.0)
        assert gaze_angle(GazeSample(0, 921.0, 600.0), CENTER) == pytest.approx(180.0)

    def test_center_undefined(self):
        with pytest.raises(GazeAngleError):
            gaze_angle(GazeSample(0, 960.0, 600.0), CENTER)


class TestCalibration:
    def test_zero_offset(self):
        samples = [GazeSample(t60(i), 960.0, 600.0) for i in range(12)]
        off = calibrate_one_point(samples, CENTER)
        assert off.dx == 0.0 and off.dy == 0.0

    def test_constant_offset_inverted(self):
        samples = [GazeSample(t60(i), 972.0, 595.0) for i in range(12)]
        off = calibrate_one_point(samples, CENTER)
        assert off.dx == pytest.approx(-12.0)
        assert off.dy == pytest.approx(5.0)

    def test_too_few_samples(self):
        samples = [GazeSample(t60(i), 960.0, 600.0) for i in range(9)]
        with pytest.raises(CalibrationError):
            calibrate_one_point(samples, CENTER)

    def test_noisy_offset_magnitude(self):
        # sigma 10 px, 60 samples: offset magnitude < 5 px nearly always.
        rng = np.random.default_rng(3)
        reps = 10_000
        means = rng.normal(0.0, 10.0, (reps, 60, 2)).mean(axis=1)
        frac = (np.hypot(means[:, 0], means[:, 1]) < 5.0).mean()
        assert frac > 0.99


class TestHighlightRules:
    def test_two_consecutive_samples_required(self, nop_layout):
        eng = TypingEngine(nop_layout)
        home = nop_layout.keys_by_id["A"].home_position
        events = feed(eng, [home, home])
        assert kinds(events) == [CLUSTER_HIGHLIGHTED]
        assert events[0].payload == 0

    def test_single_sample_then_idle_never_highlights(self, nop_layout):
        eng = TypingEngine(nop_layout)
        home = nop_layout.keys_by_id["A"].home_position
        events = feed(eng, [home, CENTER, home, CENTER, home, CENTER])
        assert events == []

    def test_idle_samples_emit_nothing(self, nop_layout):
        eng = TypingEngine(nop_layout)
        assert feed(eng, [CENTER] * 50) == []

    def test_sector_change_rehighlights(self, nop_layout):
        eng = TypingEngine(nop_layout)
        a = nop_layout.keys_by_id["A"].home_position
        e = nop_layout.keys_by_id["E"].home_position
        events = feed(eng, [a, a, e])
        assert kinds(events) == [CLUSTER_HIGHLIGHTED, CLUSTER_HIGHLIGHTED]
        assert [ev.payload for ev in events] == [0, 1]

    def test_idle_return_clears_highlight(self, nop_layout):
        eng = TypingEngine(nop_layout)
        a = nop_layout.keys_by_id["A"].home_position
        events = feed(eng, [a, a, CENTER])
        assert kinds(events) == [CLUSTER_HIGHLIGHTED, HIGHLIGHT_CLEARED, RESET_TO_IDLE]

    def test_dwell_reaches_threshold_at_exact_sample(self, nop_layout):
        eng = TypingEngine(nop_layout)
        home = nop_layout.keys_by_id["A"].home_position
        # Highlight at sample 1; dwell crosses 600 ms exactly 36 samples later.
        events = feed(eng, [home] * 38)
        starts = [e for e in events if e.kind == MOVEMENT_STARTED]
        assert len(starts) == 1
        highlight_t = next(e.t_ms for e in events if e.kind == CLUSTER_HIGHLIGHTED)
        assert starts[0].t_ms - highlight_t == 600
        assert starts[0].t_ms == t60(37)

    def test_dwell_not_reached_one_sample_early(self, nop_layout):
        eng = TypingEngine(nop_layout)
        home = nop_layout.keys_by_id["A"].home_position
        events = feed(eng, [home] * 37)
        assert all(e.kind != MOVEMENT_STARTED for e in events)


def drive_selection(engine, key, travel=None, extra=8):
    """Hold on the key home through the threshold, then track it exactly."""
    layout = engine.layout
    home = key.home_position
    points = [home] * 38
    onset_t = t60(37)
    window_ms = (travel or key.travel_px) / layout.params.move_speed_px_s * 1000
    if key.is_arrow:
        window_ms += layout.params.arrow_extension_ms
    n_window = int(window_ms / (1000 / 60))
    for i in range(38, 38 + n_window + extra):
        elapsed = t60(i) - onset_t
        points.append(key_position_at(key, elapsed, layout.params, travel_px=travel))
    return feed(engine, points)


class TestSelection:
    def test_noiseless_pursuit_selects_key(self, nop_layout):
        eng = TypingEngine(nop_layout)
        events = drive_selection(eng, nop_layout.keys_by_id["B"])
        assert [e.payload for e in events if e.kind == KEY_SELECTED] == ["B"]
        assert eng.buffer == "b"

    def test_window_closes_at_travel_time(self, nop_layout):
        eng = TypingEngine(nop_layout)
        events = drive_selection(eng, nop_layout.keys_by_id["B"])
        onset = next(e.t_ms for e in events if e.kind == MOVEMENT_STARTED)
        selected = next(e.t_ms for e in events if e.kind == KEY_SELECTED)
        # First 60 Hz sample at or after 94 px / 250 px/s = 376 ms.
        assert 376 <= selected - onset < 376 + 17

    def test_arrow_window_extended(self, lwp_layout, model):
        eng = TypingEngine(lwp_layout, model)
        events = drive_selection(eng, lwp_layout.keys_by_id["ARROW_UP"])
        onset = next(e.t_ms for e in events if e.kind == MOVEMENT_STARTED)
        selected = next(e.t_ms for e in events if e.kind == KEY_SELECTED)
        # 141 px / 250 px/s = 564 ms plus 15 extra samples at 60 Hz = 250 ms.
        assert 814 <= selected - onset < 814 + 17

    def test_arrow_with_empty_slot_is_no_selection(self, lwp_layout):
        eng = TypingEngine(lwp_layout)  # no model: all slots empty
        events = drive_selection(eng, lwp_layout.keys_by_id["ARROW_UP"])
        assert NO_SELECTION in kinds(events)
        assert KEY_SELECTED not in kinds(events)
        assert eng.buffer == ""

    def test_early_idle_return_aborts(self, nop_layout):
        eng = TypingEngine(nop_layout)
        home = nop_layout.keys_by_id["A"].home_position
        points = [home] * 38 + [CENTER] * 5
        events = feed(eng, points)
        assert RESET_TO_IDLE in kinds(events)
        assert KEY_SELECTED not in kinds(events)
        assert eng.phase == "Idle"

    def test_stationary_gaze_gives_no_selection(self, nop_layout):
        eng = TypingEngine(nop_layout)
        events = feed(eng, [nop_layout.keys_by_id["A"].home_position] * 70)
        assert NO_SELECTION in kinds(events)
        assert KEY_SELECTED not in kinds(events)


class TestClassifyPursuit:
    def _window(self, points):
        return [GazeSample(t60(i), x, y) for i, (x, y) in enumerate(points)]

    def test_exact_trajectory(self, nop_layout):
        key = nop_layout.keys_by_id["B"]
        cluster = nop_layout.clusters[key.cluster_index]
        pts = [key_position_at(key, ms, nop_layout.params) for ms in range(0, 400, 17)]
        assert classify_pursuit(self._window(pts), cluster) == "B"

    def test_zero_displacement_rejected(self, nop_layout):
        cluster = nop_layout.clusters[0]
        pts = [(1200.0, 400.0)] * 30
        assert classify_pursuit(self._window(pts), cluster) is None

    def test_small_displacement_rejected(self, nop_layout):
        key = nop_layout.keys_by_id["A"]
        cluster = nop_layout.clusters[0]
        hx, hy = key.home_position
        pts = [(hx, hy), (hx + 5.0, hy - 5.0)]
        assert classify_pursuit(self._window(pts), cluster) is None

    def test_offset_cancels(self, nop_layout):
        # A constant tracking offset must not change the result.
        key = nop_layout.keys_by_id["C"]
        cluster = nop_layout.clusters[key.cluster_index]
        pts = [
            (p[0] + 55.0, p[1] - 42.0)
            for p in (key_position_at(key, ms, nop_layout.params) for ms in range(0, 400, 17))
        ]
        assert classify_pursuit(self._window(pts), cluster) == "C"

    def test_time_rescaling_invariance(self, nop_layout):
        key = nop_layout.keys_by_id["D"]
        cluster = nop_layout.clusters[key.cluster_index]
        pts = [key_position_at(key, ms, nop_layout.params) for ms in range(0, 400, 17)]
        w1 = [GazeSample(i, x, y) for i, (x, y) in enumerate(pts)]
        w2 = [GazeSample(1000 + 50 * i, x, y) for i, (x, y) in enumerate(pts)]
        assert classify_pursuit(w1, cluster) == classify_pursuit(w2, cluster)

    def test_monte_carlo_robustness_small(self, nop_layout):
        acc = pursuit_accuracy(nop_layout, 0, sigma_deg=1.0, n_per_key=100, seed=9)
        assert acc >= 0.97


class TestCommit:
    def test_letter_append(self, nop_layout, model):
        eng = TypingEngine(nop_layout, model)
        eng.buffer = "th"
        eng.commit_key("E")
        assert eng.buffer == "the"
        assert eng.current_word_prefix == "the"

    def test_del_on_empty_buffer(self, nop_layout):
        eng = TypingEngine(nop_layout)
        events = eng.commit_key("DEL")
        assert events == []
        assert eng.buffer == ""

    def test_del_removes_one_char(self, nop_layout):
        eng = TypingEngine(nop_layout)
        eng.buffer = "cat"
        events = eng.commit_key("DEL")
        assert kinds(events) == [CHAR_DELETED]
        assert eng.buffer == "ca"

    def test_sp_commits_word(self, nop_layout):
        eng = TypingEngine(nop_layout)
        eng.buffer = "hello"
        events = eng.commit_key("SP")
        assert kinds(events) == [WORD_COMMITTED]
        assert events[0].payload == "hello"
        assert eng.buffer == "hello "

    def test_arrow_completion_commit(self, lwp_layout, model):
        eng = TypingEngine(lwp_layout, model)
        eng.buffer = "you must make an app"
        eng.predictions = predict_set(model, eng.buffer, "L_WP")
        slot = next(s for s, w in eng.predictions.slot_map.items() if w == "appointment")
        arrow = {"up": "ARROW_UP", "left": "ARROW_LEFT", "right": "ARROW_RIGHT"}[slot]
        events = eng.commit_key(arrow)
        assert eng.buffer == "you must make an appointment "
        assert [e.payload for e in events if e.kind == WORD_COMMITTED] == ["appointment"]

    def test_unknown_key_rejected(self, nop_layout):
        with pytest.raises(KeyError):
            TypingEngine(nop_layout).commit_key("ARROW_UP")

    def test_buffer_delta_invariant(self, lwp_layout, model):
        rng = np.random.default_rng(21)
        eng = TypingEngine(lwp_layout, model)
        ids = [k for k in lwp_layout.keys_by_id]
        for _ in range(300):
            kid = ids[int(rng.integers(len(ids)))]
            before = eng.buffer
            prefix = eng.current_word_prefix
            if kid.startswith("ARROW"):
                slot = {"ARROW_UP": "up", "ARROW_LEFT": "left", "ARROW_RIGHT": "right"}[kid]
                word = eng.predictions.slot_map.get(slot, "")
                if not word:
                    continue
                eng.commit_key(kid)
                assert len(eng.buffer) - len(before) == len(word) + 1 - len(prefix)
            elif kid == "DEL":
                eng.commit_key(kid)
                assert len(eng.buffer) - len(before) in (-1, 0)
            else:
                eng.commit_key(kid)
                assert len(eng.buffer) - len(before) == 1


class TestStreamDiscipline:
    def test_out_of_order_rejected(self, nop_layout):
        eng = TypingEngine(nop_layout)
        eng.ingest_sample(GazeSample(100, *CENTER))
        with pytest.raises(OutOfOrderSampleError):
            eng.ingest_sample(GazeSample(100, *CENTER))
        with pytest.raises(OutOfOrderSampleError):
            eng.ingest_array(
                np.array([150, 140]), np.array([960.0, 960.0]), np.array([600.0, 600.0])
            )

    def test_event_timestamps_ordered(self, nop_layout, model):
        eng = TypingEngine(nop_layout, model)
        drive_selection(eng, nop_layout.keys_by_id["B"])
        ts = [e.t_ms for e in eng.log]
        assert ts == sorted(ts)

    def _noisy_stream(self, layout, seed, n=600):
        rng = np.random.default_rng(seed)
        homes = [k.home_position for k in layout.keys_by_id.values()]
        pts = []
        i = 0
        while len(pts) < n:
            target = homes[int(rng.integers(len(homes)))] if rng.random() < 0.5 else CENTER
            dur = int(rng.integers(3, 50))
            for _ in range(dur):
                pts.append(
                    (
                        target[0] + float(rng.normal(0, 15)),
                        target[1] + float(rng.normal(0, 15)),
                    )
                )
            i += 1
        ts = np.array([t60(i) for i in range(len(pts))], dtype=np.int64)
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        return ts, xs, ys

    def test_determinism(self, nop_layout, model):
        ts, xs, ys = self._noisy_stream(nop_layout, 31)
        logs = []
        for _ in range(2):
            eng = TypingEngine(nop_layout, model)
            eng.ingest_array(ts, xs, ys)
            logs.append(events_to_jsonl(eng.log))
        assert logs[0] == logs[1]

    def test_batch_equals_single_sample_path(self, lwp_layout, model):
        for seed in (41, 42, 43):
            ts, xs, ys = self._noisy_stream(lwp_layout, seed)
            e1 = TypingEngine(lwp_layout, model)
            e1.ingest_array(ts, xs, ys)
            e2 = TypingEngine(lwp_layout, model)
            for t, x, y in zip(ts.tolist(), xs.tolist(), ys.tolist()):
                e2.ingest_sample(GazeSample(t, x, y))
            assert events_to_jsonl(e1.log) == events_to_jsonl(e2.log)
            assert e1.buffer == e2.buffer

    def test_offset_applied_additively(self, nop_layout):
        eng = TypingEngine(nop_layout)
        samples = [GazeSample(t60(i), 960.0 - 12.0, 600.0 + 30.0) for i in range(12)]
        eng.calibrate(samples)
        assert eng.offset.dx == pytest.approx(12.0)
        assert eng.offset.dy == pytest.approx(-30.0)
        # Corrected samples land at the center: no events.
        assert feed(eng, [(948.0, 630.0)] * 20, start=100) == []


class TestMovementLegality:
    def test_movement_preceded_by_highlight_with_dwell(self, nop_layout, model):
        eng = TypingEngine(nop_layout, model)
        drive_selection(eng, nop_layout.keys_by_id["C"])
        log = eng.log
        for i, e in enumerate(log):
            if e.kind == MOVEMENT_STARTED:
                hl = [
                    x
                    for x in log[:i]
                    if x.kind == CLUSTER_HIGHLIGHTED and x.payload == e.payload
                ]
                assert hl, "MovementStarted without prior highlight"
                assert e.t_ms - hl[-1].t_ms >= nop_layout.params.search_threshold_ms
