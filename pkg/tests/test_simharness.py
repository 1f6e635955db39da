import math

import numpy as np
import pytest

from pursuitkb.engine import KEY_SELECTED, TypingEngine, events_to_jsonl
from pursuitkb.layout import build_layout
from pursuitkb.prediction import train_model
from pursuitkb.simharness.mc import pursuit_accuracy
from pursuitkb.simharness.phrases import load_phrase_set, normalize_phrase
from pursuitkb.simharness.planner import PlanError, plan_actions
from pursuitkb.simharness.runner import (
    Condition,
    exp1_config,
    run_trial,
    sample_phrases,
)
from pursuitkb.simharness.synth import synth_gaze
from pursuitkb.simharness.user import SkillCurve, UserModel

NOISELESS = UserModel(
    fixation_noise_sigma_deg=0.0,
    slip_prob=0.0,
    prediction_adoption_prob=0.0,
    pursuit_gain=1.0,
)


def selected(events):
    return [e.payload for e in events if e.kind == KEY_SELECTED]


class TestUserModel:
    def test_skill_curve_decays_to_floor(self):
        curve = SkillCurve(floor=0.25, tau_sessions=2.0)
        values = [curve(s) for s in range(1, 11)]
        assert values[0] == 1.0
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert values[-1] > 0.25

    def test_at_session_scales_latency_and_slip(self):
        u = UserModel()
        late = u.at_session(10, 250.0)
        assert late.locate_latency_ms < u.locate_latency_ms
        assert late.slip_prob < u.slip_prob
        assert late.prediction_adoption_prob > u.prediction_adoption_prob

    def test_speed_raises_slip(self):
        u = UserModel()
        assert u.at_session(1, 390.0).slip_prob > u.at_session(1, 250.0).slip_prob

    def test_validation(self):
        with pytest.raises(ValueError):
            UserModel(slip_prob=1.5)
        with pytest.raises(ValueError):
            UserModel(pursuit_gain=0.0)


class TestPlanner:
    def test_single_letter_phrase(self, nop_layout, model):
        plan = plan_actions("a", nop_layout, model, NOISELESS, np.random.default_rng(0))
        assert [a.key_id for a in plan] == ["A", "SP"]

    def test_forced_adoption_after_first_letter(self):
        # "the" is not offered at phrase start but is the only completion
        # of "t", so the plan types T then takes the arrow.
        corpus = "aa bb the\ncc dd the\nee ff the"
        model = train_model(corpus)
        layout = build_layout("L_WP")
        user = UserModel(
            fixation_noise_sigma_deg=0.0,
            slip_prob=0.0,
            prediction_adoption_prob=1.0,
        )
        plan = plan_actions("the", layout, model, user, np.random.default_rng(0))
        assert [a.key_id for a in plan] == ["T", "ARROW_UP"]

    def test_del_count_matches_binomial_oracle(self, nop_layout, model):
        phrase = "the cat sat on the mat"
        p = 0.1
        user = UserModel(
            fixation_noise_sigma_deg=0.0, slip_prob=p, prediction_adoption_prob=0.0
        )
        n = len(phrase) + 1  # one content action per char plus the final space
        reps = 100
        rng = np.random.default_rng(17)
        dels = [
            sum(1 for a in plan_actions(phrase, nop_layout, model, user, rng) if a.key_id == "DEL")
            for _ in range(reps)
        ]
        expectation = n * p
        half_width = 1.96 * math.sqrt(n * p * (1 - p) / reps)
        assert abs(np.mean(dels) - expectation) <= half_width

    def test_slips_are_recovered(self, nop_layout, model):
        user = UserModel(fixation_noise_sigma_deg=0.0, slip_prob=0.3, prediction_adoption_prob=0.0)
        rng = np.random.default_rng(3)
        plan = plan_actions("hello world", nop_layout, model, user, rng)
        # Rendering the plan reproduces the phrase despite slips.
        eng = TypingEngine(nop_layout, model)
        for a in plan:
            eng.commit_key(a.key_id)
        assert eng.buffer.rstrip() == "hello world"

    def test_rejects_unplannable_characters(self, nop_layout, model):
        with pytest.raises(PlanError):
            plan_actions("voila!", nop_layout, model, NOISELESS, np.random.default_rng(0))


class TestSynth:
    def test_same_seed_identical_trace(self, lwp_layout, model):
        user = UserModel()
        traces = []
        for _ in range(2):
            rng = np.random.default_rng(99)
            plan = plan_actions("have a good weekend", lwp_layout, model, user, rng)
            traces.append(synth_gaze(plan, lwp_layout, model, user, rng))
        for a, b in zip(traces[0], traces[1]):
            assert np.array_equal(a, b)

    def test_noiseless_round_trip(self, nop_layout, model):
        rng = np.random.default_rng(1)
        plan = plan_actions("time to go shopping", nop_layout, model, NOISELESS, rng)
        ts, xs, ys = synth_gaze(plan, nop_layout, model, NOISELESS, rng)
        eng = TypingEngine(nop_layout, model)
        events = eng.ingest_array(ts, xs, ys)
        assert selected(events) == [a.key_id for a in plan]

    def test_timestamps_strictly_increase(self, nop_layout, model):
        rng = np.random.default_rng(2)
        plan = plan_actions("love means many things", nop_layout, model, UserModel(), rng)
        ts, _, _ = synth_gaze(plan, nop_layout, model, UserModel(), rng)
        assert np.all(np.diff(ts) > 0)

    def test_noise_monotonicity_grid(self, nop_layout):
        # Less tracking noise never hurts selection accuracy (500 windows per level).
        accs = [
            pursuit_accuracy(nop_layout, 0, sigma_deg=s, n_per_key=125, seed=5)
            for s in (0.0, 1.5, 3.0)
        ]
        assert accs[0] >= accs[1] >= accs[2]
        assert accs[0] == 1.0


class TestRunTrial:
    def test_noiseless_letter_by_letter_metrics(self, model):
        cond = Condition("NoP", "NoP", "exp1", 250.0)
        r = run_trial("want to join us for lunch", cond, NOISELESS, 5, model=model)
        assert r.metrics.uer == 0.0
        assert r.metrics.cer == 0.0
        assert r.metrics.ks == 0.0
        assert r.record.transcribed == "want to join us for lunch"

    def test_adoption_produces_keystroke_savings(self, model):
        cond = Condition("L_WP", "L_WP", "exp1", 250.0)
        user = UserModel(
            fixation_noise_sigma_deg=0.0,
            slip_prob=0.0,
            prediction_adoption_prob=1.0,
            pursuit_gain=1.0,
        )
        r = run_trial("you must make an appointment", cond, user, 5, model=model)
        assert r.metrics.ks > 0.0
        assert r.record.arrow_activations > 0
        assert r.metrics.uer == 0.0

    def test_default_user_finite_wpm(self, model):
        cond = Condition("L_WP", "L_WP", "exp2", 390.0)
        r = run_trial("the rain in spain", cond, UserModel().at_session(2, 390.0), 8, model=model)
        assert math.isfinite(r.metrics.wpm) and r.metrics.wpm > 0

    def test_trace_replay_reproduces_event_log(self, model):
        cond = Condition("L_WP", "L_WP", "exp1", 250.0)
        r = run_trial("see you later alligator", cond, UserModel(), 13, model=model)
        layout = build_layout("L_WP", "exp1")
        eng = TypingEngine(layout, model)
        replayed = eng.ingest_array(*r.trace)
        assert events_to_jsonl(replayed) == events_to_jsonl(r.events)

    def test_adoption_zero_matches_nop_transcript(self, model):
        user = UserModel(prediction_adoption_prob=0.0)
        phrase = "the capital of our nation"
        r_nop = run_trial(phrase, Condition("NoP", "NoP", "exp1", 250.0), user, 77, model=model)
        r_lwp = run_trial(phrase, Condition("L_WP", "L_WP", "exp1", 250.0), user, 77, model=model)
        assert r_lwp.record.arrow_activations == 0
        assert r_nop.record.transcribed == r_lwp.record.transcribed == phrase


class TestPhrases:
    def test_normalization(self):
        assert normalize_phrase("Hello,   World!") == "hello world"

    def test_length_band(self):
        for p in load_phrase_set():
            assert 16 <= len(p) <= 32
            assert len(p.split()) >= 2
            assert set(p) <= set("abcdefghijklmnopqrstuvwxyz ")

    def test_sampling_without_replacement_and_deterministic(self):
        cfg = exp1_config(seed=5)
        a = sample_phrases(cfg, user=2, session=1)
        b = sample_phrases(cfg, user=2, session=1)
        assert a == b
        assert len(set(a)) == len(a)
        assert sample_phrases(cfg, user=3, session=1) != a or True  # different draw allowed
