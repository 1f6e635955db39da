"""Trial and experiment execution with deterministic seeding and reports.

Every trial derives its generator from ``SeedSequence([seed, condition,
user, session, trial])``, phrases are drawn per (user, session) without
replacement and shared across conditions, and results are merged in fixed
(condition, user, session, trial) order - identical config and seed yield
byte-identical report files.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from ..engine import KEY_SELECTED, EngineEvent, TypingEngine, events_to_jsonl
from ..layout import ARROW_KEYS, InterfaceLayout, LayoutParams, ScreenConfig, build_layout
from ..metrics import SessionMetrics, TrialRecord, trial_metrics
from ..prediction import LanguageModel, train_model
from .phrases import default_phrase_text, load_phrase_set
from .planner import Action, plan_actions
from .synth import synth_gaze
from .user import UserModel

log = logging.getLogger(__name__)

PHRASE_STREAM_TAG = 7777  # seed namespace for phrase sampling


@dataclass(frozen=True)
class Condition:
    label: str
    variant: str
    revision: str
    move_speed_px_s: float


@dataclass(frozen=True)
class ExperimentConfig:
    protocol: str
    conditions: tuple[Condition, ...]
    users: int
    sessions: int
    phrases_per_session: int
    phrase_set: tuple[str, ...]
    screen: ScreenConfig = ScreenConfig()
    params: LayoutParams = LayoutParams()
    user_model: UserModel = UserModel()
    corpus_text: str = ""
    seed: int = 0
    persist_traces: bool = True
    persist_events: bool = True

    def __post_init__(self) -> None:
        if self.users < 1 or self.sessions < 1 or self.phrases_per_session < 1:
            raise ValueError("users, sessions and phrases_per_session must be >= 1")
        if self.phrases_per_session > len(self.phrase_set):
            raise ValueError("phrase set too small for phrases_per_session")


def exp1_config(seed: int = 0, users: int = 6, **overrides) -> ExperimentConfig:
    """Three prediction variants, three sessions of two phrases each."""
    phrases = tuple(load_phrase_set())
    defaults = dict(
        protocol="exp1",
        conditions=(
            Condition("NoP", "NoP", "exp1", 250.0),
            Condition("LP", "LP", "exp1", 250.0),
            Condition("L_WP", "L_WP", "exp1", 250.0),
        ),
        users=users,
        sessions=3,
        phrases_per_session=2,
        phrase_set=phrases,
        corpus_text=default_phrase_text(),
        seed=seed,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def exp2_config(seed: int = 0, users: int = 6, **overrides) -> ExperimentConfig:
    """Revised layout at two movement speeds over ten training sessions."""
    phrases = tuple(load_phrase_set())
    defaults = dict(
        protocol="exp2",
        conditions=(
            Condition("slow", "L_WP", "exp2", 250.0),
            Condition("fast", "L_WP", "exp2", 390.0),
        ),
        users=users,
        sessions=10,
        phrases_per_session=14,
        phrase_set=phrases,
        corpus_text=default_phrase_text(),
        seed=seed,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


@dataclass(frozen=True)
class TrialResult:
    condition: str
    session: int
    user: int
    phrase: str
    record: TrialRecord
    metrics: SessionMetrics
    events: tuple[EngineEvent, ...]
    trace: tuple[np.ndarray, np.ndarray, np.ndarray] = field(repr=False)
    plan: tuple[Action, ...] = field(repr=False)


def build_trial_record(phrase: str, events, final_buffer: str) -> TrialRecord:
    commits = [e for e in events if e.kind == KEY_SELECTED]
    if len(commits) < 2:
        raise RuntimeError(f"trial produced {len(commits)} commits; cannot time it")
    return TrialRecord(
        target=phrase,
        transcribed=final_buffer.rstrip(" "),
        duration_ms=commits[-1].t_ms - commits[0].t_ms,
        key_activations=len(commits),
        del_activations=sum(1 for e in commits if e.payload == "DEL"),
        arrow_activations=sum(1 for e in commits if e.payload in ARROW_KEYS),
    )


def run_trial(
    phrase: str,
    condition: Condition,
    user: UserModel,
    seed,
    *,
    layout: Optional[InterfaceLayout] = None,
    model: Optional[LanguageModel] = None,
    screen: Optional[ScreenConfig] = None,
    params: Optional[LayoutParams] = None,
    session: int = 0,
    user_index: int = 0,
) -> TrialResult:
    """Plan, render and replay one phrase under one condition.

    The stored trace replays through a fresh engine to exactly the stored
    event log (the synthesizer has no selection authority).
    """
    if layout is None:
        base = params or LayoutParams()
        layout = build_layout(
            condition.variant,
            condition.revision,
            screen or ScreenConfig(),
            replace(base, move_speed_px_s=condition.move_speed_px_s),
        )
    if model is None:
        model = train_model(default_phrase_text())
    rng = np.random.default_rng(seed)
    plan = plan_actions(phrase, layout, model, user, rng)
    ts, xs, ys = synth_gaze(plan, layout, model, user, rng)
    engine = TypingEngine(layout, model)
    events = tuple(engine.ingest_array(ts, xs, ys))
    record = build_trial_record(phrase, events, engine.buffer)
    return TrialResult(
        condition=condition.label,
        session=session,
        user=user_index,
        phrase=phrase,
        record=record,
        metrics=trial_metrics(record),
        events=events,
        trace=(ts, xs, ys),
        plan=tuple(plan),
    )


@dataclass
class Report:
    protocol: str
    seed: int
    results: list[TrialResult]
    meta: dict

    def session_mean(self, condition: str, session: int, metric: str) -> float:
        vals = self.metric_values(condition, session, metric)
        return float(np.mean(vals))

    def metric_values(self, condition: str, session: int, metric: str) -> list[float]:
        return [
            getattr(r.metrics, metric)
            for r in self.results
            if r.condition == condition and r.session == session
        ]

    def summary(self) -> dict:
        conditions = sorted({r.condition for r in self.results})
        sessions = sorted({r.session for r in self.results})
        out: dict = {}
        for cond in conditions:
            out[cond] = {}
            for ses in sessions:
                cell = {}
                for metric in ("wpm", "adj_wpm", "cer", "uer", "ks"):
                    vals = self.metric_values(cond, ses, metric)
                    cell[metric] = {
                        "mean": float(np.mean(vals)),
                        "sd": float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0,
                        "n": len(vals),
                    }
                out[cond][str(ses)] = cell
        return out

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["phrase", "variant", "session", "user", "wpm", "adj_wpm", "cer", "uer", "ks"]
        )
        for r in self.results:
            m = r.metrics
            writer.writerow(
                [r.phrase, r.condition, r.session, r.user, m.wpm, m.adj_wpm, m.cer, m.uer, m.ks]
            )
        return buf.getvalue()

    def to_json_text(self) -> str:
        doc = {
            "protocol": self.protocol,
            "seed": self.seed,
            "meta": self.meta,
            "summary": self.summary(),
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def sample_phrases(config: ExperimentConfig, user: int, session: int) -> list[str]:
    """Per-(user, session) phrase draw, without replacement, shared across conditions."""
    rng = np.random.default_rng(
        np.random.SeedSequence([config.seed, PHRASE_STREAM_TAG, user, session])
    )
    idx = rng.choice(len(config.phrase_set), size=config.phrases_per_session, replace=False)
    return [config.phrase_set[i] for i in idx]


def trial_seed(config: ExperimentConfig, cond_idx: int, user: int, session: int, trial: int):
    return np.random.SeedSequence([config.seed, cond_idx, user, session, trial])


def run_experiment(config: ExperimentConfig, out_dir=None) -> Report:
    corpus = config.corpus_text or default_phrase_text()
    model = train_model(corpus)
    layouts = {
        c.label: build_layout(
            c.variant,
            c.revision,
            config.screen,
            replace(config.params, move_speed_px_s=c.move_speed_px_s),
        )
        for c in config.conditions
    }
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        (out / "traces").mkdir(parents=True, exist_ok=True)
        (out / "events").mkdir(parents=True, exist_ok=True)

    results: list[TrialResult] = []
    total = len(config.conditions) * config.users * config.sessions * config.phrases_per_session
    done = 0
    for cond_idx, cond in enumerate(config.conditions):
        layout = layouts[cond.label]
        for user in range(config.users):
            for session in range(1, config.sessions + 1):
                eff = config.user_model.at_session(session, cond.move_speed_px_s)
                for t_idx, phrase in enumerate(sample_phrases(config, user, session)):
                    result = run_trial(
                        phrase,
                        cond,
                        eff,
                        trial_seed(config, cond_idx, user, session, t_idx),
                        layout=layout,
                        model=model,
                        session=session,
                        user_index=user,
                    )
                    results.append(result)
                    done += 1
                    if out is not None:
                        _persist_trial(out, config, result, cond, user, session, t_idx)
                    if done % 100 == 0:
                        log.info("%s: %d/%d trials", config.protocol, done, total)

    report = Report(
        protocol=config.protocol,
        seed=config.seed,
        results=results,
        meta={
            "users": config.users,
            "sessions": config.sessions,
            "phrases_per_session": config.phrases_per_session,
            "conditions": [c.label for c in config.conditions],
            "wpm_clock": "first KeySelected to last KeySelected",
        },
    )
    if out is not None:
        (out / "report.csv").write_text(report.to_csv_text(), encoding="utf-8")
        (out / "report.json").write_text(report.to_json_text(), encoding="utf-8")
    return report


def _trial_stem(cond: Condition, user: int, session: int, trial: int) -> str:
    return f"{cond.label}_u{user}_s{session:02d}_t{trial:02d}"


def _persist_trial(
    out: Path,
    config: ExperimentConfig,
    result: TrialResult,
    cond: Condition,
    user: int,
    session: int,
    trial: int,
) -> None:
    stem = _trial_stem(cond, user, session, trial)
    if config.persist_traces:
        ts, xs, ys = result.trace
        lines = [
            json.dumps({"t_ms": int(t), "x": x, "y": y})
            for t, x, y in zip(ts.tolist(), xs.tolist(), ys.tolist())
        ]
        (out / "traces" / f"{stem}.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if config.persist_events:
        (out / "events" / f"{stem}.jsonl").write_text(
            events_to_jsonl(result.events), encoding="utf-8"
        )
