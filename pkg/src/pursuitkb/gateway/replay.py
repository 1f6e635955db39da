"""Deterministic offline re-run of recorded gaze traces."""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..engine import EngineEvent, TypingEngine
from ..layout import InterfaceLayout
from ..metrics import SessionMetrics, trial_metrics
from ..prediction import LanguageModel
from ..simharness.runner import build_trial_record
from .persist import JsonlParseError, read_jsonl


def read_trace(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parse a GazeSample JSON-lines file into (t_ms, x, y) arrays."""
    rows = read_jsonl(path)
    ts, xs, ys = [], [], []
    for i, row in enumerate(rows, start=1):
        try:
            ts.append(int(row["t_ms"]))
            xs.append(float(row["x"]))
            ys.append(float(row["y"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise JsonlParseError(path, i, f"bad gaze sample: {exc}") from exc
    return (
        np.array(ts, dtype=np.int64),
        np.array(xs, dtype=np.float64),
        np.array(ys, dtype=np.float64),
    )


def replay_trace(
    trace: tuple[np.ndarray, np.ndarray, np.ndarray],
    layout: InterfaceLayout,
    model: Optional[LanguageModel] = None,
    phrase: Optional[str] = None,
) -> tuple[list[EngineEvent], Optional[SessionMetrics]]:
    """Run a trace through a fresh engine; metrics only with a target phrase."""
    ts, xs, ys = trace
    engine = TypingEngine(layout, model)
    events = engine.ingest_array(ts, xs, ys)
    metrics = None
    if phrase is not None:
        if len(events) == 0:
            raise ValueError("cannot compute metrics for an empty event log")
        record = build_trial_record(phrase, events, engine.buffer)
        metrics = trial_metrics(record)
    return events, metrics
