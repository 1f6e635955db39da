"""Regenerate the golden replay fixtures under tests/data/.

Run from the repository root after any intentional change to the engine,
synthesizer or default parameters, and commit the refreshed files.
"""

from __future__ import annotations

import json
from pathlib import Path

from pursuitkb.engine import events_to_jsonl
from pursuitkb.prediction import train_model
from pursuitkb.simharness.phrases import default_phrase_text
from pursuitkb.simharness.runner import Condition, run_trial
from pursuitkb.simharness.user import UserModel

GOLDEN_PHRASE = "you must make an appointment"
GOLDEN_SEED = 20240915
GOLDEN_CONDITION = Condition("L_WP", "L_WP", "exp1", 250.0)


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "tests" / "data"
    out.mkdir(parents=True, exist_ok=True)
    model = train_model(default_phrase_text())
    result = run_trial(
        GOLDEN_PHRASE, GOLDEN_CONDITION, UserModel().at_session(2, 250.0), GOLDEN_SEED, model=model
    )
    ts, xs, ys = result.trace
    trace_lines = "".join(
        json.dumps({"t_ms": int(t), "x": x, "y": y}) + "\n"
        for t, x, y in zip(ts.tolist(), xs.tolist(), ys.tolist())
    )
    (out / "golden_trace.jsonl").write_text(trace_lines, encoding="utf-8")
    (out / "golden_events.jsonl").write_text(events_to_jsonl(result.events), encoding="utf-8")
    meta = {
        "phrase": GOLDEN_PHRASE,
        "seed": GOLDEN_SEED,
        "condition": {
            "variant": GOLDEN_CONDITION.variant,
            "revision": GOLDEN_CONDITION.revision,
            "move_speed_px_s": GOLDEN_CONDITION.move_speed_px_s,
        },
        "transcribed": result.record.transcribed,
        "samples": len(ts),
        "events": len(result.events),
    }
    (out / "golden_meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(ts)} samples / {len(result.events)} events to {out}")


if __name__ == "__main__":
    main()
