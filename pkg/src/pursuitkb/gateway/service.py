"""Live typing session service over WebSocket.

One engine per session; sessions are isolated and share only read-only
resources (layouts are built per session, the language model once per
app). Interaction timing uses client-provided sample timestamps only.

The per-session trace log stores the calibrated samples the engine
actually consumed, so replaying a trace file offline reproduces the live
event log byte for byte.
"""

from __future__ import annotations

import uuid
from dataclasses import replace
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from ..engine import (
    CHAR_DELETED,
    KEY_SELECTED,
    NO_SELECTION,
    OutOfOrderSampleError,
    GazeSample,
    TypingEngine,
    calibrate_one_point,
)
from ..layout import build_layout, layout_to_dict
from ..metrics import msd
from ..prediction import train_model
from ..simharness.phrases import default_phrase_text
from .config import AppConfig
from .persist import JsonlWriter


def load_corpus(config: AppConfig) -> str:
    if config.corpus_path:
        return Path(config.corpus_path).read_text(encoding="utf-8")
    return default_phrase_text()


def create_app(config: Optional[AppConfig] = None) -> FastAPI:
    config = config or AppConfig()
    app = FastAPI(title="pursuitkb session service")
    app.state.config = config
    app.state.model = train_model(load_corpus(config))

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.websocket("/session")
    async def session(
        ws: WebSocket,
        variant: str = "L_WP",
        revision: str = "exp1",
        speed: Optional[float] = None,
    ) -> None:
        await ws.accept()
        cfg: AppConfig = ws.app.state.config
        params = cfg.params
        if speed is not None:
            params = replace(params, move_speed_px_s=float(speed))
        try:
            layout = build_layout(variant, revision, cfg.screen, params)
        except ValueError as exc:
            await ws.send_json({"type": "error", "session_id": None, "message": str(exc)})
            await ws.close()
            return
        run = _Session(ws, layout, ws.app.state.model, cfg)
        try:
            await run.serve()
        except WebSocketDisconnect:
            pass
        finally:
            run.close()

    return app


class _Session:
    def __init__(self, ws: WebSocket, layout, model, config: AppConfig) -> None:
        self.ws = ws
        self.layout = layout
        self.model = model
        self.config = config
        self.sid = uuid.uuid4().hex[:12]
        self.engine = TypingEngine(layout, model)
        self.dx = 0.0
        self.dy = 0.0
        self.calibrating: Optional[list[GazeSample]] = None
        self.calibration_n = config.calibration_samples
        self.phrase: Optional[str] = None
        self.commit_ts: list[int] = []
        self.del_count = 0
        self.last_t = 0
        log_dir = Path(config.log_dir)
        self.trace_log = JsonlWriter(log_dir / f"{self.sid}.trace.jsonl")
        self.event_log = JsonlWriter(log_dir / f"{self.sid}.events.jsonl")

    def close(self) -> None:
        self.trace_log.close()
        self.event_log.close()

    async def serve(self) -> None:
        await self.ws.send_json(
            {"type": "layout", "session_id": self.sid, "layout": layout_to_dict(self.layout)}
        )
        await self._send_predictions()
        while True:
            msg = await self.ws.receive_json()
            if not isinstance(msg, dict) or "type" not in msg:
                await self._error("message must be an object with a 'type' field")
                continue
            kind = msg["type"]
            if kind == "gaze":
                await self._on_gaze(msg)
            elif kind == "calibrate_start":
                n = int(msg.get("samples", self.config.calibration_samples))
                self.calibration_n = max(10, n)
                self.calibrating = []
                await self._service_event("CalibrationStarted", self.calibration_n)
            elif kind == "start_phrase":
                await self._on_start_phrase(msg)
            else:
                await self._error(f"unknown message type {kind!r}")

    async def _on_gaze(self, msg: dict) -> None:
        try:
            t, x, y = int(msg["t_ms"]), float(msg["x"]), float(msg["y"])
        except (KeyError, TypeError, ValueError):
            await self._error("gaze message needs integer t_ms and numeric x, y")
            return
        if self.calibrating is not None:
            self.calibrating.append(GazeSample(t, x, y))
            if len(self.calibrating) >= self.calibration_n:
                offset = calibrate_one_point(self.calibrating, self.layout.screen.center)
                self.dx, self.dy = offset.dx, offset.dy
                self.calibrating = None
                await self._service_event(
                    "CalibrationComplete", {"dx": self.dx, "dy": self.dy}, t
                )
            return
        cx = round(x + self.dx, 2)
        cy = round(y + self.dy, 2)
        try:
            events = self.engine.ingest_sample(GazeSample(t, cx, cy))
        except OutOfOrderSampleError:
            await self._service_event("SampleDropped", t, self.last_t)
            return
        self.last_t = t
        self.trace_log.write({"t_ms": t, "x": cx, "y": cy})
        committed = False
        for event in events:
            doc = {"t_ms": event.t_ms, "kind": event.kind, "payload": event.payload}
            self.event_log.write(doc)
            await self.ws.send_json({"type": "event", "session_id": self.sid, **doc})
            if event.kind == KEY_SELECTED:
                committed = True
                self.commit_ts.append(event.t_ms)
                if event.payload == "DEL":
                    self.del_count += 1
            elif event.kind in (NO_SELECTION, CHAR_DELETED):
                committed = committed or event.kind == CHAR_DELETED
        if committed:
            await self._send_predictions()
            await self._send_metrics()

    async def _on_start_phrase(self, msg: dict) -> None:
        text = msg.get("text")
        if not isinstance(text, str) or not text.strip():
            await self._error("start_phrase needs non-empty 'text'")
            return
        self.phrase = " ".join(text.lower().split())
        self.engine = TypingEngine(self.layout, self.model)
        self.commit_ts = []
        self.del_count = 0
        await self._service_event("PhraseStarted", self.phrase, self.last_t)
        await self._send_predictions()

    async def _send_predictions(self) -> None:
        preds = self.engine.predictions
        await self.ws.send_json(
            {
                "type": "predictions",
                "session_id": self.sid,
                "slots": preds.slot_map,
                "top_letters": list(preds.top_letters),
                "mode": preds.mode,
                "buffer": self.engine.buffer,
            }
        )

    async def _send_metrics(self) -> None:
        if self.phrase is None or len(self.commit_ts) < 2:
            return
        duration = self.commit_ts[-1] - self.commit_ts[0]
        transcribed = self.engine.buffer.rstrip(" ")
        n = len(self.commit_ts)
        doc = {
            "type": "metrics",
            "session_id": self.sid,
            "wpm": (len(transcribed) / 5.0) / (duration / 60000.0) if duration > 0 else 0.0,
            "cer": self.del_count / n,
            "uer": msd(self.phrase, transcribed) / max(len(self.phrase), len(transcribed), 1),
            "ks": 1.0 - n / len(self.engine.buffer) if self.engine.buffer else 0.0,
            "commits": n,
        }
        await self.ws.send_json(doc)

    async def _service_event(self, kind: str, payload, t: Optional[int] = None) -> None:
        await self.ws.send_json(
            {
                "type": "event",
                "session_id": self.sid,
                "t_ms": self.last_t if t is None else t,
                "kind": kind,
                "payload": payload,
            }
        )

    async def _error(self, message: str) -> None:
        await self.ws.send_json({"type": "error", "session_id": self.sid, "message": message})
