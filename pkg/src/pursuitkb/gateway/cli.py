"""Command-line entry point: simulate, replay, serve, report."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..engine import events_to_jsonl
from ..layout import build_layout
from ..prediction import train_model
from ..simharness.runner import run_experiment
from .config import experiment_from_config, load_config
from .replay import read_trace, replay_trace
from .service import create_app, load_corpus


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pursuitkb")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a synthetic-user experiment")
    p_sim.add_argument("--config", help="TOML/JSON config file")
    p_sim.add_argument("--protocol", choices=["exp1", "exp2"])
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--users", type=int)

    p_rep = sub.add_parser("replay", help="re-run a recorded gaze trace")
    p_rep.add_argument("--trace", required=True)
    p_rep.add_argument("--variant", default="L_WP", choices=["NoP", "LP", "L_WP", "L+WP"])
    p_rep.add_argument("--revision", default="exp1", choices=["exp1", "exp2"])
    p_rep.add_argument("--speed", type=float, help="movement speed px/s")
    p_rep.add_argument("--phrase", help="target phrase for metrics")
    p_rep.add_argument("--config", help="TOML/JSON config file")
    p_rep.add_argument("--out", help="write the event log here instead of stdout")

    p_srv = sub.add_parser("serve", help="start the live session service")
    p_srv.add_argument("--config", help="TOML/JSON config file")
    p_srv.add_argument("--port", type=int)
    p_srv.add_argument("--host", default="127.0.0.1")

    p_report = sub.add_parser("report", help="re-emit a stored experiment report")
    p_report.add_argument("--in", dest="in_dir", required=True)
    p_report.add_argument("--format", choices=["csv", "json"], default="csv")

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "replay":
        return _cmd_replay(args)
    if args.command == "serve":
        return _cmd_serve(args)
    return _cmd_report(args)


def _cmd_simulate(args) -> int:
    app_cfg = load_config(args.config)
    extra = {}
    if args.users is not None:
        extra["users"] = args.users
    config = experiment_from_config(app_cfg, args.protocol, args.seed, **extra)
    report = run_experiment(config, out_dir=args.out)
    print(f"wrote {len(report.results)} trials to {args.out}")
    for cond in report.meta["conditions"]:
        last = config.sessions
        print(f"  {cond}: session-{last} mean WPM = {report.session_mean(cond, last, 'wpm'):.2f}")
    return 0


def _cmd_replay(args) -> int:
    app_cfg = load_config(args.config)
    variant = "L_WP" if args.variant == "L+WP" else args.variant
    params = app_cfg.params
    if args.speed is not None:
        from dataclasses import replace

        params = replace(params, move_speed_px_s=args.speed)
    layout = build_layout(variant, args.revision, app_cfg.screen, params)
    model = train_model(load_corpus(app_cfg))
    trace = read_trace(args.trace)
    events, metrics = replay_trace(trace, layout, model, phrase=args.phrase)
    text = events_to_jsonl(events)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if metrics is not None:
        print(
            json.dumps(
                {
                    "wpm": metrics.wpm,
                    "adj_wpm": metrics.adj_wpm,
                    "cer": metrics.cer,
                    "uer": metrics.uer,
                    "ks": metrics.ks,
                },
                sort_keys=True,
            )
        )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    app_cfg = load_config(args.config)
    port = args.port if args.port is not None else app_cfg.port
    uvicorn.run(create_app(app_cfg), host=args.host, port=port, log_level="info")
    return 0


def _cmd_report(args) -> int:
    path = Path(args.in_dir) / "report.csv"
    if not path.exists():
        print(f"no report.csv under {args.in_dir}", file=sys.stderr)
        return 1
    text = path.read_text(encoding="utf-8")
    if args.format == "csv":
        sys.stdout.write(text)
        return 0
    rows = list(csv.DictReader(text.splitlines()))
    summary: dict = {}
    for row in rows:
        cell = summary.setdefault(row["variant"], {}).setdefault(row["session"], {})
        for metric in ("wpm", "adj_wpm", "cer", "uer", "ks"):
            cell.setdefault(metric, []).append(float(row[metric]))
    doc = {
        cond: {
            ses: {
                metric: {
                    "mean": float(np.mean(vals)),
                    "sd": float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0,
                    "n": len(vals),
                }
                for metric, vals in cell.items()
            }
            for ses, cell in sessions.items()
        }
        for cond, sessions in summary.items()
    }
    print(json.dumps(doc, sort_keys=True, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
