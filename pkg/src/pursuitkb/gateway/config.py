"""Configuration loading (TOML or JSON) with environment overrides.

Config keys mirror the dataclass fields of ScreenConfig, LayoutParams,
UserModel and the experiment runner. ``PURSUITKB_PORT`` and
``PURSUITKB_LOG_DIR`` override the service port and log directory.
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - depends on interpreter version
    import tomli as tomllib

from ..layout import LayoutParams, ScreenConfig
from ..simharness.runner import ExperimentConfig, exp1_config, exp2_config
from ..simharness.user import SkillCurve, UserModel

ENV_PORT = "PURSUITKB_PORT"
ENV_LOG_DIR = "PURSUITKB_LOG_DIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AppConfig:
    screen: ScreenConfig = ScreenConfig()
    params: LayoutParams = LayoutParams()
    user_model: UserModel = UserModel()
    corpus_path: Optional[str] = None
    phrase_path: Optional[str] = None
    log_dir: str = "logs"
    port: int = 8765
    calibration_samples: int = 60
    experiment: dict = field(default_factory=dict)


def _build(cls, section: dict, where: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(section) - names
    if unknown:
        raise ConfigError(f"unknown keys in [{where}]: {sorted(unknown)}")
    return cls(**section)


def _parse(doc: dict) -> AppConfig:
    screen = _build(ScreenConfig, _tupled(doc.get("screen", {}), "center"), "screen")
    params = _build(LayoutParams, doc.get("layout", {}), "layout")
    user_section = dict(doc.get("user", {}))
    if "skill_floor" in user_section or "skill_tau" in user_section:
        user_section["skill_curve"] = SkillCurve(
            floor=user_section.pop("skill_floor", SkillCurve().floor),
            tau_sessions=user_section.pop("skill_tau", SkillCurve().tau_sessions),
        )
    user = _build(UserModel, user_section, "user")
    service = doc.get("service", {})
    return AppConfig(
        screen=screen,
        params=params,
        user_model=user,
        corpus_path=doc.get("corpus_path"),
        phrase_path=doc.get("phrase_path"),
        log_dir=os.environ.get(ENV_LOG_DIR, service.get("log_dir", "logs")),
        port=int(os.environ.get(ENV_PORT, service.get("port", 8765))),
        calibration_samples=int(service.get("calibration_samples", 60)),
        experiment=dict(doc.get("experiment", {})),
    )


def _tupled(section: dict, key: str) -> dict:
    section = dict(section)
    if key in section:
        section[key] = tuple(section[key])
    return section


def load_config(path: Optional[str] = None) -> AppConfig:
    if path is None:
        return _parse({})
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    if p.suffix == ".json":
        doc = json.loads(p.read_text(encoding="utf-8"))
    else:
        with open(p, "rb") as fh:
            doc = tomllib.load(fh)
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a table/object")
    return _parse(doc)


def experiment_from_config(
    app: AppConfig, protocol: Optional[str], seed: Optional[int], **extra: Any
) -> ExperimentConfig:
    """Experiment configuration with file and CLI overrides applied."""
    section = dict(app.experiment)
    protocol = protocol or section.pop("protocol", "exp1")
    overrides: dict[str, Any] = {
        "screen": app.screen,
        "params": app.params,
        "user_model": app.user_model,
    }
    for key in ("users", "sessions", "phrases_per_session", "persist_traces", "persist_events"):
        if key in section:
            overrides[key] = section[key]
    if app.phrase_path:
        from ..simharness.phrases import load_phrase_set

        overrides["phrase_set"] = tuple(load_phrase_set(app.phrase_path))
    if app.corpus_path:
        overrides["corpus_text"] = Path(app.corpus_path).read_text(encoding="utf-8")
    overrides.update(extra)
    if seed is None:
        seed = int(section.pop("seed", 0))
    if protocol == "exp1":
        return exp1_config(seed=seed, **overrides)
    if protocol == "exp2":
        return exp2_config(seed=seed, **overrides)
    raise ConfigError(f"unknown protocol {protocol!r}")
