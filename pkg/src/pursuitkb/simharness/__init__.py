"""Synthetic-gaze user model and experiment runner."""

from .phrases import load_phrase_set
from .planner import Action, plan_actions
from .runner import (
    Condition,
    ExperimentConfig,
    Report,
    TrialResult,
    exp1_config,
    exp2_config,
    run_experiment,
    run_trial,
)
from .synth import synth_gaze
from .user import SkillCurve, UserModel

__all__ = [
    "Action",
    "Condition",
    "ExperimentConfig",
    "Report",
    "SkillCurve",
    "TrialResult",
    "UserModel",
    "exp1_config",
    "exp2_config",
    "load_phrase_set",
    "plan_actions",
    "run_experiment",
    "run_trial",
    "synth_gaze",
]
