"""Two-stage smooth-pursuit eye typing: engine, prediction, metrics, simulation."""

from .engine import EngineEvent, GazeSample, OffsetCorrection, TypingEngine
from .layout import InterfaceLayout, LayoutParams, ScreenConfig, build_layout
from .metrics import SessionMetrics, TrialRecord
from .prediction import LanguageModel, PredictionSet, train_model

__version__ = "0.1.0"

__all__ = [
    "EngineEvent",
    "GazeSample",
    "InterfaceLayout",
    "LanguageModel",
    "LayoutParams",
    "OffsetCorrection",
    "PredictionSet",
    "ScreenConfig",
    "SessionMetrics",
    "TrialRecord",
    "TypingEngine",
    "build_layout",
    "train_model",
    "__version__",
]
