"""Command-line front end, live session service, replay and persistence."""

from .config import AppConfig, load_config
from .replay import read_trace, replay_trace

__all__ = ["AppConfig", "load_config", "read_trace", "replay_trace"]
