"""Text-entry performance measures computed from trial transcripts.

Conventions: one word is five characters; the WPM clock runs from the
first to the last key commit; the corrected error rate normalizes delete
activations by total activations so it stays within [0, 1]; the keystroke
baseline is one activation per final-text character including the word-
finalizing spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels


@dataclass(frozen=True)
class TrialRecord:
    target: str
    transcribed: str
    duration_ms: int
    key_activations: int
    del_activations: int
    arrow_activations: int

    def __post_init__(self) -> None:
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be positive")
        if self.del_activations + self.arrow_activations > self.key_activations:
            raise ValueError("DEL + arrow activations cannot exceed total activations")


@dataclass(frozen=True)
class SessionMetrics:
    wpm: float
    adj_wpm: float
    cer: float
    uer: float
    ks: float


def wpm(transcribed_len_chars: int, duration_ms: int) -> float:
    if duration_ms <= 0:
        raise ValueError("duration_ms must be positive")
    return (transcribed_len_chars / 5.0) / (duration_ms / 60000.0)


def adj_wpm(wpm_value: float, uer_value: float, a: float = 1.0) -> float:
    """Speed penalized by the uncorrected error rate: wpm * (1 - uer)^a."""
    if not 0.0 <= uer_value <= 1.0:
        raise ValueError("uer must be within [0, 1]")
    return wpm_value * (1.0 - uer_value) ** a


def msd(a: str, b: str) -> int:
    """Minimum string distance (unit-cost Levenshtein)."""
    return kernels.levenshtein(kernels.encode_text(a), kernels.encode_text(b))


def uer(target: str, transcribed: str) -> float:
    """Residual transcript errors: msd normalized by the longer string."""
    if not target:
        raise ValueError("target must be non-empty")
    return msd(target, transcribed) / max(len(target), len(transcribed))


def cer(record: TrialRecord) -> float:
    """Fraction of key activations spent on corrections (DEL presses)."""
    if record.key_activations <= 0:
        raise ValueError("record has no key activations")
    return record.del_activations / record.key_activations


def keystroke_savings(final_text_len: int, key_activations: int) -> float:
    """Fraction of letter-by-letter activations avoided via prediction.

    ``final_text_len`` counts every character of the entered text including
    spaces; error-free typing without prediction scores exactly 0.
    """
    if final_text_len <= 0:
        raise ValueError("final_text_len must be positive")
    return 1.0 - key_activations / final_text_len


def trial_metrics(record: TrialRecord) -> SessionMetrics:
    """All measures for one trial.

    The keystroke baseline adds one to the transcript length for the space
    that finalized the last word (the transcript itself is stored without
    it).
    """
    w = wpm(len(record.transcribed), record.duration_ms)
    u = uer(record.target, record.transcribed)
    return SessionMetrics(
        wpm=w,
        adj_wpm=adj_wpm(w, u),
        cer=cer(record),
        uer=u,
        ks=keystroke_savings(len(record.transcribed) + 1, record.key_activations),
    )


def aggregate_session(trials: list[TrialRecord]) -> SessionMetrics:
    """Unweighted mean of per-trial metrics."""
    if not trials:
        raise ValueError("at least one trial is required")
    per_trial = [trial_metrics(t) for t in trials]
    n = len(per_trial)
    return SessionMetrics(
        wpm=sum(m.wpm for m in per_trial) / n,
        adj_wpm=sum(m.adj_wpm for m in per_trial) / n,
        cer=sum(m.cer for m in per_trial) / n,
        uer=sum(m.uer for m in per_trial) / n,
        ks=sum(m.ks for m in per_trial) / n,
    )
