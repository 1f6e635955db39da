"""Synthetic typist model.

Gaze noise follows the accuracy/precision split of remote eye trackers: a
tracking offset that is constant within one fixation or pursuit episode
(drawn fresh per episode, sigma ``fixation_noise_sigma_deg``) plus a much
smaller independent per-sample jitter. Pursuit selection is therefore
robust to large offsets - it keys on relative movement - while absolute-
position stages (sector selection) feel the offset, as real users do.

Learning is a per-session multiplier that shrinks latencies and slip
probability toward a floor and raises prediction adoption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class SkillCurve:
    """Session multiplier: 1.0 in session 1, decaying toward ``floor``."""

    floor: float = 0.25
    tau_sessions: float = 2.0

    def __call__(self, session: int) -> float:
        if session < 1:
            raise ValueError("sessions are 1-based")
        return self.floor + (1.0 - self.floor) * math.exp(-(session - 1) / self.tau_sessions)


@dataclass(frozen=True)
class UserModel:
    # Tracking noise (degrees of visual angle).
    fixation_noise_sigma_deg: float = 0.5
    sample_jitter_ratio: float = 0.05
    # Time to find the next target on the ring (ms), normal draw.
    locate_latency_ms: float = 1500.0
    locate_latency_spread_ms: float = 500.0
    # Smooth-pursuit behaviour.
    pursuit_latency_ms: float = 120.0
    pursuit_gain: float = 0.9
    # Extra time spent checking the prediction slots (word-prediction UI).
    prediction_scan_ms: float = 500.0
    # Chance of adopting a visible correct prediction (session-1 value;
    # rises with practice as attention frees up for the slots).
    prediction_adoption_prob: float = 0.45
    # Chance of pursuing a fan neighbour instead of the intended key.
    slip_prob: float = 0.08
    # Faster key movement is harder to track at first: slip scales with
    # (speed / 250)^exponent.
    speed_slip_exponent: float = 2.0
    skill_curve: SkillCurve = SkillCurve()
    rng_seed: int = 0

    def __post_init__(self) -> None:
        for name in ("prediction_adoption_prob", "slip_prob", "pursuit_gain"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be within [0, 1]")
        if self.pursuit_gain == 0.0:
            raise ValueError("pursuit_gain must be positive")
        if self.fixation_noise_sigma_deg < 0 or self.sample_jitter_ratio < 0:
            raise ValueError("noise parameters must be >= 0")

    def at_session(self, session: int, move_speed_px_s: float = 250.0) -> "UserModel":
        """Model with session learning and speed difficulty folded in.

        The returned model has a flat skill curve so downstream draws use
        the adjusted values directly.
        """
        m = self.skill_curve(session)
        speed_factor = (move_speed_px_s / 250.0) ** self.speed_slip_exponent
        return replace(
            self,
            locate_latency_ms=self.locate_latency_ms * m,
            locate_latency_spread_ms=self.locate_latency_spread_ms * m,
            prediction_scan_ms=self.prediction_scan_ms * m,
            slip_prob=min(1.0, self.slip_prob * m * speed_factor),
            prediction_adoption_prob=self.prediction_adoption_prob**m,
            skill_curve=SkillCurve(floor=1.0, tau_sessions=1.0),
        )

    def noise_sigma_px(self, px_per_degree: float) -> float:
        return self.fixation_noise_sigma_deg * px_per_degree

    def jitter_sigma_px(self, px_per_degree: float) -> float:
        return self.fixation_noise_sigma_deg * self.sample_jitter_ratio * px_per_degree
