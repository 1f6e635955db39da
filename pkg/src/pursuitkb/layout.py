"""Circular keyboard geometry for the two-stage pursuit-typing interface.

A layout is a ring of key clusters around a central idle circle. Letters
run alphabetically clockwise starting from the upper-left cluster; the two
function keys SP and DEL share the last cluster with Y and Z. The word-
prediction variant adds an arrow cluster in the bottom sector whose three
keys travel up, left and right (never down, so reading the typed text at
the bottom of the screen cannot trigger a selection).

Angles use the mathematical convention: 0 deg points right (+x), 90 deg
points up on screen (screen-y grows downward, so the y delta is negated).
Sectors are half-open ``[start, end)`` intervals.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

VARIANTS = ("NoP", "LP", "L_WP")
REVISIONS = ("exp1", "exp2")

LETTER_KEYS = tuple("ABCDEFGHIJKLMNOPQRSTUVWXYZ") + ("SP", "DEL")
ARROW_KEYS = ("ARROW_UP", "ARROW_LEFT", "ARROW_RIGHT")
ARROW_TRAJECTORY_DEG = {"ARROW_UP": 90.0, "ARROW_LEFT": 180.0, "ARROW_RIGHT": 0.0}
# Clockwise home-position order inside the bottom sector, so the right
# arrow sits on the screen-right side of the fan and the left arrow on the
# screen-left side.
_ARROW_FAN_ORDER = ("ARROW_RIGHT", "ARROW_UP", "ARROW_LEFT")

# The alphabet starts in the upper-left sector and advances clockwise.
FIRST_BISECTOR_DEG = 135.0
# Clockwise slot (0-based) of the arrow cluster in the 8-cluster variant:
# bisector 135 - 5 * 45 = -90 -> 270 deg, the bottom sector.
ARROW_CLUSTER_SLOT = 5

SAMPLE_RATE_HZ = 60.0


class LayoutError(ValueError):
    """Inconsistent layout construction (duplicate/missing keys, bad params)."""


@dataclass(frozen=True)
class ScreenConfig:
    """Target display and its visual-angle scale."""

    width_px: int = 1920
    height_px: int = 1200
    center: tuple[float, float] = (960.0, 600.0)
    px_per_degree: float = 39.0

    def __post_init__(self) -> None:
        if self.width_px <= 0 or self.height_px <= 0:
            raise LayoutError("screen dimensions must be positive")
        cx, cy = self.center
        if not (0 <= cx <= self.width_px and 0 <= cy <= self.height_px):
            raise LayoutError("screen center must lie inside the screen")
        if self.px_per_degree <= 0:
            raise LayoutError("px_per_degree must be positive")


@dataclass(frozen=True)
class LayoutParams:
    """Geometry and timing constants for one interface condition."""

    idle_radius_px: float = 160.0
    key_ring_radius_px: float = 280.0
    move_distance_px: float = 94.0
    lp_move_distance_px: float = 68.0
    arrow_distance_px: float = 141.0
    move_speed_px_s: float = 250.0
    search_threshold_ms: float = 600.0
    arrow_extra_samples: int = 15

    def __post_init__(self) -> None:
        if not 0 < self.idle_radius_px < self.key_ring_radius_px:
            raise LayoutError("idle circle must be smaller than the key ring")
        if not 0 < self.lp_move_distance_px < self.move_distance_px < self.arrow_distance_px:
            raise LayoutError("travel distances must satisfy shortened < default < arrow")
        if self.move_speed_px_s <= 0:
            raise LayoutError("move_speed_px_s must be positive")
        if self.search_threshold_ms <= 0:
            raise LayoutError("search_threshold_ms must be positive")
        if self.arrow_extra_samples < 0:
            raise LayoutError("arrow_extra_samples must be >= 0")

    @property
    def arrow_extension_ms(self) -> float:
        """Extra pursuit-window time granted to the arrow cluster."""
        return self.arrow_extra_samples * 1000.0 / SAMPLE_RATE_HZ


@dataclass(frozen=True)
class Key:
    id: str
    cluster_index: int
    home_position: tuple[float, float]
    trajectory_angle_deg: float
    travel_px: float

    @property
    def is_arrow(self) -> bool:
        return self.id in ARROW_KEYS

    @property
    def letter(self) -> Optional[str]:
        """Lowercase letter for A-Z keys, None for SP/DEL/arrows."""
        return self.id.lower() if len(self.id) == 1 else None


@dataclass(frozen=True)
class Cluster:
    index: int
    sector_start_deg: float
    sector_width_deg: float
    keys: tuple[Key, ...]

    @property
    def sector_end_deg(self) -> float:
        return self.sector_start_deg + self.sector_width_deg

    def contains_angle(self, angle_deg: float) -> bool:
        return (angle_deg - self.sector_start_deg) % 360.0 < self.sector_width_deg

    @property
    def is_arrow_cluster(self) -> bool:
        return any(k.is_arrow for k in self.keys)


@dataclass(frozen=True)
class InterfaceLayout:
    variant: str
    revision: str
    screen: ScreenConfig
    params: LayoutParams
    clusters: tuple[Cluster, ...]
    # Sorted sector starts plus the matching cluster indices, precomputed
    # for O(log n) lookup; excluded from equality (derived data).
    sector_starts: np.ndarray = field(repr=False, compare=False, default=None)
    sector_order: tuple[int, ...] = field(repr=False, compare=False, default=None)

    @property
    def keys_by_id(self) -> dict[str, Key]:
        return {k.id: k for cluster in self.clusters for k in cluster.keys}

    @property
    def arrow_cluster_index(self) -> Optional[int]:
        for cluster in self.clusters:
            if cluster.is_arrow_cluster:
                return cluster.index
        return None


def unit_vector(angle_deg: float) -> tuple[float, float]:
    """Screen-space unit vector for a mathematical angle (y grows downward)."""
    rad = math.radians(angle_deg)
    return (math.cos(rad), -math.sin(rad))


def _ring_point(screen: ScreenConfig, radius: float, angle_deg: float) -> tuple[float, float]:
    ux, uy = unit_vector(angle_deg)
    return (screen.center[0] + radius * ux, screen.center[1] + radius * uy)


def _key_sequence(revision: str) -> list[str]:
    seq = list(LETTER_KEYS)
    if revision == "exp2":
        # Revised layout: X and DEL trade places so SP and DEL no longer
        # sit in the same cluster.
        ix, idel = seq.index("X"), seq.index("DEL")
        seq[ix], seq[idel] = seq[idel], seq[ix]
    return seq


def build_layout(
    variant: str,
    revision: str = "exp1",
    screen: Optional[ScreenConfig] = None,
    params: Optional[LayoutParams] = None,
) -> InterfaceLayout:
    """Construct the cluster ring for one interface variant.

    Letter keys move radially outward (trajectory equals their angular home
    position); the arrow cluster's keys keep fanned home positions in the
    bottom sector but travel along fixed up/left/right directions.
    """
    if variant not in VARIANTS:
        raise LayoutError(f"unknown variant {variant!r}")
    if revision not in REVISIONS:
        raise LayoutError(f"unknown revision {revision!r}")
    screen = screen or ScreenConfig()
    params = params or LayoutParams()

    groups: list[tuple[str, ...]] = []
    seq = _key_sequence(revision)
    for i in range(0, len(seq), 4):
        groups.append(tuple(seq[i : i + 4]))
    if variant == "L_WP":
        groups.insert(ARROW_CLUSTER_SLOT, _ARROW_FAN_ORDER)

    width = 360.0 / len(groups)
    clusters: list[Cluster] = []
    for index, group in enumerate(groups):
        bisector = (FIRST_BISECTOR_DEG - index * width) % 360.0
        start = (bisector - width / 2.0) % 360.0
        keys = []
        n = len(group)
        for slot, key_id in enumerate(group):
            # Clockwise fan across the sector, centered on the bisector,
            # with the maximal equal separation width / n.
            slot_angle = (bisector + width / 2.0 - width * (slot + 0.5) / n) % 360.0
            if key_id in ARROW_KEYS:
                trajectory = ARROW_TRAJECTORY_DEG[key_id]
                travel = params.arrow_distance_px
            else:
                trajectory = slot_angle
                travel = params.move_distance_px
            keys.append(
                Key(
                    id=key_id,
                    cluster_index=index,
                    home_position=_ring_point(screen, params.key_ring_radius_px, slot_angle),
                    trajectory_angle_deg=trajectory,
                    travel_px=travel,
                )
            )
        clusters.append(
            Cluster(index=index, sector_start_deg=start, sector_width_deg=width, keys=tuple(keys))
        )

    _validate(variant, clusters)
    starts = sorted((c.sector_start_deg, c.index) for c in clusters)
    return InterfaceLayout(
        variant=variant,
        revision=revision,
        screen=screen,
        params=params,
        clusters=tuple(clusters),
        sector_starts=np.array([s for s, _ in starts], dtype=np.float64),
        sector_order=tuple(i for _, i in starts),
    )


def _validate(variant: str, clusters: list[Cluster]) -> None:
    ids = [k.id for c in clusters for k in c.keys]
    letters = [i for i in ids if len(i) == 1]
    if sorted(letters) != sorted("ABCDEFGHIJKLMNOPQRSTUVWXYZ"):
        raise LayoutError("layout must contain every letter A-Z exactly once")
    if len(ids) != len(set(ids)):
        raise LayoutError("duplicate key ids in layout")
    expected = 8 if variant == "L_WP" else 7
    if len(clusters) != expected:
        raise LayoutError(f"{variant} must have {expected} clusters, got {len(clusters)}")


def sector_of(layout: InterfaceLayout, angle_deg: float) -> int:
    """Cluster index whose half-open sector contains the angle."""
    a = angle_deg % 360.0
    pos = bisect_right(layout.sector_starts, a) - 1
    if pos < 0:
        pos = len(layout.sector_order) - 1
    return layout.sector_order[pos]


def key_position_at(
    key: Key,
    elapsed_ms: float,
    params: LayoutParams,
    travel_px: Optional[float] = None,
) -> tuple[float, float]:
    """Key position ``elapsed_ms`` after movement onset; saturates at full travel."""
    if elapsed_ms < 0:
        raise ValueError("elapsed_ms must be >= 0")
    travel = key.travel_px if travel_px is None else travel_px
    dist = min(params.move_speed_px_s * elapsed_ms / 1000.0, travel)
    ux, uy = unit_vector(key.trajectory_angle_deg)
    return (key.home_position[0] + dist * ux, key.home_position[1] + dist * uy)


def min_trajectory_separation_deg(cluster: Cluster) -> float:
    """Smallest pairwise circular distance between trajectory angles."""
    angles = [k.trajectory_angle_deg for k in cluster.keys]
    best = 360.0
    for i in range(len(angles)):
        for j in range(i + 1, len(angles)):
            d = abs(angles[i] - angles[j]) % 360.0
            best = min(best, min(d, 360.0 - d))
    return best


def layout_to_dict(layout: InterfaceLayout) -> dict:
    """JSON-ready snapshot consumed by UIs and logs."""
    return {
        "variant": layout.variant,
        "revision": layout.revision,
        "screen": {
            "width_px": layout.screen.width_px,
            "height_px": layout.screen.height_px,
            "center": list(layout.screen.center),
            "px_per_degree": layout.screen.px_per_degree,
        },
        "params": {
            "idle_radius_px": layout.params.idle_radius_px,
            "key_ring_radius_px": layout.params.key_ring_radius_px,
            "move_distance_px": layout.params.move_distance_px,
            "lp_move_distance_px": layout.params.lp_move_distance_px,
            "arrow_distance_px": layout.params.arrow_distance_px,
            "move_speed_px_s": layout.params.move_speed_px_s,
            "search_threshold_ms": layout.params.search_threshold_ms,
            "arrow_extra_samples": layout.params.arrow_extra_samples,
        },
        "clusters": [
            {
                "index": c.index,
                "sector_start_deg": c.sector_start_deg,
                "sector_width_deg": c.sector_width_deg,
                "keys": [
                    {
                        "id": k.id,
                        "cluster_index": k.cluster_index,
                        "home_position": list(k.home_position),
                        "trajectory_angle_deg": k.trajectory_angle_deg,
                        "travel_px": k.travel_px,
                    }
                    for k in c.keys
                ],
            }
            for c in layout.clusters
        ],
    }


def layout_to_json(layout: InterfaceLayout) -> str:
    return json.dumps(layout_to_dict(layout), sort_keys=True)
