"""Kinematics of the screw-driven expandable bit.

Counter-clockwise rotation backs the middle part out along the screw; the
racks on it turn the blade pinions outward. Clockwise rotation reverses this.
Beyond the end of the thread the caster wheels take over, which here shows
up only as a ``saturated`` flag.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .quantities import BitGeometry, expansion_ratio

__all__ = [
    "BitMode",
    "BitState",
    "Direction",
    "bit_state",
    "folded",
    "expanded",
    "travel_from_rotation",
    "expansion_ratio",
    "transition_duration",
]

HALF_PI = math.pi / 2


class BitMode(str, enum.Enum):
    FOLDED = "folded"
    TRANSITIONING = "transitioning"
    EXPANDED = "expanded"


class Direction(str, enum.Enum):
    CW = "cw"  # folds
    CCW = "ccw"  # expands


@dataclass(frozen=True)
class BitState:
    travel: float  # m
    blade_angle: float  # rad
    diameter: float  # m
    mode: BitMode
    saturated: bool = False


def bit_state(travel: float, geom: BitGeometry, saturated: bool = False) -> BitState:
    travel = min(max(travel, 0.0), geom.max_travel)
    angle = min(travel / geom.pinion_radius, HALF_PI)
    if math.isclose(angle, HALF_PI, rel_tol=1e-12):
        angle = HALF_PI
    if angle == 0.0:
        mode, diameter = BitMode.FOLDED, geom.d_folded
    elif angle == HALF_PI:
        mode, diameter = BitMode.EXPANDED, geom.d_expanded
    else:
        mode = BitMode.TRANSITIONING
        diameter = geom.d_folded + (geom.d_expanded - geom.d_folded) * math.sin(angle)
    return BitState(travel, angle, diameter, mode, saturated)


def folded(geom: BitGeometry) -> BitState:
    return bit_state(0.0, geom)


def expanded(geom: BitGeometry) -> BitState:
    return bit_state(geom.max_travel, geom)


def travel_from_rotation(
    turns: float, direction: Direction, geom: BitGeometry, state: BitState
) -> BitState:
    if turns < 0:
        raise DomainError(f"turns must be >= 0, got {turns}")
    sign = 1.0 if Direction(direction) is Direction.CCW else -1.0
    target = state.travel + sign * geom.screw_pitch * turns
    slack = 1e-12 * geom.max_travel  # round-off when landing exactly on a stop
    saturated = target < -slack or target > geom.max_travel + slack
    return bit_state(target, geom, saturated=saturated)


def transition_duration(geom: BitGeometry, rpm: float) -> float:
    """Seconds for a full expand or fold stroke at constant speed."""
    if not rpm > 0:
        raise DomainError(f"rpm must be > 0, got {rpm}")
    return geom.max_travel / geom.screw_pitch / rpm * 60.0
