"""Six-phase excavation cycle and multi-cycle timeline simulation.

The bit and the forelimbs share the borehole face, so they run alternately:
the forelimbs may only come forward once the blades are folded, and the bit
may only drill with its blades fully out. :func:`step` enforces both guards.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

from .bit import BitMode, BitState, Direction, folded, transition_duration, travel_from_rotation
from .drilling import OperatingPoint
from .errors import InfeasibleRateError, SequenceError
from .forelimb import debris_weight
from .quantities import BitGeometry, CyclePlan, SoilSpec

__all__ = [
    "CyclePlan",
    "DigPhase",
    "TimelineEntry",
    "DigTimeline",
    "step",
    "drill_phase_duration",
    "simulate",
    "timeline_csv",
]


class DigPhase(enum.IntEnum):
    FORELIMBS_REAR_BIT_ADVANCE = 1
    EXPAND_BLADES = 2
    DRILL = 3
    FOLD_BLADES_RETRACT = 4
    FORELIMBS_FORWARD_GATHERED = 5
    SPREAD_AND_SWEEP_BACK = 6

    @property
    def successor(self) -> "DigPhase":
        return DigPhase(self.value % 6 + 1)


# phase being entered -> bit mode it requires
_GUARDS = {
    DigPhase.DRILL: BitMode.EXPANDED,
    DigPhase.FORELIMBS_FORWARD_GATHERED: BitMode.FOLDED,
    DigPhase.SPREAD_AND_SWEEP_BACK: BitMode.FOLDED,
}


@dataclass(frozen=True)
class TimelineEntry:
    cycle: int
    phase: DigPhase
    start_s: float
    duration_s: float
    depth_after_m: float
    debris_removed_n: float
    bit_mode: BitMode  # bit mode at the end of the phase


@dataclass(frozen=True)
class DigTimeline:
    entries: tuple[TimelineEntry, ...]
    elapsed_s: float
    cycles: int
    net_advance_rate_m_hr: float

    @property
    def depth_m(self) -> float:
        return self.entries[-1].depth_after_m if self.entries else 0.0

    @property
    def debris_removed_n(self) -> float:
        return math.fsum(e.debris_removed_n for e in self.entries)


def step(current: DigPhase, bit: BitState) -> DigPhase:
    """Next phase, provided ``bit`` satisfies the guard of the phase entered."""
    nxt = DigPhase(current).successor
    required = _GUARDS.get(nxt)
    if required is not None and bit.mode is not required:
        raise SequenceError(
            f"cannot enter {nxt.name}: bit is {bit.mode.value}, must be {required.value}"
        )
    return nxt


def drill_phase_duration(depth: float, rop: float) -> float:
    """Seconds to drill ``depth`` metres at ``rop`` m/hr."""
    if rop <= 0:
        raise InfeasibleRateError(f"cannot drill at rop = {rop}")
    return depth / rop * 3600.0


def _cycle_depths(plan: CyclePlan) -> list[float]:
    if plan.target_depth == 0:
        return []
    n = max(1, math.ceil(plan.target_depth / plan.depth_per_cycle - 1e-9))
    return [min(i * plan.depth_per_cycle, plan.target_depth) for i in range(1, n + 1)]


def simulate(
    plan: CyclePlan,
    op_point: OperatingPoint,
    geom: BitGeometry,
    soil: SoilSpec,
    rpm_for_transitions: float,
) -> DigTimeline:
    """Run whole digging cycles until the target depth is reached.

    The last cycle drills only what remains. ``rpm_for_transitions`` may be
    ``math.inf`` to make blade transitions instantaneous.
    """
    if op_point.rop <= 0:
        raise InfeasibleRateError(f"operating point has rop = {op_point.rop}")
    t_stroke = transition_duration(geom, rpm_for_transitions)
    stroke_turns = geom.max_travel / geom.screw_pitch
    half_sweep = plan.forelimb_sweep_time / 2.0

    entries = []
    t = 0.0
    depth = 0.0
    bit = folded(geom)
    phase = DigPhase.FORELIMBS_REAR_BIT_ADVANCE
    for cycle, depth_target in enumerate(_cycle_depths(plan), start=1):
        drilled = depth_target - depth
        for _ in range(6):
            debris = 0.0
            if phase is DigPhase.FORELIMBS_REAR_BIT_ADVANCE:
                duration = plan.bit_advance_time
            elif phase is DigPhase.EXPAND_BLADES:
                duration = t_stroke
                bit = travel_from_rotation(stroke_turns, Direction.CCW, geom, bit)
            elif phase is DigPhase.DRILL:
                duration = drill_phase_duration(drilled, op_point.rop)
                depth = depth_target
            elif phase is DigPhase.FOLD_BLADES_RETRACT:
                duration = t_stroke
                bit = travel_from_rotation(stroke_turns, Direction.CW, geom, bit)
            elif phase is DigPhase.FORELIMBS_FORWARD_GATHERED:
                duration = half_sweep
            else:
                duration = half_sweep
                debris = debris_weight(drilled, geom, soil)
            entries.append(TimelineEntry(cycle, phase, t, duration, depth, debris, bit.mode))
            t += duration
            phase = step(phase, bit)

    cycles = len(entries) // 6
    rate = plan.target_depth / t * 3600.0 if t > 0 else 0.0
    return DigTimeline(tuple(entries), t, cycles, rate)


TIMELINE_COLUMNS = (
    "cycle", "phase", "phase_name", "start_s", "duration_s",
    "depth_after_m", "debris_removed_n", "bit_mode",
)


def timeline_csv(timeline: DigTimeline) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TIMELINE_COLUMNS)
    for e in timeline.entries:
        writer.writerow([
            e.cycle, int(e.phase), e.phase.name.lower(), f"{e.start_s:.4f}",
            f"{e.duration_s:.4f}", f"{e.depth_after_m:.6f}", f"{e.debris_removed_n:.6f}",
            e.bit_mode.value,
        ])
    return buf.getvalue()
