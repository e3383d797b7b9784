"""Drilling chain: weight on bit -> torque -> RPM -> ROP -> specific energy.

All functions are pure. RPM is in rev/min and ROP in m/hr at this
boundary; :func:`specific_energy` converts to per-second units internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InfeasibleRateError, StallError
from .quantities import BitGeometry, Condition, GalleConstants, MotorSpec, SoilSpec, contact_area

# (rpm exponent, linear coefficient) of the rotary-speed function
_R_BRANCHES = {Condition.SOFT: (0.428, 0.2), Condition.HARD: (0.750, 0.5)}


@dataclass(frozen=True)
class OperatingPoint:
    wob: float  # N
    torque: float  # N*m
    rpm: float  # rev/min
    r_value: float
    wbar: float
    rop: float  # m/hr
    e_s: float  # Pa


def torque_from_wob(wob: float, soil: SoilSpec, geom: BitGeometry) -> float:
    """Bit torque from friction over the expanded diameter: mu * D * W / 3."""
    if wob < 0:
        raise DomainError(f"wob must be >= 0, got {wob}")
    return soil.mu * geom.d_expanded * wob / 3.0


def stall_torque_at_bit(motor: MotorSpec) -> float:
    return motor.eta * motor.tau_s


def stall_wob(soil: SoilSpec, motor: MotorSpec, geom: BitGeometry) -> float:
    """Smallest WOB at which the motor stalls."""
    return 3.0 * stall_torque_at_bit(motor) / (soil.mu * geom.d_expanded)


def motor_rpm(torque: float, motor: MotorSpec) -> float:
    """Speed on the linear torque-speed curve, with drivetrain losses."""
    if torque < 0:
        raise DomainError(f"torque must be >= 0, got {torque}")
    if torque > stall_torque_at_bit(motor):
        raise StallError(
            f"torque {torque:.4f} N*m exceeds deliverable {stall_torque_at_bit(motor):.4f} N*m"
        )
    return (motor.tau_s - torque / motor.eta) * motor.omega_n / motor.tau_s


def rotary_speed_r(rpm: float, condition: Condition = Condition.SOFT) -> float:
    """Galle-Woods rotary-speed function.

    The ``exp(-100 / rpm**2)`` factor vanishes as rpm -> 0, so r(0) is taken
    as its limit, 0.
    """
    if rpm < 0:
        raise DomainError(f"rpm must be >= 0, got {rpm}")
    if rpm == 0:
        return 0.0
    exponent, coef = _R_BRANCHES[Condition(condition)]
    damp = math.exp(-100.0 / rpm**2)
    return damp * rpm**exponent + coef * rpm * (1.0 - damp)


def normalized_wob(wob: float, geom: BitGeometry, gc: GalleConstants) -> float:
    if wob < 0:
        raise DomainError(f"wob must be >= 0, got {wob}")
    return gc.wbar_scale * wob / (geom.d_expanded * gc.d_unit.per_meter)


def galle_rop(wbar: float, r: float, gc: GalleConstants) -> float:
    """ROP in m/hr; the formation factor is estimated as wbar**0.6."""
    if wbar < 0 or r < 0:
        raise DomainError(f"wbar and r must be >= 0, got {wbar}, {r}")
    formation = wbar**0.6
    return gc.s_cal * formation * wbar**gc.k_exp * r / gc.a**gc.p_exp


def specific_energy(
    wob: float, rpm: float, torque: float, rop: float, geom: BitGeometry
) -> float:
    """Teale specific energy in Pa (thrust term plus rotary term)."""
    if rop <= 0:
        raise InfeasibleRateError(f"specific energy undefined at rop = {rop}")
    area = contact_area(geom)
    rev_per_s = rpm / 60.0
    rop_m_s = rop / 3600.0
    return wob / area + 2.0 * math.pi * rev_per_s * torque / (area * rop_m_s)


def solve_operating_point(
    wob: float,
    soil: SoilSpec,
    motor: MotorSpec,
    geom: BitGeometry,
    gc: GalleConstants,
) -> OperatingPoint:
    torque = torque_from_wob(wob, soil, geom)
    rpm = motor_rpm(torque, motor)
    r = rotary_speed_r(rpm, soil.condition)
    wbar = normalized_wob(wob, geom, gc)
    rop = galle_rop(wbar, r, gc)
    e_s = specific_energy(wob, rpm, torque, rop, geom)
    return OperatingPoint(wob, torque, rpm, r, wbar, rop, e_s)
