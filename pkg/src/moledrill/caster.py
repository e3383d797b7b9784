"""Torque balance of the spring-loaded caster wheels in the bit's middle part.

A wheel set is held at its mounting angle by a spring. When the screw runs
out of thread, the wheels roll on the outer case at a slip angle; the
resulting cornering force acts through the pneumatic trail and, if it beats
the spring's correcting torque, swings the wheels flat so the bit can spin
continuously.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quantities import CasterSpec

__all__ = ["CasterSpec", "CasterBalance", "spring_force", "balance", "rise_curve"]

_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class CasterBalance:
    f_sp: float  # N
    p_t: float  # mm
    t_sat: float  # N*m
    t_ss: float  # N*m
    sigma_t: float  # N*m
    aligns: bool
    boundary: bool = False


def spring_force(spec: CasterSpec) -> float:
    return spec.k_spring * spec.delta_x


def balance(spec: CasterSpec) -> CasterBalance:
    """Net pivot torque; negative means the wheels rotate to 0 deg."""
    f_sp = spring_force(spec)
    p_t = spec.l_cp / 4.0  # pneumatic trail, quarter of the patch
    t_sat = 2.0 * spec.f_c * p_t / 1000.0
    t_ss = 2.0 * f_sp * spec.a_m / 1000.0
    sigma_t = t_ss - t_sat
    boundary = abs(sigma_t) <= _TIE_RTOL * max(t_ss, t_sat)
    return CasterBalance(
        f_sp=f_sp,
        p_t=p_t,
        t_sat=t_sat,
        t_ss=t_ss,
        sigma_t=sigma_t,
        aligns=sigma_t < 0 and not boundary,
        boundary=boundary,
    )


def rise_curve(spec: CasterSpec, t_end: float = 0.5, dt: float = 0.01, tau: float = 0.05):
    """Illustrative first-order build-up of cornering force after wall contact.

    Not a validated dynamic model; it exists to give plots a shape that
    saturates at ``spec.f_c``. Yields ``(t_s, f_c_n)`` pairs.
    """
    n = int(round(t_end / dt))
    for i in range(n + 1):
        t = i * dt
        yield t, spec.f_c * (1.0 - math.exp(-t / tau))
