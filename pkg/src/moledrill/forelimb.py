"""Quasi-static model of the debris-removal forelimbs."""

from __future__ import annotations

import math

import numpy as np

from .errors import CalibrationError, DomainError
from .quantities import G, BitGeometry, ForelimbSpec, SoilSpec

__all__ = [
    "ForelimbSpec",
    "alpha_for_width",
    "fit_k_trans",
    "max_push_force",
    "pull_forces",
    "debris_weight",
    "residual_table",
]


def alpha_for_width(d: float, spec: ForelimbSpec) -> float:
    """Forefoot opening angle (deg) for a borehole width ``d`` in mm.

    Piecewise-linear through the tabulated widths; no extrapolation.
    """
    widths = [row[0] for row in spec.table4]
    if not widths or not widths[0] <= d <= widths[-1]:
        raise DomainError(f"width {d} mm outside tabulated range")
    return float(np.interp(d, widths, [row[1] for row in spec.table4]))


def fit_k_trans(spec: ForelimbSpec) -> float:
    """Least-squares gain of ``F = 2 * f_m * k * sin(alpha)`` over the table."""
    s = np.sin(np.radians([row[1] for row in spec.table4]))
    f = np.array([row[2] for row in spec.table4], dtype=float)
    denom = 2.0 * spec.f_m * float(np.dot(s, s))
    if len(s) == 0 or denom == 0.0:
        raise CalibrationError("forelimb table is empty or all angles have zero sine")
    return float(np.dot(s, f)) / denom


def _k(spec: ForelimbSpec) -> float:
    return spec.k_trans if spec.k_trans is not None else fit_k_trans(spec)


def max_push_force(alpha: float, spec: ForelimbSpec) -> float:
    if not 0 <= alpha <= 180:
        raise DomainError(f"alpha must be within [0, 180] deg, got {alpha}")
    return 2.0 * spec.f_m * _k(spec) * math.sin(math.radians(alpha))


def pull_forces(spec: ForelimbSpec) -> tuple[float, float]:
    """(servo, linear-actuator) pull components in N, evaluated separately."""
    return spec.tau_m / spec.r_pinion_fl, 2.0 * spec.f_m


def debris_weight(depth_per_cycle: float, geom: BitGeometry, soil: SoilSpec) -> float:
    """Weight (N) of loosened soil from one expanded-bore advance."""
    if depth_per_cycle < 0:
        raise DomainError(f"depth must be >= 0, got {depth_per_cycle}")
    volume = math.pi * (geom.d_expanded / 2) ** 2 * depth_per_cycle
    return volume * soil.gamma_c * soil.bulking * G


def residual_table(spec: ForelimbSpec) -> list[dict[str, float]]:
    rows = []
    for d, alpha, f_tab in spec.table4:
        f_model = max_push_force(alpha, spec)
        rows.append({
            "d_mm": d,
            "alpha_deg": alpha,
            "f_h_max_n": f_tab,
            "f_model_n": f_model,
            "rel_error": (f_model - f_tab) / f_tab if f_tab else math.nan,
        })
    return rows
