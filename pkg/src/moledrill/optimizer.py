"""WOB sweeps, ROP calibration against bench data, and the E_s = sigma_c optimum."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Sequence

from scipy.stats import rankdata, spearmanr

from .drilling import (
    OperatingPoint,
    galle_rop,
    normalized_wob,
    rotary_speed_r,
    solve_operating_point,
    stall_wob,
)
from .errors import CalibrationError, DomainError
from .quantities import Config, ExperimentRecord

SWEEP_COLUMNS = ("wob_n", "torque_nm", "rpm", "r", "rop_m_hr", "e_s_pa")
CROSSING_TOL_PA = 1.0


@dataclass(frozen=True)
class SweepResult:
    grid: tuple[OperatingPoint, ...]
    crossing: float | None = None  # N
    optimum: OperatingPoint | None = None
    truncated: bool = False  # nodes past the stall load were dropped


@dataclass(frozen=True)
class CalibrationReport:
    s_cal: float
    residuals: tuple[tuple[str, float], ...]  # (label, relative ROP error)
    excluded: tuple[str, ...]


def with_s_cal(config: Config, s_cal: float) -> Config:
    return replace(config, galle=replace(config.galle, s_cal=s_cal))


def _point(wob: float, config: Config) -> OperatingPoint:
    return solve_operating_point(wob, config.soil, config.motor, config.bit, config.galle)


def wob_grid(wob_min: float, wob_max: float, step: float) -> list[float]:
    n = int(math.floor((wob_max - wob_min) / step + 1e-9)) + 1
    return [wob_min + i * step for i in range(n)]


def bisect_crossing(config: Config, lo: float, hi: float, max_iter: int = 200) -> float:
    """WOB in [lo, hi] where specific energy equals the soil strength."""
    target = config.soil.sigma_c
    f_lo = _point(lo, config).e_s - target
    if abs(f_lo) <= CROSSING_TOL_PA:
        return lo
    f_hi = _point(hi, config).e_s - target
    if abs(f_hi) <= CROSSING_TOL_PA:
        return hi
    if f_lo * f_hi > 0:
        raise DomainError(f"[{lo}, {hi}] does not bracket the crossing")
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = _point(mid, config).e_s - target
        if abs(f_mid) <= CROSSING_TOL_PA or mid in (lo, hi):
            break
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return mid


def sweep(wob_min: float, wob_max: float, step: float, config: Config) -> SweepResult:
    if not 0 < wob_min < wob_max:
        raise DomainError(f"need 0 < wob_min < wob_max, got {wob_min}, {wob_max}")
    if step <= 0:
        raise DomainError(f"step must be > 0, got {step}")
    limit = stall_wob(config.soil, config.motor, config.bit)
    nodes = wob_grid(wob_min, wob_max, step)
    feasible = [w for w in nodes if w <= limit]
    grid = tuple(_point(w, config) for w in feasible)
    truncated = len(feasible) < len(nodes)

    target = config.soil.sigma_c
    crossing = None
    for a, b in zip(grid, grid[1:]):
        if (a.e_s - target) * (b.e_s - target) <= 0:
            crossing = bisect_crossing(config, a.wob, b.wob)
            break
    optimum = _point(crossing, config) if crossing is not None else None
    return SweepResult(grid, crossing, optimum, truncated)


def _model_rop_unscaled(rec: ExperimentRecord, config: Config) -> float:
    gc = replace(config.galle, s_cal=1.0)
    r = rotary_speed_r(rec.rpm, config.soil.condition)
    return galle_rop(normalized_wob(rec.wob, config.bit, gc), r, gc)


def fit_s_cal(records: Sequence[ExperimentRecord], config: Config) -> CalibrationReport:
    """Fit the ROP scale in log space using each record's measured RPM.

    The least-squares optimum of ``sum(log(s * model / measured)**2)`` is the
    geometric mean of the measured/model ratios.
    """
    used, excluded = [], []
    for rec in records:
        model = _model_rop_unscaled(rec, config) if rec.rpm > 0 else 0.0
        if rec.outlier or rec.drilled_depth <= 0 or model <= 0:
            excluded.append(rec.label)
        else:
            used.append((rec, model))
    if len(used) < 2:
        raise CalibrationError(f"need at least 2 usable records, got {len(used)}")
    s_cal = math.exp(sum(math.log(rec.rop / model) for rec, model in used) / len(used))
    residuals = tuple((rec.label, (s_cal * model - rec.rop) / rec.rop) for rec, model in used)
    return CalibrationReport(s_cal, residuals, tuple(excluded))


def optimum_report(
    config: Config,
    records: Sequence[ExperimentRecord],
    wob_min: float = 30.0,
    wob_max: float = 140.0,
    step: float = 1.0,
) -> tuple[CalibrationReport, SweepResult]:
    report = fit_s_cal(records, config)
    return report, sweep(wob_min, wob_max, step, with_s_cal(config, report.s_cal))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    rx, ry = rankdata(x), rankdata(y)
    n = len(rx)
    if len(set(rx)) < n or len(set(ry)) < n:
        return float(spearmanr(x, y).statistic)
    # without ties the rank-difference form is exact in integer arithmetic
    d2 = sum(int(a - b) ** 2 for a, b in zip(rx, ry))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


def sweep_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for p in result.grid:
        writer.writerow([
            f"{p.wob:.3f}",
            f"{p.torque:.6f}",
            f"{p.rpm:.4f}",
            f"{p.r_value:.6f}",
            f"{p.rop:.6f}",
            f"{p.e_s:.2f}",
        ])
    return buf.getvalue()
