"""Model-vs-bench comparison used by ``moledrill validate``."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Sequence

from .drilling import galle_rop, normalized_wob, rotary_speed_r, solve_operating_point
from .errors import StallError
from .optimizer import fit_s_cal, spearman, with_s_cal
from .quantities import AreaConvention, Config, ExperimentRecord

ROW_COLUMNS = (
    "label", "wob", "measured_rop", "model_rop", "rel_error", "measured_e_s_reported",
    "model_e_s_fullcircle", "model_e_s_annulus", "excluded",
)


@dataclass(frozen=True)
class ValidationRow:
    label: str
    wob: float  # N
    measured_rop: float  # m/hr
    model_rop: float  # m/hr, calibrated, at the measured RPM
    rel_error: float
    measured_e_s_reported: float  # Pa
    model_e_s_fullcircle: float  # Pa, solved chain at this WOB
    model_e_s_annulus: float
    excluded: bool


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[ValidationRow, ...]
    s_cal: float
    max_rel_error_included: float
    spearman_e_s: float

    def within(self, tolerance: float) -> bool:
        return self.max_rel_error_included <= tolerance


def _solved_e_s(wob: float, config: Config, convention: AreaConvention) -> float:
    geom = replace(config.bit, area_convention=convention)
    try:
        return solve_operating_point(wob, config.soil, config.motor, geom, config.galle).e_s
    except StallError:
        return math.nan


def build_report(config: Config, records: Sequence[ExperimentRecord]) -> ValidationReport:
    calib = fit_s_cal(records, config)
    cfg = with_s_cal(config, calib.s_cal)
    excluded = set(calib.excluded)
    rows = []
    for rec in records:
        r = rotary_speed_r(rec.rpm, cfg.soil.condition)
        model_rop = galle_rop(normalized_wob(rec.wob, cfg.bit, cfg.galle), r, cfg.galle)
        rel = (model_rop - rec.rop) / rec.rop if rec.rop > 0 else math.inf
        rows.append(ValidationRow(
            label=rec.label,
            wob=rec.wob,
            measured_rop=rec.rop,
            model_rop=model_rop,
            rel_error=rel,
            measured_e_s_reported=rec.e_s_reported,
            model_e_s_fullcircle=_solved_e_s(rec.wob, cfg, AreaConvention.FULL_CIRCLE),
            model_e_s_annulus=_solved_e_s(rec.wob, cfg, AreaConvention.ANNULUS),
            excluded=rec.label in excluded,
        ))
    max_err = max(abs(row.rel_error) for row in rows if not row.excluded)
    e_s = [_solved_e_s(row.wob, cfg, cfg.bit.area_convention) for row in rows]
    rho = spearman([row.wob for row in rows], e_s)
    return ValidationReport(tuple(rows), calib.s_cal, max_err, rho)


def report_csv(report: ValidationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_COLUMNS)
    for row in report.rows:
        writer.writerow([
            row.label, f"{row.wob:.3f}", f"{row.measured_rop:.6f}", f"{row.model_rop:.6f}",
            f"{row.rel_error:.6f}", f"{row.measured_e_s_reported:.0f}",
            f"{row.model_e_s_fullcircle:.0f}", f"{row.model_e_s_annulus:.0f}",
            "true" if row.excluded else "false",
        ])
    return buf.getvalue()


def report_text(report: ValidationReport, tolerance: float) -> str:
    lines = [
        f"{'label':<8}{'wob_N':>9}{'rop_meas':>10}{'rop_model':>11}{'rel_err':>9}"
        f"{'Es_rep_MPa':>12}{'Es_full_MPa':>13}{'Es_ann_MPa':>12}  note",
    ]
    for row in report.rows:
        lines.append(
            f"{row.label:<8}{row.wob:>9.2f}{row.measured_rop:>10.4f}{row.model_rop:>11.4f}"
            f"{row.rel_error:>9.3f}{row.measured_e_s_reported / 1e6:>12.2f}"
            f"{row.model_e_s_fullcircle / 1e6:>13.3f}{row.model_e_s_annulus / 1e6:>12.3f}"
            f"  {'excluded' if row.excluded else ''}".rstrip()
        )
    verdict = "PASS" if report.within(tolerance) else "FAIL"
    lines += [
        "",
        f"s_cal: {report.s_cal:.6f}",
        f"max_rel_error_included: {report.max_rel_error_included:.6f}",
        f"spearman_e_s: {report.spearman_e_s:.6f}",
        f"tolerance: {tolerance:.4f} -> {verdict}",
    ]
    return "\n".join(lines) + "\n"
