"""Command-line front end.

Exit codes: 0 ok, 1 check failed, 2 bad input, 3 model infeasible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

from . import caster, forelimb
from .cycle import simulate, timeline_csv
from .drilling import solve_operating_point
from .errors import (
    CalibrationError,
    ConfigError,
    DomainError,
    InfeasibleRateError,
    StallError,
    ValidationError,
)
from .harness import build_report, report_csv, report_text
from .optimizer import SWEEP_COLUMNS, fit_s_cal, optimum_report, sweep, sweep_csv, with_s_cal
from .quantities import Config, apply_overrides, dump_config, load_config, load_config_file, load_records

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3
ENV_CONFIG = "MOLEDRILL_CONFIG"


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _config(args) -> Config:
    path = args.config or os.environ.get(ENV_CONFIG)
    config = load_config_file(path) if path else load_config()
    return apply_overrides(config, args.set or [])


def _records(args):
    return load_records(args.dataset)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def cmd_predict(args) -> int:
    config = _config(args)
    if args.calibrate:
        config = with_s_cal(config, fit_s_cal(_records(args), config).s_cal)
    result = sweep(args.wob_min, args.wob_max, args.step, config)
    if not result.grid:
        raise _Exit(EXIT_INFEASIBLE, "motor stalls over the whole WOB range")
    if result.truncated:
        print(f"warning: range truncated at stall load ({result.grid[-1].wob:.3f} N is the "
              "last feasible node)", file=sys.stderr)
    if args.json:
        sys.stdout.write(_json({
            "s_cal": config.galle.s_cal,
            "columns": list(SWEEP_COLUMNS),
            "grid": [asdict(p) for p in result.grid],
            "crossing_wob_n": result.crossing,
            "truncated": result.truncated,
        }))
        if args.csv_out:
            _emit(sweep_csv(result), args.csv_out)
    else:
        _emit(sweep_csv(result), args.csv_out)
    return EXIT_OK


def cmd_validate(args) -> int:
    config = _config(args)
    report = build_report(config, _records(args))
    if args.csv_out:
        _emit(report_csv(report), args.csv_out)
    if args.json:
        payload = asdict(report)
        payload["tolerance"] = args.tolerance
        payload["passed"] = report.within(args.tolerance)
        sys.stdout.write(_json(payload))
    else:
        sys.stdout.write(report_text(report, args.tolerance))
    return EXIT_OK if report.within(args.tolerance) else EXIT_CHECK


def cmd_optimize(args) -> int:
    config = _config(args)
    calib, result = optimum_report(config, _records(args), args.wob_min, args.wob_max, args.step)
    if args.csv_out:
        _emit(sweep_csv(result), args.csv_out)
    best = result.optimum
    if args.json:
        sys.stdout.write(_json({
            "s_cal": calib.s_cal,
            "residuals": dict(calib.residuals),
            "excluded": list(calib.excluded),
            "sigma_c_pa": config.soil.sigma_c,
            "recommended": asdict(best) if best else None,
            "truncated": result.truncated,
        }))
    else:
        lines = [f"s_cal: {calib.s_cal:.6f}",
                 f"excluded: {', '.join(calib.excluded) or '-'}"]
        lines += [f"residual {label}: {err:+.4f}" for label, err in calib.residuals]
        if best:
            lines += [
                f"recommended wob: {best.wob:.3f} N",
                f"torque: {best.torque:.4f} N*m",
                f"rpm: {best.rpm:.3f} rev/min",
                f"rop: {best.rop:.4f} m/hr",
                f"e_s: {best.e_s / 1e6:.4f} MPa (target {config.soil.sigma_c / 1e6:.4f} MPa)",
            ]
        else:
            lines.append("recommended wob: none (e_s does not reach sigma_c in range)")
        sys.stdout.write("\n".join(lines) + "\n")
    if best is None:
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _config(args)
    plan = config.cycle
    if args.target_depth is not None:
        plan = replace(plan, target_depth=args.target_depth)
    if args.wob is not None:
        op = solve_operating_point(args.wob, config.soil, config.motor, config.bit, config.galle)
    else:
        _, result = optimum_report(config, _records(args))
        if result.optimum is None:
            raise _Exit(EXIT_INFEASIBLE, "no optimum operating point; pass --wob")
        op = result.optimum
    if args.rop is not None:
        op = replace(op, rop=args.rop)
    rpm = args.transition_rpm if args.transition_rpm is not None else op.rpm
    timeline = simulate(plan, op, config.bit, config.soil, rpm)
    if args.csv_out:
        _emit(timeline_csv(timeline), args.csv_out)
    summary = {
        "cycles": timeline.cycles,
        "entries": len(timeline.entries),
        "elapsed_s": timeline.elapsed_s,
        "depth_m": timeline.depth_m,
        "debris_removed_n": timeline.debris_removed_n,
        "net_advance_rate_m_hr": timeline.net_advance_rate_m_hr,
        "drill_rop_m_hr": op.rop,
        "wob_n": op.wob,
    }
    if args.json:
        sys.stdout.write(_json(summary))
    else:
        sys.stdout.write(
            f"cycles: {timeline.cycles}\n"
            f"entries: {len(timeline.entries)}\n"
            f"elapsed: {timeline.elapsed_s:.3f} s\n"
            f"depth: {timeline.depth_m:.4f} m\n"
            f"debris removed: {timeline.debris_removed_n:.4f} N\n"
            f"net advance rate: {timeline.net_advance_rate_m_hr:.4f} m/hr "
            f"(drilling at {op.rop:.4f} m/hr, wob {op.wob:.3f} N)\n"
        )
    return EXIT_OK


def cmd_caster(args) -> int:
    config = _config(args)
    b = caster.balance(config.caster)
    verdict = "true" if b.aligns else "false"
    if args.rise_csv:
        lines = ["t_s,f_c_n"] + [f"{t:.4f},{f:.6f}" for t, f in caster.rise_curve(config.caster)]
        Path(args.rise_csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.json:
        sys.stdout.write(_json(asdict(b)))
    else:
        sys.stdout.write(
            f"f_sp: {b.f_sp:.4f} N\n"
            f"p_t: {b.p_t:.4f} mm\n"
            f"t_sat: {b.t_sat:.4f} N·m\n"
            f"t_ss: {b.t_ss:.4f} N·m\n"
            f"sigma_t: {b.sigma_t:.4f} N·m\n"
            f"aligns: {verdict} (ΣT = {b.sigma_t:.4f} N·m)"
            + (" [boundary]" if b.boundary else "") + "\n"
        )
    return EXIT_OK


def cmd_forelimb(args) -> int:
    config = _config(args)
    spec = config.forelimb
    rows = forelimb.residual_table(spec)
    servo, linear = forelimb.pull_forces(spec)
    w_sw = forelimb.debris_weight(config.cycle.depth_per_cycle, config.bit, config.soil)
    max_err = max(abs(r["rel_error"]) for r in rows)
    if args.csv_out:
        lines = ["d_mm,alpha_deg,f_h_max_n,f_model_n,rel_error"]
        lines += [
            f"{r['d_mm']:.1f},{r['alpha_deg']:.1f},{r['f_h_max_n']:.2f},"
            f"{r['f_model_n']:.4f},{r['rel_error']:.6f}" for r in rows
        ]
        _emit("\n".join(lines) + "\n", args.csv_out)
    if args.json:
        sys.stdout.write(_json({
            "k_trans": spec.k_trans,
            "rows": rows,
            "max_rel_error": max_err,
            "pull_servo_n": servo,
            "pull_linear_n": linear,
            "debris_weight_n": w_sw,
        }))
    else:
        out = [f"k_trans: {spec.k_trans:.6f}",
               f"{'d_mm':>6}{'alpha':>7}{'F_tab_N':>9}{'F_model_N':>11}{'rel_err':>9}"]
        out += [
            f"{r['d_mm']:>6.0f}{r['alpha_deg']:>7.0f}{r['f_h_max_n']:>9.2f}"
            f"{r['f_model_n']:>11.3f}{r['rel_error']:>9.3f}" for r in rows
        ]
        out += [
            f"max_rel_error: {max_err:.4f}",
            f"pull servo: {servo:.2f} N, pull linear: {linear:.2f} N",
            f"debris weight per cycle: {w_sw:.4f} N",
        ]
        sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def cmd_config(args) -> int:
    sys.stdout.write(dump_config(_config(args)))
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"TOML config file (fallback: ${ENV_CONFIG})")
    common.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                        help="override one config value; repeatable")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--csv-out", metavar="PATH", help="write the CSV artifact here")
    common.add_argument("--tolerance", type=float, default=0.35,
                        help="max relative ROP error accepted by validate (default 0.35)")
    common.add_argument("--dataset", metavar="PATH",
                        help="drilling experiment CSV (default: bundled table)")

    sweep_args = argparse.ArgumentParser(add_help=False)
    sweep_args.add_argument("--wob-min", type=float, default=30.0)
    sweep_args.add_argument("--wob-max", type=float, default=140.0)
    sweep_args.add_argument("--step", type=float, default=1.0)

    parser = argparse.ArgumentParser(prog="moledrill", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", parents=[common, sweep_args],
                       help="sweep WOB and emit the operating-point CSV")
    p.add_argument("--calibrate", action="store_true",
                   help="fit s_cal to the dataset before sweeping")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("validate", parents=[common], help="compare the model with bench data")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("optimize", parents=[common, sweep_args],
                       help="calibrate and locate the E_s = sigma_c operating point")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", parents=[common], help="simulate the digging cycle")
    p.add_argument("--target-depth", type=float, help="m")
    p.add_argument("--wob", type=float, help="drill at this WOB (default: calibrated optimum)")
    p.add_argument("--rop", type=float, help="override drilling ROP, m/hr")
    p.add_argument("--transition-rpm", type=float, help="bit speed for blade strokes")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("caster", parents=[common], help="caster torque balance")
    p.add_argument("--rise-csv", metavar="PATH", help="write an illustrative f_c rise curve")
    p.set_defaults(func=cmd_caster)

    p = sub.add_parser("forelimb", parents=[common], help="forelimb fit against the table")
    p.set_defaults(func=cmd_forelimb)

    p = sub.add_parser("config", parents=[common], help="print the effective configuration")
    p.set_defaults(func=cmd_config)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ConfigError, ValidationError, CalibrationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (StallError, InfeasibleRateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
