"""Value records, unit conventions and configuration loading.

Everything inside the package is SI (N, m, s, Pa). Rotational speed is the
one exception: it is carried in rev/min because that is how motors and test
logs report it. Lengths in ``CasterSpec`` stay in millimetres to match the
way the spring hardware is specified.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import asdict, dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

import tomlkit
from tomlkit.exceptions import ParseError

from .errors import ConfigError, ValidationError

G = 9.81  # m/s^2
FUNDAMENTAL_MASS_KG = 7.0  # bit + motor dead weight in the bench test
SESSION_S = 600.0  # bench sessions lasted 10 minutes
DEFAULT_OUTLIERS = ("W+0.5",)


class Condition(str, enum.Enum):
    SOFT = "soft"
    HARD = "hard"


class AreaConvention(str, enum.Enum):
    FULL_CIRCLE = "full_circle"
    ANNULUS = "annulus"
    EFFECTIVE = "effective"


class LengthUnit(str, enum.Enum):
    MILLIMETERS = "mm"
    INCHES = "in"
    METERS = "m"

    @property
    def per_meter(self) -> float:
        return {"mm": 1000.0, "in": 1.0 / 0.0254, "m": 1.0}[self.value]


def _require(name: str, value, ok: bool, bound: str) -> None:
    if not ok:
        raise ValidationError(name, value, bound)


@dataclass(frozen=True)
class SoilSpec:
    """Target formation."""

    sigma_c: float = 4.0e6  # Pa
    gamma_c: float = 650.0  # kg/m^3
    mu: float = 0.45  # steel-concrete kinetic friction
    condition: Condition = Condition.SOFT
    bulking: float = 1.232

    def __post_init__(self):
        _require("soil.sigma_c", self.sigma_c, self.sigma_c > 0, "sigma_c > 0")
        _require("soil.gamma_c", self.gamma_c, self.gamma_c > 0, "gamma_c > 0")
        _require("soil.mu", self.mu, 0 < self.mu < 2, "0 < mu < 2")
        _require("soil.bulking", self.bulking, self.bulking >= 1, "bulking >= 1")


@dataclass(frozen=True)
class MotorSpec:
    tau_s: float = 8.83  # N*m
    omega_n: float = 200.0  # rev/min
    eta: float = 0.84

    def __post_init__(self):
        _require("motor.tau_s", self.tau_s, self.tau_s > 0, "tau_s > 0")
        _require("motor.omega_n", self.omega_n, self.omega_n > 0, "omega_n > 0")
        _require("motor.eta", self.eta, 0 < self.eta <= 1, "0 < eta <= 1")


@dataclass(frozen=True)
class BitGeometry:
    """Expandable bit geometry.

    ``screw_pitch``, ``pinion_radius`` and ``max_travel`` are artifact defaults
    (no published values); the pinion radius is chosen so that the full stroke
    sweeps the blades through exactly a quarter turn.
    """

    d_folded: float = 0.0934  # m
    d_expanded: float = 0.202  # m
    blade_count_inner: int = 3
    blade_count_expandable: int = 3
    area_convention: AreaConvention = AreaConvention.FULL_CIRCLE
    effective_area: float | None = None  # m^2, only with EFFECTIVE
    screw_pitch: float = 0.002  # m/rev
    pinion_radius: float = 0.010 / (math.pi / 2)  # m
    max_travel: float = 0.010  # m

    def __post_init__(self):
        _require("bit.d_folded", self.d_folded, self.d_folded > 0, "d_folded > 0")
        _require(
            "bit.d_expanded",
            self.d_expanded,
            self.d_expanded > self.d_folded,
            "d_expanded > d_folded",
        )
        _require("bit.blade_count_inner", self.blade_count_inner,
                 self.blade_count_inner >= 1, "blade_count_inner >= 1")
        _require("bit.blade_count_expandable", self.blade_count_expandable,
                 self.blade_count_expandable >= 1, "blade_count_expandable >= 1")
        if self.area_convention is AreaConvention.EFFECTIVE:
            _require(
                "bit.effective_area",
                self.effective_area,
                self.effective_area is not None and self.effective_area > 0,
                "effective_area > 0 when area_convention = effective",
            )
        _require("bit.screw_pitch", self.screw_pitch, self.screw_pitch > 0, "screw_pitch > 0")
        _require("bit.pinion_radius", self.pinion_radius, self.pinion_radius > 0,
                 "pinion_radius > 0")
        _require("bit.max_travel", self.max_travel, self.max_travel > 0, "max_travel > 0")


@dataclass(frozen=True)
class GalleConstants:
    """Constants of the Galle-Woods rate-of-penetration correlation.

    ``d_unit`` is the unit the bit diameter is expressed in when normalising
    the weight; ``s_cal`` is a multiplicative calibration on the predicted ROP.
    """

    a: float = 565.6
    k_exp: float = 1.0
    p_exp: float = 0.5
    wbar_scale: float = 7.88
    d_unit: LengthUnit = LengthUnit.MILLIMETERS
    s_cal: float = 1.0

    def __post_init__(self):
        _require("galle.a", self.a, self.a > 0, "a > 0")
        _require("galle.p_exp", self.p_exp, self.p_exp > 0, "p_exp > 0")
        _require("galle.s_cal", self.s_cal, self.s_cal > 0, "s_cal > 0")


@dataclass(frozen=True)
class CasterSpec:
    """Spring-loaded caster set. Lengths in mm, forces in N."""

    k_spring: float = 0.077  # N/mm
    delta_x: float = 5.0  # mm
    theta: float = 30.0  # deg
    l_cp: float = 7.0  # mm
    a_m: float = 10.0  # mm
    f_c: float = 2.4  # N
    mu_s_wheel: float = 0.9
    mu_k_wheel: float = 0.75

    def __post_init__(self):
        for name in ("k_spring", "delta_x", "l_cp", "a_m"):
            v = getattr(self, name)
            _require(f"caster.{name}", v, v > 0, f"{name} > 0")
        _require("caster.theta", self.theta, 0 < self.theta < 90, "0 < theta < 90")
        _require("caster.f_c", self.f_c, self.f_c >= 0, "f_c >= 0")


def _bundled_table4() -> tuple[tuple[float, float, float], ...]:
    text = resources.files("moledrill.data").joinpath("table4.csv").read_text()
    rows = csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#"))
    return tuple(
        (float(r["d_mm"]), float(r["alpha_deg"]), float(r["f_h_max_n"])) for r in rows
    )


@dataclass(frozen=True)
class ForelimbSpec:
    """Debris-removal forelimbs.

    ``table4`` rows are ``(width_mm, opening_deg, max_push_n)``. ``k_trans``
    is left as ``None`` until fitted; :func:`load_config` always fills it.
    """

    f_m: float = 80.0  # N per linear actuator
    tau_m: float = 2.5  # N*m servo
    r_pinion_fl: float = 0.010  # m
    k_trans: float | None = None
    table4: tuple[tuple[float, float, float], ...] = field(default_factory=_bundled_table4)

    def __post_init__(self):
        for name in ("f_m", "tau_m", "r_pinion_fl"):
            v = getattr(self, name)
            _require(f"forelimb.{name}", v, v > 0, f"{name} > 0")
        if self.k_trans is not None:
            _require("forelimb.k_trans", self.k_trans, self.k_trans >= 0, "k_trans >= 0")
        for prev, cur in zip(self.table4, self.table4[1:]):
            _require("forelimb.table4", cur, cur[0] > prev[0] and cur[1] > prev[1],
                     "table4 strictly increasing in d and alpha")


@dataclass(frozen=True)
class CyclePlan:
    """Digging-cycle plan. Phase timings are artifact defaults, not measured."""

    depth_per_cycle: float = 0.030  # m
    target_depth: float = 0.300  # m
    forelimb_sweep_time: float = 10.0  # s, phases 5 and 6 together
    bit_advance_time: float = 10.0  # s

    def __post_init__(self):
        _require("cycle.depth_per_cycle", self.depth_per_cycle, self.depth_per_cycle > 0,
                 "depth_per_cycle > 0")
        _require("cycle.target_depth", self.target_depth, self.target_depth >= 0,
                 "target_depth >= 0")
        _require("cycle.forelimb_sweep_time", self.forelimb_sweep_time,
                 self.forelimb_sweep_time >= 0, "forelimb_sweep_time >= 0")
        _require("cycle.bit_advance_time", self.bit_advance_time,
                 self.bit_advance_time >= 0, "bit_advance_time >= 0")


@dataclass(frozen=True)
class ExperimentRecord:
    label: str
    wob: float  # N
    drilled_depth: float  # m
    duration: float  # s
    rpm: float
    e_s_reported: float  # Pa
    outlier: bool = False

    def __post_init__(self):
        _require(f"{self.label}.duration", self.duration, self.duration > 0, "duration > 0")
        _require(f"{self.label}.drilled_depth", self.drilled_depth, self.drilled_depth >= 0,
                 "drilled_depth >= 0")
        _require(f"{self.label}.rpm", self.rpm, self.rpm >= 0, "rpm >= 0")

    @property
    def rop(self) -> float:
        """Measured rate of penetration in m/hr."""
        return self.drilled_depth / self.duration * 3600.0


@dataclass(frozen=True)
class Config:
    soil: SoilSpec = field(default_factory=SoilSpec)
    motor: MotorSpec = field(default_factory=MotorSpec)
    bit: BitGeometry = field(default_factory=BitGeometry)
    galle: GalleConstants = field(default_factory=GalleConstants)
    caster: CasterSpec = field(default_factory=CasterSpec)
    forelimb: ForelimbSpec = field(default_factory=ForelimbSpec)
    cycle: CyclePlan = field(default_factory=CyclePlan)

    def __iter__(self):
        return iter(getattr(self, f.name) for f in fields(self))


_SECTIONS = {
    "soil": SoilSpec,
    "motor": MotorSpec,
    "bit": BitGeometry,
    "galle": GalleConstants,
    "caster": CasterSpec,
    "forelimb": ForelimbSpec,
    "cycle": CyclePlan,
}
_ENUMS = {
    ("soil", "condition"): Condition,
    ("bit", "area_convention"): AreaConvention,
    ("galle", "d_unit"): LengthUnit,
}
_INTS = {("bit", "blade_count_inner"), ("bit", "blade_count_expandable")}


def contact_area(geom: BitGeometry) -> float:
    """Bit-formation contact area in m^2 under the geometry's convention."""
    if geom.area_convention is AreaConvention.FULL_CIRCLE:
        return math.pi * (geom.d_expanded / 2) ** 2
    if geom.area_convention is AreaConvention.ANNULUS:
        return math.pi * ((geom.d_expanded / 2) ** 2 - (geom.d_folded / 2) ** 2)
    return float(geom.effective_area)


def _coerce(section: str, key: str, value: Any) -> Any:
    where = f"{section}.{key}"
    if (section, key) in _ENUMS:
        enum_cls = _ENUMS[(section, key)]
        try:
            return enum_cls(str(value).lower())
        except ValueError:
            choices = ", ".join(m.value for m in enum_cls)
            raise ConfigError(f"{where}: {value!r} is not one of {choices}") from None
    if (section, key) in _INTS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if (section, key) == ("forelimb", "table4"):
        try:
            return tuple(tuple(float(x) for x in row) for row in value)
        except (TypeError, ValueError):
            raise ConfigError(f"{where}: expected a list of [d_mm, alpha_deg, f_n] rows")
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def config_from_dict(doc: dict[str, dict[str, Any]]) -> Config:
    """Build a validated :class:`Config` from nested section dicts.

    Missing sections or keys fall back to defaults. Unknown ones are errors.
    """
    parts = {}
    for section, data in doc.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        if not isinstance(data, dict):
            raise ConfigError(f"[{section}] must be a table")
    for section, cls in _SECTIONS.items():
        data = doc.get(section, {})
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in data.items():
            if key not in known:
                raise ConfigError(f"{section}.{key}: unknown field")
            kwargs[key] = _coerce(section, key, value)
        parts[section] = cls(**kwargs)
    if parts["forelimb"].k_trans is None:
        from .forelimb import fit_k_trans

        parts["forelimb"] = replace(parts["forelimb"], k_trans=fit_k_trans(parts["forelimb"]))
    return Config(**parts)


def config_to_dict(config: Config) -> dict[str, dict[str, Any]]:
    out = {}
    for section in _SECTIONS:
        data = {}
        for key, value in asdict(getattr(config, section)).items():
            if value is None:
                continue
            if isinstance(value, enum.Enum):
                value = value.value
            elif key == "table4":
                value = [list(row) for row in value]
            data[key] = value
        out[section] = data
    return out


def load_config(source: str = "") -> Config:
    """Parse a TOML configuration document on top of the built-in defaults."""
    try:
        doc = tomlkit.parse(source).unwrap()
    except ParseError as exc:
        raise ConfigError(f"line {exc.line}, column {exc.col}: {exc}") from None
    return config_from_dict(doc)


def load_config_file(path: str | Path) -> Config:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    return load_config(text)


def dump_config(config: Config) -> str:
    return tomlkit.dumps(config_to_dict(config))


def apply_overrides(config: Config, overrides: Iterable[str]) -> Config:
    """Apply ``section.key=value`` strings, values parsed as TOML literals."""
    doc = config_to_dict(config)
    for item in overrides:
        path, sep, raw = item.partition("=")
        section, dot, key = path.strip().partition(".")
        if not sep or not dot:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        try:
            value = tomlkit.parse(f"v = {raw.strip()}").unwrap()["v"]
        except ParseError:
            value = raw.strip()  # bare word, e.g. an enum name
        doc.setdefault(section, {})[key.strip()] = value
    return config_from_dict(doc)


def expansion_ratio(geom: BitGeometry) -> float:
    return geom.d_expanded / geom.d_folded


def _read_csv_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))


def load_records(
    source: str | Path | None = None,
    outliers: Iterable[str] = DEFAULT_OUTLIERS,
    base_mass_kg: float = FUNDAMENTAL_MASS_KG,
    duration_s: float = SESSION_S,
) -> list[ExperimentRecord]:
    """Read drilling-experiment rows (bundled table when ``source`` is None)."""
    if source is None:
        text = resources.files("moledrill.data").joinpath("table3.csv").read_text()
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read dataset {source}: {exc.strerror}") from None
    flagged = set(outliers)
    records = []
    for lineno, row in enumerate(_read_csv_rows(text), start=1):
        try:
            records.append(
                ExperimentRecord(
                    label=row["label"],
                    wob=(base_mass_kg + float(row["wob_kgf_added"])) * G,
                    drilled_depth=float(row["depth_mm"]) / 1000.0,
                    duration=duration_s,
                    rpm=float(row["rpm"]),
                    e_s_reported=float(row["e_s_mpa"]) * 1e6,
                    outlier=row["label"] in flagged,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ConfigError(f"dataset row {lineno}: {exc!r}") from None
    return records
