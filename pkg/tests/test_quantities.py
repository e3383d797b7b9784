import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moledrill.errors import ConfigError, ValidationError
from moledrill.quantities import (
    AreaConvention,
    BitGeometry,
    Condition,
    apply_overrides,
    contact_area,
    dump_config,
    expansion_ratio,
    load_config,
    load_config_file,
    load_records,
)


def test_empty_document_gives_published_defaults():
    cfg = load_config("")
    assert cfg.soil.sigma_c == 4.0e6
    assert cfg.soil.mu == 0.45
    assert cfg.soil.gamma_c == 650.0
    assert (cfg.motor.tau_s, cfg.motor.omega_n, cfg.motor.eta) == (8.83, 200.0, 0.84)
    assert (cfg.bit.d_folded, cfg.bit.d_expanded) == (0.0934, 0.202)
    assert cfg.galle.a == 565.6
    assert cfg.soil.condition is Condition.SOFT


def test_bad_eta_names_field_and_bound():
    with pytest.raises(ValidationError) as exc:
        load_config("[motor]\neta = 1.2\n")
    assert exc.value.field == "motor.eta"
    assert "eta <= 1" in str(exc.value)


def test_parse_error_names_line():
    with pytest.raises(ConfigError, match="line 2"):
        load_config("[soil]\nmu = = 3\n")


@pytest.mark.parametrize("doc, fragment", [
    ("[soil]\nfoo = 1\n", "soil.foo"),
    ("[nope]\nx = 1\n", "nope"),
    ("[soil]\nmu = 'x'\n", "soil.mu"),
    ("[soil]\ncondition = 'mushy'\n", "soil.condition"),
])
def test_unknown_or_mistyped_fields(doc, fragment):
    with pytest.raises(ConfigError, match=fragment):
        load_config(doc)


def test_expansion_ratio_from_document():
    cfg = load_config("[bit]\nd_folded = 0.0934\nd_expanded = 0.202\n")
    assert expansion_ratio(cfg.bit) == pytest.approx(2.163, abs=5e-4)


def test_contact_area_conventions():
    geom = BitGeometry()
    full = contact_area(replace(geom, area_convention=AreaConvention.FULL_CIRCLE))
    ann = contact_area(replace(geom, area_convention=AreaConvention.ANNULUS))
    eff = contact_area(replace(geom, area_convention=AreaConvention.EFFECTIVE, effective_area=0.03))
    assert full == pytest.approx(0.032047, abs=1e-6)
    assert ann == pytest.approx(0.025196, abs=1e-6)
    assert eff == 0.03


def test_effective_area_required():
    with pytest.raises(ValidationError, match="effective_area"):
        BitGeometry(area_convention=AreaConvention.EFFECTIVE)


@given(
    d_f=st.floats(0.01, 0.5),
    extra=st.floats(1e-4, 0.5),
)
def test_annulus_smaller_than_full_circle(d_f, extra):
    geom = BitGeometry(d_folded=d_f, d_expanded=d_f + extra)
    full = contact_area(replace(geom, area_convention=AreaConvention.FULL_CIRCLE))
    ann = contact_area(replace(geom, area_convention=AreaConvention.ANNULUS))
    assert ann < full


@settings(max_examples=50)
@given(
    sigma_c=st.floats(1e5, 1e8),
    mu=st.floats(0.01, 1.99),
    eta=st.floats(0.05, 1.0),
    d_f=st.floats(0.02, 0.2),
    extra=st.floats(0.001, 0.2),
    cond=st.sampled_from(list(Condition)),
    conv=st.sampled_from([AreaConvention.FULL_CIRCLE, AreaConvention.ANNULUS]),
    f_c=st.floats(0.0, 10.0),
    blades=st.integers(1, 8),
)
def test_round_trip(sigma_c, mu, eta, d_f, extra, cond, conv, f_c, blades):
    base = load_config()
    cfg = replace(
        base,
        soil=replace(base.soil, sigma_c=sigma_c, mu=mu, condition=cond),
        motor=replace(base.motor, eta=eta),
        bit=replace(base.bit, d_folded=d_f, d_expanded=d_f + extra, area_convention=conv,
                    blade_count_inner=blades),
        caster=replace(base.caster, f_c=f_c),
    )
    assert load_config(dump_config(cfg)) == cfg


def test_round_trip_effective_area():
    base = load_config()
    cfg = replace(base, bit=replace(base.bit, area_convention=AreaConvention.EFFECTIVE,
                                    effective_area=0.0271))
    assert load_config(dump_config(cfg)) == cfg


def test_override_precedence(tmp_path):
    path = tmp_path / "c.toml"
    path.write_text("[soil]\nmu = 0.5\nsigma_c = 3e6\n")
    cfg = load_config_file(path)
    assert cfg.soil.mu == 0.5
    cfg = apply_overrides(cfg, ["soil.mu=0.6", "soil.condition=hard"])
    assert cfg.soil.mu == 0.6
    assert cfg.soil.sigma_c == 3e6
    assert cfg.soil.condition is Condition.HARD


def test_missing_config_file_names_path(tmp_path):
    with pytest.raises(ConfigError, match="nowhere.toml"):
        load_config_file(tmp_path / "nowhere.toml")


def test_bundled_records():
    recs = load_records()
    assert [r.label for r in recs] == ["W", "W+0.5", "W+1.0", "W+2.0", "W+5.0"]
    assert [r.outlier for r in recs] == [False, True, False, False, False]
    assert recs[0].wob == pytest.approx(7 * 9.81)
    assert recs[-1].wob == pytest.approx(12 * 9.81)
    # 91.09 mm in 10 minutes
    assert recs[0].rop == pytest.approx(0.09109 * 6, rel=1e-12)
    assert recs[0].e_s_reported == pytest.approx(6.58e6)
    assert math.isclose(recs[2].rpm, 190)
