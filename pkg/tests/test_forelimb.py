import math
from dataclasses import replace

import pytest

from moledrill.errors import CalibrationError, DomainError
from moledrill.forelimb import (
    alpha_for_width,
    debris_weight,
    fit_k_trans,
    max_push_force,
    pull_forces,
    residual_table,
)
from moledrill.quantities import BitGeometry, ForelimbSpec, SoilSpec

SPEC = ForelimbSpec()


def k_oracle(table, f_m):
    num = sum(math.sin(math.radians(a)) * f for _, a, f in table)
    den = 2 * f_m * sum(math.sin(math.radians(a)) ** 2 for _, a, _ in table)
    return num / den


def test_alpha_interpolation():
    assert alpha_for_width(40, SPEC) == 57
    assert alpha_for_width(200, SPEC) == 135
    assert alpha_for_width(60, SPEC) == pytest.approx(66.5)
    for d in (39.9, 200.1):
        with pytest.raises(DomainError):
            alpha_for_width(d, SPEC)


def test_alpha_monotone():
    a = [alpha_for_width(d, SPEC) for d in range(40, 201)]
    assert all(y > x for x, y in zip(a, a[1:]))


def test_fit_k_trans():
    k = fit_k_trans(SPEC)
    assert k == pytest.approx(k_oracle(SPEC.table4, 80.0), rel=1e-12)
    assert k == pytest.approx(0.262, abs=5e-4)
    one = replace(SPEC, table4=((100.0, 90.0, 160.0 * 0.7),))
    assert fit_k_trans(one) == pytest.approx(0.7)
    zero = replace(SPEC, table4=tuple((d, a, 0.0) for d, a, _ in SPEC.table4))
    assert fit_k_trans(zero) == 0.0
    with pytest.raises(CalibrationError):
        fit_k_trans(replace(SPEC, table4=()))


def test_push_force_examples():
    spec = replace(SPEC, k_trans=fit_k_trans(SPEC))
    assert max_push_force(0, spec) == 0.0
    f94 = max_push_force(94, spec)
    f135 = max_push_force(135, spec)
    assert f94 == pytest.approx(41.9, abs=0.05)
    assert f135 == pytest.approx(29.7, abs=0.05)
    assert abs(f94 - 39.90) / 39.90 <= 0.15
    assert abs(f135 - 33.93) / 33.93 <= 0.15
    assert max(range(181), key=lambda a: max_push_force(a, spec)) == 90
    with pytest.raises(DomainError):
        max_push_force(181, spec)


def test_residuals_bounded():
    errs = [abs(r["rel_error"]) for r in residual_table(SPEC)]
    assert max(errs) <= 0.15
    assert max(errs) == pytest.approx(0.1256, abs=1e-3)


def test_pull_forces():
    servo, linear = pull_forces(SPEC)
    assert servo == pytest.approx(250.0)
    assert linear == 160.0
    assert servo > linear
    assert pull_forces(replace(SPEC, tau_m=1e-12))[0] == pytest.approx(0, abs=1e-9)
    assert pull_forces(replace(SPEC, r_pinion_fl=0.02))[0] == pytest.approx(125.0)


def test_debris_weight():
    geom = BitGeometry()
    oracle = math.pi * 0.101**2 * 0.030 * 650 * 9.81
    assert oracle == pytest.approx(6.13, abs=0.01)
    assert debris_weight(0.030, geom, SoilSpec(bulking=1.0)) == pytest.approx(oracle, rel=1e-12)
    assert debris_weight(0.030, geom, SoilSpec()) == pytest.approx(7.55, abs=0.01)
    assert debris_weight(0.0, geom, SoilSpec()) == 0.0
    assert debris_weight(0.06, geom, SoilSpec()) == pytest.approx(
        2 * debris_weight(0.03, geom, SoilSpec()), rel=1e-12)
    assert debris_weight(0.03, geom, SoilSpec(bulking=2.0)) == pytest.approx(
        2 * debris_weight(0.03, geom, SoilSpec(bulking=1.0)), rel=1e-12)
