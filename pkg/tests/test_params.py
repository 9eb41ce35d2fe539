import dataclasses
import math

import pytest

from spinkerr import (Mode, ParameterError, PhysicalParams, derive,
                      load_config, paper_derived, paper_preset, save_config)
from spinkerr.errors import ConfigError

# Frozen oracle values: direct evaluation of the three closed-form rate
# formulas with c = 299792458 m/s, hbar = 1.054571817e-34 J s.
GAMMA_REF = 2.430518e5
CHI_REF = 2.305357e6
DSAG_30K_REF = 2.501692e6   # 30 krad/s spin, zero dispersion


def test_paper_ratios_within_two_percent():
    d = derive(paper_preset())
    assert d.chi / d.gamma == pytest.approx(9.5, rel=0.02)
    assert d.xi / d.gamma == pytest.approx(0.25, rel=0.02)


def test_absolute_rates_match_closed_forms():
    d = derive(paper_preset())
    assert d.gamma == pytest.approx(GAMMA_REF, rel=1e-5)
    assert d.chi == pytest.approx(CHI_REF, rel=1e-5)
    assert d.omega_c == pytest.approx(2 * math.pi * 299792458.0 / 1550e-9,
                                      rel=1e-12)


def test_static_resonator_has_no_sagnac_shift():
    d = derive(paper_preset(omega=0.0))
    assert d.delta_sag == 0.0


def test_sagnac_shift_at_fast_spin_without_dispersion():
    p = dataclasses.replace(paper_preset(omega=30e3), dispersion=0.0)
    assert derive(p).delta_sag == pytest.approx(DSAG_30K_REF, rel=1e-5)


def test_sagnac_shift_homogeneous_in_spin_rate():
    base = derive(paper_preset(omega=10e3)).delta_sag
    for k in (0.0, 0.5, 2.0, 3.0):
        d = derive(paper_preset(omega=k * 10e3))
        assert d.delta_sag == pytest.approx(k * base, rel=1e-12, abs=1e-30)


def test_drive_amplitude_scales_as_sqrt_power():
    p1 = paper_preset()
    p4 = dataclasses.replace(p1, input_power=4 * p1.input_power)
    assert derive(p4).xi == pytest.approx(2 * derive(p1).xi, rel=1e-12)


def test_kerr_rate_independent_of_power_and_spin():
    d0 = derive(paper_preset())
    d1 = derive(dataclasses.replace(paper_preset(omega=25e3),
                                    input_power=7e-15))
    assert d1.chi == d0.chi


def test_drive_direction_changes_no_magnitude():
    p = paper_preset(omega=20e3, delta0=-1e6)
    flipped = dataclasses.replace(p, drive_direction=Mode.CCW)
    d, df = derive(p), derive(flipped)
    for name in ("omega_c", "gamma", "chi", "xi", "delta_sag", "delta0",
                 "backscattering"):
        assert getattr(df, name) == getattr(d, name)
    assert df.drive_direction is Mode.CCW


def test_mode_detunings_carry_opposite_sagnac_signs():
    d = paper_derived(omega=30e3, delta0=-2.0e6)
    assert d.mode_detuning(Mode.CW) == pytest.approx(d.delta0 + d.delta_sag)
    assert d.mode_detuning(Mode.CCW) == pytest.approx(d.delta0 - d.delta_sag)
    assert d.delta_sag > 0


@pytest.mark.parametrize("field,value", [
    ("wavelength", -1550e-9),
    ("wavelength", 0.0),
    ("quality_factor", 0.0),
    ("mode_volume", -1e-18),
    ("refractive_index", 0.99),
    ("refractive_index", 1.0),
    ("input_power", -1e-15),
    ("nonlinear_index", -3e-14),
    ("backscattering", -1.0),
    ("angular_velocity", -5.0),
    ("radius", 0.0),
    ("wavelength", float("nan")),
    ("detuning", float("inf")),
])
def test_invalid_physical_parameters_rejected(field, value):
    with pytest.raises(ParameterError):
        dataclasses.replace(paper_preset(), **{field: value})


def test_violations_lists_every_problem():
    p = paper_preset()
    try:
        dataclasses.replace(p, wavelength=-1.0, input_power=-1.0)
    except ParameterError as exc:
        message = str(exc)
        assert "wavelength" in message and "input_power" in message
    else:
        pytest.fail("expected ParameterError")


def test_paper_derived_pins_declared_ratios():
    d = paper_derived(omega=30e3)
    assert d.chi / d.gamma == 9.5
    assert d.xi / d.gamma == 0.25
    assert d.backscattering / d.gamma == pytest.approx(2.0, rel=1e-12)


def test_params_key_is_stable_and_sensitive():
    a = paper_derived(delta0=-2.3e6)
    b = paper_derived(delta0=-2.3e6)
    c = paper_derived(delta0=-2.4e6)
    assert a.key() == b.key()
    assert a.key() != c.key()


def test_config_round_trip(tmp_path):
    p = paper_preset(omega=12e3, delta0=-3e6)
    path = tmp_path / "params.json"
    save_config(p, path)
    assert load_config(path) == p


def test_config_rejects_unknown_and_missing_keys(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"wavelength": 1.55e-6, "bogus": 1}')
    with pytest.raises(ConfigError, match="bogus"):
        load_config(path)
    path.write_text('{"wavelength": 1.55e-6}')
    with pytest.raises(ConfigError, match="missing"):
        load_config(path)


def test_config_rejects_invalid_physics(tmp_path):
    p = paper_preset()
    path = tmp_path / "bad_phys.json"
    save_config(p, path)
    text = path.read_text().replace('"refractive_index": 1.4',
                                    '"refractive_index": 0.9')
    path.write_text(text)
    with pytest.raises(ConfigError, match="refractive_index"):
        load_config(path)
