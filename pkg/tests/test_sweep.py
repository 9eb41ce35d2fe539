import json

import numpy as np
import pytest

from spinkerr import Mode, paper_preset
from spinkerr.errors import ConfigError, SpinKerrError
from spinkerr.sweep import (Axis, SweepSpec, derived_at, export,
                            find_extremum, load_result, load_spec, run,
                            solve_point, spec_from_dict)


def small_spec(**kwargs):
    defaults = dict(
        base=paper_preset(omega=30e3),
        axes=(Axis("delta0", -2.6e6, -2.2e6, 5),),
        chi_over_gamma=9.5,
        xi_over_gamma=0.25,
    )
    defaults.update(kwargs)
    return SweepSpec(**defaults)


@pytest.fixture(scope="module")
def small_result():
    return run(small_spec(), workers=1)


def test_axis_validation():
    with pytest.raises(ConfigError):
        Axis("delta0", 0.0, 1.0, 1)
    with pytest.raises(ConfigError):
        Axis("nonsense", 0.0, 1.0, 5)


def test_spec_validation():
    with pytest.raises(ConfigError):
        small_spec(axes=())
    with pytest.raises(ConfigError):
        small_spec(axes=(Axis("delta0", 0, 1, 2), Axis("omega", 0, 1, 2),
                         Axis("J", 0, 1, 2)))
    with pytest.raises(ConfigError):
        small_spec(axes=(Axis("delta0", 0, 1, 2), Axis("delta0", 2, 3, 2)))
    with pytest.raises(ConfigError):
        small_spec(numeric=False, analytic=False)


def test_grid_row_major_two_axes():
    spec = small_spec(axes=(Axis("delta0", 0.0, 1.0, 2),
                            Axis("omega", 0.0, 30e3, 3)))
    grid = spec.grid()
    assert len(grid) == 6
    assert grid[0] == (0.0, 0.0)
    assert grid[1] == (0.0, 15e3)
    assert grid[3] == (1.0, 0.0)


def test_derived_at_applies_axes_and_pins():
    spec = small_spec(axes=(Axis("delta0", -1e6, 1e6, 3),
                            Axis("omega", 0.0, 30e3, 2)))
    d = derived_at(spec, (-1e6, 30e3))
    assert d.delta0 == -1e6
    assert d.delta_sag > 0
    assert d.chi / d.gamma == 9.5
    assert d.xi / d.gamma == 0.25


def test_derived_at_xi_axis_overrides_pin():
    spec = small_spec(axes=(Axis("xi", 1e4, 5e4, 3),))
    d = derived_at(spec, (1e4,))
    assert d.xi == 1e4


def test_records_align_with_grid(small_result):
    spec = small_result.spec
    assert len(small_result.records) == 5
    for record, coords in zip(small_result.records, spec.grid()):
        assert record.coords == coords
        assert record.delta0 == coords[0]
        assert record.numeric is not None
        assert record.params_key


def test_parallel_equals_serial():
    spec = small_spec()
    serial = run(spec, workers=1)
    parallel = run(spec, workers=2)
    for a, b in zip(serial.records, parallel.records):
        assert a.coords == b.coords
        assert a.params_key == b.params_key
        assert a.flags == b.flags
        assert a.analytic == b.analytic
        for mode in Mode:
            ma, mb = a.numeric.mode(mode), b.numeric.mode(mode)
            assert (ma.n, ma.s, ma.g2, ma.g3, ma.regime) \
                == (mb.n, mb.s, mb.g2, mb.g3, mb.regime)
            assert np.array_equal(ma.p, mb.p)


def test_point_failures_recorded_not_raised():
    # zero drive: spectra and correlations undefined, sweep must not abort
    spec = small_spec(axes=(Axis("xi", 0.0, 1e4, 2),), analytic=False)
    result = run(spec)
    record = result.records[0]
    assert record.numeric is not None
    assert "g2_cw_undefined" in record.flags
    assert "s_cw_undefined" in record.flags


def test_find_extremum_and_tiebreak(small_result):
    record, value = find_extremum(small_result, "g2", Mode.CW, "min")
    values = [r.numeric.cw.g2 for r in small_result.records]
    assert value == min(values)
    assert record.numeric.cw.g2 == value
    with pytest.raises(ConfigError):
        find_extremum(small_result, "bogus", Mode.CW, "min")
    with pytest.raises(ConfigError):
        find_extremum(small_result, "g2", Mode.CW, "extremal")


def test_find_extremum_tie_prefers_smaller_delta0():
    from dataclasses import replace as dc_replace
    spec = small_spec(axes=(Axis("delta0", -2.6e6, -2.2e6, 3),),
                      numeric=False)
    result = run(spec, workers=1)
    # force an exact tie on the analytic observable; the smaller detuning
    # must win regardless of its position in the record list
    tied = dict(result.records[2].analytic)
    tied["g2_analytic_cw"] = result.records[0].analytic["g2_analytic_cw"]
    records = [result.records[0], result.records[1],
               dc_replace(result.records[2], analytic=tied)]
    from spinkerr.sweep import SweepResult
    for ordering in (records, records[::-1]):
        record, value = find_extremum(
            SweepResult(spec, list(ordering)), "g2_analytic", Mode.CW,
            "min" if value_is_min(records) else "max")
        assert record.delta0 == records[0].delta0


def value_is_min(records):
    tied_value = records[0].analytic["g2_analytic_cw"]
    other = records[1].analytic["g2_analytic_cw"]
    return tied_value < other


def test_all_undefined_extremum_raises():
    spec = small_spec(axes=(Axis("xi", 0.0, 0.0 + 1e-300, 2),),
                      analytic=False)
    result = run(spec)
    with pytest.raises(SpinKerrError):
        find_extremum(result, "g2", Mode.CW, "min")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_export_round_trip_bit_exact(tmp_path, small_result, fmt):
    path = tmp_path / f"out.{fmt}"
    export(small_result, fmt, path)
    rows = load_result(path)
    assert len(rows) == len(small_result.records)
    for row, record in zip(rows, small_result.records):
        assert row["delta0"] == record.delta0
        assert row["n_cw"] == record.numeric.cw.n
        assert row["g2_ccw"] == record.numeric.ccw.g2
        assert row["g2_analytic_cw"] == record.analytic["g2_analytic_cw"]
        assert row["regime_cw"] == record.numeric.cw.regime.value
        assert row["params_key"] == record.params_key


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_export_reruns_byte_identical(tmp_path, fmt):
    spec = small_spec()
    paths = []
    for tag in ("a", "b"):
        result = run(spec, workers=1)
        path = tmp_path / f"{tag}.{fmt}"
        export(result, fmt, path)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_parallel_export_byte_identical(tmp_path):
    spec = small_spec()
    p1 = tmp_path / "serial.csv"
    p2 = tmp_path / "parallel.csv"
    export(run(spec, workers=1), "csv", p1)
    export(run(spec, workers=3), "csv", p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_json_export_is_valid_json(tmp_path, small_result):
    path = tmp_path / "out.json"
    export(small_result, "json", path)
    doc = json.loads(path.read_text())
    assert doc["schema"] == "sweep-v1"
    assert doc["axes"][0]["name"] == "delta0"
    assert len(doc["rows"]) == 5


def test_undefined_cells_round_trip_as_none(tmp_path):
    spec = small_spec(axes=(Axis("xi", 0.0, 1e4, 2),), analytic=False)
    result = run(spec)
    for fmt in ("csv", "json"):
        path = tmp_path / f"undef.{fmt}"
        export(result, fmt, path)
        rows = load_result(path)
        assert rows[0]["g2_cw"] is None
        assert rows[0]["s_cw"] is None
        assert "g2_cw_undefined" in rows[0]["flags"]


def test_spec_json_round_trip(tmp_path):
    doc = {
        "base": {
            "wavelength": 1550e-9, "quality_factor": 5e9,
            "mode_volume": 310e-18, "refractive_index": 1.4,
            "nonlinear_index": 3e-14, "input_power": 2e-15,
            "radius": 30e-6, "angular_velocity": 30e3,
            "backscattering": 4.8e5,
        },
        "axes": [{"name": "delta0", "start": -6e6, "stop": 6e6,
                  "count": 11}],
        "cutoff": 3,
        "chi_over_gamma": 9.5,
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc))
    spec = load_spec(path)
    assert spec.cutoff == 3
    assert spec.axes[0].count == 11
    assert spec.chi_over_gamma == 9.5
    with pytest.raises(ConfigError):
        spec_from_dict({"axes": []})
    doc["unexpected"] = 1
    with pytest.raises(ConfigError):
        spec_from_dict(doc)
