import math

import numpy as np
import pytest

import kolmo


def constant_state(n, omega, b):
    st = kolmo.SimState.zero(2, n)
    st.omega = kolmo.SpectralField.constant(2, n, omega)
    st.b = kolmo.SpectralField.constant(2, n, b)
    return st


def test_field_coefficients_and_norms():
    f = kolmo.SpectralField.trig_mode(2, 4, [1, 0], 1.0)
    assert f.coeffs.shape == (len(f),)
    assert f.waves.shape == (len(f), 2)
    assert f.coeff([1, 0]) == pytest.approx(0.5)
    assert f.evaluate([0.0, 0.3]) == pytest.approx(1.0)
    lam = 1 + 4 * math.pi**2
    assert kolmo.hs_norm(f, 1.0) == pytest.approx(math.sqrt(0.5 * lam), rel=1e-14)
    g = 2.0 * f - f
    np.testing.assert_array_equal(g.coeffs, f.coeffs)
    assert kolmo.project(f, 1).coeff([0, 0]) == 0


def test_bad_arguments_raise_value_errors():
    with pytest.raises(ValueError):
        kolmo.beta_exponent(1.0, 2)
    with pytest.raises(kolmo.KolmoError):
        kolmo.decode_snapshot(b"NOPE")


def test_beta_and_existence_time():
    assert kolmo.beta_exponent(2.0, 2) == 15.0
    assert kolmo.beta_exponent(2.0, 3) == 29.0
    assert kolmo.beta_exponent(3.0, 2) == 10.0
    assert kolmo.existence_time(0.0, 2.0, kolmo.ConstantModel(1.0, 0.0)) == pytest.approx(0.5)
    assert kolmo.existence_time(0.0, 2.0, kolmo.ConstantModel(2.0, 0.0)) == pytest.approx(0.25)
    assert kolmo.uniform_bound(3.0) == 7.0


def test_constant_state_follows_the_comparison_odes():
    bounds = kolmo.InitialBounds(1.0, 1.0, 1.0, 1.0)
    params = kolmo.ModelParams(alpha=1.0, s=2.0, bounds=bounds)
    profile = kolmo.CutoffProfile.for_regularity(bounds, 2.0)
    cfg = kolmo.IntegratorConfig()
    cfg.t_end = 1.0
    cfg.sample_interval = 0.5
    tr = kolmo.integrate(constant_state(4, 1.0, 1.0), cfg, params, profile)
    assert tr.completed
    end = tr.samples[-1]
    assert end.t == 1.0
    assert end.omega.coeff([0, 0]).real == pytest.approx(0.5, abs=1e-8)
    assert end.b.coeff([0, 0]).real == pytest.approx(0.5, abs=1e-8)
    assert profile.profiles(1.0)["omega_min"] == pytest.approx(0.5, rel=1e-12)


def test_snapshot_round_trip(tmp_path):
    st = constant_state(3, 1.5, 0.25)
    st.t = 0.125
    st.v = kolmo.random_solenoidal(kolmo.RandomFieldSpec(2, 3, 1.0, 5))
    data = kolmo.encode_snapshot(st)
    assert data[:4] == b"KOLM"
    back = kolmo.decode_snapshot(data)
    assert kolmo.encode_snapshot(back) == data
    path = tmp_path / "s.kolm"
    kolmo.save_snapshot(st, str(path))
    assert kolmo.encode_snapshot(kolmo.load_snapshot(str(path))) == data


def test_campaign_is_reproducible():
    spec = kolmo.RandomFieldSpec(2, 4, 4.5, 3)
    a = kolmo.verify_product_estimate(spec, 2.0, 10)
    b = kolmo.verify_product_estimate(spec, 2.0, 10)
    assert a.finite
    assert a.max_ratio == b.max_ratio
    assert a.samples == 10


def test_config_round_trip():
    text = "[model]\ndim = 2\ncutoff = 6\ns = 2.5\n"
    cfg = kolmo.parse_config(text)
    assert (cfg.dim, cfg.cutoff, cfg.s) == (2, 6, 2.5)
    assert kolmo.print_config(kolmo.parse_config(kolmo.print_config(cfg))) == kolmo.print_config(cfg)
    with pytest.raises(ValueError):
        kolmo.parse_config("[model]\nbogus = 1\n")
