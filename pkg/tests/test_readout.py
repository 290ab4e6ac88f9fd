import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavehdc.exceptions import CalibrationError, DegenerateFitError, EmptyInputError, FormatError, GridMismatchError, RangeError
from wavehdc.readout import (
    FluxReading,
    KappaRegressor,
    calibrate_kappa,
    ccr,
    ccr_surrogate,
    delta_power,
    equivalent_gflops,
    integrate_power,
    predict_delta_p,
    read_flux_csv,
    write_flux_csv,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)


def _reading(p, f0=1.0, df=0.1, **kw):
    p = np.asarray(p, dtype=float)
    return FluxReading(f0 + df * np.arange(p.size), p, **kw)


# ---- integration ------------------------------------------------------------------

def test_integrate_constant_spectrum():
    # 5 bins of 2.0 at spacing 0.1 -> 2.0 * 0.5
    assert integrate_power(_reading([2.0] * 5)) == pytest.approx(1.0)


def test_integrate_single_bin_uses_unit_band():
    assert integrate_power(FluxReading([3.0], [4.0])) == 4.0


def test_integrate_explicit_band_width():
    r = FluxReading([1.0, 2.0], [1.0, 3.0], band_width=10.0)
    assert integrate_power(r) == pytest.approx(20.0)


def test_integrate_refinement_converges():
    # a smooth line shape: halving the bin spacing moves the integral by < 1%
    def shape(f):
        return np.exp(-((f - 2.0) ** 2) / 0.02)

    f1 = np.linspace(1.0, 3.0, 201)[:-1]
    f2 = np.linspace(1.0, 3.0, 401)[:-1]
    a = integrate_power(FluxReading(f1, shape(f1)))
    b = integrate_power(FluxReading(f2, shape(f2)))
    assert abs(a - b) / abs(b) < 0.01
    assert b == pytest.approx(math.sqrt(math.pi * 0.02), rel=1e-3)


def test_integrate_empty_raises():
    with pytest.raises(EmptyInputError):
        integrate_power(FluxReading(np.array([]), np.array([])))


def test_reading_shape_mismatch():
    with pytest.raises(GridMismatchError):
        FluxReading([1.0, 2.0], [1.0])


# ---- differential power --------------------------------------------------------------

def test_delta_power_normalization():
    q, b = _reading([3.0, 3.0]), _reading([1.0, 1.0])
    d = delta_power(q, b, p_ref=0.2)
    assert d.raw == pytest.approx(0.4)
    assert d.normalized == pytest.approx(2.0)


@given(st.lists(finite, min_size=2, max_size=20), st.floats(0.01, 10.0))
def test_delta_power_antisymmetric(values, p_ref):
    q = _reading(values)
    b = _reading(values[::-1])
    assert delta_power(q, b, p_ref).raw == pytest.approx(-delta_power(b, q, p_ref).raw, abs=1e-9)


def test_delta_power_self_is_zero():
    r = _reading([1.0, -2.0, 5.0])
    assert delta_power(r, r, 1.0).raw == 0.0


def test_delta_power_errors():
    with pytest.raises(GridMismatchError):
        delta_power(_reading([1, 2]), _reading([1, 2], f0=1.5), 1.0)
    with pytest.raises(GridMismatchError):
        delta_power(_reading([1, 2]), _reading([1, 2, 3]), 1.0)
    with pytest.raises(CalibrationError):
        delta_power(_reading([1, 2]), _reading([1, 2]), 0.0)


# ---- CCR ----------------------------------------------------------------------

def test_ccr_reference_values():
    assert round(ccr(8.8e-5, -8.6e-5, 1.0, 1.0), 6) == pytest.approx(8.7e-5)


def test_ccr_surrogate_reference_values():
    # hand arithmetic: |a - b| / (2 |p|)
    open_ = ccr_surrogate(-2.061490e-1, -7.022430e-2, -2.342078e-3)
    baffled = ccr_surrogate(-3.614158e-2, -1.843098e-2, -1.266211e-6)
    assert open_ == pytest.approx(0.13592470 / 4.684156e-3, rel=1e-6)
    assert open_ == pytest.approx(29.0, rel=0.01)
    assert baffled == pytest.approx(6990.0, rel=0.01)
    assert baffled / open_ == pytest.approx(241.0, rel=0.01)


@given(finite, finite, st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.01, 100))
def test_ccr_homogeneous(a, b, bm, bn, c):
    assert ccr(c * a, c * b, c * bm, c * bn) == pytest.approx(ccr(a, b, bm, bn), rel=1e-9, abs=1e-12)


def test_ccr_errors():
    with pytest.raises(CalibrationError):
        ccr(1.0, 0.0, 0.0, 0.0)
    with pytest.raises(CalibrationError):
        ccr_surrogate(1.0, 0.0, 0.0)


# ---- kappa ----------------------------------------------------------------------

def test_calibrate_exact_line():
    inner = np.arange(-5, 6, dtype=float)
    cal = calibrate_kappa(zip(inner, 2 * 0.37 * inner))
    assert cal.kappa == pytest.approx(0.37)
    assert cal.fit_residual == pytest.approx(0.0, abs=1e-12)


def test_calibrate_noisy_within_five_percent():
    rng = np.random.default_rng(0)
    inner = np.linspace(-100, 100, 50)
    dp = 2 * 1.5 * inner + rng.normal(0, 5.0, inner.size)
    assert calibrate_kappa(zip(inner, dp)).kappa == pytest.approx(1.5, rel=0.05)


def test_calibrate_degenerate():
    with pytest.raises(DegenerateFitError):
        calibrate_kappa([(1.0, 2.0)])
    with pytest.raises(DegenerateFitError):
        calibrate_kappa([(3.0, 1.0), (3.0, 2.0)])


def test_predict_delta_p_attenuation():
    assert predict_delta_p(0.5, 10.0) == pytest.approx(10.0)
    assert predict_delta_p(0.5, 10.0, sigma_phi=1.0) == pytest.approx(10.0 * math.exp(-0.5))
    with pytest.raises(RangeError):
        predict_delta_p(1.0, 1.0, sigma_phi=-0.1)


def test_kappa_regressor_matches_function():
    inner = np.array([-3.0, -1.0, 0.0, 2.0, 4.0])
    dp = 2 * 0.8 * inner + np.array([0.01, -0.02, 0.0, 0.03, -0.01])
    reg = KappaRegressor().fit(inner.reshape(-1, 1), dp)
    assert reg.kappa_ == pytest.approx(calibrate_kappa(zip(inner, dp)).kappa)
    assert np.allclose(reg.predict(inner), 2 * reg.kappa_ * inner)
    assert reg.score(inner.reshape(-1, 1), dp) > 0.99


# ---- throughput proxy -------------------------------------------------------------

def test_equivalent_gflops_values():
    assert equivalent_gflops(1, 1000, 1e-6) == pytest.approx(1.999)
    assert equivalent_gflops(1, 1000, 1e-3) == pytest.approx(1.999e-3)
    assert equivalent_gflops(1000, 500, 0.999e-3) == pytest.approx(1.0)


@given(st.integers(1, 10**4), st.integers(1, 10**4), st.floats(1e-9, 10))
def test_equivalent_gflops_linear_in_library(lib, dim, lat):
    assert equivalent_gflops(2 * lib, dim, lat) == pytest.approx(2 * equivalent_gflops(lib, dim, lat))


def test_equivalent_gflops_rejects_nonpositive():
    with pytest.raises(RangeError):
        equivalent_gflops(1, 10, 0.0)


# ---- CSV ----------------------------------------------------------------------

def test_flux_csv_round_trip(tmp_path):
    r = _reading([0.1, -1e-12, 3.5e7])
    p = tmp_path / "flux.csv"
    write_flux_csv(r, p)
    back = read_flux_csv(p)
    assert np.array_equal(back.frequencies, r.frequencies)
    assert np.array_equal(back.net_power, r.net_power)


def test_flux_csv_bad_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("f,p\n1,2\n")
    with pytest.raises(FormatError):
        read_flux_csv(p)
    p.write_text("frequency,net_power\n1,abc\n")
    with pytest.raises(FormatError):
        read_flux_csv(p)
