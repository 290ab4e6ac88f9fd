import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavehdc.exceptions import RangeError, UndefinedSNRError
from wavehdc.hdc import random_hypervector
from wavehdc.impairments import JitterSpec, add_awgn, apply_phase_jitter, phasor_mean, realized_snr_db, timing_to_phase
from wavehdc.uwe import Spectrum, ToneComb, Waveform, decode_spectrum, synthesize, time_delay, unitary_dft

COMB = ToneComb.default(32)


# ---- AWGN ------------------------------------------------------------------------

def test_awgn_huge_snr_is_identity():
    w = synthesize(random_hypervector(1, 32), COMB)
    assert np.allclose(add_awgn(w, 300.0, 5).samples, w.samples, atol=1e-12)


@pytest.mark.parametrize("mode", ["analytic", "real"])
@pytest.mark.parametrize("snr", [20.0, 0.0, -10.0])
def test_awgn_realized_snr(mode, snr):
    w = synthesize(random_hypervector(2, 32), COMB, mode=mode, duration=200 * COMB.period)
    assert realized_snr_db(w, add_awgn(w, snr, 11)) == pytest.approx(snr, abs=0.1)


def test_awgn_complex_noise_is_circular():
    w = synthesize(random_hypervector(3, 32), COMB, duration=200 * COMB.period)
    n = add_awgn(w, 0.0, 1).samples - w.samples
    assert np.var(n.real) == pytest.approx(np.var(n.imag), rel=0.05)


def test_awgn_deterministic_per_seed():
    w = synthesize(random_hypervector(4, 32), COMB)
    assert np.array_equal(add_awgn(w, 10, 7).samples, add_awgn(w, 10, 7).samples)
    assert not np.array_equal(add_awgn(w, 10, 7).samples, add_awgn(w, 10, 8).samples)


def test_awgn_zero_power():
    w = Waveform(np.zeros(16), 16.0, 1.0)
    with pytest.raises(UndefinedSNRError):
        add_awgn(w, 10.0, 0)


# ---- phase jitter ----------------------------------------------------------------

def test_jitter_zero_is_identity():
    X = unitary_dft(random_hypervector(5, 32))
    assert np.array_equal(apply_phase_jitter(X, JitterSpec(0.0, 3)), X)


@given(st.floats(0.0, 3.0), st.integers(0, 2**32))
def test_jitter_keeps_magnitudes(sigma, seed):
    X = unitary_dft(random_hypervector(6, 64))
    Y = apply_phase_jitter(Spectrum(X, ToneComb.default(64)), JitterSpec(sigma, seed))
    assert isinstance(Y, Spectrum)
    assert np.allclose(np.abs(Y.coefficients), np.abs(X), atol=1e-12)


def test_jitter_phasor_mean_matches_law():
    # average rotation of many unit phasors against exp(-sigma^2/2)
    ones = np.ones(10_000, dtype=complex)
    rotated = apply_phase_jitter(ones, JitterSpec(0.5, 9))
    assert abs(np.mean(rotated).real - phasor_mean(0.5)) / phasor_mean(0.5) < 0.02
    assert phasor_mean(0.5) == pytest.approx(math.exp(-0.125))


def test_jitter_correlated_is_common_phase():
    X = np.ones(8, dtype=complex)
    Y = apply_phase_jitter(X, JitterSpec(1.0, 4, correlated=True))
    assert np.allclose(Y, Y[0])


def test_jitter_negative_sigma():
    with pytest.raises(RangeError):
        JitterSpec(-0.1)


# ---- timing to phase ----------------------------------------------------------------

def test_timing_to_phase_values():
    assert timing_to_phase(5.0, 0.0) == 0.0
    assert timing_to_phase(0.5, 1.0) == pytest.approx(math.pi)


def test_timing_offset_equals_per_tone_rotation():
    # a delay tau rotates tone k by -2 pi f_k tau
    comb = ToneComb.centered(32, 20.5, 1.0)
    x = random_hypervector(8, 32)
    w = synthesize(x, comb)
    tau = 5 * w.dt
    delayed = decode_spectrum(time_delay(w, tau), comb)
    expected = unitary_dft(x) * np.exp(-1j * timing_to_phase(comb.frequencies, tau))
    assert np.allclose(delayed, expected, atol=1e-9)
