"""Controlled corruption: AWGN on waveforms and per-tone phase jitter on spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import RangeError, UndefinedSNRError
from .uwe import Spectrum, Waveform
from .validation import make_rng

__all__ = [
    "JitterSpec",
    "add_awgn",
    "apply_phase_jitter",
    "timing_to_phase",
    "realized_snr_db",
    "phasor_mean",
]


@dataclass(frozen=True)
class JitterSpec:
    """Gaussian phase jitter of RMS ``sigma_phi`` radians.

    With ``correlated`` every tone gets the same draw (a common phase);
    otherwise draws are independent per tone.
    """

    sigma_phi: float
    seed: int = 0
    correlated: bool = False

    def __post_init__(self):
        if not self.sigma_phi >= 0:
            raise RangeError(f"sigma_phi must be >= 0, got {self.sigma_phi}")


def _mean_power(samples):
    return float(np.mean(np.abs(samples) ** 2))


def add_awgn(w: Waveform, snr_db, seed) -> Waveform:
    """Add white Gaussian noise at ``snr_db`` relative to the waveform's mean power.

    Complex waveforms receive circular noise with the variance split evenly
    between real and imaginary parts.
    """
    p_sig = _mean_power(w.samples)
    if p_sig == 0.0:
        raise UndefinedSNRError("cannot set an SNR on a zero-power waveform")
    p_noise = p_sig / 10.0 ** (snr_db / 10.0)
    rng = make_rng(seed)
    if w.is_complex:
        noise = rng.standard_normal((2, w.n_samples)) * math.sqrt(p_noise / 2.0)
        noise = noise[0] + 1j * noise[1]
    else:
        noise = rng.standard_normal(w.n_samples) * math.sqrt(p_noise)
    return w.replace(w.samples + noise)


def realized_snr_db(clean: Waveform, noisy: Waveform):
    noise = noisy.samples - clean.samples
    return 10.0 * math.log10(_mean_power(clean.samples) / _mean_power(noise))


def apply_phase_jitter(s, spec: JitterSpec):
    """Rotate every coefficient by a Gaussian phase; magnitudes are untouched.

    Accepts a :class:`Spectrum` or a bare coefficient array and returns the
    same kind.
    """
    coeffs = s.coefficients if isinstance(s, Spectrum) else np.asarray(s, dtype=np.complex128)
    if spec.sigma_phi == 0:
        out = coeffs.copy()
    else:
        rng = make_rng(spec.seed)
        n = 1 if spec.correlated else coeffs.size
        phi = rng.standard_normal(n) * spec.sigma_phi
        out = coeffs * np.exp(1j * phi)
    return Spectrum(out, s.comb) if isinstance(s, Spectrum) else out


def timing_to_phase(f_k, delta_tau):
    """Phase error ``2 pi f_k delta_tau`` caused by a timing offset."""
    return 2.0 * np.pi * np.asarray(f_k, dtype=np.float64) * delta_tau


def phasor_mean(sigma_phi):
    """``E[exp(j phi)]`` for ``phi ~ N(0, sigma**2)``."""
    return math.exp(-(sigma_phi**2) / 2.0)
