"""Wave-domain binding: mixing, band isolation, modulo-N spectral wrapping.

Multiplying two real comb waveforms produces a difference band near DC
and a sum band near ``2 f_cen``.  For real inputs the difference band,
re-binned with ``k = round(f / delta_f) mod N``, equals twice the circular
convolution ``X * Y`` (up to a global scale), which is the spectrum of
``x * y``.  The inverse DFT of the wrapped spectrum therefore recovers the
bound hypervector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import DimensionError, InsufficientWindowError, InvalidPlanError, RangeError
from .hdc import cosine_similarity, sign_accuracy
from .uwe import Spectrum, ToneComb, Waveform, _check_grid, synthesize, unitary_dft
from .validation import check_bipolar, check_dense, check_same_dim, sign_binarize

__all__ = [
    "WrapPlan",
    "BinDensity",
    "BindResult",
    "DelaySearchResult",
    "mix",
    "dense_spectrum",
    "baseband_select",
    "spectral_wrap",
    "recover_vector",
    "wave_bind",
    "discrete_bind",
    "delay_search",
    "unbind_recover",
    "WaveBinder",
]


def _round_half_away(v):
    return np.sign(v) * np.floor(np.abs(v) + 0.5)


@dataclass(frozen=True)
class WrapPlan:
    """Low-pass cutoff and modulo-N re-binning rule for one comb.

    ``f_min`` is the lowest comb tone.  When it is known the plan checks
    that ``cutoff`` sits in the guard band between the difference band top
    ``(N - 1) delta_f`` and the sum band bottom ``2 f_min``.
    """

    delta_f: float
    dim: int
    cutoff: float
    band: str = "difference"
    f_min: float = None

    def __post_init__(self):
        if not self.delta_f > 0:
            raise RangeError(f"delta_f must be > 0, got {self.delta_f}")
        if self.dim < 2:
            raise DimensionError(f"dim must be >= 2, got {self.dim}")
        if self.band not in ("difference", "sum"):
            raise InvalidPlanError(f"band must be 'difference' or 'sum', got {self.band!r}")
        if self.f_min is not None:
            lo, hi = self.diff_top, self.sum_bottom
            if not lo < self.cutoff < hi:
                raise InvalidPlanError(
                    f"cutoff {self.cutoff} must lie strictly inside the guard band ({lo}, {hi})"
                )
        elif self.band == "sum":
            raise InvalidPlanError("a sum-band plan needs the comb's lowest tone")

    @classmethod
    def from_comb(cls, comb: ToneComb, cutoff=None, band="difference"):
        """Plan for ``comb``; the default cutoff is ``N * delta_f``."""
        if cutoff is None:
            cutoff = comb.dim * comb.delta_f
        return cls(comb.delta_f, comb.dim, float(cutoff), band, comb.lowest)

    @property
    def diff_top(self):
        return (self.dim - 1) * self.delta_f

    @property
    def sum_bottom(self):
        return 2.0 * self.f_min if self.f_min is not None else math.inf

    @property
    def sum_offset(self):
        return int(_round_half_away(2.0 * self.f_min / self.delta_f))


@dataclass(frozen=True, eq=False)
class BinDensity:
    """Dense spectrum samples on a strictly increasing frequency axis."""

    frequencies: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.complex128)
        if f.shape != v.shape or f.ndim != 1:
            raise DimensionError("frequencies and values must be equal-length 1-D arrays")
        if f.size > 1 and not np.all(np.diff(f) > 0):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)

    def energy(self):
        return float(np.sum(np.abs(self.values) ** 2))


class BindResult(NamedTuple):
    recovered: np.ndarray
    binarized: np.ndarray
    cosine: float
    sign_accuracy: float


class DelaySearchResult(NamedTuple):
    best_delay: float
    cosine: float
    recovered: np.ndarray
    binarized: np.ndarray
    sign_accuracy: float


def mix(a: Waveform, b: Waveform) -> Waveform:
    """Samplewise product of two waveforms on the same grid."""
    _check_grid(a, b)
    return a.replace(a.samples * b.samples)


def dense_spectrum(w: Waveform) -> BinDensity:
    """Orthonormal FFT of the sample block, ordered by increasing frequency."""
    m = w.n_samples
    vals = np.fft.fftshift(np.fft.fft(w.samples, norm="ortho"))
    freqs = np.fft.fftshift(np.fft.fftfreq(m, d=1.0 / w.sample_rate))
    return BinDensity(freqs, vals)


def baseband_select(d: BinDensity, plan: WrapPlan) -> BinDensity:
    """Keep ``|f| <= cutoff`` (difference band) or ``f >= cutoff`` (sum band)."""
    f = d.frequencies
    if plan.band == "difference":
        keep = np.abs(f) <= plan.cutoff
    else:
        keep = f >= plan.cutoff
    return BinDensity(f[keep], d.values[keep])


def spectral_wrap(d: BinDensity, plan: WrapPlan) -> Spectrum:
    """Accumulate every bin into index ``round(f / delta_f) mod N``."""
    idx = _round_half_away(d.frequencies / plan.delta_f).astype(np.int64)
    if plan.band == "sum":
        idx = idx - plan.sum_offset
    out = np.zeros(plan.dim, dtype=np.complex128)
    np.add.at(out, np.mod(idx, plan.dim), d.values)
    return Spectrum(out)


def recover_vector(z_spec):
    """Inverse unitary DFT (real part) plus its sign-thresholded copy."""
    coeffs = z_spec.coefficients if isinstance(z_spec, Spectrum) else np.asarray(z_spec)
    z = unitary_dft(coeffs, "inverse").real
    return z, sign_binarize(z)


def wave_bind(sx: Waveform, sy: Waveform, plan: WrapPlan):
    """mix -> dense spectrum -> band select -> wrap -> recover."""
    d = dense_spectrum(mix(sx, sy))
    return recover_vector(spectral_wrap(baseband_select(d, plan), plan))


def _score(recovered, binarized, target):
    target = np.asarray(target)
    if not np.any(recovered):
        return 0.0, sign_accuracy(binarized, target)
    return cosine_similarity(recovered, target), sign_accuracy(binarized, target)


def discrete_bind(x, y, comb=None, sample_rate=None, cutoff=None) -> BindResult:
    """Bind ``x`` and ``y`` through real-mode waveforms sampled over one period."""
    x = check_bipolar(x, "x")
    y = check_bipolar(y, "y")
    check_same_dim(x, y)
    comb = comb or ToneComb.default(x.size)
    plan = WrapPlan.from_comb(comb, cutoff)
    sx = synthesize(x, comb, sample_rate, mode="real")
    sy = synthesize(y, comb, sample_rate, mode="real")
    z, zb = wave_bind(sx, sy, plan)
    cos, acc = _score(z, zb, x * y)
    return BindResult(z, zb, cos, acc)


def _window(w: Waveform, start: int, m: int):
    if start < 0 or start + m > w.n_samples:
        raise InsufficientWindowError(
            f"window [{start}, {start + m}) overruns a recording of {w.n_samples} samples"
        )
    return Waveform(
        w.samples[start : start + m], w.sample_rate, w.period, w.t_start + start / w.sample_rate
    )


def delay_search(rx_a, rx_b, plan, comb, z_target, candidates) -> DelaySearchResult:
    """Scan window start times and keep the one maximising cosine to ``z_target``.

    ``candidates`` are absolute start times on the recordings' clock.  Each
    window spans exactly one period.  Ties go to the earliest candidate.
    """
    _check_grid(rx_a, rx_b)
    candidates = sorted(float(c) for c in candidates)
    if not candidates:
        raise ValueError("delay_search needs at least one candidate")
    z_target = check_bipolar(z_target, "z_target")
    m = int(round(comb.period * rx_a.sample_rate))
    best = None
    for c in candidates:
        start = int(_round_half_away((c - rx_a.t_start) * rx_a.sample_rate))
        z, zb = wave_bind(_window(rx_a, start, m), _window(rx_b, start, m), plan)
        cos, acc = _score(z, zb, z_target)
        if best is None or cos > best.cosine:
            best = DelaySearchResult(c, cos, z, zb, acc)
    return best


def unbind_recover(z_hat, x):
    """Multiply a recovered composite by the bipolar key ``x``."""
    z_hat = check_dense(z_hat, "z_hat")
    x = check_bipolar(x, "x")
    check_same_dim(z_hat, x)
    y_hat = z_hat * x
    return y_hat, sign_binarize(y_hat)


class WaveBinder(BaseEstimator):
    """Estimator wrapper around the mixing-and-wrapping pipeline.

    ``fit`` only reads the dimension from ``X`` and builds the comb and
    wrap plan; ``bind`` then binds pairs of hypervectors in the wave domain.
    """

    def __init__(self, f_cen=None, delta_f=1.0, sample_rate=None, cutoff=None):
        self.f_cen = f_cen
        self.delta_f = delta_f
        self.sample_rate = sample_rate
        self.cutoff = cutoff

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X))
        dim = X.shape[1]
        f_cen = self.f_cen if self.f_cen is not None else dim * self.delta_f
        self.comb_ = ToneComb.centered(dim, f_cen, self.delta_f)
        self.plan_ = WrapPlan.from_comb(self.comb_, self.cutoff)
        self.n_features_in_ = dim
        return self

    def bind(self, x, y, binarize=True):
        check_is_fitted(self, "comb_")
        x = check_bipolar(x, "x")
        y = check_bipolar(y, "y")
        if x.size != self.n_features_in_:
            raise DimensionError(f"expected dim {self.n_features_in_}, got {x.size}")
        r = discrete_bind(x, y, self.comb_, self.sample_rate, self.plan_.cutoff)
        return r.binarized if binarize else r.recovered
