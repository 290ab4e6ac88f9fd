"""Unitary wave embedding of hypervectors into multi-tone waveforms.

A hypervector ``x`` of dimension ``N`` is mapped to its unitary DFT
``X = F x`` and then to the waveform ``s(t) = sum_k X_k phi_k(t)`` with
orthonormal tones ``phi_k(t) = exp(2j pi f_k t) / sqrt(T)`` over one symbol
period ``T = 1 / delta_f``.  Waveform inner products are taken as
``sum(a * conj(b)) * dt``, i.e. the period mean times ``T``, so that the map
is an isometry.

Two comb conventions are supported:

``centered``
    ``f_k = f_cen + (k - (N - 1) / 2) * delta_f`` for ``k = 0..N-1``.
    Analytic (complex) synthesis is an exact isometry; real-mode synthesis
    takes the real part and halves every inner product.

``positive_half``
    Real cosine tones at ``k * delta_f`` for ``k = 0..N/2`` built from the
    Hermitian half-spectrum.  Tone weights ``(1, 2, ..., 2, sqrt(2))`` make
    the real waveform itself an isometry of the vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import (
    ConventionError,
    DimensionError,
    GridMismatchError,
    InsufficientWindowError,
    RangeError,
    SamplingRateError,
)
from .validation import check_bipolar, check_dense, check_same_dim

__all__ = [
    "Convention",
    "ToneComb",
    "Spectrum",
    "Waveform",
    "unitary_dft",
    "default_sample_rate",
    "synthesize",
    "synthesize_spectrum",
    "decode",
    "superpose",
    "time_delay",
    "waveform_inner",
    "interference_energy",
    "UnitaryWaveEmbedding",
]

OVERSAMPLE = 4.0
_INT_TOL = 1e-6


class Convention(str, Enum):
    CENTERED = "centered"
    POSITIVE_HALF = "positive_half"


@dataclass(frozen=True)
class ToneComb:
    """Frequency plan housing ``f_cen``, ``delta_f`` and the dimension ``N``.

    For ``positive_half`` combs ``f_cen`` is the top of the occupied band,
    ``N * delta_f / 2``, matching the relation ``delta_f = 2 f_cen / N``.
    """

    dim: int
    delta_f: float
    f_cen: float = None
    convention: Convention = Convention.CENTERED

    def __post_init__(self):
        object.__setattr__(self, "convention", Convention(self.convention))
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "delta_f", float(self.delta_f))
        if self.dim < 2:
            raise DimensionError(f"comb dim must be >= 2, got {self.dim}")
        if not self.delta_f > 0:
            raise RangeError(f"delta_f must be > 0, got {self.delta_f}")
        if self.convention is Convention.POSITIVE_HALF:
            if self.dim % 2:
                raise DimensionError("positive_half combs need an even dim")
            f_top = self.dim * self.delta_f / 2
            if self.f_cen is not None and not math.isclose(self.f_cen, f_top, rel_tol=1e-9):
                raise RangeError(
                    f"positive_half comb has f_cen = N*delta_f/2 = {f_top}, got {self.f_cen}"
                )
            object.__setattr__(self, "f_cen", f_top)
        else:
            if self.f_cen is None:
                raise RangeError("centered comb needs f_cen")
            object.__setattr__(self, "f_cen", float(self.f_cen))
            if self.lowest <= 0:
                raise RangeError(
                    f"centered comb must be strictly positive; lowest tone is {self.lowest}"
                )

    @classmethod
    def centered(cls, dim, f_cen, delta_f):
        return cls(dim, delta_f, f_cen, Convention.CENTERED)

    @classmethod
    def positive_half(cls, dim, delta_f):
        return cls(dim, delta_f, None, Convention.POSITIVE_HALF)

    @classmethod
    def default(cls, dim):
        """Centered comb with unit spacing whose lowest tone sits at ``(N + 1) / 2``."""
        return cls.centered(dim, f_cen=float(dim), delta_f=1.0)

    @property
    def period(self):
        return 1.0 / self.delta_f

    @property
    def bandwidth(self):
        return self.dim * self.delta_f

    @property
    def lowest(self):
        if self.convention is Convention.POSITIVE_HALF:
            return 0.0
        return self.f_cen - (self.dim - 1) / 2 * self.delta_f

    @property
    def highest(self):
        if self.convention is Convention.POSITIVE_HALF:
            return self.dim / 2 * self.delta_f
        return self.f_cen + (self.dim - 1) / 2 * self.delta_f

    @property
    def frequencies(self):
        if self.convention is Convention.POSITIVE_HALF:
            return np.arange(self.dim // 2 + 1) * self.delta_f
        return self.lowest + np.arange(self.dim) * self.delta_f

    @property
    def tone_weights(self):
        """Real-synthesis weights of the positive-half tones."""
        w = np.full(self.dim // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = math.sqrt(2.0)
        return w


@dataclass(frozen=True, eq=False)
class Spectrum:
    """``N`` complex comb coefficients, optionally tied to a comb."""

    coefficients: np.ndarray
    comb: ToneComb = None

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.ndim != 1:
            raise DimensionError("spectrum coefficients must be one-dimensional")
        if self.comb is not None and c.size != self.comb.dim:
            raise DimensionError(f"spectrum has {c.size} bins, comb has {self.comb.dim}")
        object.__setattr__(self, "coefficients", c)

    @property
    def dim(self):
        return self.coefficients.size

    def is_hermitian(self, atol=1e-12):
        c = self.coefficients
        return bool(np.allclose(c[(-np.arange(c.size)) % c.size], np.conj(c), atol=atol, rtol=0))


@dataclass(frozen=True, eq=False)
class Waveform:
    """Uniformly sampled signal starting at ``t_start`` with symbol period ``period``."""

    samples: np.ndarray
    sample_rate: float
    period: float
    t_start: float = 0.0
    comb: ToneComb = field(default=None, repr=False)

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 1:
            raise DimensionError("waveform samples must be one-dimensional")
        if not np.iscomplexobj(s):
            s = s.astype(np.float64, copy=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "sample_rate", float(self.sample_rate))
        object.__setattr__(self, "period", float(self.period))
        if self.sample_rate <= 0 or self.period <= 0:
            raise RangeError("sample_rate and period must be positive")

    @property
    def n_samples(self):
        return self.samples.size

    @property
    def dt(self):
        return 1.0 / self.sample_rate

    @property
    def duration(self):
        return self.n_samples / self.sample_rate

    @property
    def times(self):
        return self.t_start + np.arange(self.n_samples) / self.sample_rate

    @property
    def is_complex(self):
        return np.iscomplexobj(self.samples)

    @property
    def samples_per_period(self):
        return _samples_per_period(self.sample_rate, self.period)

    def replace(self, samples):
        return Waveform(samples, self.sample_rate, self.period, self.t_start, self.comb)

    def energy(self):
        return waveform_inner(self, self).real


def unitary_dft(v, direction="forward"):
    """DFT with ``1/sqrt(N)`` normalisation so that ``F* F = I``."""
    v = np.asarray(v)
    if v.shape[-1] < 1:
        raise DimensionError("unitary_dft needs N >= 1")
    if direction == "forward":
        return np.fft.fft(v, norm="ortho")
    if direction == "inverse":
        return np.fft.ifft(v, norm="ortho")
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def _samples_per_period(sample_rate, period):
    m = sample_rate * period
    mi = int(round(m))
    if mi < 1 or abs(m - mi) > _INT_TOL * max(1.0, m):
        raise SamplingRateError(
            f"sample_rate * period = {m} is not an integer number of samples"
        )
    return mi


def default_sample_rate(comb, oversample=OVERSAMPLE):
    """Smallest rate >= ``oversample`` x highest tone with a whole number of samples per period."""
    m = int(math.ceil(oversample * comb.highest * comb.period - 1e-9))
    return m / comb.period


def _resolve_rate(comb, sample_rate):
    if sample_rate is None:
        sample_rate = default_sample_rate(comb)
    sample_rate = float(sample_rate)
    need = OVERSAMPLE * comb.highest
    if sample_rate < need * (1 - 1e-12):
        raise SamplingRateError(
            f"sample_rate {sample_rate} is below {OVERSAMPLE:g} x highest tone ({need})"
        )
    m = _samples_per_period(sample_rate, comb.period)
    if m < comb.dim:
        raise SamplingRateError("fewer samples per period than comb tones")
    return sample_rate, m


def synthesize_spectrum(X, comb, sample_rate=None, mode="analytic", duration=None, t_start=0.0):
    """Synthesize the waveform carrying comb coefficients ``X`` (length ``N``)."""
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (comb.dim,):
        raise DimensionError(f"spectrum length {X.shape} does not match comb dim {comb.dim}")
    if mode not in ("analytic", "real"):
        raise ValueError(f"mode must be 'analytic' or 'real', got {mode!r}")
    sample_rate, m = _resolve_rate(comb, sample_rate)
    T = comb.period
    n_total = m if duration is None else int(round(duration * sample_rate))
    if n_total < 1:
        raise InsufficientWindowError("duration shorter than one sample")
    n = np.arange(n_total)
    t = t_start + n / sample_rate
    k = np.arange(comb.dim)

    if comb.convention is Convention.POSITIVE_HALF:
        if mode == "analytic":
            raise ConventionError("positive_half combs synthesize real waveforms only")
        half = comb.dim // 2 + 1
        coef = np.zeros(m, dtype=np.complex128)
        coef[:half] = comb.tone_weights * X[:half] * np.exp(2j * np.pi * k[:half] * comb.delta_f * t_start)
        base = np.fft.ifft(coef) * m / math.sqrt(T)
        return Waveform(base[n % m].real, sample_rate, T, t_start, comb)

    # T-periodic envelope of the comb, then modulated up to the lowest tone
    coef = np.zeros(m, dtype=np.complex128)
    coef[: comb.dim] = X * np.exp(2j * np.pi * k * comb.delta_f * t_start)
    envelope = np.fft.ifft(coef) * m / math.sqrt(T)
    s = envelope[n % m] * np.exp(2j * np.pi * comb.lowest * t)
    if mode == "real":
        s = s.real
    return Waveform(s, sample_rate, T, t_start, comb)


def synthesize(x, comb, sample_rate=None, mode="analytic", duration=None, t_start=0.0):
    """Embed a real vector (typically bipolar) as a multi-tone waveform."""
    x = check_dense(x)
    if x.size != comb.dim:
        raise DimensionError(f"vector dim {x.size} does not match comb dim {comb.dim}")
    return synthesize_spectrum(unitary_dft(x), comb, sample_rate, mode, duration, t_start)


def decode_spectrum(w, comb, mode=None):
    """Project one period of ``w`` onto the comb tones and return ``X`` (length ``N``)."""
    if mode is None:
        mode = "analytic" if w.is_complex else "real"
    m = w.samples_per_period
    if w.n_samples < m:
        raise InsufficientWindowError(
            f"waveform spans {w.n_samples} samples, one period needs {m}"
        )
    if not math.isclose(w.period, comb.period, rel_tol=1e-9):
        raise GridMismatchError("waveform period differs from comb period")
    s = w.samples[:m]
    t = w.t_start + np.arange(m) / w.sample_rate
    T = comb.period
    scale = math.sqrt(T) / m

    if comb.convention is Convention.POSITIVE_HALF:
        half = comb.dim // 2 + 1
        kk = np.arange(half)
        F = np.fft.fft(np.real(s))[:half] * np.exp(-2j * np.pi * kk * comb.delta_f * w.t_start)
        Xh = F * scale * (2.0 / comb.tone_weights)
        Xh[0] = F[0].real * scale
        X = np.zeros(comb.dim, dtype=np.complex128)
        X[:half] = Xh
        X[half:] = np.conj(Xh[1:-1][::-1])
        return X

    k = np.arange(comb.dim)
    if mode == "real":
        two_f0 = 2 * comb.lowest * T
        if abs(two_f0 - round(two_f0)) > _INT_TOL:
            raise ConventionError(
                "real-mode decoding needs 2 * lowest_tone / delta_f to be an integer"
            )
    demod = s * np.exp(-2j * np.pi * comb.lowest * t)
    F = np.fft.fft(demod)[: comb.dim] * np.exp(-2j * np.pi * k * comb.delta_f * w.t_start)
    X = F * scale
    if mode == "real":
        X = 2.0 * X
    return X


def decode(w, comb, mode=None):
    """Inverse of :func:`synthesize`: recover the real ``N``-vector from one period."""
    return unitary_dft(decode_spectrum(w, comb, mode), "inverse").real


def _check_grid(a, b):
    if (
        a.n_samples != b.n_samples
        or not math.isclose(a.sample_rate, b.sample_rate, rel_tol=1e-12)
        or not math.isclose(a.t_start, b.t_start, rel_tol=1e-12, abs_tol=1e-12 / a.sample_rate)
    ):
        raise GridMismatchError("waveforms live on different sample grids")


def superpose(waves):
    """Samplewise sum of waveforms on a common grid."""
    waves = list(waves)
    if not waves:
        raise ValueError("superpose needs at least one waveform")
    first = waves[0]
    for w in waves[1:]:
        _check_grid(first, w)
    total = np.sum([w.samples for w in waves], axis=0)
    return first.replace(total)


def waveform_inner(a, b):
    """``<a, b> = sum(a * conj(b)) * dt`` over the sampled block."""
    _check_grid(a, b)
    return complex(np.vdot(b.samples, a.samples) / a.sample_rate)


def time_delay(w, tau):
    """Circular delay ``s(t) -> s(t - tau)`` rounded to the nearest sample."""
    shift = int(np.floor(tau * w.sample_rate + 0.5))
    return w.replace(np.roll(w.samples, shift % w.n_samples))


def interference_energy(x, y, comb=None, sample_rate=None):
    """``||U x + U y||^2 - ||U x||^2 - ||U y||^2`` from analytic waveforms."""
    x = check_dense(x, "x")
    y = check_dense(y, "y")
    check_same_dim(x, y)
    comb = comb or ToneComb.default(x.size)
    sx = synthesize(x, comb, sample_rate)
    sy = synthesize(y, comb, sample_rate)
    return superpose([sx, sy]).energy() - sx.energy() - sy.energy()


class UnitaryWaveEmbedding(TransformerMixin, BaseEstimator):
    """Transformer mapping rows of hypervectors to sampled UWE waveforms.

    Parameters
    ----------
    f_cen : float or None
        Comb centre for the ``centered`` convention; ``None`` picks
        ``ToneComb.default``.
    delta_f : float
        Tone spacing (the symbol period is ``1 / delta_f``).
    convention : {"centered", "positive_half"}
    sample_rate : float or None
        Defaults to the smallest rate >= 4x the highest tone that fits a
        whole number of samples per period.
    mode : {"analytic", "real"}
    """

    def __init__(self, f_cen=None, delta_f=1.0, convention="centered", sample_rate=None, mode="analytic"):
        self.f_cen = f_cen
        self.delta_f = delta_f
        self.convention = convention
        self.sample_rate = sample_rate
        self.mode = mode

    def _make_comb(self, dim):
        if Convention(self.convention) is Convention.POSITIVE_HALF:
            return ToneComb.positive_half(dim, self.delta_f)
        f_cen = self.f_cen if self.f_cen is not None else dim * self.delta_f
        return ToneComb.centered(dim, f_cen, self.delta_f)

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        self.n_features_in_ = X.shape[1]
        self.comb_ = self._make_comb(X.shape[1])
        self.sample_rate_, self.n_samples_per_period_ = _resolve_rate(self.comb_, self.sample_rate)
        return self

    def transform(self, X):
        check_is_fitted(self, "comb_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DimensionError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return np.stack(
            [synthesize(row, self.comb_, self.sample_rate_, self.mode).samples for row in X]
        )

    def inverse_transform(self, W):
        check_is_fitted(self, "comb_")
        W = np.atleast_2d(np.asarray(W))
        out = []
        for row in W:
            w = Waveform(row, self.sample_rate_, self.comb_.period, 0.0, self.comb_)
            out.append(decode(w, self.comb_, self.mode))
        return np.stack(out)
