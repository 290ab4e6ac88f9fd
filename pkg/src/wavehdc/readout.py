"""Differential-power readout: flux integration, two-run differencing, CCR, kappa.

Similarity is read out as the change in radiated power between a run with
the query emitter on and a baseline run without it.  For ideal emitters the
change is ``2 kappa <x, y>``; phase jitter of RMS ``sigma`` scales it by
``exp(-sigma**2 / 2)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import (
    CalibrationError,
    DegenerateFitError,
    EmptyInputError,
    FormatError,
    GridMismatchError,
    RangeError,
)

__all__ = [
    "FluxReading",
    "DifferentialPower",
    "ReadoutCalibration",
    "integrate_power",
    "delta_power",
    "ccr",
    "ccr_surrogate",
    "calibrate_kappa",
    "predict_delta_p",
    "equivalent_gflops",
    "read_flux_csv",
    "write_flux_csv",
    "KappaRegressor",
]


@dataclass(frozen=True, eq=False)
class FluxReading:
    """Signed net outward power per frequency bin.

    ``band_width`` defaults to ``n_bins * spacing`` for a uniform grid (or 1
    for a single bin), so that the rectangle rule uses the grid spacing.
    """

    frequencies: np.ndarray
    net_power: np.ndarray
    source_id: str = ""
    band_width: float = None

    def __post_init__(self):
        f = np.atleast_1d(np.asarray(self.frequencies, dtype=np.float64))
        p = np.atleast_1d(np.asarray(self.net_power, dtype=np.float64))
        if f.shape != p.shape or f.ndim != 1:
            raise GridMismatchError("frequencies and net_power must be equal-length 1-D arrays")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "net_power", p)
        if self.band_width is None:
            bw = f.size * (f[1] - f[0]) if f.size > 1 else 1.0
            object.__setattr__(self, "band_width", float(bw))

    @property
    def n_bins(self):
        return self.frequencies.size


@dataclass(frozen=True)
class DifferentialPower:
    raw: float
    normalized: float
    p_ref: float


@dataclass(frozen=True)
class ReadoutCalibration:
    kappa: float
    fit_residual: float


def integrate_power(r: FluxReading) -> float:
    """Rectangle rule ``sum(P) * band_width / n``."""
    if r.n_bins == 0:
        raise EmptyInputError("flux reading has no bins")
    return float(np.sum(r.net_power) * (r.band_width / r.n_bins))


def delta_power(query: FluxReading, baseline: FluxReading, p_ref: float) -> DifferentialPower:
    if query.frequencies.shape != baseline.frequencies.shape or not np.array_equal(
        query.frequencies, baseline.frequencies
    ):
        raise GridMismatchError("query and baseline readings use different frequency grids")
    if query.band_width != baseline.band_width:
        raise GridMismatchError("query and baseline readings use different band widths")
    if not p_ref > 0:
        raise CalibrationError(f"p_ref must be > 0, got {p_ref}")
    raw = integrate_power(query) - integrate_power(baseline)
    return DifferentialPower(raw, raw / p_ref, float(p_ref))


def ccr(delta_match, delta_non, baseline_match_norm, baseline_non_norm):
    """``|dP_match - dP_non| / (B_match + B_non)``; all four in the same units."""
    den = baseline_match_norm + baseline_non_norm
    if not den > 0:
        raise CalibrationError(f"baseline sum must be > 0, got {den}")
    return abs(delta_match - delta_non) / den


def ccr_surrogate(delta_match, delta_mis, p_base):
    """``|dP_match - dP_mis| / (2 |P_base|)``."""
    if p_base == 0:
        raise CalibrationError("baseline power is zero")
    return abs(delta_match - delta_mis) / (2.0 * abs(p_base))


def calibrate_kappa(pairs) -> ReadoutCalibration:
    """Through-origin least squares for ``dP = 2 kappa <x, y>``.

    ``fit_residual`` is the RMS of the fit residuals.
    """
    arr = np.asarray(list(pairs), dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise DegenerateFitError("need at least two (inner, delta_p) pairs")
    inner, dp = arr[:, 0], arr[:, 1]
    if np.all(inner == inner[0]):
        raise DegenerateFitError("all inner products are equal")
    u = 2.0 * inner
    kappa = float(np.dot(u, dp) / np.dot(u, u))
    resid = float(np.sqrt(np.mean((dp - kappa * u) ** 2)))
    return ReadoutCalibration(kappa, resid)


def predict_delta_p(kappa, inner, sigma_phi=0.0):
    if sigma_phi < 0:
        raise RangeError(f"sigma_phi must be >= 0, got {sigma_phi}")
    return 2.0 * kappa * math.exp(-(sigma_phi**2) / 2.0) * inner


def equivalent_gflops(library_size, dim, latency_seconds):
    """Dot-product throughput proxy ``L (2N - 1) / (latency * 1e9)``."""
    if library_size <= 0 or dim <= 0 or latency_seconds <= 0:
        raise RangeError("library_size, dim and latency must all be positive")
    return library_size * (2 * dim - 1) / (latency_seconds * 1e9)


def write_flux_csv(r: FluxReading, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frequency", "net_power"])
        for f, p in zip(r.frequencies, r.net_power):
            w.writerow([repr(float(f)), repr(float(p))])


def read_flux_csv(path, source_id=""):
    freqs, power = [], []
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
    if not rows or [c.strip() for c in rows[0]] != ["frequency", "net_power"]:
        raise FormatError(f"{path}: expected header 'frequency,net_power'")
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            f, p = (float(c) for c in row)
        except ValueError as exc:
            raise FormatError(f"{path}: bad row {lineno}: {row}") from exc
        freqs.append(f)
        power.append(p)
    return FluxReading(np.array(freqs), np.array(power), source_id or str(path))


class KappaRegressor(RegressorMixin, BaseEstimator):
    """Fits ``dP = 2 kappa <x, y>`` with ``X`` holding the inner products."""

    def fit(self, X, y):
        X = check_array(X, ensure_2d=False, dtype=np.float64).reshape(-1)
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        cal = calibrate_kappa(np.column_stack([X, y]))
        self.kappa_ = cal.kappa
        self.fit_residual_ = cal.fit_residual
        self.n_features_in_ = 1
        return self

    def predict(self, X, sigma_phi=0.0):
        check_is_fitted(self, "kappa_")
        X = check_array(X, ensure_2d=False, dtype=np.float64).reshape(-1)
        return 2.0 * self.kappa_ * math.exp(-(sigma_phi**2) / 2.0) * X
