"""Flux-box face recordings and their post-hoc spectral Poynting flux."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import GridMismatchError, InsufficientWindowError
from ..readout import FluxReading

__all__ = ["FluxRecording", "net_flux_spectrum", "FACES"]

FACES = ("x-", "x+", "y-", "y+")


@dataclass(eq=False)
class FluxRecording:
    """Tangential fields on the four faces of a flux box.

    ``e[face]`` holds face-averaged ``Ez`` samples at ``t_e``; ``h[face]``
    holds the face-normal-tangent ``H`` component (``Hy`` on x faces,
    ``Hx`` on y faces) at ``t_h``.  Rows are time, columns are face cells.
    """

    label: str
    dx: float
    t_e: np.ndarray
    t_h: np.ndarray
    e: dict
    h: dict

    @property
    def window(self):
        return self.t_e.size * (self.t_e[1] - self.t_e[0]) if self.t_e.size > 1 else 0.0


def _phasors(samples, times, freqs, window):
    # amplitude phasor a such that the tone is Re(a exp(2j pi f t))
    basis = np.exp(-2j * np.pi * np.outer(times, freqs))
    dt = times[1] - times[0]
    return (2.0 * dt / window) * (basis.T @ samples)


def net_flux_spectrum(rec: FluxRecording, frequencies, band_width=None, source_id=None) -> FluxReading:
    """Signed net outward time-averaged power per frequency.

    ``(F_x+ - F_x-) + (F_y+ - F_y-)`` with ``S = (-Ez Hy, Ez Hx)`` and
    per-tone power ``Re(a_E conj(a_H)) / 2`` integrated along each face.
    """
    freqs = np.atleast_1d(np.asarray(frequencies, dtype=np.float64))
    if rec.t_e.size < 2:
        raise InsufficientWindowError(f"flux box {rec.label!r} recorded fewer than two samples")
    if rec.t_e.size != rec.t_h.size:
        raise GridMismatchError("E and H face recordings differ in length")
    for face in FACES:
        if rec.e[face].shape != rec.h[face].shape or rec.e[face].shape[0] != rec.t_e.size:
            raise GridMismatchError(f"face {face} recordings have mismatched lengths")
    window = rec.window
    flux = {}
    for face in FACES:
        ae = _phasors(rec.e[face], rec.t_e, freqs, window)
        ah = _phasors(rec.h[face], rec.t_h, freqs, window)
        p = 0.5 * np.real(ae * np.conj(ah)).sum(axis=1) * rec.dx
        flux[face] = -p if face[0] == "x" else p
    net = (flux["x+"] - flux["x-"]) + (flux["y+"] - flux["y-"])
    if band_width is None and freqs.size > 1:
        band_width = freqs.size * (freqs[1] - freqs[0])
    return FluxReading(freqs, net, source_id or rec.label, band_width)
