"""Waveform export: ``time,value`` CSV and the compact ``UWE1`` binary block.

Binary layout (little-endian)::

    magic       4s   b"UWE1"
    dim         u32  comb dimension N (0 when no comb is attached)
    f_cen       f64
    delta_f     f64
    sample_rate f64
    convention  u8   0 = centered, 1 = positive_half
    is_complex  u8
    (2 pad bytes)
    t_start     f64
    n_samples   u64
    samples     f64 * n_samples (complex: interleaved re, im)
"""

from __future__ import annotations

import csv
import struct

import numpy as np

from .exceptions import FormatError
from .uwe import Convention, ToneComb, Waveform

__all__ = ["MAGIC", "write_waveform_csv", "read_waveform_csv", "to_bytes", "from_bytes", "save_uwe", "load_uwe"]

MAGIC = b"UWE1"
_HEADER = struct.Struct("<4sIdddBB2xdQ")
_CONV = {Convention.CENTERED: 0, Convention.POSITIVE_HALF: 1}
_CONV_INV = {v: k for k, v in _CONV.items()}


def write_waveform_csv(w: Waveform, path, value_name="value"):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        if w.is_complex:
            out.writerow(["time", f"{value_name}_re", f"{value_name}_im"])
            for t, v in zip(w.times, w.samples):
                out.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])
        else:
            out.writerow(["time", value_name])
            for t, v in zip(w.times, w.samples):
                out.writerow([repr(float(t)), repr(float(v))])


def read_waveform_csv(path, period):
    """Read a ``time,value`` CSV back; the sample rate comes from the time column."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if len(rows) < 3:
        raise FormatError(f"{path}: need a header and at least two samples")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:]])
    except ValueError as exc:
        raise FormatError(f"{path}: non-numeric value") from exc
    t = data[:, 0]
    vals = data[:, 1] + 1j * data[:, 2] if data.shape[1] == 3 else data[:, 1]
    rate = (t.size - 1) / (t[-1] - t[0])
    return Waveform(vals, rate, period, float(t[0]))


def to_bytes(w: Waveform) -> bytes:
    comb = w.comb
    if comb is None:
        dim, f_cen, delta_f, conv = 0, 0.0, 1.0 / w.period, 0
    else:
        dim, f_cen, delta_f, conv = comb.dim, comb.f_cen, comb.delta_f, _CONV[comb.convention]
    header = _HEADER.pack(
        MAGIC, dim, f_cen, delta_f, w.sample_rate, conv, int(w.is_complex), w.t_start, w.n_samples
    )
    if w.is_complex:
        body = np.column_stack([w.samples.real, w.samples.imag]).astype("<f8").tobytes()
    else:
        body = w.samples.astype("<f8").tobytes()
    return header + body


def from_bytes(blob: bytes) -> Waveform:
    if len(blob) < _HEADER.size:
        raise FormatError("truncated UWE1 header")
    magic, dim, f_cen, delta_f, rate, conv, is_cplx, t_start, n = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if conv not in _CONV_INV:
        raise FormatError(f"unknown convention code {conv}")
    width = 2 if is_cplx else 1
    need = _HEADER.size + 8 * width * n
    if len(blob) != need:
        raise FormatError(f"UWE1 block holds {len(blob)} bytes, header implies {need}")
    data = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size).astype(np.float64)
    samples = data[0::2] + 1j * data[1::2] if is_cplx else data
    comb = None
    if dim:
        convention = _CONV_INV[conv]
        comb = ToneComb(dim, delta_f, None if convention is Convention.POSITIVE_HALF else f_cen, convention)
    return Waveform(samples, rate, 1.0 / delta_f, t_start, comb)


def save_uwe(w: Waveform, path):
    with open(path, "wb") as fh:
        fh.write(to_bytes(w))


def load_uwe(path) -> Waveform:
    with open(path, "rb") as fh:
        return from_bytes(fh.read())
