"""Geometry, materials, sources and monitors for the 2D TMz solver.

Units are normalized with ``c = eps0 = mu0 = 1``.  The cell includes its
PML; ``pml_thickness`` is measured inward from every edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from ..exceptions import GeometryError, RangeError, StabilityError
from ..uwe import Waveform

__all__ = [
    "SimulationConfig",
    "Grid2D",
    "MaterialRegion",
    "SourceSpec",
    "PointReceiver",
    "FluxBox",
    "gaussian_pulse",
]

MAX_COURANT = 0.5


@dataclass(frozen=True)
class SimulationConfig:
    """World parameters.

    ``period`` (with optional ``samples_per_period``) pins the time step so
    that one period holds a whole number of steps, and that number is a
    multiple of ``samples_per_period``.  The step never exceeds
    ``courant * dx / sqrt(2)``.
    """

    cell_size: tuple = (20.0, 10.0)
    resolution: float = 25.0
    pml_thickness: float = 1.0
    courant: float = 0.5
    duration: float = 100.0
    center: tuple = (0.0, 0.0)
    period: float = None
    samples_per_period: int = None
    pml_reflection: float = 1e-8
    pml_order: int = 3
    pml_alpha: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "cell_size", tuple(float(v) for v in self.cell_size))
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        if not 0 < self.courant <= MAX_COURANT:
            raise StabilityError(f"courant factor must lie in (0, {MAX_COURANT}], got {self.courant}")
        if self.resolution <= 0 or self.duration <= 0:
            raise RangeError("resolution and duration must be positive")
        if min(self.cell_size) <= 0:
            raise GeometryError("cell_size must be positive")
        if self.pml_thickness < 0.5:
            raise GeometryError(f"pml_thickness must be >= 0.5, got {self.pml_thickness}")
        if 2 * self.pml_thickness >= min(self.cell_size):
            raise GeometryError("PML layers do not fit inside the cell")
        if self.period is not None and self.period <= 0:
            raise RangeError("period must be positive")


@dataclass(frozen=True)
class MaterialRegion:
    """Axis-aligned rectangle ``[x0, x1] x [y0, y1]`` of relative permittivity and conductivity."""

    x0: float
    y0: float
    x1: float
    y1: float
    permittivity: float = 1.0
    conductivity: float = 0.0

    def __post_init__(self):
        if self.x1 <= self.x0 or self.y1 <= self.y0:
            raise GeometryError("material rectangle must have positive extent")
        if self.permittivity < 1:
            raise RangeError(f"permittivity must be >= 1, got {self.permittivity}")
        if self.conductivity < 0:
            raise RangeError(f"conductivity must be >= 0, got {self.conductivity}")

    @classmethod
    def centered(cls, center, size, permittivity=1.0, conductivity=0.0):
        cx, cy = center
        w, h = size
        return cls(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2, permittivity, conductivity)


Drive = Union[Waveform, Callable]


@dataclass(frozen=True, eq=False)
class SourceSpec:
    """Soft out-of-plane current at the node nearest ``position``.

    ``drive`` is a :class:`Waveform` (read at ``t - start_time``, zero outside
    its span) or a callable of time.  ``ramp`` applies a ``sin^2`` turn-on of
    that length starting at ``start_time``.
    """

    position: tuple
    drive: Drive
    start_time: float = 0.0
    amplitude: float = 1.0
    ramp: float = 0.0
    label: str = ""

    def values(self, t):
        """Drive current at absolute times ``t``."""
        t = np.asarray(t, dtype=np.float64)
        rel = t - self.start_time
        if isinstance(self.drive, Waveform):
            w = self.drive
            pos = (rel - w.t_start) * w.sample_rate
            idx = np.rint(pos)
            if np.allclose(pos, idx, atol=1e-6, rtol=0):
                k = idx.astype(np.int64)
                inside = (k >= 0) & (k < w.n_samples)
                out = np.zeros(t.shape)
                out[inside] = np.real(w.samples[k[inside]])
            else:
                out = np.interp(rel, w.times, np.real(w.samples), left=0.0, right=0.0)
        else:
            out = np.asarray(self.drive(rel), dtype=np.float64) * (rel >= 0)
        if self.ramp > 0:
            r = np.clip(rel / self.ramp, 0.0, 1.0)
            out = out * np.sin(0.5 * np.pi * r) ** 2
        return self.amplitude * out


@dataclass(frozen=True)
class PointReceiver:
    position: tuple
    label: str = "rx"


@dataclass(frozen=True)
class FluxBox:
    """Closed rectangular flux contour around ``center``.

    Face fields are recorded only for ``window_start <= t < window_start +
    window``; ``window`` defaults to the config period.
    """

    center: tuple
    size: tuple
    label: str = "box"
    window_start: float = None
    window: float = None


def gaussian_pulse(t0, width, derivative=True):
    """Gaussian (or its first derivative) centered at ``t0``; useful broadband probe."""

    def f(t):
        u = (np.asarray(t) - t0) / width
        g = np.exp(-(u**2))
        return -2.0 * u * g if derivative else g

    return f


class Grid2D:
    """Discretised world derived from a :class:`SimulationConfig`."""

    def __init__(self, config: SimulationConfig):
        self.config = config
        res = config.resolution
        self.dx = 1.0 / res
        w, h = config.cell_size
        self.nx = int(round(w * res)) + 1
        self.ny = int(round(h * res)) + 1
        self.x_min = config.center[0] - w / 2
        self.y_min = config.center[1] - h / 2
        self.npml = int(round(config.pml_thickness * res))
        dt_max = config.courant * self.dx / math.sqrt(2.0)
        if config.period is not None:
            m = config.samples_per_period or 1
            r = math.ceil(config.period / m / dt_max - 1e-9)
            self.steps_per_period = m * r
            self.decimation = r
            self.dt = config.period / self.steps_per_period
        else:
            self.steps_per_period = None
            self.decimation = 1
            self.dt = dt_max
        self.n_steps = int(math.ceil(config.duration / self.dt - 1e-9))

    @property
    def shape(self):
        return self.nx, self.ny

    @property
    def effective_courant(self):
        return self.dt * math.sqrt(2.0) / self.dx

    def node_x(self, i):
        return self.x_min + np.asarray(i) * self.dx

    def node_y(self, j):
        return self.y_min + np.asarray(j) * self.dx

    def node_index(self, pos):
        i = int(round((pos[0] - self.x_min) / self.dx))
        j = int(round((pos[1] - self.y_min) / self.dx))
        return i, j

    def in_interior(self, i, j, margin=1):
        """Strictly inside the non-PML region with ``margin`` spare cells."""
        lo = self.npml + margin
        return lo <= i <= self.nx - 1 - lo and lo <= j <= self.ny - 1 - lo

    def check_point(self, pos, what):
        i, j = self.node_index(pos)
        if not self.in_interior(i, j):
            raise GeometryError(f"{what} at {tuple(pos)} is not strictly inside the non-PML region")
        return i, j

    def box_nodes(self, box: FluxBox):
        """Node index ranges ``(ia, ib, ja, jb)`` enclosed by the box's half-integer faces."""
        cx, cy = box.center
        w, h = box.size
        if w <= 0 or h <= 0:
            raise GeometryError("flux box must have positive size")
        # faces snap outward to the nearest half-integer positions
        ia = int(math.floor((cx - w / 2 - self.x_min) / self.dx - 0.5 + 1e-9)) + 1
        ib = int(math.ceil((cx + w / 2 - self.x_min) / self.dx - 0.5 - 1e-9))
        ja = int(math.floor((cy - h / 2 - self.y_min) / self.dx - 0.5 + 1e-9)) + 1
        jb = int(math.ceil((cy + h / 2 - self.y_min) / self.dx - 0.5 - 1e-9))
        # faces at ia - 1/2, ib + 1/2: need nodes ia - 1 and ib + 1 in the interior
        if ib < ia or jb < ja:
            raise GeometryError("flux box is smaller than one cell")
        if not (self.in_interior(ia - 1, ja - 1, 0) and self.in_interior(ib + 1, jb + 1, 0)):
            raise GeometryError(f"flux box {box.label!r} reaches into the PML")
        return ia, ib, ja, jb

    def materials(self, regions):
        eps = np.ones(self.shape)
        sig = np.zeros(self.shape)
        X = self.node_x(np.arange(self.nx))[:, None]
        Y = self.node_y(np.arange(self.ny))[None, :]
        tol = 1e-9 * self.dx
        for r in regions:
            # Ez nodes on or inside the closed rectangle take its material
            mask = (X + tol >= r.x0) & (X - tol <= r.x1) & (Y + tol >= r.y0) & (Y - tol <= r.y1)
            eps[mask] = r.permittivity
            sig[mask] = r.conductivity
        return eps, sig

    def pml_profiles(self):
        """CPML ``(b, a)`` arrays along one axis for integer and half-integer positions."""
        cfg = self.config
        n = self.npml
        d = n * self.dx
        m = cfg.pml_order
        sigma_max = -(m + 1) * math.log(cfg.pml_reflection) / (2.0 * d)

        def coeffs(depth):
            depth = np.clip(depth, 0.0, 1.0)
            sigma = sigma_max * depth**m
            alpha = cfg.pml_alpha * (1.0 - depth) * (depth > 0)
            b = np.exp(-(sigma + alpha) * self.dt)
            with np.errstate(invalid="ignore", divide="ignore"):
                a = np.where(sigma > 0, sigma / (sigma + alpha) * (b - 1.0), 0.0)
            return b, a

        def axis(count):
            k = np.arange(count, dtype=np.float64)
            last = count - 1
            d_int = np.maximum(n - k, k - (last - n)) / n
            kh = k[:-1] + 0.5
            d_half = np.maximum(n - kh, kh - (last - n)) / n
            return coeffs(d_int), coeffs(d_half)

        return axis(self.nx), axis(self.ny)
