"""Leapfrog TMz time stepping with soft sources and recording monitors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import GeometryError
from ..uwe import Waveform
from . import kernels
from .config import FluxBox, Grid2D, PointReceiver, SimulationConfig
from .flux import FACES, FluxRecording

__all__ = ["Recordings", "run_simulation"]

_DTYPE = np.float32


@dataclass(eq=False)
class Recordings:
    grid: Grid2D
    points: dict = field(default_factory=dict)
    flux: dict = field(default_factory=dict)
    energy: tuple = None

    def __getitem__(self, label):
        if label in self.points:
            return self.points[label]
        return self.flux[label]


class _FluxState:
    def __init__(self, grid, box: FluxBox):
        self.box = box
        self.ia, self.ib, self.ja, self.jb = grid.box_nodes(box)
        cfg = grid.config
        window = box.window if box.window is not None else cfg.period
        if window is None:
            raise GeometryError(f"flux box {box.label!r} needs a window or a config period")
        n_win = int(round(window / grid.dt))
        start = box.window_start
        if start is None:
            start = grid.n_steps * grid.dt - n_win * grid.dt
        # E is stored at (n + 1) dt, H at (n + 1/2) dt for step n
        self.n0 = max(0, int(math.ceil(start / grid.dt - 1e-9)) - 1)
        self.n1 = self.n0 + n_win
        if self.n1 > grid.n_steps:
            raise GeometryError(f"flux box {box.label!r} window extends past the end of the run")
        nxf = self.jb - self.ja + 1
        nyf = self.ib - self.ia + 1
        self.e = {f: np.zeros((n_win, nxf if f[0] == "x" else nyf)) for f in FACES}
        self.h = {f: np.zeros((n_win, nxf if f[0] == "x" else nyf)) for f in FACES}

    def record_h(self, n, hx, hy):
        if not self.n0 <= n < self.n1:
            return
        k = n - self.n0
        ia, ib, ja, jb = self.ia, self.ib, self.ja, self.jb
        self.h["x-"][k] = hy[ia - 1, ja : jb + 1]
        self.h["x+"][k] = hy[ib, ja : jb + 1]
        self.h["y-"][k] = hx[ia : ib + 1, ja - 1]
        self.h["y+"][k] = hx[ia : ib + 1, jb]

    def record_e(self, n, ez):
        if not self.n0 <= n < self.n1:
            return
        k = n - self.n0
        ia, ib, ja, jb = self.ia, self.ib, self.ja, self.jb
        e64 = lambda a: a.astype(np.float64)
        self.e["x-"][k] = 0.5 * (e64(ez[ia - 1, ja : jb + 1]) + ez[ia, ja : jb + 1])
        self.e["x+"][k] = 0.5 * (e64(ez[ib, ja : jb + 1]) + ez[ib + 1, ja : jb + 1])
        self.e["y-"][k] = 0.5 * (e64(ez[ia : ib + 1, ja - 1]) + ez[ia : ib + 1, ja])
        self.e["y+"][k] = 0.5 * (e64(ez[ia : ib + 1, jb]) + ez[ia : ib + 1, jb + 1])

    def result(self, dt, dx):
        steps = np.arange(self.n0, self.n1)
        return FluxRecording(
            self.box.label, dx, (steps + 1.0) * dt, (steps + 0.5) * dt, self.e, self.h
        )


def run_simulation(config: SimulationConfig, materials=(), sources=(), monitors=(), energy_every=None):
    """Advance the fields for ``ceil(duration / dt)`` steps and return all recordings.

    Point receivers yield :class:`Waveform` objects sampled at ``(n + 1) dt``.
    With ``energy_every`` the total field energy is sampled every that many
    steps.
    """
    grid = Grid2D(config)
    nx, ny = grid.shape
    dt, dx = grid.dt, grid.dx

    eps, sig = grid.materials(materials)
    loss = sig * dt / (2.0 * eps)
    ca = ((1.0 - loss) / (1.0 + loss)).astype(_DTYPE)
    cb = ((dt / eps) / (1.0 + loss)).astype(_DTYPE)

    src_nodes = [grid.check_point(s.position, f"source {s.label or k}") for k, s in enumerate(sources)]
    drive_t = (np.arange(grid.n_steps) + 0.5) * dt
    drives = [s.values(drive_t) / dx**2 for s in sources]

    points = []
    for m in monitors:
        if isinstance(m, PointReceiver):
            points.append((m, grid.check_point(m.position, f"receiver {m.label}"), np.zeros(grid.n_steps)))
    boxes = [_FluxState(grid, m) for m in monitors if isinstance(m, FluxBox)]

    ez = np.zeros((nx, ny), _DTYPE)
    hx = np.zeros((nx, ny - 1), _DTYPE)
    hy = np.zeros((nx - 1, ny), _DTYPE)
    psi_ezx = np.zeros_like(ez)
    psi_ezy = np.zeros_like(ez)
    psi_hxy = np.zeros_like(hx)
    psi_hyx = np.zeros_like(hy)
    ((bx_e, ax_e), (bx_h, ax_h)), ((by_e, ay_e), (by_h, ay_h)) = grid.pml_profiles()
    prof = [a.astype(_DTYPE) for a in (bx_e, ax_e, bx_h, ax_h, by_e, ay_e, by_h, ay_h)]
    bx_e, ax_e, bx_h, ax_h, by_e, ay_e, by_h, ay_h = prof
    c_h = _DTYPE(dt / dx)
    inv_dx = _DTYPE(1.0 / dx)
    npml = grid.npml
    eps32 = eps.astype(_DTYPE)
    energy_t, energy_v = [], []

    for n in range(grid.n_steps):
        kernels.update_h(ez, hx, hy, c_h)
        kernels.pml_h(ez, hx, hy, psi_hxy, psi_hyx, bx_h, ax_h, by_h, ay_h, c_h, npml, npml)
        for b in boxes:
            b.record_h(n, hx, hy)
        sample_energy = energy_every and (n + 1) % energy_every == 0
        if sample_energy:
            ez_prev = ez.copy()
        kernels.update_e(ez, hx, hy, ca, cb, inv_dx)
        kernels.pml_e(ez, hx, hy, psi_ezx, psi_ezy, bx_e, ax_e, by_e, ay_e, cb, inv_dx, npml, npml)
        for (i, j), d in zip(src_nodes, drives):
            ez[i, j] -= cb[i, j] * d[n]
        for m, (i, j), buf in points:
            buf[n] = ez[i, j]
        for b in boxes:
            b.record_e(n, ez)
        if sample_energy:
            energy_t.append((n + 1) * dt)
            energy_v.append(kernels.field_energy(ez_prev, ez, hx, hy, eps32, dx))

    rec = Recordings(grid)
    period = config.period or grid.n_steps * dt
    for m, _, buf in points:
        rec.points[m.label] = Waveform(buf, 1.0 / dt, period, dt)
    for b in boxes:
        rec.flux[b.box.label] = b.result(dt, dx)
    if energy_every:
        rec.energy = (np.array(energy_t), np.array(energy_v))
    return rec
