"""Engine self-checks: boundary absorption, flux consistency, propagation speed, passivity.

Each check returns a small dataclass with the measured figure and a
``passed`` flag against its threshold.  Units are normalized (c = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import FluxBox, MaterialRegion, PointReceiver, SimulationConfig, SourceSpec, gaussian_pulse
from .flux import net_flux_spectrum
from .solver import run_simulation

__all__ = [
    "HealthCheck",
    "pml_reflection_db",
    "nested_flux_agreement",
    "arrival_time",
    "passivity",
    "run_health_checks",
]


@dataclass
class HealthCheck:
    name: str
    value: float
    threshold: float
    passed: bool
    detail: dict

    def __post_init__(self):
        self.value, self.passed = float(self.value), bool(self.passed)


def _probe(width, resolution, pml, duration, offset):
    cfg = SimulationConfig(cell_size=(width, width), resolution=resolution, pml_thickness=pml, duration=duration)
    src = SourceSpec((0.0, 0.0), gaussian_pulse(1.5, 0.25))
    rec = run_simulation(cfg, [], [src], [PointReceiver((offset, 0.0), "p")])
    return rec["p"].samples


def pml_reflection_db(resolution=20.0, pml_thickness=1.0, threshold_db=-40.0) -> HealthCheck:
    """Energy of the boundary echo relative to the free-space signal at a probe near the PML.

    The reference is the same probe in a cell wide enough that no echo
    returns within the recording.
    """
    duration, offset = 14.0, 2.5
    near = _probe(8.0, resolution, pml_thickness, duration, offset)
    ref = _probe(2.0 * (duration + offset) + 2 * pml_thickness + 2.0, resolution, pml_thickness, duration, offset)
    db = 10.0 * math.log10(np.sum((near - ref) ** 2) / np.sum(ref**2))
    return HealthCheck("pml_reflection_db", db, threshold_db, db <= threshold_db, {"resolution": resolution})


def nested_flux_agreement(resolution=20.0, sizes=(1.0, 4.0), tolerance=0.05) -> HealthCheck:
    """Net power of one CW source seen through two concentric boxes."""
    cfg = SimulationConfig(cell_size=(12.0, 12.0), resolution=resolution, pml_thickness=1.5, duration=14.0, period=1.0)
    src = SourceSpec((0.0, 0.0), lambda t: np.sin(2 * np.pi * t), ramp=3.0)
    boxes = [FluxBox((0.0, 0.0), (s, s), f"box{k}", window=4.0) for k, s in enumerate(sizes)]
    empty = FluxBox((3.0, 0.0), (1.0, 1.0), "empty", window=4.0)
    rec = run_simulation(cfg, [], [src], boxes + [empty])
    powers = [float(net_flux_spectrum(rec[b.label], [1.0]).net_power[0]) for b in boxes]
    spread = (max(powers) - min(powers)) / abs(np.mean(powers))
    leak = float(net_flux_spectrum(rec["empty"], [1.0]).net_power[0])
    return HealthCheck(
        "nested_flux_agreement", spread, tolerance, spread <= tolerance,
        {"powers": powers, "empty_box_power": leak, "analytic": 2 * np.pi / 8.0},
    )


def _half_max_crossing(w):
    v = np.abs(w.samples)
    k = int(np.argmax(v >= 0.5 * v.max()))
    if k == 0:
        return w.times[0]
    # linear interpolation between the bracketing samples
    t0, t1 = w.times[k - 1], w.times[k]
    v0, v1 = v[k - 1], v[k]
    return t0 + (0.5 * v.max() - v0) / (v1 - v0) * (t1 - t0)


def arrival_time(distance=10.0, resolution=20.0, width=0.3, tolerance=0.02) -> HealthCheck:
    """Time of flight of a Gaussian pulse between two receivers on a line.

    The pulse front is timed by its half-maximum crossing at each receiver,
    so the source's own near-field and the 2D wake cancel out.
    """
    x_src = -distance / 2 - 2.0
    cfg = SimulationConfig(cell_size=(distance + 8.0, 6.0), resolution=resolution, pml_thickness=1.0, duration=distance + 10.0)
    src = SourceSpec((x_src, 0.0), gaussian_pulse(1.5, width, derivative=False))
    rx = [PointReceiver((x_src + 1.0, 0.0), "a"), PointReceiver((x_src + 1.0 + distance, 0.0), "b")]
    rec = run_simulation(cfg, [], [src], rx)
    tof = _half_max_crossing(rec["b"]) - _half_max_crossing(rec["a"])
    err = abs(tof - distance) / distance
    return HealthCheck("arrival_time", err, tolerance, err <= tolerance, {"time_of_flight": tof, "distance": distance})


def passivity(resolution=20.0, source_off=3.5, duration=30.0) -> HealthCheck:
    """Largest step-to-step rise of the stored field energy after the source falls silent.

    A lossy block and a dielectric block sit in the cell so that the check
    covers both material updates.
    """
    cfg = SimulationConfig(cell_size=(10.0, 10.0), resolution=resolution, pml_thickness=1.0, duration=duration)
    src = SourceSpec((-1.0, 0.0), gaussian_pulse(1.5, 0.3))
    mats = [
        MaterialRegion.centered((2.0, 0.0), (0.4, 2.0), 1.0, 10.0),
        MaterialRegion.centered((-2.0, 2.0), (1.0, 1.0), 4.0, 0.0),
    ]
    rec = run_simulation(cfg, mats, [src], [], energy_every=1)
    t, e = rec.energy
    tail = e[t > source_off]
    rise = float(np.max(np.diff(tail)) / tail[0]) if tail.size > 1 else 0.0
    return HealthCheck(
        "passivity", rise, 0.0, rise <= 0.0,
        {"energy_start": float(tail[0]), "energy_end": float(tail[-1]), "increases": int(np.sum(np.diff(tail) > 0))},
    )


def run_health_checks(resolution=20.0):
    return [
        pml_reflection_db(resolution),
        nested_flux_agreement(resolution),
        arrival_time(resolution=resolution),
        passivity(resolution),
    ]
