"""Three-radiator isolation surrogate: library emitters L1, L2 and an off-axis query Q.

L1 is monitored by a closed flux box.  The runs are

* ``ref``   - L1 alone (``P_ref``),
* ``base``  - L1 and L2,
* ``match`` - L1, L2 and Q driven with L1's hypervector,
* ``mis``   - L1, L2 and Q driven with an independent hypervector.

``p_base`` is the coupling part of the baseline, ``P(base) - P_ref``: the
power L1's box sees only because L2 is present.  The query differentials are
``P(query) - P(base)``.  Q's drive is advanced by its distance to L1 so that
its tones reach L1 in step with L1's own drive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..hdc import random_hypervector
from ..readout import ccr_surrogate, integrate_power
from ..uwe import ToneComb, Waveform, synthesize
from ..validation import derive_seed
from .config import FluxBox, Grid2D, MaterialRegion, SimulationConfig, SourceSpec
from .flux import net_flux_spectrum
from .solver import run_simulation

__all__ = ["SurrogateSetup", "SurrogateResult", "isolation_surrogate_experiment", "run_variants"]


@dataclass(frozen=True)
class SurrogateSetup:
    dim: int = 128
    f_cen: float = 1.0
    delta_f: float = 0.01
    resolution: float = 20.0
    pml_thickness: float = 1.0
    courant: float = 0.5
    l1: tuple = (0.0, 0.0)
    l2: tuple = (4.0, 0.0)
    q: tuple = (0.0, 4.0)
    box_size: float = 1.0
    baffle_center: tuple = (2.0, 0.0)
    # the default baffle is a wall spanning the whole cell height (PML included)
    baffle_size: tuple = (0.4, 40.0)
    baffle_permittivity: float = 1.0
    baffle_conductivity: float = 100.0
    padding: float = 3.0
    ramp: float = 5.0
    settle: float = 15.0
    seed: int = 42

    def comb(self):
        return ToneComb.centered(self.dim, self.f_cen, self.delta_f)

    def baffle(self):
        return MaterialRegion.centered(
            self.baffle_center, self.baffle_size, self.baffle_permittivity, self.baffle_conductivity
        )

    def cell(self):
        pts = np.array([self.l1, self.l2, self.q, self.baffle_center])
        lo = pts.min(axis=0) - self.padding - self.pml_thickness
        hi = pts.max(axis=0) + self.padding + self.pml_thickness
        return tuple(hi - lo), tuple((hi + lo) / 2)


@dataclass
class SurrogateResult:
    variant: str
    p_ref: float
    p_base: float
    p_base_total: float
    dp_match: float
    dp_mismatch: float
    ccr_sur: float
    powers: dict = field(default_factory=dict)


def _drive(v, comb, dt, duration, advance=0.0):
    """Drive sampled at the solver's half steps; ``advance`` shifts it earlier in time."""
    w = synthesize(v, comb, sample_rate=1.0 / dt, mode="real", duration=duration + dt, t_start=0.5 * dt + advance)
    return Waveform(w.samples, w.sample_rate, w.period, 0.5 * dt)


def _box_power(config, materials, sources, setup, comb):
    box = FluxBox(setup.l1, (setup.box_size, setup.box_size), "l1")
    rec = run_simulation(config, materials, sources, [box])
    return integrate_power(net_flux_spectrum(rec["l1"], comb.frequencies))


def isolation_surrogate_experiment(variant="open", setup: SurrogateSetup = SurrogateSetup(), with_query=True):
    """Run the baseline/query protocol for one variant (``open`` or ``baffled``)."""
    if variant not in ("open", "baffled"):
        raise ValueError(f"variant must be 'open' or 'baffled', got {variant!r}")
    comb = setup.comb()
    T = comb.period
    size, center = setup.cell()
    config = SimulationConfig(
        cell_size=size,
        center=center,
        resolution=setup.resolution,
        pml_thickness=setup.pml_thickness,
        courant=setup.courant,
        duration=setup.ramp + setup.settle + T,
        period=T,
    )
    dt = Grid2D(config).dt
    materials = [setup.baffle()] if variant == "baffled" else []

    x1 = random_hypervector(derive_seed(setup.seed, 1), setup.dim)
    x2 = random_hypervector(derive_seed(setup.seed, 2), setup.dim)
    xm = random_hypervector(derive_seed(setup.seed, 3), setup.dim)
    dur = config.duration
    lead = math.dist(setup.q, setup.l1)
    s1 = SourceSpec(setup.l1, _drive(x1, comb, dt, dur), ramp=setup.ramp, label="L1")
    s2 = SourceSpec(setup.l2, _drive(x2, comb, dt, dur), ramp=setup.ramp, label="L2")

    def query(v):
        return SourceSpec(setup.q, _drive(v, comb, dt, dur, lead), ramp=setup.ramp, label="Q")

    powers = {
        "ref": _box_power(config, materials, [s1], setup, comb),
        "base": _box_power(config, materials, [s1, s2], setup, comb),
    }
    if with_query:
        powers["match"] = _box_power(config, materials, [s1, s2, query(x1)], setup, comb)
        powers["mis"] = _box_power(config, materials, [s1, s2, query(xm)], setup, comb)
    else:
        powers["match"] = powers["mis"] = powers["base"]
    p_base = powers["base"] - powers["ref"]
    dp_match = powers["match"] - powers["base"]
    dp_mis = powers["mis"] - powers["base"]
    return SurrogateResult(
        variant, powers["ref"], p_base, powers["base"], dp_match, dp_mis,
        ccr_surrogate(dp_match, dp_mis, p_base), powers,
    )


def run_variants(setup: SurrogateSetup = SurrogateSetup()):
    """Both variants plus the baseline reduction (dB) and CCR ratio."""
    open_ = isolation_surrogate_experiment("open", setup)
    baff = isolation_surrogate_experiment("baffled", setup)
    reduction_db = 10.0 * math.log10(abs(open_.p_base) / abs(baff.p_base))
    return open_, baff, reduction_db, baff.ccr_sur / open_.ccr_sur
