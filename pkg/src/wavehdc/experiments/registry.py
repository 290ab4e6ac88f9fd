"""Named experiments, their schemas and the result each one reproduces."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from ..exceptions import UsageError
from . import runners
from .config import Param, at_least, fractions_pct, non_negative, parse_config, positive, resolve, seed_range
from .report import ExperimentReport

__all__ = ["Experiment", "REGISTRY", "get_experiment", "run_experiment"]


@dataclass(frozen=True)
class Experiment:
    name: str
    anchor: str
    schema: dict
    body: Callable
    description: str = ""


def _common(seed=42, trials=10):
    return {
        "seed": Param("int", seed, seed_range),
        "trials": Param("int", trials, at_least(1)),
    }


_LISTING_COMB = {
    "f_cen": Param("float", 2.4e9, positive),
    "delta_f": Param("float", 1.0e6, positive),
    "sample_rate": Param("float", 12.0e9, positive),
}

REGISTRY = {
    e.name: e
    for e in [
        Experiment(
            "discrete-bind",
            "discrete mixing/wrapping model: recovered vector indistinguishable from z_target",
            {"dim": Param("int", 32, at_least(2)), **_common(), **_LISTING_COMB},
            runners.discrete_bind_exp,
            "mixing + modulo-N wrapping on ideal sampled waveforms",
        ),
        Experiment(
            "fdtd-bind",
            "2D FDTD binding with frequency planning: cos ~ 0.9990, 100% bits",
            {
                "dim": Param("int", 128, at_least(2)),
                "f_cen": Param("float", 2.5, positive),
                "delta_f": Param("float", 0.01, positive),
                "cutoff": Param("float", 2.0, positive),
                "resolution": Param("float", 25.0, positive),
                "cell_size": Param("pair", (20.0, 10.0), positive),
                "pml_thickness": Param("float", 1.0, positive),
                "source": Param("pair", (-5.0, 0.0)),
                "receiver": Param("pair", (5.0, 0.0)),
                "ramp": Param("float", 5.0, non_negative),
                "search_half_width": Param("int", 10, at_least(0)),
                **_common(trials=1),
            },
            runners.fdtd_bind_exp,
            "two 2D FDTD propagations, then delay-searched binding at the receiver",
        ),
        Experiment(
            "permutation",
            "permutation as time delay: MSE 1.81e-4, cos -0.0117 / -0.0127",
            {
                "dim": Param("int", 1024, at_least(2)),
                "shift": Param("int", 50),
                "delta_f": Param("float", 1.0, positive),
                "seed": Param("int", 42, seed_range),
            },
            runners.permutation_exp,
            "cyclic shift vs waveform time delay on a positive-half comb",
        ),
        Experiment(
            "noise-sweep",
            "binding noise robustness: AWGN 0.9999/0.9994/0.9931, flips 0.95/0.71/0.28",
            {
                "snr_db": Param("floats", (20.0, 10.0, 0.0)),
                "flip_pct": Param("floats", (1.0, 10.0, 20.0), fractions_pct),
                "awgn_dim": Param("int", 32, at_least(2)),
                "flip_dim": Param("int", 128, at_least(2)),
                **_common(),
                **_LISTING_COMB,
            },
            runners.noise_sweep_exp,
            "bind + unbind recovery under waveform AWGN and source bit flips",
        ),
        Experiment(
            "jitter-sweep",
            "phase-jitter tolerance: 0.9782/100, 0.8539/96.88, 0.4378/67.19",
            {
                "sigma_phi": Param("floats", (0.0, 0.1, 0.2, 0.5, 1.0), non_negative),
                "dim": Param("int", 128, at_least(2)),
                "f_cen": Param("float", 2.5, positive),
                "delta_f": Param("float", 0.01, positive),
                "cutoff": Param("float", 2.0, positive),
                **_common(),
            },
            runners.jitter_sweep_exp,
            "independent per-tone phase jitter on both operands, FDTD-free pipeline",
        ),
        Experiment(
            "ccr-arith",
            "readout arithmetic: CCR_cpl ~ 8.7e-5, CCR_sur 2.90e1 / 6.99e3",
            {
                "delta_match": Param("float", 8.8e-5),
                "delta_non": Param("float", -8.6e-5),
                "baseline_match": Param("float", 1.0),
                "baseline_non": Param("float", 1.0),
                "open_p_base": Param("float", -2.342078e-3),
                "open_dp_match": Param("float", -2.061490e-1),
                "open_dp_mismatch": Param("float", -7.022430e-2),
                "baffled_p_base": Param("float", -1.266211e-6),
                "baffled_dp_match": Param("float", -3.614158e-2),
                "baffled_dp_mismatch": Param("float", -1.843098e-2),
            },
            runners.ccr_arith_exp,
            "readout arithmetic on reference power values",
        ),
        Experiment(
            "isolation-surrogate",
            "anisotropic isolation surrogate: baseline -32.67 dB, CCR_sur x241",
            {
                "dim": Param("int", 128, at_least(2)),
                "f_cen": Param("float", 1.0, positive),
                "delta_f": Param("float", 0.01, positive),
                "resolution": Param("float", 20.0, positive),
                "pml_thickness": Param("float", 1.0, positive),
                "l1": Param("pair", (0.0, 0.0)),
                "l2": Param("pair", (4.0, 0.0)),
                "q": Param("pair", (0.0, 4.0)),
                "box_size": Param("float", 1.0, positive),
                "baffle_center": Param("pair", (2.0, 0.0)),
                "baffle_size": Param("pair", (0.4, 40.0), positive),
                "baffle_permittivity": Param("float", 1.0, lambda v: None if v >= 1 else f"must be >= 1, got {v}"),
                "baffle_conductivity": Param("float", 100.0, non_negative),
                "padding": Param("float", 3.0, positive),
                "ramp": Param("float", 5.0, non_negative),
                "settle": Param("float", 15.0, non_negative),
                "with_query": Param("bool", True),
                "seed": Param("int", 42, seed_range),
            },
            runners.isolation_surrogate_exp,
            "baseline/query flux-box protocol, open vs baffled",
        ),
        Experiment(
            "bridge-linearity",
            "power-similarity bridge (dE = 2<x,y>) and e^(-sigma^2/2) jitter attenuation",
            {
                "dim": Param("int", 1000, at_least(2)),
                "n_queries": Param("int", 21, at_least(3)),
                "sigma_phi": Param("floats", (0.2, 0.5, 1.0), non_negative),
                "draws": Param("int", 200, at_least(1)),
                "seed": Param("int", 42, seed_range),
            },
            runners.bridge_linearity_exp,
            "interference energy vs cosine, and its jitter attenuation",
        ),
    ]
}


def get_experiment(name):
    try:
        return REGISTRY[name]
    except KeyError:
        raise UsageError(
            f"unknown experiment {name!r}; registered: {', '.join(REGISTRY)}"
        ) from None


def run_experiment(name, config_text="", overrides=None) -> ExperimentReport:
    """Parse ``config_text`` against the experiment schema and run it."""
    exp = get_experiment(name)
    raw = parse_config(config_text or "")
    params = resolve(exp.schema, raw, overrides)
    t0 = time.perf_counter()
    seeds, rows, summary, passed = exp.body(params)
    return ExperimentReport(
        experiment_name=name,
        provenance=exp.anchor,
        parameters=params,
        seeds=list(seeds),
        rows=rows,
        summary=summary,
        passed=bool(passed),
        wall_time=time.perf_counter() - t0,
    )
