"""The twelve acceptance criteria as callable checks.

Shared by the test-suite and the ``wavehdc acceptance`` meta-command.  Each
check returns a :class:`CriterionResult`; none of them raise on failure.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from ..binding import discrete_bind
from ..hdc import random_hypervector
from ..uwe import ToneComb, interference_energy, synthesize, waveform_inner
from ..validation import derive_seed
from .registry import run_experiment

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all"]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    runtime: float
    limit: float
    measured: dict = field(default_factory=dict)

    @property
    def within_time(self):
        return self.runtime <= self.limit

    def line(self):
        status = "PASS" if self.passed and self.within_time else "FAIL"
        facts = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{status}] {self.number:2d} {self.name} ({self.runtime:.1f}s / {self.limit:g}s): {facts}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def isometry(seed=42):
    worst = {}
    ok = True
    for n in (32, 256, 1024):
        comb = ToneComb.default(n)
        err = 0.0
        for k in range(100):
            x = random_hypervector(derive_seed(seed, n, k, 0), n)
            y = random_hypervector(derive_seed(seed, n, k, 1), n)
            got = waveform_inner(synthesize(x, comb), synthesize(y, comb)).real
            err = max(err, abs(got - float(x.astype(np.float64) @ y)))
        worst[f"max_err_N{n}"] = err
        ok &= err <= 1e-9 * n
    return ok, worst


def bridge(seed=42):
    n = 1000
    worst = 0.0
    for k in range(100):
        x = random_hypervector(derive_seed(seed, k, 0), n)
        y = random_hypervector(derive_seed(seed, k, 1), n)
        target = 2.0 * float(x.astype(np.float64) @ y)
        err = abs(interference_energy(x, y) - target)
        # orthogonal pairs have a zero target; fall back to an absolute bound there
        worst = max(worst, err / abs(target) if target else err)
    rep = run_experiment("bridge-linearity", overrides={"seed": seed})
    corr = rep.summary["correlation"]
    return worst <= 1e-6 and corr >= 0.999, {"max_rel_err": worst, "correlation": corr}


def discrete_binding(seed=42):
    measured = {}
    ok = True
    for n in (32, 128):
        rep = run_experiment("discrete-bind", overrides={"dim": n, "trials": 50, "seed": seed})
        measured[f"min_cos_N{n}"] = rep.summary["min_cosine"]
        measured[f"min_acc_N{n}"] = rep.summary["min_sign_accuracy"]
        ok &= rep.passed
    fails = 0
    vecs = [np.array(v, dtype=np.int8) for v in itertools.product((-1, 1), repeat=4)]
    for x, y in itertools.product(vecs, vecs):
        r = discrete_bind(x, y)
        fails += int(not np.array_equal(r.binarized, x * y))
    measured["n4_exhaustive_failures"] = fails
    return ok and fails == 0, measured


def fdtd_binding(seed=42):
    rep = run_experiment("fdtd-bind", overrides={"seed": seed})
    return rep.passed, {
        "cosine": rep.summary["min_cosine"], "sign_accuracy": rep.summary["min_sign_accuracy"],
        "delay_offset": rep.rows[0]["delay_offset"],
    }


def permutation(seed=42):
    rep = run_experiment("permutation", overrides={"seed": seed})
    s = rep.summary
    return rep.passed, {"mse": s["mse"], "discrete_cos": s["discrete_cosine"], "waveform_cos": s["waveform_cosine"]}


def _noise_rows(seed, kind):
    rep = run_experiment("noise-sweep", overrides={"seed": seed})
    rows = [r for r in rep.rows if r["kind"] == kind]
    return rep, rows


def awgn(seed=42):
    rep, rows = _noise_rows(seed, "awgn")
    return rep.summary["awgn_passed"], {
        "snr_db": [r["level"] for r in rows], "cos": [r["cosine"] for r in rows],
        "min_acc": [r["min_sign_accuracy"] for r in rows],
    }


def bit_flips(seed=42):
    rep, rows = _noise_rows(seed, "bit_flip")
    return rep.summary["bit_flip_passed"], {
        "flip_pct": [r["level"] for r in rows], "cos": [r["cosine"] for r in rows],
        "acc": [r["sign_accuracy"] for r in rows],
    }


def jitter(seed=42):
    rep = run_experiment("jitter-sweep", overrides={"seed": seed})
    return rep.passed, {
        "sigma": [r["sigma_phi"] for r in rep.rows], "cos": [r["cosine"] for r in rep.rows],
        "acc": [r["sign_accuracy"] for r in rep.rows],
    }


def jitter_attenuation(seed=42):
    rep = run_experiment("bridge-linearity", overrides={"seed": seed})
    att = [r for r in rep.rows if r["kind"] == "attenuation"]
    return rep.summary["attenuation_passed"], {
        "sigma": [r["sigma_phi"] for r in att], "ratio": [r["ratio"] for r in att],
        "max_rel_err": max(r["rel_error"] for r in att),
    }


def ccr_arithmetic(seed=42):
    rep = run_experiment("ccr-arith")
    s = rep.summary
    return rep.passed, {"ccr_cpl": s["ccr_cpl"], "ccr_sur_open": s["ccr_sur_open"], "ccr_sur_baffled": s["ccr_sur_baffled"]}


def isolation(seed=42):
    rep = run_experiment("isolation-surrogate", overrides={"seed": seed})
    s = rep.summary
    return rep.passed, {
        "reduction_db": s["baseline_reduction_db"], "ccr_ratio": s["ccr_ratio"],
        "distinct": s["distinct_open"] and s["distinct_baffled"],
    }


def engine_health(seed=42):
    from ..fdtd.health import run_health_checks

    checks = run_health_checks()
    return all(c.passed for c in checks), {c.name: c.value for c in checks}


# (number, name, check, runtime limit in seconds)
CRITERIA = [
    (1, "isometry", isometry, 10.0),
    (2, "power-similarity bridge", bridge, 30.0),
    (3, "discrete binding", discrete_binding, 60.0),
    (4, "FDTD binding", fdtd_binding, 900.0),
    (5, "permutation equivalence", permutation, 10.0),
    (6, "AWGN robustness", awgn, 120.0),
    (7, "bit-flip robustness", bit_flips, 120.0),
    (8, "jitter tolerance", jitter, 300.0),
    (9, "jitter attenuation law", jitter_attenuation, 60.0),
    (10, "CCR arithmetic", ccr_arithmetic, 1.0),
    (11, "isolation surrogate", isolation, 1200.0),
    (12, "FDTD engine health", engine_health, 300.0),
]


def run_criterion(number, seed=42) -> CriterionResult:
    num, name, check, limit = CRITERIA[number - 1]
    t0 = time.perf_counter()
    passed, measured = check(seed)
    elapsed = time.perf_counter() - t0
    return CriterionResult(num, name, bool(passed), elapsed, limit, measured)


def run_all(seed=42, echo=None):
    out = []
    for num, *_ in CRITERIA:
        r = run_criterion(num, seed)
        if echo:
            echo(r.line())
        out.append(r)
    return out
