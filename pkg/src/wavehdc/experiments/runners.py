"""Experiment bodies.  Each takes resolved params and returns ``(seeds, rows, summary, passed)``."""

from __future__ import annotations

import math

import numpy as np

from ..binding import WrapPlan, discrete_bind, unbind_recover, wave_bind
from ..hdc import bit_flip, cosine_similarity, permute, random_hypervector, sign_accuracy
from ..impairments import JitterSpec, add_awgn, apply_phase_jitter, phasor_mean
from ..readout import calibrate_kappa, ccr, ccr_surrogate
from ..uwe import (
    ToneComb,
    decode,
    interference_energy,
    superpose,
    synthesize,
    synthesize_spectrum,
    time_delay,
    unitary_dft,
    waveform_inner,
)
from ..validation import derive_seed, sign_binarize

__all__ = [
    "discrete_bind_exp",
    "fdtd_bind_exp",
    "permutation_exp",
    "noise_sweep_exp",
    "jitter_sweep_exp",
    "ccr_arith_exp",
    "isolation_surrogate_exp",
    "bridge_linearity_exp",
]


def _pair(seed, trial, dim):
    ts = derive_seed(seed, trial)
    return ts, random_hypervector(derive_seed(ts, 1), dim), random_hypervector(derive_seed(ts, 2), dim)


def _mean_std(vals):
    a = np.asarray(vals, dtype=np.float64)
    return float(a.mean()), float(a.std(ddof=1)) if a.size > 1 else 0.0


def discrete_bind_exp(p):
    comb = ToneComb.centered(p["dim"], p["f_cen"], p["delta_f"])
    seeds, rows = [], []
    for t in range(p["trials"]):
        ts, x, y = _pair(p["seed"], t, p["dim"])
        r = discrete_bind(x, y, comb, p["sample_rate"])
        seeds.append(ts)
        rows.append({"trial": t, "seed": ts, "cosine": r.cosine, "sign_accuracy": r.sign_accuracy})
    cos = [r["cosine"] for r in rows]
    acc = [r["sign_accuracy"] for r in rows]
    summary = {"min_cosine": min(cos), "mean_cosine": _mean_std(cos)[0], "min_sign_accuracy": min(acc)}
    passed = summary["min_cosine"] >= 0.999 and summary["min_sign_accuracy"] == 100.0
    return seeds, rows, summary, passed


def fdtd_bind_exp(p):
    from ..fdtd.binding_run import FdtdBindSetup, fdtd_bind

    setup = FdtdBindSetup(
        dim=p["dim"], f_cen=p["f_cen"], delta_f=p["delta_f"], cutoff=p["cutoff"],
        resolution=p["resolution"], cell_size=tuple(p["cell_size"]), pml_thickness=p["pml_thickness"],
        source=tuple(p["source"]), receiver=tuple(p["receiver"]), ramp=p["ramp"],
        search_half_width=p["search_half_width"],
    )
    seeds, rows = [], []
    for t in range(p["trials"]):
        ts, x, y = _pair(p["seed"], t, p["dim"])
        res, info = fdtd_bind(x, y, setup)
        seeds.append(ts)
        rows.append({
            "trial": t, "seed": ts, "best_delay": res.best_delay,
            "delay_offset": res.best_delay - info["nominal_start"],
            "cosine": res.cosine, "sign_accuracy": res.sign_accuracy,
            "recovered_scale": float(np.linalg.norm(res.recovered) / math.sqrt(p["dim"])),
        })
    summary = {
        "min_cosine": min(r["cosine"] for r in rows),
        "min_sign_accuracy": min(r["sign_accuracy"] for r in rows),
        "dt": info["dt"], "n_steps": info["n_steps"], "grid_shape": info["grid_shape"],
        "samples_per_period": info["samples_per_period"], "n_candidates": info["n_candidates"],
    }
    passed = summary["min_cosine"] >= 0.99 and summary["min_sign_accuracy"] == 100.0
    return seeds, rows, summary, passed


def permutation_exp(p):
    n, k = p["dim"], p["shift"]
    comb = ToneComb.positive_half(n, p["delta_f"])
    x = random_hypervector(p["seed"], n)
    xk = permute(x, k)
    s = synthesize(x, comb, mode="real")
    s_perm = synthesize(xk, comb, mode="real")
    s_del = time_delay(s, k * comb.period / n)
    mse = float(np.mean((s_perm.samples - s_del.samples) ** 2))
    rec = decode(s_del, comb)
    row = {
        "dim": n, "shift": k, "mse": mse,
        "normalized_mse": mse / float(np.mean(s_perm.samples**2)),
        "discrete_cosine": cosine_similarity(x, xk),
        "waveform_cosine": waveform_inner(s, s_del).real / math.sqrt(s.energy() * s_del.energy()),
        "sign_accuracy": sign_accuracy(sign_binarize(rec), xk),
        "delay_samples": int(round(k * comb.period / n * s.sample_rate)),
    }
    passed = (
        row["mse"] <= 1e-3 and abs(row["discrete_cosine"]) <= 0.1
        and abs(row["waveform_cosine"]) <= 0.1 and row["sign_accuracy"] == 100.0
    )
    return [p["seed"]], [row], dict(row), passed


def _awgn_trial(x, y, snr, comb, rate, plan, ts):
    sx = add_awgn(synthesize(x, comb, rate, mode="real"), snr, derive_seed(ts, 3))
    sy = add_awgn(synthesize(y, comb, rate, mode="real"), snr, derive_seed(ts, 4))
    z, _ = wave_bind(sx, sy, plan)
    yh, yb = unbind_recover(z, x)
    return cosine_similarity(yh, y), sign_accuracy(yb, y)


def _flip_trial(x, y, frac, comb, rate, plan, ts):
    xf = bit_flip(x, frac, derive_seed(ts, 5))
    yf = bit_flip(y, frac, derive_seed(ts, 6))
    z, _ = wave_bind(synthesize(xf, comb, rate, mode="real"), synthesize(yf, comb, rate, mode="real"), plan)
    yh, yb = unbind_recover(z, x)
    return cosine_similarity(yh, y), sign_accuracy(yb, y)


AWGN_FLOOR = {20.0: 0.999, 10.0: 0.998, 0.0: 0.99}
FLIP_TARGET = {1.0: (0.95, 97.7), 10.0: (0.71, 85.3), 20.0: (0.28, 64.1)}


def noise_sweep_exp(p):
    rows, seeds = [], []
    sweeps = [("awgn", p["snr_db"], p["awgn_dim"], _awgn_trial), ("bit_flip", p["flip_pct"], p["flip_dim"], _flip_trial)]
    for kind, levels, dim, trial_fn in sweeps:
        comb = ToneComb.centered(dim, p["f_cen"], p["delta_f"])
        plan = WrapPlan.from_comb(comb)
        for level in levels:
            cos, acc = [], []
            for t in range(p["trials"]):
                ts, x, y = _pair(p["seed"], t, dim)
                if ts not in seeds:
                    seeds.append(ts)
                arg = level if kind == "awgn" else level / 100.0
                c, a = trial_fn(x, y, arg, comb, p["sample_rate"], plan, ts)
                cos.append(c)
                acc.append(a)
            cm, cs = _mean_std(cos)
            am, as_ = _mean_std(acc)
            rows.append({
                "kind": kind, "level": level, "dim": dim, "cosine": cm, "sign_accuracy": am,
                "cosine_std": cs, "sign_accuracy_std": as_, "min_sign_accuracy": min(acc),
            })
    awgn_ok, flip_ok = True, True
    for r in rows:
        if r["kind"] == "awgn" and r["level"] in AWGN_FLOOR:
            awgn_ok &= r["cosine"] >= AWGN_FLOOR[r["level"]] and r["min_sign_accuracy"] == 100.0
        if r["kind"] == "bit_flip" and r["level"] in FLIP_TARGET:
            c0, a0 = FLIP_TARGET[r["level"]]
            flip_ok &= abs(r["cosine"] - c0) <= 0.1 and abs(r["sign_accuracy"] - a0) <= 6.0
    summary = {"awgn_passed": bool(awgn_ok), "bit_flip_passed": bool(flip_ok)}
    return seeds, rows, summary, bool(awgn_ok and flip_ok)


def jitter_sweep_exp(p):
    comb = ToneComb.centered(p["dim"], p["f_cen"], p["delta_f"])
    plan = WrapPlan.from_comb(comb, p["cutoff"])
    rows, seeds = [], []
    for sigma in p["sigma_phi"]:
        cos, acc = [], []
        for t in range(p["trials"]):
            ts, x, y = _pair(p["seed"], t, p["dim"])
            if ts not in seeds:
                seeds.append(ts)
            X = apply_phase_jitter(unitary_dft(x), JitterSpec(sigma, derive_seed(ts, 7)))
            Y = apply_phase_jitter(unitary_dft(y), JitterSpec(sigma, derive_seed(ts, 8)))
            sx = synthesize_spectrum(X, comb, mode="real")
            sy = synthesize_spectrum(Y, comb, mode="real")
            z, zb = wave_bind(sx, sy, plan)
            cos.append(cosine_similarity(z, x * y))
            acc.append(sign_accuracy(zb, x * y))
        cm, cs = _mean_std(cos)
        am, as_ = _mean_std(acc)
        rows.append({"sigma_phi": sigma, "cosine": cm, "sign_accuracy": am, "cosine_std": cs, "sign_accuracy_std": as_})
    ok = True
    for r in rows:
        s = r["sigma_phi"]
        if s <= 0.2:
            ok &= r["cosine"] >= 0.95 and r["sign_accuracy"] == 100.0
        elif math.isclose(s, 0.5):
            ok &= 0.75 <= r["cosine"] <= 0.92
        elif math.isclose(s, 1.0):
            ok &= 55.0 <= r["sign_accuracy"] <= 80.0
    return seeds, rows, {"regimes_passed": bool(ok)}, bool(ok)


def _sig2(v):
    return float(f"{v:.1e}")


def ccr_arith_exp(p):
    cpl = ccr(p["delta_match"], p["delta_non"], p["baseline_match"], p["baseline_non"])
    sur_open = ccr_surrogate(p["open_dp_match"], p["open_dp_mismatch"], p["open_p_base"])
    sur_baff = ccr_surrogate(p["baffled_dp_match"], p["baffled_dp_mismatch"], p["baffled_p_base"])
    red = 10.0 * math.log10(abs(p["open_p_base"]) / abs(p["baffled_p_base"]))
    rows = [
        {"quantity": "ccr_cpl", "value": cpl, "expected": 8.7e-5},
        {"quantity": "ccr_sur_open", "value": sur_open, "expected": 29.0},
        {"quantity": "ccr_sur_baffled", "value": sur_baff, "expected": 6990.0},
        {"quantity": "baseline_reduction_db", "value": red, "expected": 32.67},
        {"quantity": "ccr_sur_ratio", "value": sur_baff / sur_open, "expected": 241.0},
    ]
    for r in rows:
        r["rel_error"] = abs(r["value"] - r["expected"]) / abs(r["expected"])
    passed = (
        _sig2(cpl) == 8.7e-5 and rows[1]["rel_error"] <= 0.01 and rows[2]["rel_error"] <= 0.01
    )
    return [], rows, {r["quantity"]: r["value"] for r in rows}, passed


def isolation_surrogate_exp(p):
    from ..fdtd.surrogate import SurrogateSetup, isolation_surrogate_experiment

    keys = SurrogateSetup.__dataclass_fields__
    setup = SurrogateSetup(**{k: tuple(v) if isinstance(v, list) else v for k, v in p.items() if k in keys})
    rows = []
    results = {}
    for variant in ("open", "baffled"):
        r = isolation_surrogate_experiment(variant, setup, with_query=p["with_query"])
        results[variant] = r
        rows.append({
            "variant": variant, "p_ref": r.p_ref, "p_base": r.p_base, "p_base_total": r.p_base_total,
            "dp_match": r.dp_match, "dp_mismatch": r.dp_mismatch,
            "ccr_sur": r.ccr_sur if math.isfinite(r.ccr_sur) else None,
        })
    o, b = results["open"], results["baffled"]
    red = 10.0 * math.log10(abs(o.p_base) / abs(b.p_base))
    ratio = b.ccr_sur / o.ccr_sur if o.ccr_sur else float("nan")

    def distinct(r):
        return abs(r.dp_match - r.dp_mismatch) > 0.01 * max(abs(r.dp_match), abs(r.dp_mismatch), 1e-300)

    summary = {
        "baseline_reduction_db": red, "ccr_ratio": ratio,
        "distinct_open": bool(distinct(o)), "distinct_baffled": bool(distinct(b)),
    }
    passed = red >= 20.0 and ratio >= 10.0 and summary["distinct_open"] and summary["distinct_baffled"]
    return [setup.seed], rows, summary, bool(passed)


def bridge_linearity_exp(p):
    n = p["dim"]
    comb = ToneComb.default(n)
    x = random_hypervector(p["seed"], n)
    sx = synthesize(x, comb)
    p_ref = sx.energy()
    rows, pairs = [], []
    nq = p["n_queries"]
    for j in range(nq):
        c_target = -1.0 + 2.0 * j / (nq - 1)
        q = bit_flip(x, (1.0 - c_target) / 2.0, derive_seed(p["seed"], 100 + j))
        de = interference_energy(x, q, comb)
        inner = float(np.dot(x.astype(np.float64), q))
        pairs.append((inner, de))
        rows.append({
            "kind": "bridge", "cos_theta": inner / n, "delta_e": de,
            "normalized": de / p_ref, "identity_error": abs(de - 2 * inner) / n,
        })
    cos_axis = np.array([r["cos_theta"] for r in rows])
    de_axis = np.array([r["delta_e"] for r in rows])
    corr = float(np.corrcoef(cos_axis, de_axis)[0, 1])
    cal = calibrate_kappa(pairs)

    X = unitary_dft(x)
    att_ok = True
    for sigma in p["sigma_phi"]:
        ratios = []
        for d in range(p["draws"]):
            Xj = apply_phase_jitter(X, JitterSpec(sigma, derive_seed(p["seed"], 7, d, int(sigma * 1e6))))
            sj = synthesize_spectrum(Xj, comb)
            de = superpose([sx, sj]).energy() - p_ref - sj.energy()
            ratios.append(de / (2.0 * n))
        mean = float(np.mean(ratios))
        expected = phasor_mean(sigma)
        rel = abs(mean - expected) / expected
        att_ok &= rel <= 0.10
        rows.append({"kind": "attenuation", "sigma_phi": sigma, "ratio": mean, "expected": expected, "rel_error": rel})
    summary = {
        "correlation": corr, "kappa": cal.kappa, "fit_residual": cal.fit_residual,
        "max_identity_error": max(r["identity_error"] for r in rows if r["kind"] == "bridge"),
        "linearity_passed": corr >= 0.999, "attenuation_passed": bool(att_ok),
    }
    return [p["seed"]], rows, summary, bool(corr >= 0.999 and att_ok)
