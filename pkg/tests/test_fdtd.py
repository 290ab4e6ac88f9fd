
import numpy as np
import pytest

from wavehdc.exceptions import ConfigError, GeometryError, GridMismatchError, InsufficientWindowError, StabilityError
from wavehdc.fdtd import (
    FluxBox,
    FluxRecording,
    Grid2D,
    MaterialRegion,
    PointReceiver,
    SimulationConfig,
    SourceSpec,
    gaussian_pulse,
    net_flux_spectrum,
    run_simulation,
)
from wavehdc.fdtd.health import HealthCheck, passivity
from wavehdc.fdtd.scenario import export_recordings, load_scenario, parse_scenario, run_scenario
from wavehdc.fdtd.surrogate import SurrogateSetup, isolation_surrogate_experiment
from wavehdc.io import load_uwe, read_waveform_csv, save_uwe
from wavehdc.readout import read_flux_csv
from wavehdc.uwe import Waveform

PULSE = gaussian_pulse(2.0, 0.5)


def _small(**kw):
    base = dict(cell_size=(8.0, 6.0), resolution=10.0, duration=20.0)
    base.update(kw)
    return SimulationConfig(**base)


# ---- configuration ------------------------------------------------------------------

def test_courant_above_limit_rejected():
    with pytest.raises(StabilityError):
        SimulationConfig(courant=0.6)


def test_pml_must_fit():
    with pytest.raises(GeometryError):
        SimulationConfig(cell_size=(2.0, 2.0), pml_thickness=1.0)


def test_source_outside_interior_rejected():
    with pytest.raises(GeometryError):
        run_simulation(_small(), sources=[SourceSpec((3.8, 0.0), PULSE)])
    with pytest.raises(GeometryError):
        run_simulation(_small(), sources=[SourceSpec((0.0, 0.0), PULSE)], monitors=[PointReceiver((50.0, 0.0))])


def test_period_pins_whole_steps():
    g = Grid2D(SimulationConfig(period=100.0, samples_per_period=1254))
    assert g.steps_per_period % 1254 == 0
    assert g.dt * g.steps_per_period == pytest.approx(100.0)
    assert g.effective_courant <= 0.5 + 1e-12


# ---- time stepping ------------------------------------------------------------------

def test_no_sources_stays_zero():
    rec = run_simulation(_small(duration=5.0), monitors=[PointReceiver((1.0, 1.0))])
    assert np.all(rec["rx"].samples == 0)


def test_runs_are_deterministic():
    cfg = _small()
    src = [SourceSpec((-1.0, 0.0), PULSE)]
    a = run_simulation(cfg, sources=src, monitors=[PointReceiver((1.5, 0.5))])
    b = run_simulation(cfg, sources=src, monitors=[PointReceiver((1.5, 0.5))])
    assert np.array_equal(a["rx"].samples, b["rx"].samples)


def test_reciprocity_with_dielectric():
    cfg = _small(duration=25.0)
    block = [MaterialRegion.centered((0.3, 0.8), (1.0, 0.6), permittivity=3.0)]
    pa, pb = (-2.0, 0.5), (2.0, -1.0)
    ab = run_simulation(cfg, block, [SourceSpec(pa, PULSE)], [PointReceiver(pb)])["rx"].samples
    ba = run_simulation(cfg, block, [SourceSpec(pb, PULSE)], [PointReceiver(pa)])["rx"].samples
    assert np.sqrt(np.mean((ab - ba) ** 2)) / np.sqrt(np.mean(ab**2)) < 0.01


def test_long_run_stays_bounded():
    cfg = SimulationConfig(cell_size=(6.0, 6.0), resolution=8.0, duration=400.0)
    s = run_simulation(cfg, sources=[SourceSpec((0.0, 0.0), PULSE)], monitors=[PointReceiver((1.0, 0.5))])["rx"].samples
    assert np.all(np.isfinite(s))
    peak = np.max(np.abs(s))
    assert np.max(np.abs(s[-len(s) // 4 :])) < 1e-3 * peak


def test_energy_trace_is_recorded():
    rec = run_simulation(_small(duration=4.0), sources=[SourceSpec((0.0, 0.0), PULSE)], energy_every=5)
    t, e = rec.energy
    assert len(t) == len(e) > 0
    assert np.all(np.asarray(e) >= 0)


# ---- flux boxes ------------------------------------------------------------------

def _cw_boxes():
    cfg = SimulationConfig(cell_size=(10.0, 10.0), resolution=15.0, duration=12.0, period=4.0)
    src = SourceSpec((0.0, 0.0), lambda t: np.sin(2 * np.pi * t), ramp=3.0)
    boxes = [FluxBox((0.0, 0.0), (1.0, 1.0), "src", 8.0, 4.0), FluxBox((2.5, 0.0), (1.0, 1.0), "empty", 8.0, 4.0)]
    return run_simulation(cfg, sources=[src], monitors=boxes)


def test_empty_box_carries_no_net_power():
    rec = _cw_boxes()
    p_src = net_flux_spectrum(rec["src"], [1.0]).net_power[0]
    p_empty = net_flux_spectrum(rec["empty"], [1.0]).net_power[0]
    assert p_src > 0
    assert abs(p_empty) < 0.01 * p_src


def test_flux_recording_mismatch():
    t = np.arange(4.0)
    faces = ("x-", "x+", "y-", "y+")
    e = {f: np.zeros((4, 3)) for f in faces}
    h = {f: np.zeros((4, 3)) for f in faces}
    h["y+"] = np.zeros((3, 3))
    with pytest.raises(GridMismatchError):
        net_flux_spectrum(FluxRecording("b", 0.1, t, t, e, h), [1.0])
    with pytest.raises(InsufficientWindowError):
        net_flux_spectrum(FluxRecording("b", 0.1, t[:1], t[:1], e, h), [1.0])


# ---- isolation surrogate ---------------------------------------------------------------

def test_surrogate_without_query_has_zero_differentials():
    setup = SurrogateSetup(dim=8, delta_f=0.1, resolution=8.0, ramp=2.0, settle=3.0, l2=(3.0, 0.0), q=(0.0, 3.0),
                           padding=2.0)
    r = isolation_surrogate_experiment("open", setup, with_query=False)
    assert r.dp_match == 0.0 and r.dp_mismatch == 0.0
    assert r.p_base == pytest.approx(r.p_base_total - r.p_ref)


def test_surrogate_rejects_unknown_variant():
    with pytest.raises(ValueError):
        isolation_surrogate_experiment("closed")


# ---- health ----------------------------------------------------------------------

def test_health_check_casts_types():
    h = HealthCheck("x", np.float32(1.5), 2.0, np.bool_(True), {})
    assert type(h.value) is float and type(h.passed) is bool


def test_passivity_low_resolution():
    assert passivity(resolution=10.0, duration=15.0).passed


# ---- scenario files -------------------------------------------------------------------

SCENARIO = """
[grid]
cell_size = 8, 6
resolution = 10
duration = 12
period = 4

[material slab]
center = 1, 0
size = 0.4, 2
permittivity = 2

[source tx]
position = -2, 0
waveform = drive.uwe
ramp = 1

[receiver rx]
position = 2, 0

[fluxbox around]
center = -2, 0
size = 1, 1
window_start = 8
window = 4
"""


def _drive_file(tmp_path):
    t = np.arange(400) * 0.01
    save_uwe(Waveform(np.sin(2 * np.pi * t), 100.0, 4.0), tmp_path / "drive.uwe")


def test_scenario_parse_and_run(tmp_path):
    _drive_file(tmp_path)
    (tmp_path / "s.ini").write_text(SCENARIO)
    scen = load_scenario(tmp_path / "s.ini")
    assert scen.config.cell_size == (8.0, 6.0) and scen.config.period == 4.0
    assert len(scen.materials) == 1 and len(scen.sources) == 1 and len(scen.monitors) == 2
    rec = run_scenario(scen)
    written = export_recordings(rec, tmp_path / "out", frequencies=[1.0])
    names = sorted(p.rsplit("/", 1)[-1] for p in written)
    assert names == ["around_flux.csv", "rx.csv", "rx.uwe"]
    back = load_uwe(tmp_path / "out" / "rx.uwe")
    assert np.array_equal(back.samples, rec["rx"].samples)
    csv_back = read_waveform_csv(tmp_path / "out" / "rx.csv", rec["rx"].period)
    assert np.array_equal(csv_back.samples, rec["rx"].samples)
    assert read_flux_csv(tmp_path / "out" / "around_flux.csv").net_power[0] > 0


@pytest.mark.parametrize(
    "text, where",
    [
        ("[widget w]\nx = 1\n", "widget w"),
        ("[receiver]\nposition = 0, 0\n", "receiver"),
        ("[receiver r]\n", "receiver r.position"),
        ("[material m]\ncenter = 0, 0\nsize = -1, 1\n", "material m.size"),
        ("[source s]\nposition = 0, 0\nwaveform = missing.uwe\n", "source s.waveform"),
        ("[grid]\nresolution = fast\n", "grid.resolution"),
    ],
)
def test_scenario_errors_name_the_key(tmp_path, text, where):
    with pytest.raises(ConfigError) as info:
        parse_scenario(text, str(tmp_path))
    assert where in str(info.value)
