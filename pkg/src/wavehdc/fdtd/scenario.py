"""Scenario files: a whole simulation described in ``key = value`` sections.

Example::

    [grid]
    cell_size = 20, 10
    resolution = 25
    duration = 120
    period = 100

    [material baffle]
    center = 2, 0
    size = 0.4, 10
    conductivity = 100

    [source tx]
    position = -5, 0
    waveform = drive.uwe      # .uwe binary block or time,value CSV
    ramp = 5

    [receiver rx]
    position = 5, 0

    [fluxbox l1]
    center = 0, 0
    size = 1, 1
    window = 100

Relative waveform paths resolve against the scenario file's directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from ..exceptions import ConfigError, FormatError
from ..experiments.config import Param, non_negative, parse_config, positive, resolve
from ..io import load_uwe, read_waveform_csv, save_uwe, write_waveform_csv
from ..readout import write_flux_csv
from .config import FluxBox, MaterialRegion, PointReceiver, SimulationConfig, SourceSpec
from .flux import net_flux_spectrum
from .solver import Recordings, run_simulation

__all__ = ["Scenario", "parse_scenario", "load_scenario", "run_scenario", "export_recordings"]

_GRID = {
    "cell_size": Param("pair", (20.0, 10.0), positive),
    "resolution": Param("float", 25.0, positive),
    "pml_thickness": Param("float", 1.0, positive),
    "courant": Param("float", 0.5, positive),
    "duration": Param("float", 100.0, positive),
    "center": Param("pair", (0.0, 0.0)),
    "period": Param("float", None, positive),
}
_MATERIAL = {
    "center": Param("pair", None),
    "size": Param("pair", None, positive),
    "permittivity": Param("float", 1.0),
    "conductivity": Param("float", 0.0, non_negative),
}
_SOURCE = {
    "position": Param("pair", None),
    "waveform": Param("str", None),
    "start_time": Param("float", 0.0),
    "amplitude": Param("float", 1.0),
    "ramp": Param("float", 0.0, non_negative),
}
_RECEIVER = {"position": Param("pair", None)}
_FLUXBOX = {
    "center": Param("pair", None),
    "size": Param("pair", None, positive),
    "window_start": Param("float", None, non_negative),
    "window": Param("float", None, positive),
}
_KINDS = {"grid": _GRID, "material": _MATERIAL, "source": _SOURCE, "receiver": _RECEIVER, "fluxbox": _FLUXBOX}


@dataclass
class Scenario:
    config: SimulationConfig
    materials: list = field(default_factory=list)
    sources: list = field(default_factory=list)
    monitors: list = field(default_factory=list)


def _sections(raw, text):
    # empty sections leave no keys behind, so collect headers separately
    groups = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line.startswith("[") and line.endswith("]"):
            groups.setdefault(line[1:-1].strip(), {})
    for path, value in raw.items():
        if "." not in path:
            raise ConfigError("keys must live inside a section", path)
        section, key = path.rsplit(".", 1)
        groups.setdefault(section, {})[key] = value
    return groups


def _require(params, keys, section):
    for k in keys:
        if params[k] is None:
            raise ConfigError("missing required key", f"{section}.{k}")


def _load_drive(ref, base_dir, period, section):
    path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
    try:
        if path.endswith(".csv"):
            return read_waveform_csv(path, period)
        return load_uwe(path)
    except OSError as exc:
        raise ConfigError(f"cannot read waveform {path}: {exc.strerror}", f"{section}.waveform") from None
    except FormatError as exc:
        raise ConfigError(f"bad waveform {path}: {exc}", f"{section}.waveform") from None


def parse_scenario(text, base_dir=".") -> Scenario:
    groups = _sections(parse_config(text), text)
    parsed = []
    for section, raw in groups.items():
        kind, _, label = section.partition(" ")
        if kind not in _KINDS:
            raise ConfigError(f"unknown section kind (allowed: {', '.join(_KINDS)})", section)
        if kind != "grid" and not label.strip():
            raise ConfigError(f"{kind} sections need a label, e.g. [{kind} name]", section)
        params = _resolve_in(_KINDS[kind], raw, section)
        parsed.append((kind, label.strip(), section, params))

    grid = next((p for k, _, _, p in parsed if k == "grid"), resolve(_GRID))
    grid = {k: tuple(v) if isinstance(v, list) else v for k, v in grid.items()}
    config = SimulationConfig(**grid)
    scen = Scenario(config)
    for kind, label, section, p in parsed:
        if kind == "material":
            _require(p, ("center", "size"), section)
            scen.materials.append(MaterialRegion.centered(p["center"], p["size"], p["permittivity"], p["conductivity"]))
        elif kind == "source":
            _require(p, ("position", "waveform"), section)
            drive = _load_drive(p["waveform"], base_dir, config.period or config.duration, section)
            scen.sources.append(SourceSpec(tuple(p["position"]), drive, p["start_time"], p["amplitude"], p["ramp"], label))
        elif kind == "receiver":
            _require(p, ("position",), section)
            scen.monitors.append(PointReceiver(tuple(p["position"]), label))
        elif kind == "fluxbox":
            _require(p, ("center", "size"), section)
            scen.monitors.append(FluxBox(tuple(p["center"]), tuple(p["size"]), label, p["window_start"], p["window"]))
    return scen


def _resolve_in(schema, raw, section):
    """``resolve`` with error paths reported as ``section.key``."""
    try:
        return resolve(schema, raw)
    except ConfigError as exc:
        exc.path = f"{section}.{exc.path}" if exc.path else section
        exc.args = (f"{exc.path}: {exc.message}",)
        raise


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc.strerror}") from None
    return parse_scenario(text, os.path.dirname(os.path.abspath(path)))


def run_scenario(scen: Scenario, energy_every=None) -> Recordings:
    return run_simulation(scen.config, scen.materials, scen.sources, scen.monitors, energy_every)


def export_recordings(rec: Recordings, out_dir, frequencies=None):
    """Write each receiver as CSV and UWE1 block, and each flux box as a flux spectrum CSV.

    Flux spectra need ``frequencies``; boxes are skipped without them.
    Returns the list of written paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for label, w in rec.points.items():
        for ext, writer in ((".csv", write_waveform_csv), (".uwe", save_uwe)):
            path = os.path.join(out_dir, label + ext)
            writer(w, path)
            written.append(path)
    if frequencies is not None:
        for label, fr in rec.flux.items():
            path = os.path.join(out_dir, f"{label}_flux.csv")
            write_flux_csv(net_flux_spectrum(fr, frequencies, source_id=label), path)
            written.append(path)
    return written
