"""Two-dimensional TMz FDTD solver with CPML boundaries and flux-box monitors."""

from .config import FluxBox, Grid2D, MaterialRegion, PointReceiver, SimulationConfig, SourceSpec, gaussian_pulse
from .flux import FluxRecording, net_flux_spectrum
from .solver import Recordings, run_simulation

__all__ = [
    "FluxBox",
    "FluxRecording",
    "Grid2D",
    "MaterialRegion",
    "PointReceiver",
    "Recordings",
    "SimulationConfig",
    "SourceSpec",
    "gaussian_pulse",
    "net_flux_spectrum",
    "run_simulation",
]
