"""Hyperdimensional computing carried on multi-tone waveforms.

Submodules: ``hdc`` (bipolar algebra), ``uwe`` (unitary wave embedding),
``binding`` (mixing and spectral wrapping), ``readout`` (flux power and CCR),
``impairments`` (noise and jitter), ``fdtd`` (2D TMz solver) and
``experiments`` (named reproducible runs).
"""

from .binding import WaveBinder, WrapPlan, discrete_bind
from .hdc import bind, bit_flip, bundle, cosine_similarity, permute, random_hypervector, sign_accuracy
from .uwe import ToneComb, UnitaryWaveEmbedding, decode, interference_energy, synthesize

__version__ = "0.1.0"

__all__ = [
    "ToneComb",
    "UnitaryWaveEmbedding",
    "WaveBinder",
    "WrapPlan",
    "bind",
    "bit_flip",
    "bundle",
    "cosine_similarity",
    "decode",
    "discrete_bind",
    "interference_energy",
    "permute",
    "random_hypervector",
    "sign_accuracy",
    "synthesize",
]
