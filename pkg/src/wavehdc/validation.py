"""Input validation helpers and seeded random streams.

Randomness everywhere in the package comes from numpy's ``PCG64`` bit
generator seeded through ``SeedSequence``; Gaussian draws use numpy's
ziggurat sampler (``Generator.standard_normal``).
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionError, EmptyInputError, RangeError

__all__ = [
    "make_rng",
    "derive_seed",
    "check_bipolar",
    "check_dense",
    "check_same_dim",
    "check_fraction",
    "sign_binarize",
]


def make_rng(seed, *stream):
    """Return a ``PCG64`` generator for ``seed`` and an optional stream path."""
    if seed is None:
        raise RangeError("an explicit integer seed is required")
    seq = np.random.SeedSequence([int(seed) & (2**64 - 1), *[int(s) for s in stream]])
    return np.random.Generator(np.random.PCG64(seq))


def derive_seed(seed, *stream):
    """Deterministic 63-bit child seed, used to give each trial its own stream."""
    seq = np.random.SeedSequence([int(seed) & (2**64 - 1), *[int(s) for s in stream]])
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def check_bipolar(x, name="x"):
    """Validate a bipolar hypervector and return it as an ``int8`` array."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 2:
        raise DimensionError(f"{name} must have dim >= 2, got {arr.size}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError(f"{name} must contain only -1 and +1")
    return arr.astype(np.int8, copy=False)


def check_dense(x, name="x"):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyInputError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def check_same_dim(*arrays):
    dims = {np.shape(a)[-1] for a in arrays}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def check_fraction(p, name="p"):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"{name} must lie in [0, 1], got {p}")
    return p


def sign_binarize(v):
    """Sign threshold with zeros mapped to +1."""
    return np.where(np.asarray(v) >= 0, 1, -1).astype(np.int8)
