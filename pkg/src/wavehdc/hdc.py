"""Bipolar MAP-B hypervector algebra.

Hypervectors are plain ``int8`` numpy arrays holding -1/+1; dense
intermediate results (unthresholded bundles, recovered vectors) are
``float64`` arrays.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionError, EmptyInputError, UndefinedSimilarityError
from .validation import (
    check_bipolar,
    check_fraction,
    check_same_dim,
    make_rng,
    sign_binarize,
)

__all__ = [
    "random_hypervector",
    "bundle",
    "bind",
    "permute",
    "cosine_similarity",
    "sign_accuracy",
    "bit_flip",
]


def random_hypervector(seed, dim):
    """Draw a hypervector uniformly from {-1, +1}^dim."""
    dim = int(dim)
    if dim < 2:
        raise DimensionError(f"dim must be >= 2, got {dim}")
    rng = make_rng(seed)
    return (2 * rng.integers(0, 2, size=dim) - 1).astype(np.int8)


def bundle(vectors, binarize=False):
    """Componentwise sum; with ``binarize`` the sum is sign-thresholded (ties -> +1)."""
    vectors = list(vectors)
    if not vectors:
        raise EmptyInputError("bundle needs at least one vector")
    arrays = [np.asarray(v) for v in vectors]
    check_same_dim(*arrays)
    total = np.sum(np.stack(arrays).astype(np.float64), axis=0)
    return sign_binarize(total) if binarize else total


def bind(x, y):
    x = check_bipolar(x, "x")
    y = check_bipolar(y, "y")
    check_same_dim(x, y)
    return x * y


def permute(x, k):
    """Cyclic shift: ``out[n] = x[(n - k) mod N]``; negative ``k`` shifts left."""
    x = np.asarray(x)
    return np.roll(x, int(k) % x.shape[-1])


def cosine_similarity(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_same_dim(a, b)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise UndefinedSimilarityError("cosine similarity of a zero-norm vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def sign_accuracy(a, b):
    """Percentage of equal components between two bipolar vectors."""
    a = np.asarray(a)
    b = np.asarray(b)
    check_same_dim(a, b)
    return 100.0 * float(np.mean(a == b))


def bit_flip(x, p, seed):
    """Negate exactly ``round(p * N)`` (halves up) distinct positions, sampled without replacement."""
    x = check_bipolar(x)
    p = check_fraction(p)
    n_flip = int(np.floor(p * x.size + 0.5))
    out = x.copy()
    if n_flip:
        idx = make_rng(seed).choice(x.size, size=n_flip, replace=False)
        out[idx] = -out[idx]
    return out
