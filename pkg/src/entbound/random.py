"""Reproducible random states under the Hilbert-Schmidt (induced) measure.

Every sample is a pure function of ``(master_seed, index)``: the pair, plus
a small purpose tag, is hashed by :class:`numpy.random.SeedSequence` into
the seed of a fresh PCG64 generator.  Samples therefore do not depend on
evaluation order, so serial and parallel sweeps emit identical numbers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import states
from .states import Bipartition, DensityMatrix

log = logging.getLogger(__name__)

# purpose tags keep the draws of one sample index statistically independent
TAG_MATRIX = 0
TAG_DIMS = 1
TAG_AUX = 2


@dataclass(frozen=True)
class SampleStream:
    master_seed: int
    index: int

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.index < 0:
            raise ValueError("index must be nonnegative")

    def rng(self, tag: int = TAG_MATRIX, attempt: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence([self.master_seed, self.index, tag, attempt])
        return np.random.Generator(np.random.PCG64(seq))


def ginibre(d: int, k: int, stream: SampleStream, *, attempt: int = 0) -> np.ndarray:
    """``d x k`` matrix of i.i.d. standard complex Gaussians, ``E|z|^2 = 1``."""
    if d < 1 or k < 1:
        raise ValueError(f"ginibre needs d, k >= 1, got d={d}, k={k}")
    rng = stream.rng(TAG_MATRIX, attempt)
    z = rng.standard_normal((d, k, 2))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def random_density_induced(part: Bipartition, k: int, stream: SampleStream) -> DensityMatrix:
    """``G G^H / Tr(G G^H)`` with ``G`` of size ``d x k``; rank at most ``min(d, k)``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    attempt = 0
    while True:
        g = ginibre(part.d, k, stream, attempt=attempt)
        w = g @ g.conj().T
        tr = np.trace(w).real
        if tr > 0.0:
            break
        attempt += 1
        log.warning("degenerate Ginibre draw at index %d, redrawing", stream.index)
    # positive semidefinite by construction; skip the O(d^3) spectrum check
    return states.validate(w / tr, part, check_spectrum=False)


def random_density_hs(part: Bipartition, stream: SampleStream) -> DensityMatrix:
    """Hilbert-Schmidt random state (square Ginibre factor)."""
    return random_density_induced(part, part.d, stream)


def random_pure_ket(d: int, stream: SampleStream, tag: int = TAG_AUX) -> np.ndarray:
    """Haar-random unit vector."""
    z = stream.rng(tag).standard_normal((d, 2))
    v = z[:, 0] + 1j * z[:, 1]
    return v / np.linalg.norm(v)
