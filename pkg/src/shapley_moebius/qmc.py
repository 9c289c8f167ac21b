"""Sobol' point sets for pick'n'freeze designs.

Direction numbers come from scipy's Sobol' engine, which ships the
Joe & Kuo (2008) table (21201 dimensions). Randomisation is a digital
shift: every coordinate's 30-bit integer representation is XOR-ed with a
per-dimension random word drawn from the seed.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc as _qmc

from .errors import ConfigurationError, DimensionError

#: Number of dimensions covered by the bundled direction numbers.
MAX_SOBOL_DIM = 21201
_BITS = 30
_SCALE = float(2**_BITS)


@dataclass(frozen=True)
class UniformDesign:
    """Two n-by-k uniform blocks cut from one 2k-dimensional Sobol' sequence."""

    n: int
    k: int
    block_a: np.ndarray
    block_b: np.ndarray
    seed: int

    @property
    def scrambled(self) -> bool:
        return self.seed != 0


def sobol_points(n: int, dim: int, seed: int = 0) -> np.ndarray:
    """Return the first ``n`` points of the ``dim``-dimensional Sobol' sequence.

    ``seed == 0`` gives the raw sequence (first row is the origin). Any
    other seed applies a reproducible digital shift, after which no
    coordinate is exactly 0.
    """
    if dim > MAX_SOBOL_DIM:
        raise DimensionError(
            f"Sobol' direction numbers cover at most {MAX_SOBOL_DIM} dimensions, got {dim}"
        )
    if dim < 1 or n < 1:
        raise ConfigurationError("need at least one point and one dimension")
    engine = _qmc.Sobol(d=dim, scramble=False, bits=_BITS)
    with warnings.catch_warnings():
        # scipy complains about non power-of-two sizes; generate_design warns itself
        warnings.simplefilter("ignore", UserWarning)
        u = engine.random(n)
    if seed == 0:
        return u
    ints = np.rint(u * _SCALE).astype(np.uint64)
    rng = np.random.default_rng(seed)
    shift = rng.integers(0, 2**_BITS, size=dim, dtype=np.uint64)
    # centre of the 2^-30 cell keeps shifted points strictly inside (0, 1)
    return ((ints ^ shift).astype(np.float64) + 0.5) / _SCALE


def generate_design(n: int, k: int, seed: int = 0) -> UniformDesign:
    """Build the A/B uniform blocks for a pick'n'freeze run.

    ``n + 1`` points are drawn and the first one is discarded, so the
    unscrambled sequence never contributes its all-zero origin.

    Parameters
    ----------
    n : int
        Rows per block, at least 2. Powers of two are recommended.
    k : int
        Model input dimension; the sequence has ``2 * k`` coordinates.
    seed : int
        0 for the raw sequence, anything else for a digital shift.
    """
    if n < 2:
        raise ConfigurationError(f"sample size n must be at least 2, got {n}")
    if k < 1:
        raise ConfigurationError(f"dimension k must be positive, got {k}")
    if 2 * k > MAX_SOBOL_DIM:
        raise DimensionError(
            f"2k = {2 * k} exceeds the direction-number table limit of {MAX_SOBOL_DIM}"
        )
    if n & (n - 1):
        warnings.warn(
            f"n = {n} is not a power of two; Sobol' nets balance best at 2^m points",
            stacklevel=2,
        )
    u = sobol_points(n + 1, 2 * k, seed)[1:]
    return UniformDesign(
        n=n,
        k=k,
        block_a=np.ascontiguousarray(u[:, :k]),
        block_b=np.ascontiguousarray(u[:, k:]),
        seed=seed,
    )
