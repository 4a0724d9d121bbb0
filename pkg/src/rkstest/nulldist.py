"""Simulate the asymptotic null: the supremum of |G| over a (w, b) grid.

G is the centered Gaussian process indexed by ridge splines with
Cov(G_{w,b}, G_{w',b'}) = E[(w.x-b)_+^k (w'.x-b')_+^k] (optionally
minus the product of means; the centered version is the two-sample
limit and is the default).  The scaled statistic sqrt(mn/(m+n)) T
converges in law to sup |G|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGrid, NotPSD
from .model import SampleSet
from .seeds import derive_seed
from .statistic import quasi_uniform_directions

_JITTERS = (1e-10, 1e-9, 1e-8, 1e-7, 1e-6)


@dataclass(frozen=True)
class GpGrid:
    """Evaluation grid and covariance of the discretized process.

    Grid point g = i_dir * len(offsets) + i_off pairs directions[i_dir]
    with offsets[i_off]; covariance is symmetric (G, G).
    """

    directions: np.ndarray
    offsets: np.ndarray
    covariance: np.ndarray
    centered: bool


def default_grid(sample: SampleSet, n_dirs: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Default grid: quasi-uniform directions, offsets at the
    {0, 0.05, ..., 0.95} quantiles of the pooled absolute projections."""
    dirs = quasi_uniform_directions(n_dirs, sample.d)
    proj = np.abs(sample.data @ dirs.T)
    offsets = np.quantile(proj, np.arange(0.0, 1.0, 0.05))
    return dirs, offsets


def _features(data: np.ndarray, directions: np.ndarray, offsets: np.ndarray, k: int) -> np.ndarray:
    """Ridge-spline features (rows, n_dirs * n_offsets), dir-major order."""
    proj = data @ directions.T
    t = proj[:, :, None] - offsets[None, None, :]
    if k == 0:
        f = (t >= 0.0).astype(np.float64)
    else:
        f = np.maximum(t, 0.0) ** k
    return f.reshape(data.shape[0], -1)


def estimate_covariance(
    sample: SampleSet,
    k: int,
    grid: tuple[np.ndarray, np.ndarray],
    centered: bool = True,
    chunk: int = 4096,
) -> GpGrid:
    """Monte Carlo covariance estimate over all grid-point pairs.

    grid is a (directions, offsets) pair; sample should be large
    (a few hundred rows at minimum) for usable estimates.

    Raises:
        EmptyGrid: no directions or no offsets.
    """
    directions = np.atleast_2d(np.asarray(grid[0], dtype=np.float64))
    offsets = np.atleast_1d(np.asarray(grid[1], dtype=np.float64))
    if directions.size == 0 or offsets.size == 0:
        raise EmptyGrid("grid needs at least one direction and one offset")
    G = directions.shape[0] * offsets.shape[0]
    M = sample.m
    cov = np.zeros((G, G))
    mean = np.zeros(G)
    for lo in range(0, M, chunk):
        F = _features(sample.data[lo : lo + chunk], directions, offsets, k)
        cov += F.T @ F
        mean += F.sum(axis=0)
    cov /= M
    mean /= M
    if centered:
        cov -= np.outer(mean, mean)
    cov = 0.5 * (cov + cov.T)
    return GpGrid(directions=directions, offsets=offsets, covariance=cov, centered=centered)


def simulate_sup(gp: GpGrid, draws: int, seed: int) -> np.ndarray:
    """Draw sup_g |G_g| for `draws` independent Gaussian vectors.

    The covariance is Cholesky-factorized after adding jitter * I,
    starting at 1e-10 and escalating tenfold up to 1e-6.  Draw i uses
    the child seed derive_seed(seed, "draw", i), so draws on nested
    grids couple: with shared seed, the vector on a prefix subgrid is
    the prefix of the vector on the full grid.

    Raises:
        NotPSD: factorization fails at the maximum jitter.
    """
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    C = gp.covariance
    G = C.shape[0]
    if not np.any(np.diagonal(C) > 0.0):
        return np.zeros(draws)
    L = None
    for jit in _JITTERS:
        try:
            L = np.linalg.cholesky(C + jit * np.eye(G))
            break
        except np.linalg.LinAlgError:
            continue
    if L is None:
        raise NotPSD(f"covariance not factorizable at jitter {_JITTERS[-1]}")
    sups = np.empty(draws)
    chunk = max(1, int(2**22 // max(G, 1)))
    z = np.empty((chunk, G))
    for lo in range(0, draws, chunk):
        hi = min(lo + chunk, draws)
        for i in range(lo, hi):
            z[i - lo] = np.random.default_rng(derive_seed(seed, "draw", i)).standard_normal(G)
        vals = z[: hi - lo] @ L.T
        sups[lo:hi] = np.abs(vals).max(axis=1)
    return sups
