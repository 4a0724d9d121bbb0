"""Comparator statistics: kernel MMD, energy distance, likelihood-ratio oracle."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import TooFewSamples
from .gen import Role, SettingSpec, log_density
from .model import SampleSet, canonical_pair


class KernelKind(enum.Enum):
    POLYNOMIAL = "polynomial"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice: polynomial degree p in {1,2,3} or Gaussian.

    A Gaussian spec with bandwidth None uses the median heuristic,
    evaluated on the pooled sample at call time.
    """

    kind: KernelKind
    degree: Optional[int] = None
    bandwidth: Optional[float] = None

    def __post_init__(self):
        if self.kind is KernelKind.POLYNOMIAL:
            if self.degree not in (1, 2, 3):
                raise ValueError(f"polynomial degree must be 1, 2, or 3, got {self.degree}")
        else:
            if self.bandwidth is not None and not self.bandwidth > 0:
                raise ValueError("explicit bandwidth must be positive")

    @classmethod
    def polynomial(cls, p: int) -> "KernelSpec":
        return cls(kind=KernelKind.POLYNOMIAL, degree=p)

    @classmethod
    def gaussian(cls, bandwidth: Optional[float] = None) -> "KernelSpec":
        return cls(kind=KernelKind.GAUSSIAN, bandwidth=bandwidth)


class Estimator(enum.Enum):
    BIASED = "biased"
    UNBIASED = "unbiased"


def _sq_dists(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    d2 = np.sum(u * u, axis=1)[:, None] + np.sum(v * v, axis=1)[None, :] - 2.0 * (u @ v.T)
    return np.maximum(d2, 0.0)


def median_heuristic(x: SampleSet, y: SampleSet) -> float:
    """Median of pairwise squared distances over pooled pairs i < j.

    Even pair counts use the midpoint rule; a degenerate median below
    1e-14 falls back to 1.  Exactly symmetric in (x, y).
    """
    x, y = canonical_pair(x, y)
    z = np.vstack([x.data, y.data])
    d2 = _sq_dists(z, z)
    iu = np.triu_indices(z.shape[0], k=1)
    h = float(np.median(d2[iu]))
    return h if h >= 1e-14 else 1.0


def _gram(u: np.ndarray, v: np.ndarray, spec: KernelSpec, h: float) -> np.ndarray:
    if spec.kind is KernelKind.POLYNOMIAL:
        return (1.0 + u @ v.T) ** spec.degree
    return np.exp(-_sq_dists(u, v) / h)


def kernel_mmd2(
    x: SampleSet,
    y: SampleSet,
    spec: KernelSpec,
    estimator: Estimator = Estimator.BIASED,
) -> float:
    """Squared-MMD statistic for the given kernel.

    Biased is the V-statistic (within-sample means keep the diagonal);
    Unbiased removes the diagonal terms and needs m, n >= 2.  The
    polynomial kernel is the inhomogeneous (1 + u.v)^p.  Exactly
    symmetric in (x, y).

    Raises:
        TooFewSamples: Unbiased with m < 2 or n < 2.
    """
    x, y = canonical_pair(x, y)
    X, Y = x.data, y.data
    m, n = x.m, y.m
    h = 1.0
    if spec.kind is KernelKind.GAUSSIAN:
        h = spec.bandwidth if spec.bandwidth is not None else median_heuristic(x, y)
    kxx = _gram(X, X, spec, h)
    kyy = _gram(Y, Y, spec, h)
    kxy = _gram(X, Y, spec, h)
    if estimator is Estimator.BIASED:
        return float(kxx.mean() + kyy.mean() - 2.0 * kxy.mean())
    if m < 2 or n < 2:
        raise TooFewSamples("unbiased estimator requires m >= 2 and n >= 2")
    sxx = (kxx.sum() - np.trace(kxx)) / (m * (m - 1))
    syy = (kyy.sum() - np.trace(kyy)) / (n * (n - 1))
    return float(sxx + syy - 2.0 * kxy.mean())


def energy_distance(x: SampleSet, y: SampleSet) -> float:
    """V-statistic energy distance 2 E||x-y|| - E||x-x'|| - E||y-y'||.

    Self-pairs are included in the within-sample means (they add 0).
    Exactly symmetric in (x, y).
    """
    x, y = canonical_pair(x, y)
    X, Y = x.data, y.data
    dxy = np.sqrt(_sq_dists(X, Y))
    dxx = np.sqrt(_sq_dists(X, X))
    dyy = np.sqrt(_sq_dists(Y, Y))
    return float(2.0 * dxy.mean() - dxx.mean() - dyy.mean())


def lrt_oracle(x: SampleSet, y: SampleSet, setting: SettingSpec) -> float:
    """Log-likelihood ratio of the given labeling against the swapped one.

    Uses the closed-form densities p (role P) and q (role Q) of the
    setting: sum_i log(p(x_i)/q(x_i)) + sum_j log(q(y_j)/p(y_j)).
    Antisymmetric under swapping the two samples.
    """
    spec_p = replace(setting, role=Role.P)
    spec_q = replace(setting, role=Role.Q)
    lx = log_density(spec_p, x.data) - log_density(spec_q, x.data)
    ly = log_density(spec_q, y.data) - log_density(spec_p, y.data)
    return float(math.fsum(lx) + math.fsum(ly))
