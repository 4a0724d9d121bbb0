"""Permutation calibration and the fixed-threshold consistency test."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import Label, SampleSet
from .seeds import derive_seed

Statistic = Callable[[SampleSet, SampleSet], float]


class PValueMode(enum.Enum):
    """PLUS_ONE counts the observed statistic in the numerator and
    denominator (exactly valid); PAPER_EXACT is the literal fraction
    #{T_perm >= T_obs} / (B + 1)."""

    PLUS_ONE = "plusone"
    PAPER_EXACT = "paper"


@dataclass(frozen=True)
class PermutationResult:
    observed: float
    permuted: np.ndarray
    p_value: float
    reject: bool
    alpha: float
    mode: PValueMode


def permutation_test(
    x: SampleSet,
    y: SampleSet,
    statistic: Statistic,
    B: int,
    alpha: float,
    seed: int,
    mode: PValueMode = PValueMode.PLUS_ONE,
    threads: int = 0,
) -> PermutationResult:
    """Recompute the statistic over B uniform permutations of the pool.

    Permutations are i.i.d. uniform (drawn with replacement from the
    permutation group); draw j uses the child seed derive_seed(seed,
    "perm", j), so the permuted values do not depend on evaluation
    order and the B statistics may run concurrently (threads > 1).
    The statistic callable must be deterministic in its inputs.

    Ties count toward rejection: the p-value numerator uses >=.
    """
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    observed = float(statistic(x, y))
    pooled = np.vstack([x.data, y.data])
    m = x.m
    total = pooled.shape[0]

    def one(j: int) -> float:
        rng = np.random.default_rng(derive_seed(seed, "perm", j))
        perm = rng.permutation(total)
        px = SampleSet(pooled[perm[:m]], label=Label.X)
        py = SampleSet(pooled[perm[m:]], label=Label.Y)
        return float(statistic(px, py))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            permuted = np.fromiter(ex.map(one, range(B)), dtype=np.float64, count=B)
    else:
        permuted = np.fromiter((one(j) for j in range(B)), dtype=np.float64, count=B)

    count = int(np.sum(permuted >= observed))
    if mode is PValueMode.PLUS_ONE:
        p_value = (1.0 + count) / (B + 1.0)
    else:
        p_value = count / (B + 1.0)
    return PermutationResult(
        observed=observed,
        permuted=permuted,
        p_value=p_value,
        reject=p_value <= alpha,
        alpha=alpha,
        mode=mode,
    )


def fixed_threshold_test(T: float, m: int, n: int, c: float = 1.0) -> bool:
    """Reject when T exceeds c * (m + n)^(-1/4).

    The threshold shrinks to 0 while threshold * sqrt(m + n) grows, the
    regime in which the test is consistent with asymptotic level 0.
    """
    return T > c * float(m + n) ** -0.25
