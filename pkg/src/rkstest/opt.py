"""Projected Adam optimization of the penalized discrepancy objective.

optimize() runs one seeded initialization for T iterations, projecting
every offset back to [0, inf) after each step and recording the
unit-ball empirical MMD of every iterate (including the initialization
at t = 0).  multi_restart() repeats it with derived seeds and keeps the
best trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import UnsupportedDegree
from .model import StandardizedPair
from .ridge import Objective, RidgeNetwork, normalize_to_unit_ball, path_seminorm
from .seeds import derive_seed

MAX_PERTURB_ATTEMPTS = 50
PERTURB_STD = 1e-3


@dataclass(frozen=True)
class OptConfig:
    """Hyperparameters of the first-order scheme."""

    learning_rate: float = 0.5
    iterations: int = 200
    beta1: float = 0.9
    beta2: float = 0.99
    epsilon_adam: float = 1e-8
    lam: float = 1.0
    neurons: int = 10
    restarts: int = 3
    objective: Objective = Objective.LOG
    init_scale: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise ValueError("beta1 and beta2 must lie strictly in (0, 1)")
        if self.iterations < 1 or self.neurons < 1 or self.restarts < 1:
            raise ValueError("iterations, neurons, and restarts must be >= 1")
        if self.learning_rate <= 0 or self.lam <= 0 or self.init_scale <= 0:
            raise ValueError("learning_rate, lam, and init_scale must be positive")


@dataclass(frozen=True)
class OptTrace:
    """Per-iteration unit-ball MMD values and the best visited iterate."""

    steps: np.ndarray
    values: np.ndarray
    best_iteration: int
    best_mmd: float
    best_net: RidgeNetwork

    @property
    def history(self) -> list[tuple[int, float]]:
        return [(int(t), float(v)) for t, v in zip(self.steps, self.values)]


def _draw_init(rng: np.random.Generator, n_neurons: int, d: int, init_scale: float):
    """Initialization law, in draw order: w, a, b.

    w entries are N(0, 1) scaled by init_scale/sqrt(d), a entries N(0, 1)
    scaled by init_scale/N, b entries uniform on [0, 0.5].
    """
    w = rng.standard_normal((n_neurons, d)) * (init_scale / np.sqrt(d))
    a = rng.standard_normal(n_neurons) * (init_scale / n_neurons)
    b = rng.uniform(0.0, 0.5, n_neurons)
    return a, w, b


def _fallback_unit_net(d: int, k: int) -> RidgeNetwork:
    w = np.zeros((1, d))
    w[0, 0] = 1.0
    return RidgeNetwork(a=np.array([1.0]), w=w, b=np.array([0.0]), k=k)


def optimize(pair: StandardizedPair, k: int, cfg: OptConfig, rng_seed: int) -> OptTrace:
    """Run one restart of projected Adam on the selected objective.

    The trace has iterations+1 entries (t = 0 records the normalized
    initialization).  Iterates with path seminorm below 1e-12 score 0.
    An exactly-zero discrepancy under the log objective is handled
    internally: all parameters are re-perturbed with N(0, (1e-3)^2)
    noise and the run continues from the same iteration (after 50
    consecutive failed attempts the remaining trace is filled with the
    current value, which is necessarily 0).

    Raises:
        UnsupportedDegree: k < 1.
    """
    if k < 1:
        raise UnsupportedDegree("optimize requires degree k >= 1")
    X = pair.x_std.data
    Y = pair.y_std.data
    m, n = X.shape[0], Y.shape[0]
    d = X.shape[1]
    Z = np.ascontiguousarray(np.vstack([X, Y]))
    s = np.concatenate([np.full(m, 1.0 / m), np.full(n, -1.0 / n)])

    rng = np.random.default_rng(int(rng_seed))
    a, w, b = _draw_init(rng, cfg.neurons, d, cfg.init_scale)

    T = cfg.iterations
    values = np.zeros(T + 1)
    ma, va = np.zeros_like(a), np.zeros_like(a)
    mw, vw = np.zeros_like(w), np.zeros_like(w)
    mb, vb = np.zeros_like(b), np.zeros_like(b)
    best_a, best_w, best_b = a.copy(), w.copy(), b.copy()
    best_mmd, best_t = -1.0, 0

    t_start = 0
    attempts = 0
    last_stuck = -1
    while True:
        status, t_now, best_mmd, best_t = _kernels.adam_run(
            Z,
            s,
            k,
            cfg.learning_rate,
            cfg.beta1,
            cfg.beta2,
            cfg.epsilon_adam,
            cfg.lam,
            cfg.objective is Objective.LOG,
            a,
            w,
            b,
            ma,
            va,
            mw,
            vw,
            mb,
            vb,
            values,
            best_a,
            best_w,
            best_b,
            t_start,
            T,
            best_mmd,
            best_t,
        )
        if status == _kernels.STATUS_DONE:
            break
        if t_now == last_stuck:
            attempts += 1
        else:
            attempts = 1
            last_stuck = t_now
        if attempts > MAX_PERTURB_ATTEMPTS:
            values[t_now:] = values[t_now]
            break
        w += rng.normal(0.0, PERTURB_STD, w.shape)
        a += rng.normal(0.0, PERTURB_STD, a.shape)
        b += rng.normal(0.0, PERTURB_STD, b.shape)
        np.maximum(b, 0.0, out=b)
        t_start = t_now

    best_mmd = max(best_mmd, 0.0)
    raw = RidgeNetwork(a=best_a, w=best_w, b=best_b, k=k)
    if path_seminorm(raw) >= _kernels.SEMINORM_FLOOR:
        best_net, _ = normalize_to_unit_ball(raw)
    else:
        best_net = _fallback_unit_net(d, k)
    return OptTrace(
        steps=np.arange(T + 1),
        values=values,
        best_iteration=int(best_t),
        best_mmd=float(best_mmd),
        best_net=best_net,
    )


def multi_restart(pair: StandardizedPair, k: int, cfg: OptConfig, master_seed: int) -> OptTrace:
    """Run cfg.restarts independent optimize() calls and keep the best.

    Restart i uses seed derive_seed(master_seed, "restart", i); the
    trace with the highest best_mmd wins, ties going to the lowest
    restart index.
    """
    best = None
    for i in range(cfg.restarts):
        trace = optimize(pair, k, cfg, derive_seed(master_seed, "restart", i))
        if best is None or trace.best_mmd > best.best_mmd:
            best = trace
    return best
