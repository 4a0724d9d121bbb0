"""Ridge-spline networks: evaluation, path seminorm, analytic gradients.

A network is f(x) = sum_j a_j (w_j.x - b_j)_+^k with b_j >= 0.  For
k = 0 the truncated power is the closed-halfspace indicator
1{w_j.x - b_j >= 0}.  The path seminorm sum_j |a_j| ||w_j||^k upper
bounds the network's total-variation seminorm and is tight at optima,
so unit-seminorm networks are the feasible witnesses of the statistic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DataFormatError,
    DimensionMismatch,
    UnsupportedDegree,
    ZeroDiscrepancy,
    ZeroSeminorm,
)
from .model import StandardizedPair


class Objective(enum.Enum):
    """Training objective for the penalized discrepancy problem.

    LOG:   -(1/k) log((1/N) |P_m f - Q_n f|) + (lam/(k N)) sum_j |a_j| ||w_j||^k
    NOLOG: -(1/(k N)) |P_m f - Q_n f| + (lam/k) ((1/N) sum_j |a_j| ||w_j||^k)^2
    """

    LOG = "log"
    NOLOG = "nolog"


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RidgeNetwork:
    """N neurons (a_j, w_j, b_j) of common degree k.

    Fields are stored struct-of-arrays: a is (N,), w is (N, d), b is
    (N,).  All b_j must be nonnegative and every parameter finite.
    """

    a: np.ndarray
    w: np.ndarray
    b: np.ndarray
    k: int

    def __post_init__(self):
        a = _freeze(np.atleast_1d(self.a))
        w = _freeze(np.atleast_2d(self.w))
        b = _freeze(np.atleast_1d(self.b))
        if a.ndim != 1 or b.ndim != 1 or w.ndim != 2:
            raise DimensionMismatch("a and b must be vectors, w a matrix")
        n = a.shape[0]
        if n < 1 or w.shape[0] != n or b.shape[0] != n:
            raise DimensionMismatch(
                f"inconsistent neuron counts: a {a.shape}, w {w.shape}, b {b.shape}"
            )
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise DataFormatError("network parameters contain non-finite entries")
        if np.any(b < 0):
            raise DataFormatError("all offsets b_j must be >= 0")
        if int(self.k) < 0:
            raise UnsupportedDegree(f"degree k must be >= 0, got {self.k}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", int(self.k))

    @property
    def n_neurons(self) -> int:
        return self.a.shape[0]

    @property
    def d(self) -> int:
        return self.w.shape[1]


def _powplus(t: np.ndarray, k: int) -> np.ndarray:
    """(t)_+^k with the k = 0 convention t_+^0 = 1{t >= 0}."""
    if k == 0:
        return (t >= 0).astype(np.float64)
    tp = np.maximum(t, 0.0)
    if k == 1:
        return tp
    if k == 2:
        return tp * tp
    return tp**k


def evaluate(net: RidgeNetwork, x: np.ndarray) -> float | np.ndarray:
    """Evaluate the network at a point (d,) or a sample matrix (M, d).

    Returns a scalar for a single point, an (M,) vector for a matrix.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    pts = x.reshape(1, -1) if single else x
    if pts.ndim != 2 or pts.shape[1] != net.d:
        raise DimensionMismatch(f"expected points of dimension {net.d}, got shape {x.shape}")
    t = pts @ net.w.T - net.b
    vals = _powplus(t, net.k) @ net.a
    return float(vals[0]) if single else vals


def path_seminorm(net: RidgeNetwork) -> float:
    """sum_j |a_j| ||w_j||^k; for k = 0 the weight factor is 1 even at w = 0."""
    if net.k == 0:
        return float(np.sum(np.abs(net.a)))
    wn = np.sqrt(np.sum(net.w**2, axis=1))
    return float(np.sum(np.abs(net.a) * wn**net.k))


@dataclass(frozen=True)
class RidgeGradient:
    """Objective gradient, same neuron layout as the network."""

    a: np.ndarray
    w: np.ndarray
    b: np.ndarray


def discrepancy(net: RidgeNetwork, pair: StandardizedPair) -> float:
    """P_m f - Q_n f on the pair's data (signed)."""
    fx = evaluate(net, pair.x_std.data)
    fy = evaluate(net, pair.y_std.data)
    return float(np.mean(fx) - np.mean(fy))


def grad_objective(
    net: RidgeNetwork,
    pair: StandardizedPair,
    lam: float,
    objective: Objective = Objective.LOG,
) -> RidgeGradient:
    """Analytic gradient of the selected objective in every parameter.

    Subgradient conventions: d/dt (t)_+^k at t = 0 is 0 for k = 1 (and
    vanishes automatically for k >= 2); d|a|/da at 0 is 0; the gradient
    of ||w|| at w = 0 is the zero vector.

    Raises:
        UnsupportedDegree: k = 0 (indicator gradients vanish a.e.).
        ZeroDiscrepancy: LOG objective with P_m f - Q_n f exactly 0.
    """
    k = net.k
    if k == 0:
        raise UnsupportedDegree("gradients are undefined for k = 0")
    X = pair.x_std.data
    Y = pair.y_std.data
    if X.shape[1] != net.d or Y.shape[1] != net.d:
        raise DimensionMismatch("pair dimension does not match network dimension")
    m, n = X.shape[0], Y.shape[0]
    Z = np.vstack([X, Y])
    s = np.concatenate([np.full(m, 1.0 / m), np.full(n, -1.0 / n)])

    T = Z @ net.w.T - net.b
    tp = np.maximum(T, 0.0)
    tpk = _powplus(T, k)
    D = float(s @ (tpk @ net.a))

    dD_a = s @ tpk
    if k == 1:
        g = (T > 0.0).astype(np.float64)
    else:
        g = k * tp ** (k - 1)
    c = (s[:, None] * g) * net.a
    dD_w = c.T @ Z
    dD_b = -c.sum(axis=0)

    wn = np.sqrt(np.sum(net.w**2, axis=1))
    wnk = wn**k
    pen_a = np.sign(net.a) * wnk
    with np.errstate(divide="ignore", invalid="ignore"):
        wfac = np.where(wn > 0.0, k * wn ** (k - 2), 0.0)
    pen_w = (np.abs(net.a) * wfac)[:, None] * net.w

    N = net.n_neurons
    if objective is Objective.LOG:
        if D == 0.0:
            raise ZeroDiscrepancy("empirical discrepancy is exactly 0")
        cD = -1.0 / (k * D)
        cP = lam / (k * N)
    else:
        cD = -np.sign(D) / (k * N)
        cP = 2.0 * lam * float(np.sum(np.abs(net.a) * wnk)) / (k * N * N)
    return RidgeGradient(
        a=cD * dD_a + cP * pen_a,
        w=cD * dD_w + cP * pen_w,
        b=cD * dD_b,
    )


def normalize_to_unit_ball(net: RidgeNetwork) -> tuple[RidgeNetwork, float]:
    """Divide the outer weights by the path seminorm.

    Returns the unit-seminorm network and the seminorm that was divided
    out; eval scales by exactly 1/seminorm at every point.

    Raises:
        ZeroSeminorm: path_seminorm(net) is 0.
    """
    s = path_seminorm(net)
    if s <= 0.0:
        raise ZeroSeminorm("cannot normalize a network with zero path seminorm")
    return RidgeNetwork(a=net.a / s, w=net.w, b=net.b, k=net.k), s


def write_network_csv(net: RidgeNetwork, path) -> None:
    """Serialize as CSV: first line `k,d`, then one `a,w1..wd,b` row per neuron."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{net.k},{net.d}\n")
        for j in range(net.n_neurons):
            fields = [net.a[j], *net.w[j], net.b[j]]
            fh.write(",".join(format(v, ".17g") for v in fields))
            fh.write("\n")


def read_network_csv(path) -> RidgeNetwork:
    """Inverse of write_network_csv."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise DataFormatError(f"{path}: empty network file")
    try:
        k, d = (int(v) for v in lines[0].split(","))
    except ValueError as exc:
        raise DataFormatError(f"{path}: line 1: {exc}") from None
    a, w, b = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            vals = [float(v) for v in line.split(",")]
        except ValueError as exc:
            raise DataFormatError(f"{path}: line {lineno}: {exc}") from None
        if len(vals) != d + 2:
            raise DataFormatError(f"{path}: line {lineno}: expected {d + 2} fields")
        a.append(vals[0])
        w.append(vals[1 : 1 + d])
        b.append(vals[-1])
    if not a:
        raise DataFormatError(f"{path}: no neurons")
    return RidgeNetwork(a=np.array(a), w=np.array(w), b=np.array(b), k=k)
