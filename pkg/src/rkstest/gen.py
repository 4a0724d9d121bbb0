"""Seeded samplers and closed-form log-densities for the benchmark settings.

Five two-sample families, each a pair (P, Q) differing along axis 1
(the first column; all the tests are rotation invariant, so the axis
choice is immaterial):

  pancake-shift  P: axis1 ~ N(0,1), others ~ N(0,16);  Q: axis1 mean v
  ball-shift     P: N(0, I);                           Q: axis1 mean v
  t-coord        P: N(0, I);                           Q: axis1 ~ t(v)
  var-one        P: N(0, I);                           Q: axis1 var v
  var-all        P: N(0, I);                           Q: N(0, v I)
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, UnknownSetting
from .model import Label, SampleSet
from .seeds import derive_seed


class SettingName(enum.Enum):
    PANCAKE_SHIFT = "pancake-shift"
    BALL_SHIFT = "ball-shift"
    T_COORD = "t-coord"
    VAR_ONE = "var-one"
    VAR_ALL = "var-all"


class Role(enum.Enum):
    P = "p"
    Q = "q"


#: Benchmark default parameter per setting.
DEFAULT_V = {
    SettingName.PANCAKE_SHIFT: 0.3,
    SettingName.BALL_SHIFT: 0.2,
    SettingName.T_COORD: 3.0,
    SettingName.VAR_ONE: 1.4,
    SettingName.VAR_ALL: 1.2,
}


@dataclass(frozen=True)
class SettingSpec:
    """One side (P or Q) of a benchmark setting."""

    name: SettingName
    d: int
    v: float
    role: Role

    def __post_init__(self):
        name = self.name if isinstance(self.name, SettingName) else SettingName(self.name)
        role = self.role if isinstance(self.role, Role) else Role(str(self.role).lower())
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "role", role)
        object.__setattr__(self, "v", float(self.v))
        object.__setattr__(self, "d", int(self.d))
        if self.d < 1:
            raise InvalidSpec(f"d must be >= 1, got {self.d}")
        if name in (SettingName.VAR_ONE, SettingName.VAR_ALL) and not self.v > 0:
            raise InvalidSpec(f"{name.value} needs a positive variance, got v={self.v}")
        if name is SettingName.T_COORD and not self.v > 2:
            if self.v >= 1 and float(self.v).is_integer():
                warnings.warn(
                    f"t-coord with v={self.v} <= 2 has infinite variance; "
                    "asymptotic-null moment conditions fail",
                    stacklevel=2,
                )
            else:
                raise InvalidSpec(f"t-coord degrees of freedom must be > 2 or an integer >= 1, got {self.v}")


def sample(spec: SettingSpec, n: int, seed: int) -> SampleSet:
    """Draw n i.i.d. rows from the specified distribution.

    Student-t variates use normal / sqrt(chisquare/v), so the tails are
    exact.  Deterministic in (spec, n, seed).
    """
    if n < 1:
        raise InvalidSpec(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(int(seed))
    z = rng.standard_normal((n, spec.d))
    name, role, v = spec.name, spec.role, spec.v
    if name is SettingName.PANCAKE_SHIFT:
        z[:, 1:] *= 4.0
        if role is Role.Q:
            z[:, 0] += v
    elif name is SettingName.BALL_SHIFT:
        if role is Role.Q:
            z[:, 0] += v
    elif name is SettingName.T_COORD:
        if role is Role.Q:
            chi = rng.chisquare(v, n)
            z[:, 0] /= np.sqrt(chi / v)
    elif name is SettingName.VAR_ONE:
        if role is Role.Q:
            z[:, 0] *= math.sqrt(v)
    elif name is SettingName.VAR_ALL:
        if role is Role.Q:
            z *= math.sqrt(v)
    else:  # pragma: no cover - enum is closed
        raise UnknownSetting(str(name))
    label = Label.X if role is Role.P else Label.Y
    return SampleSet(z, label=label, seed=int(seed))


def sample_null_mixture(
    spec_p: SettingSpec, spec_q: SettingSpec, m: int, n: int, seed: int
) -> tuple[SampleSet, SampleSet]:
    """Draw m + n i.i.d. points from the mixture (m P + n Q)/(m + n).

    Each point picks its component by an independent Bernoulli(m/(m+n))
    flip; the first m points become the pseudo-X sample, the rest the
    pseudo-Y sample.
    """
    if spec_p.d != spec_q.d:
        raise InvalidSpec(f"specs disagree on d: {spec_p.d} vs {spec_q.d}")
    if m < 1 or n < 1:
        raise InvalidSpec("mixture needs m >= 1 and n >= 1")
    total = m + n
    rng = np.random.default_rng(derive_seed(seed, "mix-choice"))
    from_p = rng.random(total) < m / total
    zp = sample(spec_p, total, derive_seed(seed, "mix-p")).data
    zq = sample(spec_q, total, derive_seed(seed, "mix-q")).data
    z = np.where(from_p[:, None], zp, zq)
    return (
        SampleSet(z[:m], label=Label.X, seed=int(seed)),
        SampleSet(z[m:], label=Label.Y, seed=int(seed)),
    )


_LOG_2PI = math.log(2.0 * math.pi)


def _normal_logpdf(z: np.ndarray, mean: float, var: float) -> np.ndarray:
    return -0.5 * ((z - mean) ** 2 / var + math.log(var) + _LOG_2PI)


def _student_t_logpdf(z: np.ndarray, nu: float) -> np.ndarray:
    const = (
        math.lgamma(0.5 * (nu + 1.0))
        - math.lgamma(0.5 * nu)
        - 0.5 * math.log(nu * math.pi)
    )
    return const - 0.5 * (nu + 1.0) * np.log1p(z * z / nu)


def log_density(spec: SettingSpec, z: np.ndarray) -> np.ndarray:
    """Row-wise log-density of the specified distribution at points z (n, d)."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 2 or z.shape[1] != spec.d:
        raise InvalidSpec(f"points must be (n, {spec.d}), got {z.shape}")
    name, role, v = spec.name, spec.role, spec.v
    first = z[:, 0]
    rest = z[:, 1:]
    if name is SettingName.PANCAKE_SHIFT:
        mu = v if role is Role.Q else 0.0
        return _normal_logpdf(first, mu, 1.0) + _normal_logpdf(rest, 0.0, 16.0).sum(axis=1)
    if name is SettingName.BALL_SHIFT:
        mu = v if role is Role.Q else 0.0
        return _normal_logpdf(first, mu, 1.0) + _normal_logpdf(rest, 0.0, 1.0).sum(axis=1)
    if name is SettingName.T_COORD:
        head = _student_t_logpdf(first, v) if role is Role.Q else _normal_logpdf(first, 0.0, 1.0)
        return head + _normal_logpdf(rest, 0.0, 1.0).sum(axis=1)
    if name is SettingName.VAR_ONE:
        var1 = v if role is Role.Q else 1.0
        return _normal_logpdf(first, 0.0, var1) + _normal_logpdf(rest, 0.0, 1.0).sum(axis=1)
    if name is SettingName.VAR_ALL:
        var = v if role is Role.Q else 1.0
        return _normal_logpdf(z, 0.0, var).sum(axis=1)
    raise UnknownSetting(str(name))  # pragma: no cover - enum is closed
