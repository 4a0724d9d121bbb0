"""Replicated null/alternative experiments and ROC/AUC summaries.

Each replicate draws a null pair from the mixture (m P + n Q)/(m + n)
and an alternative pair (x from P, y from Q), then evaluates every
configured method's raw statistic on both.  ROC curves threshold the
raw statistics directly; AUC uses the Mann-Whitney pair-counting
identity with midrank ties.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .baselines import Estimator, KernelSpec, energy_distance, kernel_mmd2, lrt_oracle
from .errors import DataFormatError, EmptyInput
from .gen import DEFAULT_V, Role, SettingName, SettingSpec, sample, sample_null_mixture
from .model import SampleSet
from .seeds import derive_seed
from .statistic import RksConfig, compute_rks

METHODS = (
    "rks-k0",
    "rks-k1",
    "rks-k2",
    "rks-k3",
    "kmmd-poly1",
    "kmmd-poly2",
    "kmmd-poly3",
    "kmmd-gauss",
    "energy",
    "lrt",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """A replicated two-sample experiment on one benchmark setting."""

    setting: SettingName
    d: int
    m: int
    n: int
    reps: int
    methods: tuple[str, ...]
    seed: int = 0
    v: Optional[float] = None
    output: Optional[str] = None

    def __post_init__(self):
        name = self.setting if isinstance(self.setting, SettingName) else SettingName(self.setting)
        object.__setattr__(self, "setting", name)
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.reps < 2:
            raise ValueError(f"reps must be >= 2, got {self.reps}")
        if not self.methods:
            raise ValueError("methods must be nonempty")
        unknown = [mth for mth in self.methods if mth not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}; choose from {METHODS}")

    @property
    def v_value(self) -> float:
        return DEFAULT_V[self.setting] if self.v is None else self.v

    def spec(self, role: Role) -> SettingSpec:
        return SettingSpec(name=self.setting, d=self.d, v=self.v_value, role=role)


@dataclass(frozen=True)
class RocCurve:
    """(fpr, tpr) points sorted by threshold, plus the midrank AUC."""

    points: np.ndarray
    auc: float


@dataclass(frozen=True)
class ExperimentRecord:
    """All per-replicate statistics plus per-method AUC summaries."""

    config: ExperimentConfig
    rows: tuple[tuple[int, str, str, float], ...]
    null_values: dict[str, np.ndarray] = field(repr=False)
    alt_values: dict[str, np.ndarray] = field(repr=False)
    aucs: dict[str, float] = field(default_factory=dict)


def _method_statistic(method: str, x: SampleSet, y: SampleSet, cfg: ExperimentConfig, seed: int) -> float:
    if method.startswith("rks-k"):
        k = int(method[len("rks-k") :])
        return compute_rks(x, y, RksConfig(k=k), seed=seed).value
    if method.startswith("kmmd-poly"):
        return kernel_mmd2(x, y, KernelSpec.polynomial(int(method[-1])), Estimator.BIASED)
    if method == "kmmd-gauss":
        return kernel_mmd2(x, y, KernelSpec.gaussian(), Estimator.BIASED)
    if method == "energy":
        return energy_distance(x, y)
    if method == "lrt":
        return lrt_oracle(x, y, cfg.spec(Role.P))
    raise ValueError(f"unknown method {method}")


def run_experiment(cfg: ExperimentConfig) -> ExperimentRecord:
    """Run all replicates; write the long-format CSV if cfg.output is set.

    Row order is deterministic: replicate-major, then methods in config
    order, null before alt.  Any failure aborts the run.  Identical
    (config, seed) produce identical CSV bytes.
    """
    spec_p = cfg.spec(Role.P)
    spec_q = cfg.spec(Role.Q)
    rows: list[tuple[int, str, str, float]] = []
    null_values: dict[str, list[float]] = {mth: [] for mth in cfg.methods}
    alt_values: dict[str, list[float]] = {mth: [] for mth in cfg.methods}
    for r in range(cfg.reps):
        nx, ny = sample_null_mixture(spec_p, spec_q, cfg.m, cfg.n, derive_seed(cfg.seed, "rep", r, "null"))
        ax = sample(spec_p, cfg.m, derive_seed(cfg.seed, "rep", r, "alt-x"))
        ay = sample(spec_q, cfg.n, derive_seed(cfg.seed, "rep", r, "alt-y"))
        for mth in cfg.methods:
            for cond, (u, w) in (("null", (nx, ny)), ("alt", (ax, ay))):
                val = _method_statistic(mth, u, w, cfg, derive_seed(cfg.seed, "rep", r, mth, cond))
                rows.append((r, mth, cond, val))
                (null_values if cond == "null" else alt_values)[mth].append(val)
    nulls = {mth: np.array(vals) for mth, vals in null_values.items()}
    alts = {mth: np.array(vals) for mth, vals in alt_values.items()}
    aucs = {mth: roc_from_stats(nulls[mth], alts[mth]).auc for mth in cfg.methods}
    record = ExperimentRecord(
        config=cfg, rows=tuple(rows), null_values=nulls, alt_values=alts, aucs=aucs
    )
    if cfg.output:
        write_experiment_csv(record.rows, cfg.output)
    return record


def write_experiment_csv(rows: Sequence[tuple[int, str, str, float]], path) -> None:
    """Long-format CSV: replicate, method, condition, value (with header)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("replicate,method,condition,value\n")
        for r, mth, cond, val in rows:
            fh.write(f"{r},{mth},{cond},{format(val, '.17g')}\n")


def read_experiment_csv(path) -> list[tuple[int, str, str, float]]:
    """Inverse of write_experiment_csv."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or (lineno == 1 and line.startswith("replicate,")):
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise DataFormatError(f"{path}: line {lineno}: expected 4 fields")
            try:
                rows.append((int(parts[0]), parts[1], parts[2], float(parts[3])))
            except ValueError as exc:
                raise DataFormatError(f"{path}: line {lineno}: {exc}") from None
    return rows


def roc_from_stats(null_vals: np.ndarray, alt_vals: np.ndarray) -> RocCurve:
    """ROC curve and AUC from raw statistics.

    Thresholds sweep the pooled distinct values from above; a point's
    tpr/fpr are the fractions of alt/null values >= the threshold, so
    the curve starts at (0, 0) and ends at (1, 1).  AUC is
    (#{alt > null} + 0.5 #{alt = null}) / (|alt| |null|).

    Raises:
        EmptyInput: either list is empty.
    """
    null_vals = np.asarray(null_vals, dtype=np.float64).ravel()
    alt_vals = np.asarray(alt_vals, dtype=np.float64).ravel()
    if null_vals.size == 0 or alt_vals.size == 0:
        raise EmptyInput("roc_from_stats needs nonempty value lists")
    thresholds = np.unique(np.concatenate([null_vals, alt_vals]))[::-1]
    ns = np.sort(null_vals)
    asort = np.sort(alt_vals)
    nn, na = ns.size, asort.size
    fpr = (nn - np.searchsorted(ns, thresholds, side="left")) / nn
    tpr = (na - np.searchsorted(asort, thresholds, side="left")) / na
    points = np.vstack([np.zeros((1, 2)), np.column_stack([fpr, tpr])])

    greater = int(np.searchsorted(ns, asort, side="left").sum())
    equal = int((np.searchsorted(ns, asort, side="right") - np.searchsorted(ns, asort, side="left")).sum())
    auc = (greater + 0.5 * equal) / (na * nn)
    return RocCurve(points=points, auc=float(auc))
