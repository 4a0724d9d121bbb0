"""Core data types, sample standardization, and CSV I/O.

Standardization centers the pooled sample at its mean and rescales so
the mean squared row norm is 1.  A statistic computed on standardized
data at degree k is mapped back to the original scale by multiplying
with scale**k (destandardize_value).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .errors import DataFormatError, DegenerateScale, DimensionMismatch

if TYPE_CHECKING:
    from .ridge import RidgeNetwork

SCALE_FLOOR = 1e-14


class Label(enum.Enum):
    X = "x"
    Y = "y"


def _as_sample_matrix(data) -> np.ndarray:
    arr = np.array(data, dtype=np.float64, copy=True)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(
            f"sample data must be an m x d matrix with m, d >= 1, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise DataFormatError("sample data contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SampleSet:
    """An m x d matrix of observations plus provenance.

    Rows are observations, columns features.  1-d input is treated as a
    single-column matrix.  Immutable after construction.
    """

    data: np.ndarray
    label: Label = Label.X
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "data", _as_sample_matrix(self.data))

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class StandardizedPair:
    """A pair of samples on the standardized scale.

    As produced by standardize(), the pooled rows of (x_std, y_std) have
    mean zero and mean squared norm one; center and scale record the
    affine map back to the original coordinates.  The fields are not
    re-validated here so that callers can wrap already-scaled data.
    """

    x_std: SampleSet
    y_std: SampleSet
    center: np.ndarray
    scale: float


@dataclass(frozen=True)
class Standardization:
    """Summary of a standardization: the center vector and the scale."""

    center: np.ndarray
    scale: float


@dataclass(frozen=True)
class MMDResult:
    """Outcome of a statistic computation.

    value is on the original data scale and equals the best traced
    unit-ball MMD times scale**k.  The witness network lives on the
    standardized scale.
    """

    value: float
    witness: "RidgeNetwork"
    trace: Sequence[tuple[int, float]]
    restarts_used: int
    standardization: Standardization
    k: int = field(default=0)


def canonical_pair(x: SampleSet, y: SampleSet) -> tuple[SampleSet, SampleSet]:
    """Order a sample pair by a label-independent rule.

    Statistics that are symmetric in their two samples compute on the
    canonical order, which makes T(x, y) == T(y, x) bitwise rather than
    merely up to floating-point accumulation order.  Sorts by sample
    size, then by the raw data bytes.
    """
    if x.m != y.m:
        return (x, y) if x.m < y.m else (y, x)
    if x.data.tobytes() <= y.data.tobytes():
        return (x, y)
    return (y, x)


def standardize(x: SampleSet, y: SampleSet) -> StandardizedPair:
    """Center the pooled sample and rescale to unit mean squared norm.

    Args:
        x, y: samples with matching dimension d.

    Returns:
        StandardizedPair with rows (row - center) / scale, where center
        is the pooled mean and scale = sqrt(mean of squared centered
        row norms).

    Raises:
        DimensionMismatch: x.d != y.d.
        DegenerateScale: scale < 1e-14 (all pooled points equal).
    """
    if x.d != y.d:
        raise DimensionMismatch(f"x has d={x.d}, y has d={y.d}")
    pooled = np.vstack([x.data, y.data])
    center = pooled.mean(axis=0)
    centered = pooled - center
    scale = float(np.sqrt(np.mean(np.sum(centered**2, axis=1))))
    if scale < SCALE_FLOOR:
        raise DegenerateScale(f"pooled scale {scale} below {SCALE_FLOOR}")
    std = centered / scale
    x_std = SampleSet(std[: x.m], label=x.label, seed=x.seed)
    y_std = SampleSet(std[x.m :], label=y.label, seed=y.seed)
    return StandardizedPair(x_std=x_std, y_std=y_std, center=center, scale=scale)


def destandardize_value(v_std: float, scale: float, k: int) -> float:
    """Map a statistic value from the standardized scale back: v * scale**k."""
    return float(v_std) * float(scale) ** int(k)


def read_sample_csv(path, label: Label = Label.X, header: bool = False) -> SampleSet:
    """Read one observation per row from a CSV file of decimal floats.

    Args:
        path: file to read.
        label: provenance label to attach.
        header: skip the first line when true.

    Raises:
        DataFormatError: empty file, ragged rows, or unparseable fields
            (message carries the 1-based line number).
    """
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if header and lineno == 1:
                continue
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            try:
                row = [float(f) for f in fields]
            except ValueError as exc:
                raise DataFormatError(f"{path}: line {lineno}: {exc}") from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DataFormatError(
                    f"{path}: line {lineno}: expected {width} fields, got {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return SampleSet(np.array(rows, dtype=np.float64), label=label)


def write_sample_csv(sample: SampleSet, path) -> None:
    """Write one observation per row, no header, 17 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in sample.data:
            fh.write(",".join(format(v, ".17g") for v in row))
            fh.write("\n")
