"""Data containers, standardization, and evaluation-window selection for sharp RDDs.

A sharp regression discontinuity sample consists of an outcome ``y``, a
running variable ``x``, moderators ``w``, and a treatment indicator that is
a deterministic function of the running variable: ``z = 1`` exactly when
``x > cutoff``. Estimators in this package work on a standardized copy of
the sample in which the cutoff sits at zero and ``x`` has unit in-sample
standard deviation; all results are mapped back to original units.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    """Raised when a dataset violates the sharp-RDD contract."""


def _as_float_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains missing or non-finite values")
    return arr


@dataclass(frozen=True)
class RddDataset:
    """A sharp-RDD sample in original units.

    Attributes
    ----------
    y : outcome vector, length n.
    x : running variable, length n.
    z : 0/1 treatment indicator, ``z[i] == 1`` iff ``x[i] > cutoff``.
    w : moderator matrix, shape (n, p).
    cutoff : treatment threshold on the original x scale.
    """

    y: np.ndarray
    x: np.ndarray
    z: np.ndarray
    w: np.ndarray
    cutoff: float

    def __post_init__(self):
        y = _as_float_vector(self.y, "y")
        x = _as_float_vector(self.x, "x")
        z = np.asarray(self.z)
        w = np.asarray(self.w, dtype=float)
        if w.ndim == 1:
            w = w.reshape(-1, 1)
        if w.ndim != 2:
            raise DataError(f"w must be a matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise DataError("w contains missing or non-finite values")
        n = y.shape[0]
        if n < 1:
            raise DataError("dataset is empty")
        if x.shape[0] != n or z.shape[0] != n or w.shape[0] != n:
            raise DataError(
                "column lengths differ: "
                f"y={n}, x={x.shape[0]}, z={z.shape[0]}, w rows={w.shape[0]}"
            )
        if not np.all(np.isin(z, (0, 1))):
            raise DataError("z must contain only 0/1 values")
        expected = (x > float(self.cutoff)).astype(int)
        bad = np.flatnonzero(z.astype(int) != expected)
        if bad.size:
            i = int(bad[0])
            raise DataError(
                f"z is inconsistent with the assignment rule z = 1(x > cutoff) "
                f"at row {i}: x={x[i]!r}, cutoff={self.cutoff!r}, z={int(z[i])}"
            )
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z.astype(int))
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "cutoff", float(self.cutoff))
        self.y.setflags(write=False)
        self.x.setflags(write=False)
        self.z.setflags(write=False)
        self.w.setflags(write=False)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.w.shape[1]


@dataclass(frozen=True)
class StandardizedDataset:
    """An :class:`RddDataset` mapped onto the estimation scale.

    The running variable is shifted so the cutoff is 0 and scaled to unit
    in-sample standard deviation. The outcome is optionally centered and
    scaled to unit standard deviation. The affine maps are recorded so any
    quantity can be returned in original units:

    ``x_original = x * x_scale + x_shift``,
    ``y_original = y * y_scale + y_shift``.
    """

    inner: RddDataset
    x_shift: float
    x_scale: float
    y_shift: float
    y_scale: float

    @property
    def y(self) -> np.ndarray:
        return self.inner.y

    @property
    def x(self) -> np.ndarray:
        return self.inner.x

    @property
    def z(self) -> np.ndarray:
        return self.inner.z

    @property
    def w(self) -> np.ndarray:
        return self.inner.w

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def p(self) -> int:
        return self.inner.p

    def original_x(self) -> np.ndarray:
        return self.inner.x * self.x_scale + self.x_shift

    def original_y(self, values: np.ndarray | None = None) -> np.ndarray:
        if values is None:
            values = self.inner.y
        return np.asarray(values) * self.y_scale + self.y_shift


@dataclass(frozen=True)
class EvaluationWindow:
    """Observations whose moderators define the CATE estimand set.

    ``indices`` lists every row with ``|x_i| <= delta`` on the standardized
    scale, in increasing order.
    """

    delta: float
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=int))
        self.indices.setflags(write=False)

    @property
    def size(self) -> int:
        return self.indices.shape[0]


def standardize(data: RddDataset, center_y: bool = True) -> StandardizedDataset:
    """Map a dataset onto the estimation scale.

    The running variable becomes ``(x - cutoff) / sd(x)`` so the cutoff is 0
    and the in-sample standard deviation is 1. When ``center_y`` is set, the
    outcome becomes ``(y - mean(y)) / sd(y)`` (a constant outcome keeps unit
    scale). Treatment indicators are unchanged: the positive affine map
    preserves the sign of ``x - cutoff``.
    """
    x_scale = float(np.std(data.x, ddof=1)) if data.n > 1 else 0.0
    if x_scale <= 0.0 or not np.isfinite(x_scale):
        raise DataError("degenerate running variable: x has zero variance")
    x_shift = data.cutoff
    x_std = (data.x - x_shift) / x_scale

    if center_y:
        y_shift = float(np.mean(data.y))
        y_scale = float(np.std(data.y, ddof=1)) if data.n > 1 else 0.0
        if y_scale <= 0.0 or not np.isfinite(y_scale):
            y_scale = 1.0
        y_std = (data.y - y_shift) / y_scale
    else:
        y_shift = 0.0
        y_scale = 1.0
        y_std = data.y

    inner = RddDataset(y=y_std, x=x_std, z=data.z, w=data.w, cutoff=0.0)
    return StandardizedDataset(
        inner=inner,
        x_shift=x_shift,
        x_scale=x_scale,
        y_shift=y_shift,
        y_scale=y_scale,
    )


def destandardize(sdata: StandardizedDataset) -> RddDataset:
    """Invert :func:`standardize`, recovering the original-units dataset."""
    return RddDataset(
        y=sdata.original_y(),
        x=sdata.original_x(),
        z=sdata.inner.z,
        w=sdata.inner.w,
        cutoff=sdata.x_shift,
    )


def evaluation_window(sdata: StandardizedDataset, delta: float = 0.1) -> EvaluationWindow:
    """Select the rows with ``|x| <= delta`` on the standardized scale."""
    if delta <= 0:
        raise DataError(f"delta must be positive, got {delta!r}")
    indices = np.flatnonzero(np.abs(sdata.x) <= delta)
    if indices.size == 0:
        raise DataError(
            f"no observations near cutoff: |x| <= {delta} selects nothing"
        )
    return EvaluationWindow(delta=float(delta), indices=indices)


def load_csv(
    path,
    y: str,
    x: str,
    w: list[str],
    cutoff: float,
    z: str | None = None,
) -> RddDataset:
    """Read a dataset from a headed CSV file.

    Column names map CSV columns onto the dataset fields. The treatment
    indicator is always recomputed from ``x`` and ``cutoff``; when a ``z``
    column is supplied it is checked against the assignment rule and any
    mismatch is rejected with the offending row.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file, expected a header row")
        required = [y, x, *w] + ([z] if z else [])
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise DataError(f"{path}: missing column(s) {', '.join(missing)}")
        rows = list(reader)

    def parse_column(name: str) -> np.ndarray:
        out = np.empty(len(rows))
        for i, row in enumerate(rows):
            cell = row[name]
            try:
                out[i] = float(cell)
            except (TypeError, ValueError):
                raise DataError(
                    f"{path}: non-numeric value {cell!r} in column {name!r}, "
                    f"data row {i + 1}"
                ) from None
        return out

    y_col = parse_column(y)
    x_col = parse_column(x)
    w_cols = np.column_stack([parse_column(c) for c in w]) if w else np.empty((len(rows), 0))
    z_col = (x_col > cutoff).astype(int)
    if z is not None:
        provided = parse_column(z).astype(int)
        bad = np.flatnonzero(provided != z_col)
        if bad.size:
            i = int(bad[0])
            raise DataError(
                f"{path}: column {z!r} disagrees with z = 1(x > cutoff) at "
                f"data row {i + 1}: x={x_col[i]!r}, z={provided[i]}"
            )
    return RddDataset(y=y_col, x=x_col, z=z_col, w=w_cols, cutoff=float(cutoff))
