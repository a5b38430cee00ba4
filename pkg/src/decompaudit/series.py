"""Core series representation, chronological splitting, scaling, windowing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, InvalidConfigError, InvalidInputError


def _as_finite_array(values, what: str = "values") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidInputError(f"{what} must be non-empty")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InvalidInputError(f"{what} contains a non-finite entry at index {bad}")
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A uniformly sampled scalar series with provenance metadata."""

    values: np.ndarray
    name: str = "series"
    resolution: str | None = None

    def __post_init__(self):
        arr = _as_finite_array(self.values, "series values")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def slice(self, start: int, stop: int, name: str | None = None) -> "TimeSeries":
        return TimeSeries(
            self.values[start:stop].copy(),
            name=name if name is not None else self.name,
            resolution=self.resolution,
        )


@dataclass(frozen=True)
class SplitSpec:
    """Chronological split bookkeeping: first ``train_len`` points train, rest test."""

    train_fraction: float
    train_len: int
    total_len: int

    def __post_init__(self):
        if not (1 <= self.train_len < self.total_len):
            raise InvalidConfigError(
                f"split requires 1 <= train_len < total_len, got "
                f"{self.train_len} / {self.total_len}"
            )

    @property
    def test_len(self) -> int:
        return self.total_len - self.train_len


@dataclass(frozen=True)
class WindowSpec:
    """Sliding-window geometry: ``window`` past steps predict the next step."""

    window: int = 12
    horizon: int = 1

    def __post_init__(self):
        if self.window < 1:
            raise InvalidConfigError(f"window must be >= 1, got {self.window}")
        if self.horizon != 1:
            raise InvalidConfigError("only one-step-ahead (horizon=1) is supported")


def split_chronological(
    series: TimeSeries, train_fraction: float
) -> tuple[TimeSeries, TimeSeries, SplitSpec]:
    """Split a series into leading train and trailing test parts, no shuffling.

    The train length is ``floor(train_fraction * len(series))``; a fraction
    that would leave either side empty raises :class:`InvalidConfigError`.
    """
    if not (0.0 < train_fraction < 1.0):
        raise InvalidConfigError(f"train_fraction must be in (0, 1), got {train_fraction}")
    total = len(series)
    if total < 2:
        raise InvalidConfigError("cannot split a series with fewer than 2 points")
    train_len = math.floor(train_fraction * total)
    if train_len < 1 or train_len >= total:
        raise InvalidConfigError(
            f"train_fraction {train_fraction} leaves an empty split for length {total}"
        )
    spec = SplitSpec(train_fraction=train_fraction, train_len=train_len, total_len=total)
    train = series.slice(0, train_len, name=f"{series.name}[train]")
    test = series.slice(train_len, total, name=f"{series.name}[test]")
    return train, test, spec


@dataclass(frozen=True)
class MinMaxParams:
    """Per-channel min-max scaler parameters, fitted on training data only."""

    minimum: float
    maximum: float

    def __post_init__(self):
        if self.maximum < self.minimum:
            raise InvalidConfigError(
                f"scaler requires min <= max, got {self.minimum} > {self.maximum}"
            )

    @property
    def degenerate(self) -> bool:
        return self.maximum == self.minimum


def minmax_fit(channel) -> MinMaxParams:
    """Record the min and max of one channel."""
    arr = _as_finite_array(channel, "channel")
    return MinMaxParams(minimum=float(arr.min()), maximum=float(arr.max()))


def minmax_apply(params: MinMaxParams, channel) -> np.ndarray:
    """Map values through ``(x - min) / (max - min)``.

    In-range values land in [0, 1]; out-of-range values are NOT clipped, so a
    test split may legitimately exceed the unit interval. Degenerate channels
    (max == min) map to 0.0 everywhere.
    """
    arr = np.asarray(channel, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("cannot scale non-finite values")
    if params.degenerate:
        return np.zeros_like(arr)
    return (arr - params.minimum) / (params.maximum - params.minimum)


def minmax_invert(params: MinMaxParams, scaled) -> np.ndarray:
    """Inverse of :func:`minmax_apply`; degenerate channels invert to the min."""
    arr = np.asarray(scaled, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("cannot invert non-finite values")
    if params.degenerate:
        return np.full_like(arr, params.minimum)
    return arr * (params.maximum - params.minimum) + params.minimum


def make_windows(
    features, target, spec: WindowSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Build one-step-ahead training pairs from aligned features and target.

    ``features`` is (L, C) (a single channel may be passed as (L,)); ``target``
    is (L,). Pair ``i`` holds feature rows ``i .. i+W-1`` and the target value
    at index ``i+W``, yielding exactly ``L - W`` pairs.
    """
    feats = np.asarray(features, dtype=float)
    if feats.ndim == 1:
        feats = feats[:, None]
    if feats.ndim != 2:
        raise InvalidInputError(f"features must be (L, C), got shape {feats.shape}")
    tgt = np.asarray(target, dtype=float)
    if tgt.ndim != 1 or tgt.size != feats.shape[0]:
        raise InvalidInputError(
            f"target length {tgt.shape} does not match feature length {feats.shape[0]}"
        )
    length = feats.shape[0]
    w = spec.window
    if length <= w:
        raise InsufficientDataError(
            f"need more than window={w} points to form any pair, got {length}"
        )
    n = length - w
    idx = np.arange(w)[None, :] + np.arange(n)[:, None]
    inputs = feats[idx]  # (n, W, C)
    targets = tgt[w:]
    return inputs, targets
