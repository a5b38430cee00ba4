"""Empirical mode decomposition with cubic-spline envelopes and SD sifting.

Each intrinsic mode function is extracted by repeatedly subtracting the mean
of the upper (maxima) and lower (minima) natural-cubic-spline envelopes until
the normalized successive-sift difference falls below a threshold. Extraction
stops once the residual has fewer than two interior extrema of either kind.
Components telescope: IMFs plus the final residual sum to the input exactly
up to float rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from ..errors import InvalidConfigError
from ..errors import InsufficientDataError
from ..series import TimeSeries
from . import ComponentSet

MIRROR_EXTREMA = 2  # extrema reflected past each end before spline fitting


@dataclass(frozen=True)
class EmdConfig:
    max_imfs: int = 10
    sift_sd_threshold: float = 0.2
    max_sift_iterations: int = 100

    def __post_init__(self):
        if self.max_imfs < 1:
            raise InvalidConfigError(f"max_imfs must be >= 1, got {self.max_imfs}")
        if self.sift_sd_threshold <= 0:
            raise InvalidConfigError(
                f"sift_sd_threshold must be positive, got {self.sift_sd_threshold}"
            )
        if self.max_sift_iterations < 1:
            raise InvalidConfigError(
                f"max_sift_iterations must be >= 1, got {self.max_sift_iterations}"
            )


def find_local_extrema(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of interior maxima and minima; plateaus count once, at their middle."""
    diff_sign = np.sign(np.diff(x))
    nonzero = np.flatnonzero(diff_sign)
    if nonzero.size < 2:
        empty = np.array([], dtype=int)
        return empty, empty
    left, right = nonzero[:-1], nonzero[1:]
    mids = (left + 1 + right) // 2
    is_max = (diff_sign[left] > 0) & (diff_sign[right] < 0)
    is_min = (diff_sign[left] < 0) & (diff_sign[right] > 0)
    return mids[is_max], mids[is_min]


def zero_crossing_count(x: np.ndarray) -> int:
    """Number of sign changes, ignoring exact zeros."""
    signs = np.sign(x)
    signs = signs[signs != 0]
    if signs.size < 2:
        return 0
    return int(np.count_nonzero(signs[:-1] != signs[1:]))


def extrema_zero_crossing_gap(x: np.ndarray) -> int:
    """|#extrema - #zero crossings| counted between the first and last extremum.

    The span clipped to the extrema keeps boundary-extension artifacts out of
    the count; components with fewer than two extrema report a gap of zero.
    """
    maxima, minima = find_local_extrema(np.asarray(x, dtype=float))
    positions = np.sort(np.concatenate([maxima, minima]))
    if positions.size < 2:
        return 0
    core = np.asarray(x, dtype=float)[positions[0] : positions[-1] + 1]
    return abs(positions.size - zero_crossing_count(core))


def _mirrored_knots(positions: np.ndarray, values: np.ndarray, n: int):
    """Reflect up to MIRROR_EXTREMA extrema past each end of the index range."""
    take = min(MIRROR_EXTREMA, positions.size)
    left_pos = -positions[:take][::-1]
    left_val = values[:take][::-1]
    right_pos = 2 * (n - 1) - positions[-take:][::-1]
    right_val = values[-take:][::-1]
    knots_pos = np.concatenate([left_pos, positions, right_pos])
    knots_val = np.concatenate([left_val, values, right_val])
    return knots_pos, knots_val


def _envelope(positions: np.ndarray, values: np.ndarray, n: int) -> np.ndarray:
    pos, val = _mirrored_knots(positions, values, n)
    spline = CubicSpline(pos, val, bc_type="natural")
    return spline(np.arange(n))


def _sift(signal: np.ndarray, cfg: EmdConfig) -> np.ndarray:
    """Extract one IMF candidate from the signal.

    Sifting stops once the successive-sift difference is below the threshold
    AND the candidate satisfies the mode-function count constraint (extrema
    and zero crossings differ by at most one), or when the iteration budget
    runs out.
    """
    n = signal.size
    h = signal
    for _ in range(cfg.max_sift_iterations):
        maxima, minima = find_local_extrema(h)
        if maxima.size < 2 or minima.size < 2:
            break
        upper = _envelope(maxima, h[maxima], n)
        lower = _envelope(minima, h[minima], n)
        mean = 0.5 * (upper + lower)
        h_new = h - mean
        denom = float(np.dot(h, h))
        sd = float(np.dot(mean, mean)) / denom if denom > 0 else 0.0
        h = h_new
        if sd < cfg.sift_sd_threshold and extrema_zero_crossing_gap(h) <= 1:
            break
    return h


def _is_extractable(x: np.ndarray) -> bool:
    maxima, minima = find_local_extrema(x)
    return maxima.size >= 2 and minima.size >= 2


def emd_decompose(series: TimeSeries, config: EmdConfig | None = None) -> ComponentSet:
    """Decompose into IMF1..IMFm (highest frequency first) plus a residual."""
    cfg = config if config is not None else EmdConfig()
    x = series.values
    if x.size < 4:
        raise InsufficientDataError(f"EMD needs at least 4 points, got {x.size}")

    imfs: list[np.ndarray] = []
    residual = x.copy()
    while len(imfs) < cfg.max_imfs and _is_extractable(residual):
        imf = _sift(residual, cfg)
        imfs.append(imf)
        residual = residual - imf

    components = np.stack(imfs + [residual]) if imfs else residual[None, :]
    labels = tuple(f"IMF{i + 1}" for i in range(len(imfs))) + ("Res",)
    return ComponentSet(components, labels=labels, method="emd")
