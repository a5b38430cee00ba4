"""Singular spectrum analysis: Hankel embedding, SVD, grouped reconstruction.

The trajectory matrix is split into three grouped matrices (leading
eigentriple, second eigentriple, everything else) and each group is
Hankelized back into a series by anti-diagonal averaging. Because the
grouping partitions all eigentriples, the three series sum to the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientDataError, InvalidConfigError
from ..series import TimeSeries
from . import ComponentSet

N_GROUPS = 3
DEFAULT_MAX_WINDOW = 50


@dataclass(frozen=True)
class SsaConfig:
    """Embedding window configuration.

    ``window=None`` selects ``min(N // 2, max_window)`` per series, which keeps
    the SVD cheap on long prefixes while staying well above the model window.
    """

    window: int | None = None
    max_window: int = DEFAULT_MAX_WINDOW

    def __post_init__(self):
        if self.window is not None and self.window < 2:
            raise InvalidConfigError(f"embedding window must be >= 2, got {self.window}")
        if self.max_window < 2:
            raise InvalidConfigError(f"max_window must be >= 2, got {self.max_window}")

    def effective_window(self, n: int) -> int:
        if self.window is not None:
            window = self.window
        else:
            window = max(2, min(n // 2, self.max_window))
        if not (2 <= window <= n - 1):
            raise InvalidConfigError(
                f"embedding window {window} out of bounds for series length {n}"
            )
        return window


def _hankelize(matrix: np.ndarray) -> np.ndarray:
    """Average matrix entries along anti-diagonals into a series."""
    rows, cols = matrix.shape
    diag = (np.arange(rows)[:, None] + np.arange(cols)[None, :]).ravel()
    sums = np.bincount(diag, weights=matrix.ravel(), minlength=rows + cols - 1)
    counts = np.bincount(diag, minlength=rows + cols - 1)
    return sums / counts


def ssa_decompose(series: TimeSeries, config: SsaConfig | None = None) -> ComponentSet:
    """Decompose into three subsequences whose sum equals the input."""
    cfg = config if config is not None else SsaConfig()
    x = series.values
    n = x.size
    if n < N_GROUPS:
        raise InsufficientDataError(f"SSA needs at least {N_GROUPS} points, got {n}")
    window = cfg.effective_window(n)
    k = n - window + 1
    traj = x[np.arange(window)[:, None] + np.arange(k)[None, :]]

    u, s, vt = np.linalg.svd(traj, full_matrices=False)
    first = s[0] * np.outer(u[:, 0], vt[0])
    second = s[1] * np.outer(u[:, 1], vt[1])
    rest = traj - first - second

    comps = np.stack([_hankelize(first), _hankelize(second), _hankelize(rest)])
    return ComponentSet(comps, labels=("SSA1", "SSA2", "SSA3"), method="ssa")
