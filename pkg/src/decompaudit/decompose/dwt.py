"""Single-level discrete wavelet decomposition with the db5 filter pair.

The series is analyzed into approximation and detail coefficient bands and
each band is synthesized back to full length, yielding an approximate
component (AC) and a detailed component (DC) with AC + DC equal to the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientDataError, InvalidConfigError
from ..series import TimeSeries
from . import ComponentSet

# Daubechies-5 scaling (lowpass) filter, standard published coefficients.
DB5_LOWPASS = (
    0.16010239797412501,
    0.6038292697974729,
    0.7243085284385744,
    0.13842814590110342,
    -0.24229488706619015,
    -0.03224486958502952,
    0.07757149384006515,
    -0.006241490213011705,
    -0.012580751999015526,
    0.0033357252850015492,
)


def quadrature_mirror(lowpass) -> np.ndarray:
    """Highpass filter g[n] = (-1)^n h[len-1-n] paired with the given lowpass."""
    h = np.asarray(lowpass, dtype=float)
    signs = np.where(np.arange(h.size) % 2 == 0, 1.0, -1.0)
    return signs * h[::-1]


@dataclass(frozen=True)
class DwtConfig:
    """Filter bank configuration; defaults to the db5 pair."""

    lowpass: tuple[float, ...] = DB5_LOWPASS

    def __post_init__(self):
        if len(self.lowpass) < 2 or len(self.lowpass) % 2 != 0:
            raise InvalidConfigError("lowpass filter must have even length >= 2")

    @property
    def highpass(self) -> np.ndarray:
        return quadrature_mirror(self.lowpass)


def dwt_decompose(series: TimeSeries, config: DwtConfig | None = None) -> ComponentSet:
    """Decompose into full-length AC and DC components with AC + DC = input.

    Uses symmetric (half-sample) boundary extension wide enough that the
    orthonormal filter bank reconstructs the original samples exactly; the
    per-band syntheses are then exact complements of each other.
    """
    cfg = config if config is not None else DwtConfig()
    x = series.values
    n = x.size
    h = np.asarray(cfg.lowpass, dtype=float)
    g = cfg.highpass
    flen = h.size
    if n < flen:
        raise InsufficientDataError(
            f"series length {n} is shorter than the filter length {flen}"
        )
    ext = 2 * flen
    xe = np.pad(x, ext, mode="symmetric")

    def band_contribution(filt: np.ndarray) -> np.ndarray:
        # analysis: correlate and keep even phases
        coeffs = np.convolve(xe, filt[::-1], mode="valid")[::2]
        # synthesis: upsample by two and convolve
        up = np.zeros(2 * coeffs.size - 1)
        up[::2] = coeffs
        full = np.convolve(up, filt, mode="full")
        return full[ext : ext + n]

    ac = band_contribution(h)
    dc = band_contribution(g)
    return ComponentSet(np.stack([ac, dc]), labels=("AC", "DC"), method="dwt")
