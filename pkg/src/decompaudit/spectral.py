"""FFT and power-spectrum utilities for characterizing decomposed components."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidInputError


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def _fft_pow2(x: np.ndarray) -> np.ndarray:
    """Iterative radix-2 Cooley-Tukey transform; ``len(x)`` must be a power of two."""
    n = x.size
    if n == 1:
        return x.astype(complex)
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    out = x[rev].astype(complex)
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(-1, size)
        even = blocks[:, :half]
        odd = blocks[:, half:] * twiddle
        out = np.concatenate([even + odd, even - odd], axis=1).reshape(-1)
        size *= 2
    return out


def fft(signal) -> np.ndarray:
    """DFT of the signal, zero-padded internally to the next power of two.

    Uses the unnormalized forward convention ``X[k] = sum_n x[n] e^{-2pi i kn/N}``,
    so a unit impulse transforms to all-ones.
    """
    arr = np.asarray(signal)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("fft requires a non-empty 1-D signal")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("fft input contains non-finite values")
    n = _next_pow2(arr.size)
    padded = np.zeros(n, dtype=complex)
    padded[: arr.size] = arr
    return _fft_pow2(padded)


def ifft(coeffs) -> np.ndarray:
    """Inverse DFT with the ``1/N`` normalization; ``len(coeffs)`` must be a power of two."""
    arr = np.asarray(coeffs, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("ifft requires a non-empty 1-D coefficient array")
    n = arr.size
    if n & (n - 1):
        raise InvalidInputError(f"coefficient length must be a power of two, got {n}")
    return np.conj(_fft_pow2(np.conj(arr))) / n


@dataclass(frozen=True)
class Spectrum:
    """One-sided power spectrum in cycles per sample."""

    frequencies: np.ndarray  # k / n for k = 0 .. n//2
    power: np.ndarray  # |X_k|^2
    n: int  # transform length after padding

    def __post_init__(self):
        if self.frequencies.shape != self.power.shape:
            raise InvalidInputError("frequency and power arrays must align")


def power_spectrum(signal) -> Spectrum:
    """One-sided power spectrum ``|X_k|^2`` over frequencies in [0, 0.5]."""
    coeffs = fft(signal)
    n = coeffs.size
    k = np.arange(n // 2 + 1)
    power = np.abs(coeffs[: n // 2 + 1]) ** 2
    return Spectrum(frequencies=k / n, power=power, n=n)


def dominant_frequency(signal) -> float:
    """Frequency (cycles/sample) of the strongest nonzero bin.

    Ties resolve to the lowest frequency. A flat signal has no meaningful
    peak; by convention it reports the lowest nonzero bin, ``1/n_padded``.
    """
    arr = np.asarray(signal, dtype=float)
    if arr.size < 4:
        raise InsufficientDataError("dominant_frequency requires at least 4 samples")
    spec = power_spectrum(arr)
    k = 1 + int(np.argmax(spec.power[1:]))
    return float(spec.frequencies[k])
