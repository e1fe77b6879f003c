"""AWGN and exponentially-correlated Rayleigh fading channel models.

The fading gain process h[n] is zero-mean unit-variance complex Gaussian
with autocovariance Cov{h[m], h[n]} = q^|m-n|, generated exactly by the
first-order Gauss-Markov recursion

    h[0] ~ CN(0, 1),
    h[n] = q*h[n-1] + sqrt(1 - q^2)*v[n],    v[n] i.i.d. CN(0, 1),

which is stationary with unit variance for any q in [0, 1].  One trace
spans a whole frame; the recursion runs continuously across symbol
boundaries.  q = 1 degenerates to block fading (a single draw replicated)
and q = 0 to i.i.d. per-sample fading; both endpoints take exact
shortcuts rather than relying on floating-point sqrt(1 - q^2).

Noise convention: sigma is the TOTAL complex standard deviation,
E|w|^2 = sigma^2, i.e. sigma^2/2 per real component.  With symbol energy
normalized to one sample per 1/W seconds this makes SNR = 1/(S*sigma^2).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import lfilter

_SQRT_HALF = math.sqrt(0.5)


def noise_sigma(spreading_factor: int, snr_db: float) -> float:
    """Total complex noise std for a given per-bit SNR, sigma^2 = 1/(S*snr)."""
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise ValueError(f"snr_db must be finite or +inf, got {snr_db}")
    if snr_db == math.inf:
        return 0.0
    snr_linear = 10.0 ** (snr_db / 10.0)
    return 1.0 / math.sqrt(spreading_factor * snr_linear)


def awgn(count: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """count i.i.d. complex Gaussian noise samples with E|w|^2 = sigma^2."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return np.zeros(count, dtype=np.complex128)
    w = rng.standard_normal(2 * count).view(np.complex128)
    w *= sigma * _SQRT_HALF
    return w


def generate_fading(length: int, q: float, rng: np.random.Generator) -> np.ndarray:
    """One frame's per-sample complex fading trace with Cov = q^|lag|."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"q must be in [0, 1], got {q}")
    if q == 1.0:
        h0 = complex(rng.standard_normal() * _SQRT_HALF,
                     rng.standard_normal() * _SQRT_HALF)
        return np.full(length, h0, dtype=np.complex128)
    draws = rng.standard_normal(2 * length).view(np.complex128)
    draws *= _SQRT_HALF
    if q == 0.0:
        return draws
    # lfilter with a = [1, -q] computes h[n] = q*h[n-1] + drive[n]; feed
    # the stationary start h[0] as the first drive sample so the output
    # is stationary from n = 0.
    drive = draws
    drive[1:] *= math.sqrt(1.0 - q * q)
    return lfilter([1.0], [1.0, -q], drive)


def apply_channel(
    clean: np.ndarray,
    gains: np.ndarray,
    sigma: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """r[n] = h[n]*clean[n] + w[n] with fresh AWGN of total variance sigma^2."""
    clean = np.asarray(clean)
    gains = np.asarray(gains)
    if clean.shape != gains.shape:
        raise ValueError(
            f"clean and gains must have the same shape, "
            f"got {clean.shape} vs {gains.shape}"
        )
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    r = gains * clean
    if sigma > 0.0:
        r += awgn(clean.size, sigma, rng).reshape(clean.shape)
    return r
