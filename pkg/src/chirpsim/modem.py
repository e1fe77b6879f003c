"""Discrete-time chirp-spread-spectrum modulator and DFT demodulator.

A CSS symbol with spreading factor S carries S bits in one of M = 2^S
cyclic shifts of the basic chirp

    x0[n] = exp(j*2*pi*(n^2/(2M) - n/2)),   n = 0..M-1.

Demodulation multiplies the received samples by conj(x0) ("dechirp"),
which turns symbol m into a single complex tone, and picks the largest
magnitude bin of the M-point DFT.  With the numpy forward-FFT kernel
exp(-j*2*pi*n*k/M) the tone of symbol m lands in bin (M - m) mod M, so
the decoder remaps the argmax back to the transmitted index.  Ties are
broken toward the smallest bin index (np.argmax), which is deterministic
and has probability zero under continuous noise.

All functions are pure; a ChirpTable is immutable after construction and
safe to share across worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_BANDWIDTH_HZ = 125e3

# The library accepts any S in this range; the LoRa range 7..12 is
# enforced at the CLI/config layer, not here.
MIN_SPREADING_FACTOR = 2
MAX_SPREADING_FACTOR = 16


@dataclass(frozen=True)
class ModemParams:
    """Static per-link modem parameters derived from the spreading factor."""

    spreading_factor: int
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ

    def __post_init__(self) -> None:
        if not (MIN_SPREADING_FACTOR <= self.spreading_factor <= MAX_SPREADING_FACTOR):
            raise ValueError(
                f"spreading_factor must be in "
                f"[{MIN_SPREADING_FACTOR}, {MAX_SPREADING_FACTOR}], "
                f"got {self.spreading_factor}"
            )
        if not (self.bandwidth_hz > 0):
            raise ValueError(f"bandwidth_hz must be positive, got {self.bandwidth_hz}")

    @property
    def symbol_length(self) -> int:
        """Samples per symbol, M = 2^S."""
        return 1 << self.spreading_factor

    @property
    def symbol_duration_s(self) -> float:
        """Symbol air time T_sym = 2^S / W at one sample per 1/W seconds."""
        return self.symbol_length / self.bandwidth_hz


@dataclass(frozen=True)
class ChirpTable:
    """Precomputed basic chirp for one spreading factor (read-only)."""

    spreading_factor: int
    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.samples.setflags(write=False)

    @property
    def symbol_length(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True)
class DemodDecision:
    """Hard symbol decision with optional soft output.

    ``spectrum_magnitudes`` is populated only when requested; the hot
    path skips it to avoid allocating 2^S floats per symbol.
    """

    symbol: int
    peak_magnitude: float
    spectrum_magnitudes: np.ndarray | None = None


def basic_chirp(params: ModemParams) -> ChirpTable:
    """Build the basic (symbol 0) chirp table for one spreading factor."""
    m = params.symbol_length
    n = np.arange(m)
    phase = 2.0 * np.pi * (n * n / (2.0 * m) - n / 2.0)
    samples = np.exp(1j * phase)
    return ChirpTable(spreading_factor=params.spreading_factor, samples=samples)


def modulate_symbol(table: ChirpTable, symbol: int) -> np.ndarray:
    """Return the length-M waveform of one symbol: x0 cyclically delayed by m."""
    m = int(symbol)
    big_m = table.symbol_length
    if not (0 <= m < big_m):
        raise ValueError(f"symbol must be in [0, {big_m - 1}], got {symbol}")
    out = np.empty(big_m, dtype=np.complex128)
    # out[n] = x0[(n - m) mod M] without the genericity cost of np.roll.
    out[m:] = table.samples[: big_m - m]
    out[:m] = table.samples[big_m - m:]
    return out


def modulate_frame(table: ChirpTable, symbols: np.ndarray) -> np.ndarray:
    """Modulate a symbol sequence into an (n_symbols, M) sample matrix."""
    symbols = np.asarray(symbols)
    big_m = table.symbol_length
    if symbols.size and (symbols.min() < 0 or symbols.max() >= big_m):
        raise ValueError(f"symbols must be in [0, {big_m - 1}]")
    out = np.empty((symbols.size, big_m), dtype=np.complex128)
    for row, m in enumerate(symbols):
        m = int(m)
        out[row, m:] = table.samples[: big_m - m]
        out[row, :m] = table.samples[big_m - m:]
    return out


def dechirp(received: np.ndarray, table: ChirpTable) -> np.ndarray:
    """Multiply received samples by the conjugate basic chirp (tone-ify)."""
    received = np.asarray(received)
    if received.shape[-1] != table.symbol_length:
        raise ValueError(
            f"expected {table.symbol_length} samples per symbol, "
            f"got {received.shape[-1]}"
        )
    return received * np.conj(table.samples)


def _decode_bins(spectrum_mag: np.ndarray) -> np.ndarray:
    """Map argmax DFT bins back to symbol indices: m_hat = (M - k) mod M."""
    big_m = spectrum_mag.shape[-1]
    k = np.argmax(spectrum_mag, axis=-1)
    return (big_m - k) % big_m


def demodulate(
    received: np.ndarray,
    estimate: np.ndarray,
    table: ChirpTable,
    return_spectrum: bool = False,
) -> DemodDecision:
    """Decide one symbol from M received samples and a channel estimate.

    Applies the conjugate of the per-sample channel estimate, dechirps,
    and picks the remapped argmax of the M-point DFT magnitude.  For the
    pure-AWGN path pass ``estimate`` of all ones.
    """
    received = np.asarray(received)
    estimate = np.asarray(estimate)
    if received.shape != (table.symbol_length,):
        raise ValueError(f"received must have shape ({table.symbol_length},)")
    if estimate.shape != received.shape:
        raise ValueError("estimate must match received sample-for-sample")
    y = np.conj(estimate) * received * np.conj(table.samples)
    mag = np.abs(np.fft.fft(y))
    k = int(np.argmax(mag))
    symbol = (table.symbol_length - k) % table.symbol_length
    return DemodDecision(
        symbol=symbol,
        peak_magnitude=float(mag[k]),
        spectrum_magnitudes=mag if return_spectrum else None,
    )


def demodulate_frame(
    received: np.ndarray, estimate: np.ndarray, table: ChirpTable
) -> np.ndarray:
    """Batch-decide a whole frame laid out as an (n_symbols, M) matrix.

    Equivalent to calling :func:`demodulate` row by row (the unit tests
    assert this), but runs one batched FFT over the frame.
    """
    if received.ndim != 2 or received.shape[1] != table.symbol_length:
        raise ValueError(f"received must be (n_symbols, {table.symbol_length})")
    if estimate.shape != received.shape:
        raise ValueError("estimate must match received sample-for-sample")
    y = np.conj(estimate) * received * np.conj(table.samples)[None, :]
    mag = np.abs(np.fft.fft(y, axis=1))
    return _decode_bins(mag)


def direct_dft_magnitudes(samples: np.ndarray) -> np.ndarray:
    """O(M^2) reference DFT magnitude, for cross-checking the FFT path."""
    samples = np.asarray(samples)
    big_m = samples.shape[0]
    n = np.arange(big_m)
    kernel = np.exp(-2j * np.pi * np.outer(n, n) / big_m)
    return np.abs(kernel @ samples)
