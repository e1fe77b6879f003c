"""Payload-byte to CSS-symbol mapping.

A frame of B bytes carries ceil(8B/S) symbols of S bits each: the 8B
payload bits are concatenated MSB-first, zero-padded up to a multiple of
S, and sliced into S-bit groups.  FER is insensitive to the pad-bit
convention (a frame errs iff any symbol errs), but the mapping must be
an exact inverse pair for the simulator's bookkeeping.
"""

from __future__ import annotations

import numpy as np


def symbol_count(payload_bytes: int, spreading_factor: int) -> int:
    """Symbols per frame, N_sym = ceil(8B/S)."""
    if payload_bytes < 1:
        raise ValueError(f"payload_bytes must be >= 1, got {payload_bytes}")
    return -(-8 * payload_bytes // spreading_factor)


def frame_sample_count(payload_bytes: int, spreading_factor: int) -> int:
    """Samples per frame, ceil(8B/S) * 2^S."""
    return symbol_count(payload_bytes, spreading_factor) * (1 << spreading_factor)


def frame_duration_s(
    payload_bytes: int, spreading_factor: int, bandwidth_hz: float = 125e3
) -> float:
    """Payload-only air time in seconds at one sample per 1/W seconds."""
    return frame_sample_count(payload_bytes, spreading_factor) / bandwidth_hz


def bytes_to_symbols(payload: np.ndarray, spreading_factor: int) -> np.ndarray:
    """Map payload bytes to S-bit symbol indices (MSB-first, zero-padded)."""
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.size == 0:
        raise ValueError("payload must contain at least one byte")
    s = spreading_factor
    n_sym = symbol_count(payload.size, s)
    bits = np.unpackbits(payload)
    padded = np.zeros(n_sym * s, dtype=np.uint8)
    padded[: bits.size] = bits
    weights = 1 << np.arange(s - 1, -1, -1, dtype=np.int64)
    return padded.reshape(n_sym, s) @ weights


def symbols_to_bytes(
    symbols: np.ndarray, spreading_factor: int, payload_bytes: int
) -> np.ndarray:
    """Inverse of :func:`bytes_to_symbols`; discards the pad bits."""
    symbols = np.asarray(symbols, dtype=np.int64)
    s = spreading_factor
    expected = symbol_count(payload_bytes, s)
    if symbols.size != expected:
        raise ValueError(
            f"expected {expected} symbols for B={payload_bytes}, S={s}, "
            f"got {symbols.size}"
        )
    if symbols.size and (symbols.min() < 0 or symbols.max() >= (1 << s)):
        raise ValueError(f"symbol indices must be in [0, {(1 << s) - 1}]")
    shifts = np.arange(s - 1, -1, -1, dtype=np.int64)
    bits = ((symbols[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
    return np.packbits(bits.ravel()[: 8 * payload_bytes])
