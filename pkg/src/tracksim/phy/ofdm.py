"""OFDM baseband modulator and demodulator (802.11a numerology).

64-point FFT at 20 MHz sampling, 52 used subcarriers on indices
{-26..-1, +1..+26} (DC and the 11 outer guards stay empty), and a
16-sample cyclic prefix, for an 80-sample (4 us) symbol. The modulator
normalizes so each used subcarrier carries unit average energy, which
pins the noise calibration in the channel model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import LengthMismatch, ZeroChannel


@dataclass(frozen=True)
class OfdmConfig:
    fft_size: int = 64
    n_used: int = 52
    cp_len: int = 16
    sample_rate: float = 20e6

    def __post_init__(self):
        if self.cp_len >= self.fft_size:
            raise ValueError("cyclic prefix must be shorter than the FFT")
        if self.n_used % 2 != 0 or self.n_used >= self.fft_size:
            raise ValueError("used-subcarrier count must be even and below the FFT size")

    @property
    def symbol_len(self) -> int:
        return self.fft_size + self.cp_len

    @property
    def subcarrier_spacing(self) -> float:
        return self.sample_rate / self.fft_size

    @property
    def used_indices(self) -> np.ndarray:
        """Logical subcarrier indices, negative side first: -26..-1, +1..+26."""
        half = self.n_used // 2
        return np.concatenate([np.arange(-half, 0), np.arange(1, half + 1)])

    @property
    def used_bins(self) -> np.ndarray:
        """FFT bin numbers of the used subcarriers."""
        return np.mod(self.used_indices, self.fft_size)


DEFAULT_OFDM = OfdmConfig()


def ofdm_modulate(symbols: np.ndarray, cfg: OfdmConfig = DEFAULT_OFDM) -> np.ndarray:
    """Map frequency-domain symbols onto time samples, one CP-extended symbol per 52.

    Unused bins (DC and guards) are zero. The inverse transform is scaled
    by sqrt(fft_size) so each used subcarrier contributes unit average
    energy to the symbol body; the last cp_len body samples are prepended
    as the cyclic prefix.
    """
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.ndim != 1 or symbols.size % cfg.n_used != 0:
        raise LengthMismatch(
            f"symbol count {symbols.size} is not a multiple of {cfg.n_used}"
        )
    n_sym = symbols.size // cfg.n_used
    grid = np.zeros((n_sym, cfg.fft_size), dtype=complex)
    grid[:, cfg.used_bins] = symbols.reshape(n_sym, cfg.n_used)
    body = np.fft.ifft(grid, axis=1) * math.sqrt(cfg.fft_size)
    with_cp = np.concatenate([body[:, -cfg.cp_len:], body], axis=1)
    return with_cp.reshape(-1)


def ofdm_demodulate(
    samples: np.ndarray,
    channel_response: np.ndarray | None,
    cfg: OfdmConfig = DEFAULT_OFDM,
) -> np.ndarray:
    """Strip the prefix, transform, extract used bins, and equalize one tap per bin.

    channel_response holds the per-symbol frequency response on the used
    bins, shape (n_symbols, n_used) or (n_used,) to broadcast; None means
    an identity channel. Raises ZeroChannel if any used response magnitude
    falls below 1e-12.
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim != 1 or samples.size % cfg.symbol_len != 0:
        raise LengthMismatch(
            f"sample count {samples.size} is not a multiple of {cfg.symbol_len}"
        )
    n_sym = samples.size // cfg.symbol_len
    frames = samples.reshape(n_sym, cfg.symbol_len)[:, cfg.cp_len:]
    spectrum = np.fft.fft(frames, axis=1) / math.sqrt(cfg.fft_size)
    received = spectrum[:, cfg.used_bins]
    if channel_response is None:
        return received.reshape(-1)
    response = np.asarray(channel_response, dtype=complex)
    if response.ndim == 1:
        response = np.broadcast_to(response, received.shape)
    if response.shape != received.shape:
        raise LengthMismatch(
            f"channel response shape {response.shape} does not match {received.shape}"
        )
    if np.any(np.abs(response) < 1e-12):
        raise ZeroChannel("a used subcarrier has zero channel response")
    return (received / response).reshape(-1)
