"""Block coding for the physical layer: parity-protected sample blocks,
sample interleaving, BPSK mapping, and exact bit (de)serialization.

A block carries four n-bit data samples plus two overhead samples: the
plain sum p1 = sum(c_i) and the weighted sum p2 = sum(i * c_i), i = 1..4.
The pair locates and repairs any single corrupted sample: for an error e
on coefficient j the syndromes are (s1, s2) = (e, j*e), so j = s2/s1 and
subtracting s1 restores the sample. All arithmetic is integer, so the
quantization-step threshold is exact.

The coefficient transform is the identity (trivially orthonormal), which
keeps the wire samples on the n-bit grid and the round trip lossless; any
mixing orthonormal transform would push coefficients off that grid. The
correction power lives entirely in the parity pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import LengthMismatch, SampleOutOfRange

BLOCK_DATA_SAMPLES = 4
BLOCK_OVERHEAD_SAMPLES = 2
BLOCK_SAMPLES = BLOCK_DATA_SAMPLES + BLOCK_OVERHEAD_SAMPLES

DEFAULT_BITS_PER_SAMPLE = 4

DecodeStatus = Literal["clean", "corrected", "uncorrectable"]

# Weights of the second overhead sample; 1-based so s2/s1 is the position.
_WEIGHTS = np.arange(1, BLOCK_DATA_SAMPLES + 1)


def sample_bit_widths(bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE) -> tuple[int, ...]:
    """Wire width of each of the six samples, data first, then p1 and p2.

    The overhead sums need wider words than the data samples: p1 can
    reach 4*(2^n - 1) and p2 can reach 10*(2^n - 1).
    """
    top = (1 << bits_per_sample) - 1
    p1_width = int(np.ceil(np.log2(BLOCK_DATA_SAMPLES * top + 1)))
    p2_width = int(np.ceil(np.log2(int(_WEIGHTS.sum()) * top + 1)))
    return (bits_per_sample,) * BLOCK_DATA_SAMPLES + (p1_width, p2_width)


def block_air_bits(bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE) -> int:
    """Total transmitted bits per block."""
    return sum(sample_bit_widths(bits_per_sample))


def block_payload_bits(bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE) -> int:
    """Payload bits per block (the four data samples)."""
    return BLOCK_DATA_SAMPLES * bits_per_sample


@dataclass
class KvBlock:
    """Four coefficient samples plus the two parity overhead samples."""

    coefficients: np.ndarray
    overhead: np.ndarray
    bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE

    def samples(self) -> np.ndarray:
        """All six samples in wire order."""
        return np.concatenate([self.coefficients, self.overhead])


def kv_encode(samples, bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE) -> KvBlock:
    """Build a block from four n-bit data samples.

    Raises SampleOutOfRange unless every sample is an integer in
    [0, 2^n). Energy is preserved exactly (identity transform) and
    kv_decode(kv_encode(u)) recovers u in a noiseless channel.
    """
    u = np.asarray(samples)
    if u.shape != (BLOCK_DATA_SAMPLES,):
        raise SampleOutOfRange(f"expected {BLOCK_DATA_SAMPLES} samples, got shape {u.shape}")
    if not np.issubdtype(u.dtype, np.integer):
        if not np.all(u == np.round(u)):
            raise SampleOutOfRange("samples must be integers")
        u = u.astype(np.int64)
    else:
        u = u.astype(np.int64)
    if np.any(u < 0) or np.any(u >= (1 << bits_per_sample)):
        raise SampleOutOfRange(
            f"samples {u.tolist()} not representable in {bits_per_sample} bits"
        )
    coeffs = u.copy()
    overhead = np.array([coeffs.sum(), int(_WEIGHTS @ coeffs)], dtype=np.int64)
    return KvBlock(coefficients=coeffs, overhead=overhead, bits_per_sample=bits_per_sample)


def kv_decode(block: KvBlock) -> tuple[np.ndarray, DecodeStatus]:
    """Recover the four data samples, repairing a single corrupted sample.

    Syndromes s1 = sum(c) - p1 and s2 = sum(i*c) - p2 are zero for a clean
    block. A single error on coefficient j gives (s1, s2) = (e, j*e); the
    position is j = round(s2/s1) and the repair subtracts s1. A single
    error on an overhead sample zeroes exactly one syndrome (s2 for a p1
    hit, s1 for a p2 hit), which no single coefficient error can do, so
    those blocks decode cleanly too. Anything inconsistent with a single
    in-range repair is reported uncorrectable and the coefficients are
    passed through as received.
    """
    coeffs = np.asarray(block.coefficients, dtype=np.int64).copy()
    p1, p2 = (int(v) for v in np.asarray(block.overhead, dtype=np.int64))
    s1 = int(coeffs.sum()) - p1
    s2 = int(_WEIGHTS @ coeffs) - p2
    # Integer wire samples make the half-step threshold exact: a syndrome
    # within eps_q = 0.5 of zero is zero.
    if s1 == 0 and s2 == 0:
        return coeffs, "clean"
    if s1 != 0 and s2 == 0:
        return coeffs, "corrected"  # p1 took the hit; data intact
    if s1 == 0 and s2 != 0:
        return coeffs, "corrected"  # p2 took the hit; data intact
    j = int(round(s2 / s1))
    if 1 <= j <= BLOCK_DATA_SAMPLES and s2 - j * s1 == 0:
        repaired = coeffs[j - 1] - s1
        if 0 <= repaired < (1 << block.bits_per_sample):
            coeffs[j - 1] = repaired
            return coeffs, "corrected"
    return coeffs, "uncorrectable"


def interleave(samples: np.ndarray) -> np.ndarray:
    """Depth-M block interleaver over an (M, 6) sample matrix.

    Output order: sample 1 of blocks 1..M, then sample 2 of blocks 1..M,
    and so on, as a flat stream of length 6M.
    """
    samples = np.asarray(samples)
    if samples.ndim != 2 or samples.shape[1] != BLOCK_SAMPLES:
        raise LengthMismatch(f"expected an (M, {BLOCK_SAMPLES}) sample matrix, got {samples.shape}")
    return samples.T.reshape(-1)


def deinterleave(stream: np.ndarray, n_blocks: int) -> np.ndarray:
    """Inverse of interleave; raises LengthMismatch unless len == 6 * n_blocks."""
    stream = np.asarray(stream)
    if n_blocks < 1:
        raise LengthMismatch("block count must be at least 1")
    if stream.ndim != 1 or stream.size != BLOCK_SAMPLES * n_blocks:
        raise LengthMismatch(
            f"stream of {stream.size} samples does not hold {n_blocks} blocks of {BLOCK_SAMPLES}"
        )
    return stream.reshape(BLOCK_SAMPLES, n_blocks).T


def bpsk_map(bits) -> np.ndarray:
    """Map bits to unit-energy antipodal symbols: 0 -> +1, 1 -> -1."""
    bits = np.asarray(bits)
    return 1.0 - 2.0 * bits.astype(float)


def bpsk_demap(symbols) -> np.ndarray:
    """Decide bits by the sign of the real part: negative -> 1."""
    return (np.real(np.asarray(symbols)) < 0.0).astype(np.uint8)


def pack_samples(samples: np.ndarray, widths) -> np.ndarray:
    """Serialize nonnegative integer samples into a bit stream, MSB first.

    widths[i] gives the word size of samples[i]; the two must align.
    """
    samples = np.asarray(samples, dtype=np.int64)
    widths = np.asarray(widths, dtype=np.int64)
    if samples.shape != widths.shape:
        raise LengthMismatch(f"{samples.size} samples but {widths.size} widths")
    out = np.empty(int(widths.sum()), dtype=np.uint8)
    pos = 0
    for value, width in zip(samples, widths):
        shifts = np.arange(width - 1, -1, -1)
        out[pos:pos + width] = (value >> shifts) & 1
        pos += width
    return out


def unpack_samples(bits: np.ndarray, widths) -> np.ndarray:
    """Inverse of pack_samples."""
    bits = np.asarray(bits, dtype=np.int64)
    widths = np.asarray(widths, dtype=np.int64)
    if bits.size != int(widths.sum()):
        raise LengthMismatch(f"{bits.size} bits cannot hold words totalling {int(widths.sum())}")
    out = np.empty(widths.size, dtype=np.int64)
    pos = 0
    for i, width in enumerate(widths):
        word = bits[pos:pos + width]
        out[i] = int(word @ (1 << np.arange(width - 1, -1, -1)))
        pos += width
    return out


def stream_widths(n_blocks: int, bits_per_sample: int, interleaved: bool) -> np.ndarray:
    """Per-sample wire widths for a serialized ensemble of n_blocks blocks.

    Without interleaving the stream is block after block; with it, sample
    position p belongs to sample index p // n_blocks of some block.
    """
    per_block = np.asarray(sample_bit_widths(bits_per_sample))
    if interleaved:
        return np.repeat(per_block, n_blocks)
    return np.tile(per_block, n_blocks)
