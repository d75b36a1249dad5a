"""End-to-end link simulation and BER measurement.

Three schemes share the OFDM/BPSK air interface:

* plain          - payload bits straight onto BPSK subcarriers.
* kv             - payload packed into parity-protected blocks, blocks
                   serialized back to back, uncorrectable blocks
                   retransmitted exactly once in the next ensemble.
* kv_interleaved - like kv, but the ensemble's samples pass through the
                   depth-M block interleaver before serialization, so the
                   six samples of a block land on six different OFDM
                   symbols and see independent fades.

BER is counted on payload bits only; each payload bit enters the
denominator once even when its block is retransmitted. Eb/N0 is
referenced to transmitted bits (each BPSK subcarrier symbol carries unit
energy), so the parity and retransmission overheads are reported
separately rather than charged to the energy budget. Every point runs on
its own deterministic stream derived from (master seed, scheme, channel,
Eb/N0), so sweeps parallelize without changing results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelModel, channel_apply
from .coding import (
    BLOCK_SAMPLES,
    DEFAULT_BITS_PER_SAMPLE,
    block_air_bits,
    block_payload_bits,
    bpsk_demap,
    bpsk_map,
    deinterleave,
    interleave,
    kv_decode,
    kv_encode,
    pack_samples,
    sample_bit_widths,
    stream_widths,
    unpack_samples,
)
from .ofdm import DEFAULT_OFDM, OfdmConfig, ofdm_demodulate, ofdm_modulate

SCHEMES = ("plain", "kv", "kv_interleaved")
CHANNEL_KINDS = ("awgn", "rayleigh", "rician")

DEFAULT_ENSEMBLE_BLOCKS = 52
DEFAULT_MIN_ERRORS = 100
DEFAULT_MAX_BITS = 2_000_000

_SCHEME_IDS = {name: i + 1 for i, name in enumerate(SCHEMES)}
_CHANNEL_IDS = {name: i + 1 for i, name in enumerate(CHANNEL_KINDS)}

_POPCOUNT = np.array([bin(v).count("1") for v in range(1 << 16)], dtype=np.int64)


@dataclass
class BerRecord:
    """One measured point of a BER-versus-Eb/N0 curve."""

    scheme: str
    channel: str
    ebn0_db: float
    bits_sent: int
    bit_errors: int
    ber: float
    flagged: bool
    air_bits: int = 0
    retransmitted_blocks: int = 0


def point_seed(master_seed: int, scheme: str, channel_kind: str, ebn0_db: float):
    """Deterministic per-point seed so parallel sweeps are bit-identical."""
    if math.isinf(ebn0_db):
        ebn0_key = (1 << 31) - 1
    else:
        ebn0_key = int(round(ebn0_db * 1000.0)) & 0x7FFFFFFF
    return np.random.SeedSequence(
        [int(master_seed) & 0xFFFFFFFF, _SCHEME_IDS[scheme], _CHANNEL_IDS[channel_kind], ebn0_key]
    )


def _bits_to_symbols(bits: np.ndarray, ofdm: OfdmConfig) -> tuple[np.ndarray, int]:
    """BPSK-map bits and zero-pad up to a whole number of OFDM symbols."""
    pad = (-bits.size) % ofdm.n_used
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=bits.dtype)])
    return bpsk_map(bits), pad


def _transmit_bits(
    bits: np.ndarray,
    model: ChannelModel,
    ebn0_db: float,
    rng: np.random.Generator,
    ofdm: OfdmConfig,
) -> np.ndarray:
    """One-way trip: bits -> BPSK -> OFDM -> channel -> equalize -> bits."""
    symbols, pad = _bits_to_symbols(bits, ofdm)
    tx = ofdm_modulate(symbols, ofdm)
    rx, response = channel_apply(tx, model, ebn0_db, rng, ofdm=ofdm)
    equalized = ofdm_demodulate(rx, response, ofdm)
    decided = bpsk_demap(equalized)
    if pad:
        decided = decided[:-pad]
    return decided


def _payload_bit_errors(sent: np.ndarray, decoded: np.ndarray) -> int:
    """Differing payload bits between two integer sample arrays."""
    return int(_POPCOUNT[np.bitwise_xor(sent, decoded)].sum())


class _KvPipeline:
    """Ensemble transmitter/receiver with single selective retransmission.

    Blocks flagged uncorrectable wait one round and are re-sent at the
    head of the next ensemble; their retry decode is final whatever its
    status. Payload bits resolve exactly once.
    """

    def __init__(
        self,
        interleaved: bool,
        model: ChannelModel,
        ebn0_db: float,
        rng: np.random.Generator,
        ofdm: OfdmConfig,
        ensemble_blocks: int = DEFAULT_ENSEMBLE_BLOCKS,
        bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE,
    ):
        self.interleaved = interleaved
        self.model = model
        self.ebn0_db = ebn0_db
        self.rng = rng
        self.ofdm = ofdm
        self.ensemble_blocks = ensemble_blocks
        self.bits_per_sample = bits_per_sample
        self.pending: list[np.ndarray] = []
        self.resolved_bits = 0
        self.resolved_errors = 0
        self.air_bits = 0
        self.retransmitted_blocks = 0

    def round(self, flush: bool = False) -> None:
        """Transmit one ensemble: pending retries first, fresh blocks after."""
        n_retry = len(self.pending)
        n_fresh = 0 if flush else self.ensemble_blocks - n_retry
        n_blocks = n_retry + n_fresh
        if n_blocks == 0:
            return
        high = 1 << self.bits_per_sample
        fresh = self.rng.integers(0, high, size=(n_fresh, 4), dtype=np.int64)
        payloads = np.vstack([np.asarray(self.pending, dtype=np.int64).reshape(n_retry, 4), fresh])

        samples = np.empty((n_blocks, BLOCK_SAMPLES), dtype=np.int64)
        for i in range(n_blocks):
            samples[i] = kv_encode(payloads[i], self.bits_per_sample).samples()

        stream = interleave(samples) if self.interleaved else samples.reshape(-1)
        widths = stream_widths(n_blocks, self.bits_per_sample, self.interleaved)
        bits = pack_samples(stream, widths)
        received = _transmit_bits(bits, self.model, self.ebn0_db, self.rng, self.ofdm)
        rx_stream = unpack_samples(received, widths)
        rx_samples = (
            deinterleave(rx_stream, n_blocks)
            if self.interleaved
            else rx_stream.reshape(n_blocks, BLOCK_SAMPLES)
        )

        self.air_bits += int(bits.size)
        self.retransmitted_blocks += n_retry
        per_block = block_payload_bits(self.bits_per_sample)

        new_pending: list[np.ndarray] = []
        for i in range(n_blocks):
            block = kv_encode(payloads[i], self.bits_per_sample)
            block.coefficients = rx_samples[i, :4]
            block.overhead = rx_samples[i, 4:]
            decoded, status = kv_decode(block)
            is_retry = i < n_retry
            if status == "uncorrectable" and not is_retry and not flush:
                new_pending.append(payloads[i])
                continue
            self.resolved_bits += per_block
            self.resolved_errors += _payload_bit_errors(payloads[i], decoded)
        self.pending = new_pending

    def flush(self) -> None:
        while self.pending:
            self.round(flush=True)


def run_ber_point(
    scheme: str,
    channel: ChannelModel,
    ebn0_db: float,
    min_errors: int = DEFAULT_MIN_ERRORS,
    max_bits: int = DEFAULT_MAX_BITS,
    rng_seed: int = 0,
    ofdm: OfdmConfig = DEFAULT_OFDM,
    ensemble_blocks: int = DEFAULT_ENSEMBLE_BLOCKS,
    bits_per_sample: int = DEFAULT_BITS_PER_SAMPLE,
) -> BerRecord:
    """Measure one BER point, stopping at min_errors errors or max_bits bits.

    Records that hit max_bits before min_errors are flagged but still
    returned. min_errors of 100 or more gives publication-grade points.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    rng = np.random.default_rng(point_seed(rng_seed, scheme, channel.kind, ebn0_db))

    if scheme == "plain":
        bits_sent = 0
        bit_errors = 0
        # One ensemble-sized chunk per iteration keeps chunking comparable
        # across schemes.
        chunk_bits = ensemble_blocks * block_air_bits(bits_per_sample)
        while bit_errors < min_errors and bits_sent < max_bits:
            payload = rng.integers(0, 2, size=chunk_bits, dtype=np.uint8)
            received = _transmit_bits(payload, channel, ebn0_db, rng, ofdm)
            bit_errors += int(np.count_nonzero(payload != received))
            bits_sent += chunk_bits
        air_bits = bits_sent
        retransmitted = 0
    else:
        pipeline = _KvPipeline(
            interleaved=(scheme == "kv_interleaved"),
            model=channel,
            ebn0_db=ebn0_db,
            rng=rng,
            ofdm=ofdm,
            ensemble_blocks=ensemble_blocks,
            bits_per_sample=bits_per_sample,
        )
        while pipeline.resolved_errors < min_errors and pipeline.resolved_bits < max_bits:
            pipeline.round()
        pipeline.flush()
        bits_sent = pipeline.resolved_bits
        bit_errors = pipeline.resolved_errors
        air_bits = pipeline.air_bits
        retransmitted = pipeline.retransmitted_blocks

    return BerRecord(
        scheme=scheme,
        channel=channel.kind,
        ebn0_db=ebn0_db,
        bits_sent=bits_sent,
        bit_errors=bit_errors,
        ber=bit_errors / bits_sent if bits_sent else 0.0,
        flagged=bit_errors < min_errors,
        air_bits=air_bits,
        retransmitted_blocks=retransmitted,
    )
