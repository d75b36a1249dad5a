"""Physical layer: block coding, OFDM baseband, fading channels, BER runs."""

from .channel import ChannelModel, channel_apply, draw_taps, noise_std
from .coding import (
    KvBlock,
    bpsk_demap,
    bpsk_map,
    deinterleave,
    interleave,
    kv_decode,
    kv_encode,
)
from .link import SCHEMES, CHANNEL_KINDS, BerRecord, point_seed, run_ber_point
from .ofdm import DEFAULT_OFDM, OfdmConfig, ofdm_demodulate, ofdm_modulate

__all__ = [
    "ChannelModel",
    "channel_apply",
    "draw_taps",
    "noise_std",
    "KvBlock",
    "bpsk_demap",
    "bpsk_map",
    "deinterleave",
    "interleave",
    "kv_decode",
    "kv_encode",
    "SCHEMES",
    "CHANNEL_KINDS",
    "BerRecord",
    "point_seed",
    "run_ber_point",
    "DEFAULT_OFDM",
    "OfdmConfig",
    "ofdm_demodulate",
    "ofdm_modulate",
]
