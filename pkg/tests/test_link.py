import math

import numpy as np
import pytest

from tracksim.phy.channel import ChannelModel
from tracksim.phy.link import SCHEMES, point_seed, run_ber_point

from oracles import flat_rayleigh_bpsk_ber


RAYLEIGH = ChannelModel(kind="rayleigh")
RICIAN = ChannelModel(kind="rician", k_factor=1.0)


class TestNoiseless:
    @pytest.mark.parametrize("scheme", SCHEMES)
    @pytest.mark.parametrize("kind", ["awgn", "rayleigh", "rician"])
    def test_every_scheme_and_channel_is_error_free(self, scheme, kind):
        record = run_ber_point(
            scheme,
            ChannelModel(kind=kind),
            math.inf,
            min_errors=10,
            max_bits=20_000,
            rng_seed=3,
        )
        assert record.bit_errors == 0
        assert record.ber == 0.0
        assert record.flagged  # starved of errors by construction


class TestPlainOracle:
    def test_rayleigh_matches_closed_form_at_10db(self):
        record = run_ber_point("plain", RAYLEIGH, 10.0, min_errors=2000, max_bits=10_000_000, rng_seed=1)
        expected = flat_rayleigh_bpsk_ber(10.0)
        assert expected == pytest.approx(0.0233, abs=2e-4)
        assert record.ber == pytest.approx(expected, rel=0.15)

    def test_monotone_in_ebn0(self):
        bers = [
            run_ber_point("plain", RAYLEIGH, eb, min_errors=800, max_bits=4_000_000, rng_seed=1).ber
            for eb in (0.0, 4.0, 8.0, 12.0, 16.0)
        ]
        assert all(b < a for a, b in zip(bers, bers[1:]))


class TestSchemeOrdering:
    def test_ordering_at_10db_rayleigh(self):
        bers = {
            s: run_ber_point(s, RAYLEIGH, 10.0, min_errors=400, max_bits=4_000_000, rng_seed=1).ber
            for s in SCHEMES
        }
        assert bers["kv_interleaved"] < bers["kv"] < bers["plain"]

    def test_rician_not_worse_than_rayleigh(self):
        for scheme in ("plain", "kv_interleaved"):
            for eb in (4.0, 10.0):
                ray = run_ber_point(scheme, RAYLEIGH, eb, min_errors=400, max_bits=4_000_000, rng_seed=1).ber
                ric = run_ber_point(scheme, RICIAN, eb, min_errors=400, max_bits=4_000_000, rng_seed=1).ber
                assert ric <= ray


class TestAccounting:
    def test_kv_reports_air_overhead_separately(self):
        record = run_ber_point("kv", RAYLEIGH, 8.0, min_errors=100, max_bits=100_000, rng_seed=2)
        # 30 air bits carry 16 payload bits, plus retransmissions.
        assert record.air_bits >= record.bits_sent * 30 / 16
        assert record.retransmitted_blocks > 0

    def test_payload_bits_counted_once(self):
        record = run_ber_point("kv", RAYLEIGH, 8.0, min_errors=100, max_bits=100_000, rng_seed=2)
        assert record.bits_sent % 16 == 0
        retry_air = record.retransmitted_blocks * 30
        fresh_air = (record.bits_sent // 16) * 30
        assert record.air_bits == fresh_air + retry_air

    def test_flagged_when_starved(self):
        record = run_ber_point("plain", RAYLEIGH, 20.0, min_errors=10_000, max_bits=40_000, rng_seed=2)
        assert record.flagged
        assert record.bits_sent <= 40_000 + 1560

    def test_ber_definition(self):
        record = run_ber_point("plain", RAYLEIGH, 6.0, min_errors=50, max_bits=100_000, rng_seed=2)
        assert record.ber == record.bit_errors / record.bits_sent
        assert 0.0 <= record.ber <= 0.5 + 1e-3


class TestDeterminism:
    def test_same_seed_same_record(self):
        a = run_ber_point("kv_interleaved", RAYLEIGH, 8.0, min_errors=100, max_bits=200_000, rng_seed=9)
        b = run_ber_point("kv_interleaved", RAYLEIGH, 8.0, min_errors=100, max_bits=200_000, rng_seed=9)
        assert a == b

    def test_point_seeds_distinct(self):
        seeds = {
            tuple(point_seed(1, s, k, e).entropy)
            for s in SCHEMES
            for k in ("rayleigh", "rician")
            for e in (0.0, 2.0, math.inf)
        }
        assert len(seeds) == len(SCHEMES) * 2 * 3

    def test_unknown_scheme_rejected(self):
        with pytest.raises(ValueError):
            run_ber_point("turbo", RAYLEIGH, 10.0)
