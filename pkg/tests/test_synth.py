"""Synthetic trajectory generator fixtures."""

import math

import pytest

from sphericap.errors import ConfigError
from sphericap.gate import GateStatus
from sphericap.grid import coverage_rate
from sphericap.session import CaptureSession, SessionConfig
from sphericap.synth import (
    SynthParams,
    orbit_samples,
    random_walk_samples,
    spiral_samples,
)


def replay(samples, cfg=None):
    s = CaptureSession(cfg or SessionConfig())
    for smp in samples:
        s.ingest(smp)
    return s


class TestTimeline:
    def test_monotonic_timestamps(self):
        for samples in (
            orbit_samples(duration_s=2.0),
            spiral_samples(duration_s=2.0, revolutions=2.0),
            random_walk_samples(duration_s=2.0),
        ):
            ts = [s.t_ms for s in samples]
            assert ts == sorted(set(ts))

    def test_rate_controls_step(self):
        samples = orbit_samples(duration_s=1.0, params=SynthParams(rate_hz=50.0))
        assert samples[1].t_ms - samples[0].t_ms == 20

    def test_duration_must_exceed_settle(self):
        with pytest.raises(ConfigError):
            orbit_samples(duration_s=0.2, params=SynthParams(settle_ms=500))


class TestOrbit:
    def test_settle_phase_calm_and_identity(self):
        samples = orbit_samples(duration_s=5.0)
        for s in samples[:40]:
            assert s.q.components() == (0.0, 0.0, 0.0, 1.0)
            assert s.accel_mag < 0.1

    def test_equatorial_coverage_is_one_row(self):
        sess = replay(orbit_samples(duration_s=10.0, phi_deg=0.0))
        assert sess.coverage.bits[9].all()
        assert sess.coverage.bits.sum() == 36

    def test_tilted_orbit_fills_its_row(self):
        sess = replay(orbit_samples(duration_s=10.0, phi_deg=45.0))
        # row for phi'=45deg: floor((45+90)/180*18) = 13, plus the settle
        # cell at the origin
        assert sess.coverage.bits[13].all()
        assert sess.coverage.bits.sum() == 37


class TestSpiral:
    def test_full_coverage(self):
        sess = replay(spiral_samples())
        assert coverage_rate(sess.coverage) == pytest.approx(100.0, abs=1e-9)

    def test_ramp_spans_poles(self):
        samples = spiral_samples(duration_s=10.0, revolutions=10.0)
        phis = []
        for s in samples:
            qx, qy, qz, qw = s.q.components()
            vy = 2.0 * (qy * qz - qx * qw)
            phis.append(math.degrees(math.asin(max(-1.0, min(1.0, vy)))))
        assert min(phis) < -85.0
        assert max(phis) > 85.0


class TestBursts:
    def test_burst_magnitude_emitted(self):
        params = SynthParams(bursts=((1000, 1500),), burst_accel=5.0)
        samples = orbit_samples(duration_s=3.0, params=params)
        by_time = {s.t_ms: s for s in samples}
        assert by_time[1200].accel_mag == 5.0
        assert by_time[600].accel_mag < 1.0

    def test_bursts_suppress_captures(self):
        quiet = replay(orbit_samples(duration_s=6.0))
        bursty = replay(
            orbit_samples(duration_s=6.0, params=SynthParams(bursts=((2000, 3000),)))
        )
        assert len(bursty.captures) < len(quiet.captures)

    def test_no_stable_during_burst(self):
        params = SynthParams(bursts=((2000, 3000),))
        sess = CaptureSession(SessionConfig())
        for smp in orbit_samples(duration_s=6.0, params=params):
            sess.ingest(smp)
            if 2000 <= smp.t_ms < 3000:
                assert sess.last_status is not GateStatus.STABLE


class TestRandomWalk:
    def test_seed_reproducible(self):
        a = random_walk_samples(duration_s=3.0, seed=42)
        b = random_walk_samples(duration_s=3.0, seed=42)
        assert a == b

    def test_seed_changes_stream(self):
        a = random_walk_samples(duration_s=3.0, seed=1)
        b = random_walk_samples(duration_s=3.0, seed=2)
        assert a != b

    def test_rate_bounded(self):
        max_rate = math.radians(12.0)
        for s in random_walk_samples(duration_s=3.0):
            assert s.omega_mag <= math.hypot(max_rate, max_rate) + 1e-12

    def test_produces_samples_and_some_coverage(self):
        sess = replay(random_walk_samples(duration_s=10.0, seed=3))
        assert sess.baseline is not None
        assert sess.coverage.covered_count() >= 1
