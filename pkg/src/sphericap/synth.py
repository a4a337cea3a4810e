"""Synthetic IMU trajectory generator for fixtures and benchmarks.

Each pattern starts with a calm settle phase at the identity
orientation so the stability gate warms up and the session baseline
equals identity; from then on emitted orientations are also the
baseline-relative ones, which makes the resulting coverage analytic.

Emitted acceleration/angular-velocity magnitudes are synthetic control
signals, not dynamics of the orientation sweep: a gimbal-steady sweep
with calm magnitudes keeps the gate open, and burst windows push the
acceleration high enough to trip it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .gate import ImuSample
from .rotation import Quaternion, quat_from_view_angles

Burst = tuple[int, int]


@dataclass(frozen=True)
class SynthParams:
    """Timing and motion-signal parameters shared by all patterns."""

    rate_hz: float = 100.0
    settle_ms: int = 500
    accel_mag: float = 0.05
    omega_mag: float = 0.02
    bursts: tuple[Burst, ...] = ()
    burst_accel: float = 5.0

    def __post_init__(self):
        if self.rate_hz <= 0 or self.rate_hz > 1000:
            raise ConfigError("rate_hz must be in (0, 1000]")
        if self.settle_ms < 0:
            raise ConfigError("settle_ms must be non-negative")
        if self.accel_mag < 0 or self.omega_mag < 0 or self.burst_accel < 0:
            raise ConfigError("signal magnitudes must be non-negative")
        for start, end in self.bursts:
            if end <= start or start < 0:
                raise ConfigError(f"bad burst window ({start}, {end})")

    @property
    def step_ms(self) -> int:
        return max(1, round(1000.0 / self.rate_hz))

    def in_burst(self, t_ms: int) -> bool:
        return any(start <= t_ms < end for start, end in self.bursts)


def _sample(t_ms: int, q: Quaternion, omega_mag: float, params: SynthParams) -> ImuSample:
    a_mag = params.burst_accel if params.in_burst(t_ms) else params.accel_mag
    return ImuSample(t_ms=t_ms, q=q, a=(a_mag, 0.0, 0.0), omega=(omega_mag, 0.0, 0.0))


def _timeline(duration_s: float, params: SynthParams) -> tuple[list[int], int]:
    """All sample timestamps plus the pattern start time."""
    if duration_s <= 0:
        raise ConfigError("duration_s must be positive")
    total_ms = round(duration_s * 1000.0)
    if params.settle_ms >= total_ms:
        raise ConfigError("duration must exceed the settle phase")
    times = list(range(0, total_ms + 1, params.step_ms))
    return times, params.settle_ms


def orbit_samples(
    duration_s: float = 10.0,
    phi_deg: float = 0.0,
    revolutions: float = 1.0,
    params: SynthParams = SynthParams(),
) -> list[ImuSample]:
    """Sweep longitude at fixed latitude after settling at the origin."""
    times, t0 = _timeline(duration_s, params)
    t_end = times[-1]
    phi = math.radians(phi_deg)
    out = []
    for t in times:
        if t < t0:
            q = Quaternion(0.0, 0.0, 0.0, 1.0)
        else:
            u = (t - t0) / (t_end - t0)
            q = quat_from_view_angles(2.0 * math.pi * revolutions * u, phi)
        out.append(_sample(t, q, params.omega_mag, params))
    return out


def spiral_samples(
    duration_s: float = 40.0,
    revolutions: float = 40.0,
    phi_start_deg: float = -89.0,
    phi_end_deg: float = 89.0,
    params: SynthParams = SynthParams(),
) -> list[ImuSample]:
    """Sweep longitude continuously while latitude ramps pole to pole.

    With enough revolutions per latitude band (2+ per band at default
    settings) and dense sampling, every grid cell is visited, so a
    replay reaches full coverage.
    """
    times, t0 = _timeline(duration_s, params)
    t_end = times[-1]
    phi_a = math.radians(phi_start_deg)
    phi_b = math.radians(phi_end_deg)
    out = []
    for t in times:
        if t < t0:
            q = Quaternion(0.0, 0.0, 0.0, 1.0)
        else:
            u = (t - t0) / (t_end - t0)
            q = quat_from_view_angles(
                2.0 * math.pi * revolutions * u, phi_a + (phi_b - phi_a) * u
            )
        out.append(_sample(t, q, params.omega_mag, params))
    return out


def random_walk_samples(
    duration_s: float = 20.0,
    max_rate_deg_s: float = 12.0,
    seed: int = 0,
    params: SynthParams = SynthParams(),
) -> list[ImuSample]:
    """Bounded-rate random walk over yaw and pitch.

    The emitted angular-velocity magnitude is the walk's actual rate, so
    gate thresholds interact with the trajectory realistically.
    """
    rng = np.random.default_rng(seed)
    times, t0 = _timeline(duration_s, params)
    max_rate = math.radians(max_rate_deg_s)
    dt = params.step_ms / 1000.0
    theta = 0.0
    phi = 0.0
    out = []
    for t in times:
        if t < t0:
            out.append(_sample(t, Quaternion(0.0, 0.0, 0.0, 1.0), params.omega_mag, params))
            continue
        yaw_rate = float(rng.uniform(-max_rate, max_rate))
        pitch_rate = float(rng.uniform(-max_rate, max_rate))
        theta += yaw_rate * dt
        phi = min(math.radians(85.0), max(math.radians(-85.0), phi + pitch_rate * dt))
        rate_mag = math.hypot(yaw_rate, pitch_rate)
        out.append(_sample(t, quat_from_view_angles(theta, phi), rate_mag, params))
    return out


PATTERNS = {
    "orbit": orbit_samples,
    "spiral": spiral_samples,
    "random-walk": random_walk_samples,
}
