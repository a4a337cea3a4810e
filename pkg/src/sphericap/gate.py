"""Motion-stability gate over an IMU stream.

Acceleration and angular-velocity magnitudes are smoothed with a
per-sample exponential moving average; a pose counts as stable only
when both smoothed magnitudes sit at or below their thresholds and
have done so for a full hold window.  Unstable intervals suspend all
downstream pose processing.

The hold window is measured on sample timestamps, not wall clock, so
offline replay reproduces live behavior bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import ConfigError, NonFiniteError, NonMonotonicTimestampError
from .rotation import Quaternion

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class ImuSample:
    """One timestamped sensor reading.

    Attributes:
        t_ms: session-relative timestamp, integer milliseconds, strictly
            increasing within a stream.
        q: device orientation from the rotation-vector sensor.
        a: linear acceleration (gravity removed), m/s^2.
        omega: angular velocity, rad/s.
    """

    t_ms: int
    q: Quaternion
    a: Vec3
    omega: Vec3

    def __post_init__(self):
        for v in (*self.a, *self.omega):
            if not math.isfinite(v):
                raise NonFiniteError(f"sample at t={self.t_ms} has non-finite motion data")

    @property
    def accel_mag(self) -> float:
        ax, ay, az = self.a
        return math.sqrt(ax * ax + ay * ay + az * az)

    @property
    def omega_mag(self) -> float:
        wx, wy, wz = self.omega
        return math.sqrt(wx * wx + wy * wy + wz * wz)


@dataclass(frozen=True)
class GateConfig:
    """Thresholds for the dual-mode stability condition.

    Defaults are not taken from any reference measurement; they are
    plausible handheld values and should be tuned per device.
    """

    alpha: float = 0.9
    a_th: float = 0.5
    omega_th: float = 0.3
    hold_ms: int = 300

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ConfigError(f"alpha must be in [0, 1), got {self.alpha}")
        if self.a_th <= 0.0 or self.omega_th <= 0.0:
            raise ConfigError("a_th and omega_th must be positive")
        if self.hold_ms < 0:
            raise ConfigError("hold_ms must be non-negative")


class GateStatus(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    WARMUP = "warmup"


@dataclass
class StabilityGate:
    """Single-writer gate instance; one IMU stream per instance.

    The EMA is seeded from the first sample's magnitudes so that a calm
    start does not look artificially calmer than it is (zero-seeding
    would bias the average downward).
    """

    cfg: GateConfig = field(default_factory=GateConfig)
    a_hat: float = 0.0
    omega_hat: float = 0.0
    below_since: int | None = None
    status: GateStatus = GateStatus.WARMUP
    _last_t: int | None = None
    _seeded: bool = False

    def update(self, sample: ImuSample) -> GateStatus:
        """Fold one sample into the gate and return the new status."""
        if self._last_t is not None and sample.t_ms <= self._last_t:
            raise NonMonotonicTimestampError(
                f"timestamp {sample.t_ms} does not increase past {self._last_t}"
            )
        self._last_t = sample.t_ms

        a_mag = sample.accel_mag
        w_mag = sample.omega_mag
        if not self._seeded:
            self.a_hat = a_mag
            self.omega_hat = w_mag
            self._seeded = True
        else:
            alpha = self.cfg.alpha
            self.a_hat = alpha * self.a_hat + (1.0 - alpha) * a_mag
            self.omega_hat = alpha * self.omega_hat + (1.0 - alpha) * w_mag

        if self.a_hat <= self.cfg.a_th and self.omega_hat <= self.cfg.omega_th:
            if self.below_since is None:
                self.below_since = sample.t_ms
            if sample.t_ms - self.below_since >= self.cfg.hold_ms:
                self.status = GateStatus.STABLE
            else:
                self.status = GateStatus.WARMUP
        else:
            self.below_since = None
            self.status = GateStatus.UNSTABLE
        return self.status

    def reset(self) -> None:
        """Discard history; the next sample reseeds the EMA."""
        self.a_hat = 0.0
        self.omega_hat = 0.0
        self.below_since = None
        self.status = GateStatus.WARMUP
        self._seeded = False
        self._last_t = None
