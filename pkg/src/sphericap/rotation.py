"""Rotation and spherical-direction kernel.

Conventions used throughout the package:

- Quaternions are stored vector-first, scalar-last ``[x, y, z, w]``, the
  order emitted by phone rotation-vector sensors.
- Rotation matrices map device-frame vectors to the world frame.
- The camera optical axis is the device +z axis; its direction in the
  baseline-aligned frame is the third column of the relative rotation.
- Spherical angles are ``theta`` (longitude/yaw) in ``(-pi, pi]`` and
  ``phi`` (latitude/pitch) in ``(-pi/2, pi/2]``, both radians.  Degrees
  appear only at I/O boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteError, NonUnitQuaternionError

# Ingest tolerance: sensors emit near-unit quaternions; anything farther
# off than this indicates corrupted data rather than rounding.
QUAT_NORM_TOL = 1e-3

# Open-interval representative for the lower phi bound.
PHI_OPEN_EPS = 1e-12

# Squared-magnitude threshold below which the longitude of a view
# direction is considered undefined (polar singularity).
POLE_EPS_SQ = 1e-12

_HALF_PI = math.pi / 2.0
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Quaternion:
    """Unit quaternion, vector part first: ``[x, y, z, w]``.

    Construction renormalizes inputs whose norm is within
    ``QUAT_NORM_TOL`` of 1 and rejects anything farther off.
    """

    x: float
    y: float
    z: float
    w: float

    def __post_init__(self):
        comps = (self.x, self.y, self.z, self.w)
        if not all(math.isfinite(c) for c in comps):
            raise NonFiniteError(f"quaternion has non-finite component: {comps}")
        norm = math.sqrt(sum(c * c for c in comps))
        if abs(norm - 1.0) > QUAT_NORM_TOL:
            raise NonUnitQuaternionError(
                f"quaternion norm {norm:.6g} deviates from 1 by more than {QUAT_NORM_TOL}"
            )
        # Renormalize only meaningful deviations; an already-normalized
        # quaternion must reconstruct bit-identically (log round-trips).
        if abs(norm - 1.0) > 1e-9:
            object.__setattr__(self, "x", self.x / norm)
            object.__setattr__(self, "y", self.y / norm)
            object.__setattr__(self, "z", self.z / norm)
            object.__setattr__(self, "w", self.w / norm)

    def components(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.z, self.w)


@dataclass(frozen=True)
class RotationMatrix:
    """3x3 direction cosine matrix (device frame -> world frame)."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.float64)
        if m.shape != (3, 3):
            raise ValueError(f"rotation matrix must be 3x3, got {m.shape}")
        if not np.isfinite(m).all():
            raise NonFiniteError("rotation matrix has non-finite entries")
        if not np.allclose(m.T @ m, np.eye(3), atol=1e-9, rtol=0.0):
            raise ValueError("matrix is not orthonormal within 1e-9")
        if abs(float(np.linalg.det(m)) - 1.0) > 1e-9:
            raise ValueError("matrix determinant deviates from 1 beyond 1e-9")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> "RotationMatrix":
        return cls(np.eye(3))


@dataclass(frozen=True)
class ViewDirection:
    """Unit vector along the camera optical axis in the aligned frame."""

    vx: float
    vy: float
    vz: float

    def __post_init__(self):
        n2 = self.vx * self.vx + self.vy * self.vy + self.vz * self.vz
        if not math.isfinite(n2):
            raise NonFiniteError("view direction has non-finite component")
        if abs(n2 - 1.0) > 1e-9:
            raise ValueError(f"view direction norm^2 {n2:.12g} deviates from 1 beyond 1e-9")

    def as_array(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.vz], dtype=np.float64)


@dataclass(frozen=True)
class SphericalAngles:
    """Longitude/latitude pair in radians; ranges enforced by wrap_theta/sat_phi."""

    theta: float
    phi: float


def quat_to_dcm(q: Quaternion) -> RotationMatrix:
    """Convert a unit quaternion to its direction cosine matrix."""
    qx, qy, qz, qw = q.components()
    m = np.array(
        [
            [
                1.0 - 2.0 * (qy * qy + qz * qz),
                2.0 * (qx * qy - qz * qw),
                2.0 * (qx * qz + qy * qw),
            ],
            [
                2.0 * (qx * qy + qz * qw),
                1.0 - 2.0 * (qx * qx + qz * qz),
                2.0 * (qy * qz - qx * qw),
            ],
            [
                2.0 * (qx * qz - qy * qw),
                2.0 * (qy * qz + qx * qw),
                1.0 - 2.0 * (qx * qx + qy * qy),
            ],
        ],
        dtype=np.float64,
    )
    return RotationMatrix(m)


def relative_rotation(baseline: RotationMatrix, current: RotationMatrix) -> RotationMatrix:
    """Express ``current`` against ``baseline``: returns baseline^T @ current."""
    return RotationMatrix(baseline.m.T @ current.m)


def view_direction(r_rel: RotationMatrix) -> ViewDirection:
    """Optical-axis direction: the third column of the relative rotation."""
    col = r_rel.m[:, 2]
    return ViewDirection(float(col[0]), float(col[1]), float(col[2]))


def to_spherical(v: ViewDirection) -> SphericalAngles:
    """Map a unit view direction to (theta, phi).

    phi = arcsin(vy), theta = atan2(vx, vz).  At the polar singularity
    (vx^2 + vz^2 below ``POLE_EPS_SQ``) theta is defined as 0 so that
    quantization at the poles stays deterministic.
    """
    phi = math.asin(min(1.0, max(-1.0, v.vy)))
    if v.vx * v.vx + v.vz * v.vz < POLE_EPS_SQ:
        theta = 0.0
    else:
        theta = math.atan2(v.vx, v.vz)
    return SphericalAngles(theta=theta, phi=phi)


def wrap_theta(theta: float) -> float:
    """Wrap a longitude angle into ``(-pi, pi]``.

    Uses the floor-based reduction ``theta - 2*pi*floor((theta+pi)/(2*pi))``,
    then folds the half-open boundary so that exactly +pi is kept and -pi
    maps to +pi.
    """
    if not math.isfinite(theta):
        raise NonFiniteError(f"theta is not finite: {theta}")
    wrapped = theta - _TWO_PI * math.floor((theta + math.pi) / _TWO_PI)
    # Floor reduction lands in [-pi, pi); rounding of huge inputs can
    # overshoot either edge by one ulp.
    if wrapped <= -math.pi:
        wrapped += _TWO_PI
    elif wrapped > math.pi:
        wrapped -= _TWO_PI
    return wrapped


def sat_phi(phi: float) -> float:
    """Saturate a latitude angle into ``(-pi/2, pi/2]``.

    The lower bound is open: values at or below -pi/2 map to
    ``-pi/2 + PHI_OPEN_EPS``, the smallest representative we admit.
    """
    if not math.isfinite(phi):
        raise NonFiniteError(f"phi is not finite: {phi}")
    if phi > _HALF_PI:
        return _HALF_PI
    if phi <= -_HALF_PI:
        return -_HALF_PI + PHI_OPEN_EPS
    return phi


def direction_from_angles(theta: float, phi: float) -> ViewDirection:
    """Reconstruct the unit view direction for (theta, phi)."""
    cphi = math.cos(phi)
    return ViewDirection(cphi * math.sin(theta), math.sin(phi), cphi * math.cos(theta))


def quat_from_view_angles(theta: float, phi: float) -> Quaternion:
    """Orientation whose view direction comes out at (theta, phi).

    Composes yaw about +y with pitch about +x (pitch applied first), the
    same convention a virtual capture rig uses to steer the camera.
    """
    cy = math.cos(theta / 2.0)
    sy = math.sin(theta / 2.0)
    cx = math.cos(phi / 2.0)
    sx = -math.sin(phi / 2.0)
    return Quaternion(x=cy * sx, y=cx * sy, z=-sy * sx, w=cy * cx)
