"""IMU-gated spherical coverage tracking and capture guidance."""

from .errors import (
    ConfigError,
    DuplicateImageIdError,
    MalformedBandsError,
    MalformedLineError,
    MalformedRowError,
    NonFiniteError,
    NonMonotonicTimestampError,
    NonUnitQuaternionError,
    SphericapError,
)
from .gate import GateConfig, GateStatus, ImuSample, StabilityGate
from .grid import (
    DEFAULT_BANDS,
    BandReport,
    BandRow,
    CellIndex,
    CoverageMatrix,
    GridSpec,
    band_report,
    cell_area,
    coverage_rate,
    quantize,
    refine_display,
)
from .rotation import (
    Quaternion,
    RotationMatrix,
    SphericalAngles,
    ViewDirection,
    quat_from_view_angles,
    quat_to_dcm,
    relative_rotation,
    sat_phi,
    to_spherical,
    view_direction,
    wrap_theta,
)
from .session import (
    CaptureEvent,
    CaptureSession,
    GuidanceHint,
    SessionConfig,
    SessionReport,
    Snapshot,
    report_to_dict,
    report_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "BandReport",
    "BandRow",
    "CaptureEvent",
    "CaptureSession",
    "CellIndex",
    "ConfigError",
    "CoverageMatrix",
    "DEFAULT_BANDS",
    "DuplicateImageIdError",
    "GateConfig",
    "GateStatus",
    "GridSpec",
    "GuidanceHint",
    "ImuSample",
    "MalformedBandsError",
    "MalformedLineError",
    "MalformedRowError",
    "NonFiniteError",
    "NonMonotonicTimestampError",
    "NonUnitQuaternionError",
    "Quaternion",
    "RotationMatrix",
    "SessionConfig",
    "SessionReport",
    "Snapshot",
    "SphericalAngles",
    "SphericapError",
    "StabilityGate",
    "ViewDirection",
    "band_report",
    "cell_area",
    "coverage_rate",
    "quantize",
    "quat_from_view_angles",
    "quat_to_dcm",
    "refine_display",
    "relative_rotation",
    "report_to_dict",
    "report_to_json",
    "sat_phi",
    "to_spherical",
    "view_direction",
    "wrap_theta",
]
