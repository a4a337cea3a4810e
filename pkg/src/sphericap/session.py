"""One acquisition session: gate, pose chain, coverage, guidance.

Per sample: the stability gate runs first; unstable samples suspend all
pose processing.  The first stable sample fixes the baseline rotation,
and every later stable sample walks the chain

    quaternion -> DCM -> relative rotation -> view direction
    -> (theta, phi) -> wrap/saturate -> grid cell -> mark

A capture event fires when a cell is newly covered (or on every stable
sample under the ``always`` recapture policy).  Reports are a pure
function of the sample stream and config, which is what makes offline
replay and the live service interchangeable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import grid as gridmod
from .errors import ConfigError
from .gate import GateConfig, GateStatus, ImuSample, StabilityGate
from .grid import CellIndex, CoverageMatrix, GridSpec
from .rotation import (
    RotationMatrix,
    SphericalAngles,
    ViewDirection,
    quat_to_dcm,
    relative_rotation,
    sat_phi,
    to_spherical,
    view_direction,
    wrap_theta,
)

RECAPTURE_POLICIES = ("once", "always")

# Tie tolerance for guidance target selection: distances (radians) or
# areas (steradians) closer than this are treated as equal so the
# documented tie-breaks stay deterministic under float noise.
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class SessionConfig:
    gate: GateConfig = field(default_factory=GateConfig)
    grid: GridSpec = field(default_factory=GridSpec)
    recapture_policy: str = "once"

    def __post_init__(self):
        if self.recapture_policy not in RECAPTURE_POLICIES:
            raise ConfigError(
                f"recapture_policy must be one of {RECAPTURE_POLICIES}, "
                f"got {self.recapture_policy!r}"
            )


@dataclass(frozen=True)
class CaptureEvent:
    t_ms: int
    angles: SphericalAngles
    cell: CellIndex
    newly_covered: bool
    coverage_after: float


@dataclass(frozen=True)
class GuidanceHint:
    target_cell: CellIndex
    target_angles: SphericalAngles
    yaw_delta: float
    pitch_delta: float
    uncovered_area_pct: float


@dataclass(frozen=True)
class Snapshot:
    coverage_pct: float
    raw: CoverageMatrix
    refined: CoverageMatrix
    capture_count: int
    gate_status: GateStatus


@dataclass(frozen=True)
class SessionReport:
    config: SessionConfig
    sample_count: int
    coverage_pct: float
    captures: tuple[CaptureEvent, ...]
    bands: gridmod.BandReport
    first_visit_ms: tuple[tuple[int, int, int], ...]

    @property
    def capture_count(self) -> int:
        return len(self.captures)


class CaptureSession:
    """Exclusive-owner session state; snapshots are safe to share."""

    def __init__(self, cfg: SessionConfig | None = None):
        self.cfg = cfg or SessionConfig()
        self.gate = StabilityGate(cfg=self.cfg.gate)
        self.coverage = CoverageMatrix(self.cfg.grid)
        self.baseline: RotationMatrix | None = None
        self.captures: list[CaptureEvent] = []
        self.sample_count = 0
        self.first_visits: dict[CellIndex, int] = {}
        # Viewing state of the most recent stable sample (e_z at baseline).
        self.current_angles: SphericalAngles | None = None
        self.current_dir: ViewDirection | None = None
        # Per-sample outcome, for live state replies.
        self.last_status: GateStatus = GateStatus.WARMUP
        self.last_cell: CellIndex | None = None
        self.last_newly = False
        self._centers: tuple[np.ndarray, np.ndarray] | None = None

    def ingest(self, sample: ImuSample) -> CaptureEvent | None:
        """Process one sample; returns the capture event if one fired."""
        status = self.gate.update(sample)
        self.sample_count += 1
        self.last_status = status
        self.last_cell = None
        self.last_newly = False

        if status is not GateStatus.STABLE:
            return None

        if self.baseline is None:
            self.baseline = quat_to_dcm(sample.q)
            self.current_angles = SphericalAngles(0.0, 0.0)
            self.current_dir = ViewDirection(0.0, 0.0, 1.0)
            return None

        r_rel = relative_rotation(self.baseline, quat_to_dcm(sample.q))
        v = view_direction(r_rel)
        raw_angles = to_spherical(v)
        angles = SphericalAngles(wrap_theta(raw_angles.theta), sat_phi(raw_angles.phi))
        cell = gridmod.quantize(angles, self.cfg.grid)

        newly = self.coverage.mark(cell)
        self.current_angles = angles
        self.current_dir = v
        self.last_cell = cell
        self.last_newly = newly
        if newly:
            self.first_visits[cell] = sample.t_ms

        if newly or self.cfg.recapture_policy == "always":
            event = CaptureEvent(
                t_ms=sample.t_ms,
                angles=angles,
                cell=cell,
                newly_covered=newly,
                coverage_after=gridmod.coverage_rate(self.coverage),
            )
            self.captures.append(event)
            return event
        return None

    def _cell_geometry(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached (n_cells, 3) center directions and (n_cells,) areas."""
        if self._centers is None:
            spec = self.cfg.grid
            phi_c = -math.pi / 2.0 + (np.arange(spec.n_phi) + 0.5) * spec.delta_phi
            theta_c = -math.pi + (np.arange(spec.n_theta) + 0.5) * spec.delta_theta
            pp, tt = np.meshgrid(phi_c, theta_c, indexing="ij")
            dirs = np.stack(
                [np.cos(pp) * np.sin(tt), np.sin(pp), np.cos(pp) * np.cos(tt)], axis=-1
            ).reshape(-1, 3)
            areas = np.repeat(gridmod.row_areas(spec), spec.n_theta)
            self._centers = (dirs, areas)
        return self._centers

    def guidance(self) -> GuidanceHint | None:
        """Nearest uncovered cell by great-circle distance to its center.

        Ties go to the larger cell area, then the smaller (p, t) index;
        flat row-major order is exactly (p, t) lexicographic order.
        Returns None before the baseline exists or at full coverage.
        """
        if self.baseline is None or self.current_dir is None:
            return None
        spec = self.cfg.grid
        mask = ~self.coverage.bits.ravel()
        if not mask.any():
            return None

        dirs, areas = self._cell_geometry()
        idx = np.nonzero(mask)[0]
        dots = dirs[idx] @ self.current_dir.as_array()
        dists = np.arccos(np.clip(dots, -1.0, 1.0))
        near = dists <= dists.min() + _TIE_EPS
        cand = idx[near]
        cand_areas = areas[cand]
        cand = cand[cand_areas >= cand_areas.max() - _TIE_EPS]
        flat = int(cand.min())

        cell = CellIndex(p=flat // spec.n_theta, t=flat % spec.n_theta)
        center = spec.cell_center(cell)
        assert self.current_angles is not None
        return GuidanceHint(
            target_cell=cell,
            target_angles=center,
            yaw_delta=wrap_theta(center.theta - self.current_angles.theta),
            pitch_delta=center.phi - self.current_angles.phi,
            uncovered_area_pct=100.0 - gridmod.coverage_rate(self.coverage),
        )

    def snapshot(self) -> Snapshot:
        raw = self.coverage.copy()
        return Snapshot(
            coverage_pct=gridmod.coverage_rate(self.coverage),
            raw=raw,
            refined=gridmod.refine_display(raw),
            capture_count=len(self.captures),
            gate_status=self.last_status,
        )

    def finalize(self) -> SessionReport:
        bands = gridmod.band_report(
            [c.angles for c in self.captures], gridmod.DEFAULT_BANDS, self.coverage
        )
        visits = tuple(
            (cell.p, cell.t, t_ms)
            for cell, t_ms in sorted(self.first_visits.items(), key=lambda kv: kv[0])
        )
        return SessionReport(
            config=self.cfg,
            sample_count=self.sample_count,
            coverage_pct=gridmod.coverage_rate(self.coverage),
            captures=tuple(self.captures),
            bands=bands,
            first_visit_ms=visits,
        )


def report_to_dict(report: SessionReport) -> dict:
    """JSON-ready view of a report; angles exported in degrees."""
    cfg = report.config
    return {
        "version": 1,
        "grid": {
            "n_theta": cfg.grid.n_theta,
            "n_phi": cfg.grid.n_phi,
            "pole_zone_deg": cfg.grid.pole_zone_deg,
        },
        "gate": {
            "alpha": cfg.gate.alpha,
            "a_th": cfg.gate.a_th,
            "omega_th": cfg.gate.omega_th,
            "hold_ms": cfg.gate.hold_ms,
        },
        "recapture_policy": cfg.recapture_policy,
        "sample_count": report.sample_count,
        "capture_count": report.capture_count,
        "coverage_pct": report.coverage_pct,
        "bands": [
            {
                "start_deg": r.start_deg,
                "end_deg": r.end_deg,
                "image_count": r.image_count,
                "coverage_pct": r.coverage_pct,
            }
            for r in report.bands.rows
        ],
        "captures": [
            {
                "t_ms": c.t_ms,
                "theta_deg": math.degrees(c.angles.theta),
                "phi_deg": math.degrees(c.angles.phi),
                "cell": [c.cell.p, c.cell.t],
                "newly_covered": c.newly_covered,
                "coverage_after_pct": c.coverage_after,
            }
            for c in report.captures
        ],
        "first_visit_ms": [[p, t, ms] for p, t, ms in report.first_visit_ms],
    }


def report_to_json(report: SessionReport) -> str:
    """Canonical serialization; identical streams yield identical bytes."""
    return json.dumps(report_to_dict(report), indent=2) + "\n"
