"""Longitude-latitude viewpoint grid and area-weighted coverage.

The viewing sphere is partitioned into ``n_phi`` latitude bands of
height pi/n_phi and ``n_theta`` longitude columns of width 2*pi/n_theta.
Equal-angle cells shrink toward the poles, so coverage is weighted by
exact cell area ``delta_theta * (sin(phi_{p+1}) - sin(phi_p))`` rather
than by cell count.

Morphological refinement (pole dilation + hole filling) produces a
smoother display copy; it never feeds back into the coverage figure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedBandsError
from .rotation import SphericalAngles

# Table-2-style longitude sectors: front, side, back, opposite side.
# Each pair is the half-open sector (start, end] in degrees; the back
# sector wraps across the +/-180 seam.
DEFAULT_BANDS: tuple[tuple[float, float], ...] = (
    (-45.0, 45.0),
    (45.0, 135.0),
    (135.0, -135.0),
    (-135.0, -45.0),
)


@dataclass(frozen=True)
class GridSpec:
    """Discretization parameters for the viewpoint grid.

    pole_zone_deg is the latitude band (measured from each pole) whose
    rows receive longitudinal dilation in the display refinement.
    """

    n_theta: int = 36
    n_phi: int = 18
    pole_zone_deg: float = 30.0

    def __post_init__(self):
        if self.n_theta < 2 or self.n_phi < 2:
            raise ValueError("grid needs n_theta >= 2 and n_phi >= 2")
        if not (0.0 <= self.pole_zone_deg < 90.0):
            raise ValueError("pole_zone_deg must be in [0, 90)")

    @property
    def delta_theta(self) -> float:
        return 2.0 * math.pi / self.n_theta

    @property
    def delta_phi(self) -> float:
        return math.pi / self.n_phi

    def phi_edge(self, p: int) -> float:
        """Lower latitude edge of row p."""
        return -math.pi / 2.0 + p * self.delta_phi

    def cell_center(self, cell: "CellIndex") -> SphericalAngles:
        theta = -math.pi + (cell.t + 0.5) * self.delta_theta
        phi = -math.pi / 2.0 + (cell.p + 0.5) * self.delta_phi
        return SphericalAngles(theta=theta, phi=phi)

    def polar_rows(self) -> list[int]:
        """Rows whose band center lies inside the pole zone."""
        limit = 90.0 - self.pole_zone_deg
        rows = []
        for p in range(self.n_phi):
            center_deg = -90.0 + (p + 0.5) * (180.0 / self.n_phi)
            if abs(center_deg) > limit:
                rows.append(p)
        return rows


@dataclass(frozen=True, order=True)
class CellIndex:
    """Grid cell: latitude row p, longitude column t."""

    p: int
    t: int


def quantize(angles: SphericalAngles, spec: GridSpec) -> CellIndex:
    """Map wrapped/saturated angles to their grid cell.

    Clamping is part of the index formulas, so any finite input lands in
    bounds; callers are still expected to wrap/saturate first.
    """
    t = min(
        spec.n_theta - 1,
        max(0, math.floor((angles.theta + math.pi) / (2.0 * math.pi) * spec.n_theta)),
    )
    p = min(
        spec.n_phi - 1,
        max(0, math.floor((angles.phi + math.pi / 2.0) / math.pi * spec.n_phi)),
    )
    return CellIndex(p=p, t=t)


def cell_area(p: int, spec: GridSpec) -> float:
    """Exact steradian area of any cell in row p."""
    return spec.delta_theta * (math.sin(spec.phi_edge(p + 1)) - math.sin(spec.phi_edge(p)))


def row_areas(spec: GridSpec) -> np.ndarray:
    """Per-row cell areas, shape (n_phi,)."""
    edges = -math.pi / 2.0 + np.arange(spec.n_phi + 1) * spec.delta_phi
    return spec.delta_theta * np.diff(np.sin(edges))


class CoverageMatrix:
    """Binary occupancy matrix over the grid, n_phi rows by n_theta columns.

    A matrix has a single writer (its session); snapshots for sharing
    are taken with copy().
    """

    def __init__(self, spec: GridSpec, bits: np.ndarray | None = None):
        self.spec = spec
        if bits is None:
            bits = np.zeros((spec.n_phi, spec.n_theta), dtype=bool)
        else:
            bits = np.asarray(bits, dtype=bool)
            if bits.shape != (spec.n_phi, spec.n_theta):
                raise ValueError(
                    f"bits shape {bits.shape} does not match grid "
                    f"({spec.n_phi}, {spec.n_theta})"
                )
            bits = bits.copy()
        self.bits = bits

    def mark(self, cell: CellIndex) -> bool:
        """Set a cell; returns True when the bit flips 0 -> 1."""
        if not (0 <= cell.p < self.spec.n_phi and 0 <= cell.t < self.spec.n_theta):
            raise IndexError(f"cell {cell} out of bounds for grid {self.spec}")
        newly = not self.bits[cell.p, cell.t]
        self.bits[cell.p, cell.t] = True
        return newly

    def copy(self) -> "CoverageMatrix":
        return CoverageMatrix(self.spec, self.bits)

    def covered_count(self) -> int:
        return int(self.bits.sum())

    def as_bitstring(self) -> str:
        """Row-major 0/1 string, row p=0 first."""
        return "".join("1" if b else "0" for b in self.bits.ravel())

    @classmethod
    def from_bitstring(cls, spec: GridSpec, s: str) -> "CoverageMatrix":
        if len(s) != spec.n_phi * spec.n_theta or set(s) - {"0", "1"}:
            raise ValueError("bitstring does not match grid size or alphabet")
        arr = np.frombuffer(s.encode("ascii"), dtype=np.uint8) - ord("0")
        return cls(spec, arr.reshape(spec.n_phi, spec.n_theta).astype(bool))


def coverage_rate(c: CoverageMatrix) -> float:
    """Area-weighted coverage percentage over the whole grid."""
    areas = row_areas(c.spec)
    covered = float((c.bits.sum(axis=1) * areas).sum())
    total = float(areas.sum() * c.spec.n_theta)
    return covered / total * 100.0


def refine_display(c: CoverageMatrix) -> CoverageMatrix:
    """Display copy with pole dilation and hole filling applied.

    Both passes read the pre-refinement bits, so the result is
    order-independent: dilation adds the longitudinal neighbors (with
    wraparound) of active cells in the pole-zone rows; hole filling
    activates inactive cells whose four axial neighbors (longitude
    wraps, latitude does not) are all active.  Top and bottom rows have
    no latitude neighbor on one side and never qualify for filling.
    """
    raw = c.bits
    out = raw.copy()

    for p in c.spec.polar_rows():
        out[p] |= np.roll(raw[p], 1) | np.roll(raw[p], -1)

    if c.spec.n_phi >= 3:
        interior = slice(1, c.spec.n_phi - 1)
        left = np.roll(raw[interior], 1, axis=1)
        right = np.roll(raw[interior], -1, axis=1)
        up = raw[: c.spec.n_phi - 2]
        down = raw[2:]
        holes = left & right & up & down & ~raw[interior]
        out[interior] |= holes

    return CoverageMatrix(c.spec, out)


@dataclass(frozen=True)
class BandRow:
    start_deg: float
    end_deg: float
    image_count: int
    coverage_pct: float


@dataclass(frozen=True)
class BandReport:
    rows: tuple[BandRow, ...] = field(default_factory=tuple)

    def to_csv(self) -> str:
        lines = ["band_start_deg,band_end_deg,image_count,coverage_pct"]
        for r in self.rows:
            lines.append(f"{r.start_deg:g},{r.end_deg:g},{r.image_count},{r.coverage_pct!r}")
        return "\n".join(lines) + "\n"


def _band_span_deg(start: float, end: float) -> float:
    span = (end - start) % 360.0
    return span if span > 0.0 else 360.0 if start != end else 0.0


def _in_band(theta_deg: float, start: float, end: float) -> bool:
    # Half-open (start, end]; wraps across the +/-180 seam when end <= start.
    d = theta_deg - 360.0 * math.floor((theta_deg + 180.0) / 360.0)
    if d <= -180.0:
        d += 360.0
    s = start - 360.0 * math.floor((start + 180.0) / 360.0)
    e = end - 360.0 * math.floor((end + 180.0) / 360.0)
    if s < e:
        return s < d <= e
    return d > s or d <= e


def validate_bands(bands: list[tuple[float, float]] | tuple[tuple[float, float], ...]) -> None:
    """Reject band lists that do not partition the circle."""
    if not bands:
        raise MalformedBandsError("no bands given")
    spans = [_band_span_deg(s, e) for s, e in bands]
    if any(sp <= 0.0 for sp in spans):
        raise MalformedBandsError("band with zero extent")
    if abs(sum(spans) - 360.0) > 1e-9:
        raise MalformedBandsError(f"band spans sum to {sum(spans):g}, expected 360")
    starts = sorted((s % 360.0) for s, _ in bands)
    ends = sorted((e % 360.0) for _, e in bands)
    if any(abs(a - b) > 1e-9 for a, b in zip(starts, ends)):
        raise MalformedBandsError("band edges do not chain into a partition")


def band_report(
    captures: list[SphericalAngles],
    bands: list[tuple[float, float]] | tuple[tuple[float, float], ...],
    c: CoverageMatrix,
) -> BandReport:
    """Per-longitude-sector capture counts and area-weighted coverage."""
    validate_bands(bands)
    spec = c.spec
    areas = row_areas(spec)
    col_centers = [-180.0 + (t + 0.5) * (360.0 / spec.n_theta) for t in range(spec.n_theta)]

    rows = []
    for start, end in bands:
        count = sum(1 for a in captures if _in_band(math.degrees(a.theta), start, end))
        cols = [t for t in range(spec.n_theta) if _in_band(col_centers[t], start, end)]
        if cols:
            sub = c.bits[:, cols]
            covered = float((sub.sum(axis=1) * areas).sum())
            total = float(areas.sum() * len(cols))
            pct = covered / total * 100.0
        else:
            pct = 0.0
        rows.append(BandRow(start_deg=start, end_deg=end, image_count=count, coverage_pct=pct))
    return BandReport(rows=tuple(rows))


def to_pgm(c: CoverageMatrix, added: CoverageMatrix | None = None) -> str:
    """ASCII PGM dump, one pixel per cell, row p=0 at the bottom.

    With ``added`` (a refinement superset), cells present only there are
    drawn mid-gray so the refinement's contribution stays visible.
    """
    spec = c.spec
    vals = np.where(c.bits, 255, 0)
    if added is not None:
        if added.spec != spec:
            raise ValueError("refined matrix has a different grid")
        vals = np.where(added.bits & ~c.bits, 128, vals)
    lines = ["P2", f"{spec.n_theta} {spec.n_phi}", "255"]
    for p in range(spec.n_phi - 1, -1, -1):
        lines.append(" ".join(str(int(v)) for v in vals[p]))
    return "\n".join(lines) + "\n"


def to_text(c: CoverageMatrix) -> str:
    """Plain 0/1 dump in matrix order (row p=0 first)."""
    return "\n".join("".join("1" if b else "0" for b in row) for row in c.bits) + "\n"
