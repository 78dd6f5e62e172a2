"""Track worlds: a centerline with per-point half widths."""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from src.dynamics.base import VehicleState

# Maximum spacing between rendered boundary samples, meters.
BOUNDARY_SPACING = 0.05


@dataclass(frozen=True)
class TrackProjection:
    """Closest centerline point to a query position."""
    arc_length: float
    lateral: float
    distance: float
    half_width: float
    segment: int


def _resample_polyline(points: np.ndarray, closed: bool, spacing: float = BOUNDARY_SPACING) -> np.ndarray:
    """Points along the polyline no more than ``spacing`` apart."""
    pts = np.vstack([points, points[:1]]) if closed else points
    pieces = []
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(1, int(math.ceil(float(np.hypot(*(b - a))) / spacing)))
        t = np.arange(n)[:, None] / n
        pieces.append(a + t * (b - a))
    if not closed:
        pieces.append(pts[-1:])
    return np.vstack(pieces)


@dataclass(frozen=True)
class TrackWorld:
    """Driving corridor around a centerline.

    ``half_width`` may be infinite for an unbounded plane; such boundaries
    are never rendered and the vehicle can never leave the corridor.
    ``curb_width`` thickens each rendered boundary outward into a band.
    """
    centerline: np.ndarray
    half_width: np.ndarray
    closed: bool = True
    name: str = "track"
    curb_width: float = 0.0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        pts = np.array(self.centerline, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
            raise ValueError(f"centerline must have at least 3 points of shape (M, 2), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("centerline must be finite")
        hw = np.broadcast_to(np.asarray(self.half_width, dtype=float), (len(pts),)).copy()
        if np.any(np.isnan(hw)) or np.any(hw <= 0):
            raise ValueError("half_width must be positive everywhere")
        if not (self.curb_width >= 0 and math.isfinite(self.curb_width)):
            raise ValueError(f"curb_width must be a non-negative number, got {self.curb_width}")
        seg = np.diff(np.vstack([pts, pts[:1]]) if self.closed else pts, axis=0)
        if np.any(np.hypot(seg[:, 0], seg[:, 1]) == 0):
            raise ValueError("centerline contains repeated consecutive points")
        pts.setflags(write=False)
        hw.setflags(write=False)
        object.__setattr__(self, "centerline", pts)
        object.__setattr__(self, "half_width", hw)

    # -- segment geometry -------------------------------------------------

    @cached_property
    def _segments(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        pts = self.centerline
        idx_b = np.r_[np.arange(1, len(pts)), 0] if self.closed else np.arange(1, len(pts))
        idx_a = np.arange(len(idx_b))
        starts = pts[idx_a]
        vectors = pts[idx_b] - starts
        lengths = np.hypot(vectors[:, 0], vectors[:, 1])
        cumulative = np.r_[0.0, np.cumsum(lengths)[:-1]]
        return starts, vectors, lengths, cumulative, np.stack([idx_a, idx_b], axis=1)

    @property
    def length(self) -> float:
        _, _, lengths, _, _ = self._segments
        return float(lengths.sum())

    @property
    def is_bounded(self) -> bool:
        return bool(np.all(np.isfinite(self.half_width)))

    def project(self, x: float, y: float) -> TrackProjection:
        """Closest point on the centerline; lateral offset is positive to the left."""
        starts, vectors, lengths, cumulative, ends = self._segments
        rel = np.array([x, y]) - starts
        t = np.clip(np.einsum("ij,ij->i", rel, vectors) / (lengths * lengths), 0.0, 1.0)
        closest = starts + t[:, None] * vectors
        offsets = np.array([x, y]) - closest
        dist = np.hypot(offsets[:, 0], offsets[:, 1])
        i = int(np.argmin(dist))
        cross = vectors[i, 0] * rel[i, 1] - vectors[i, 1] * rel[i, 0]
        hw_a, hw_b = self.half_width[ends[i, 0]], self.half_width[ends[i, 1]]
        half_width = hw_a if hw_a == hw_b else hw_a + t[i] * (hw_b - hw_a)
        return TrackProjection(
            arc_length=float(cumulative[i] + t[i] * lengths[i]),
            lateral=float(math.copysign(dist[i], cross)),
            distance=float(dist[i]),
            half_width=float(half_width),
            segment=i,
        )

    def heading_at_start(self) -> float:
        _, vectors, _, _, _ = self._segments
        return math.atan2(vectors[0, 1], vectors[0, 0])

    def start_state(self, speed: float = 0.0) -> VehicleState:
        """At the first centerline point, facing along the track."""
        x0, y0 = self.centerline[0]
        return VehicleState(x=float(x0), y=float(y0), yaw=self.heading_at_start(), v_x=float(speed))

    # -- boundaries -------------------------------------------------------

    def _normals(self) -> np.ndarray:
        pts = self.centerline
        if self.closed:
            tangents = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
        else:
            tangents = np.gradient(pts, axis=0)
        tangents /= np.hypot(tangents[:, 0], tangents[:, 1])[:, None]
        return np.stack([-tangents[:, 1], tangents[:, 0]], axis=1)

    def boundary_polylines(self, extra: float = 0.0) -> list[np.ndarray]:
        """Left and right boundaries offset outward by ``extra`` beyond the edge."""
        if not self.is_bounded:
            return []
        normals = self._normals()
        offset = (self.half_width + extra)[:, None] * normals
        return [self.centerline + offset, self.centerline - offset]

    def boundary_points(self) -> np.ndarray:
        """(P, 2) boundary samples, including the curb band, cached."""
        if "boundary" not in self._cache:
            if not self.is_bounded:
                pts = np.zeros((0, 2))
            else:
                bands = max(1, int(math.ceil(self.curb_width / BOUNDARY_SPACING)) + 1)
                extras = np.linspace(0.0, self.curb_width, bands) if self.curb_width > 0 else [0.0]
                pieces = [
                    _resample_polyline(line, self.closed)
                    for extra in extras
                    for line in self.boundary_polylines(float(extra))
                ]
                pts = np.vstack(pieces)
            pts.setflags(write=False)
            self._cache["boundary"] = pts
        return self._cache["boundary"]

    # -- derived worlds ---------------------------------------------------

    def reversed(self) -> "TrackWorld":
        """Same corridor driven the other way, keeping the start point of closed tracks."""
        if self.closed:
            order = np.r_[0, np.arange(len(self.centerline) - 1, 0, -1)]
        else:
            order = np.arange(len(self.centerline) - 1, -1, -1)
        return TrackWorld(
            self.centerline[order], self.half_width[order], self.closed, f"{self.name}-reversed", self.curb_width
        )

    def mirrored(self) -> "TrackWorld":
        """Mirror image across the x-axis."""
        flipped = self.centerline * np.array([1.0, -1.0])
        return TrackWorld(flipped, self.half_width, self.closed, f"{self.name}-mirrored", self.curb_width)

    def with_name(self, name: Optional[str]) -> "TrackWorld":
        if not name:
            return self
        return TrackWorld(self.centerline, self.half_width, self.closed, name, self.curb_width)


def crash_check(state: VehicleState, world: TrackWorld) -> bool:
    """True iff the planar position is outside the corridor; the edge itself is inside."""
    if not (math.isfinite(state.x) and math.isfinite(state.y)):
        return True
    proj = world.project(state.x, state.y)
    return proj.distance > proj.half_width


class ProgressTracker:
    """Signed arc-length progress along the centerline, wrap-aware on closed tracks."""

    def __init__(self, world: TrackWorld, start: VehicleState):
        self.world = world
        self.length = world.length
        self.last_s = world.project(start.x, start.y).arc_length
        self.progress = 0.0

    def update(self, state: VehicleState) -> float:
        s = self.world.project(state.x, state.y).arc_length
        ds = s - self.last_s
        if self.world.closed:
            if ds > self.length / 2:
                ds -= self.length
            elif ds < -self.length / 2:
                ds += self.length
        self.progress += ds
        self.last_s = s
        return self.progress

    @property
    def laps(self) -> float:
        return max(self.progress, 0.0) / self.length

    def finished_open(self, margin: float) -> bool:
        return not self.world.closed and self.last_s >= self.length - margin
