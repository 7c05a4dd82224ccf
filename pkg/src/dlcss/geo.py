"""Geographic primitives: coordinates, haversine distance, polyline lengths.

Bit-reproducibility note. Scoring pipelines compute distances two ways: one
point pair at a time, and as a full pairwise matrix. Those two paths must
agree to the last bit or threshold decisions become shape-dependent. numpy's
SIMD dispatch breaks that promise for transcendental ufuncs (the same input
can round differently in a vectorized loop than in a scalar call), so the
haversine here is restructured: per-point sines and cosines come from
math.sin / math.cos once per point, pairs are combined with IEEE-exact
multiplies and adds only (identical in every lane), and the single remaining
transcendental, arcsin, goes through np.arcsin in both the scalar and the
matrix path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

EARTH_RADIUS_M = 6_371_000.0

_EARTH_DIAMETER_M = 2.0 * EARTH_RADIUS_M


@dataclass(frozen=True)
class Coordinate:
    """A WGS-style point; lon must be pre-normalized to [-180, 180]."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and -90.0 <= self.lat <= 90.0):
            raise DomainError(f"latitude {self.lat} outside [-90, 90]")
        if not (math.isfinite(self.lon) and -180.0 <= self.lon <= 180.0):
            raise DomainError(f"longitude {self.lon} outside [-180, 180]")


def _point_trig(lat: float, lon: float) -> tuple[float, float, float, float]:
    phi = math.radians(lat)
    lam = math.radians(lon)
    return math.sin(phi), math.cos(phi), math.sin(lam), math.cos(lam)


def _haversine_h(sphi1, cphi1, slam1, clam1, sphi2, cphi2, slam2, clam2):
    """hav(central angle) from per-point trig; scalars and arrays alike.

    hav(d) = hav(dphi) + cos(phi1) cos(phi2) hav(dlam), with the angle
    differences expanded into products of per-point terms so that only
    IEEE-exact operations touch pair-dependent values. Both the scalar and
    the matrix distance path run this exact expression, in this exact order.
    """
    cc = cphi1 * cphi2
    cos_dphi = cc + sphi1 * sphi2
    cos_dlam = clam1 * clam2 + slam1 * slam2
    return 0.5 * (1.0 - cos_dphi) + cc * (0.5 * (1.0 - cos_dlam))


@dataclass(frozen=True)
class Route:
    """An ordered polyline with identity; point order encodes travel direction."""

    id: str
    points: tuple[Coordinate, ...]

    def __init__(self, id: str, points) -> None:
        pts = tuple(points)
        if len(pts) < 2:
            raise DomainError(f"route {id!r} needs at least 2 points, got {len(pts)}")
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "points", pts)

    @cached_property
    def lats(self) -> np.ndarray:
        return np.array([p.lat for p in self.points])

    @cached_property
    def lons(self) -> np.ndarray:
        return np.array([p.lon for p in self.points])

    @cached_property
    def trig(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Per-point (sin phi, cos phi, sin lam, cos lam) as float64 arrays."""
        rows = [_point_trig(p.lat, p.lon) for p in self.points]
        sphi, cphi, slam, clam = zip(*rows)
        return np.array(sphi), np.array(cphi), np.array(slam), np.array(clam)

    @cached_property
    def leg_lengths_m(self) -> tuple[float, ...]:
        return tuple(
            distance(self.points[k], self.points[k + 1])
            for k in range(len(self.points) - 1)
        )


def distance(a: Coordinate, b: Coordinate) -> float:
    """Great-circle distance in meters on a sphere of radius 6,371,000 m."""
    if a.lat == b.lat and a.lon == b.lon:
        return 0.0
    h = _haversine_h(*_point_trig(a.lat, a.lon), *_point_trig(b.lat, b.lon))
    h = min(max(h, 0.0), 1.0)
    return float(_EARTH_DIAMETER_M * np.arcsin(math.sqrt(h)))


def pairwise_distances_m(a: Route, b: Route) -> np.ndarray:
    """Matrix of distance(a.points[i], b.points[j]), bit-equal to scalar calls."""
    sphi1, cphi1, slam1, clam1 = (v[:, None] for v in a.trig)
    sphi2, cphi2, slam2, clam2 = (v[None, :] for v in b.trig)
    h = _haversine_h(sphi1, cphi1, slam1, clam1, sphi2, cphi2, slam2, clam2)
    np.clip(h, 0.0, 1.0, out=h)
    d = _EARTH_DIAMETER_M * np.arcsin(np.sqrt(h))
    same = (a.lats[:, None] == b.lats[None, :]) & (a.lons[:, None] == b.lons[None, :])
    if same.any():
        d[same] = 0.0
    return d


def route_length(r: Route) -> float:
    """Polyline length: sum of consecutive-point distances, in meters."""
    return sum(r.leg_lengths_m, 0.0)


def arc_length_between(r: Route, i: int, j: int) -> float:
    """Polyline length from point i to point j along the route."""
    n = len(r.points)
    if not (0 <= i <= j < n):
        raise DomainError(f"invalid arc span [{i}, {j}] for {n} points")
    return sum(r.leg_lengths_m[i:j], 0.0)
