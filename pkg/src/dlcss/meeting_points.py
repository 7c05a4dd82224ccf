"""Meeting-point search for pairs whose direct similarity is above threshold.

When a request scores too high against a vehicle route, a nearby pickup
point can still make the pair viable: the request is rerouted to start at
the meeting point and scored again. Route construction is delegated to an
injected provider so the grid router, a straight-line fallback, or a real
routing engine can all serve.
"""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import matching
from .errors import DomainError, ParseError
from .geo import Coordinate, Route

logger = logging.getLogger(__name__)

RouteProvider = Callable[[Coordinate, Coordinate], Route]


@dataclass(frozen=True)
class MeetingPoint:
    id: str
    location: Coordinate
    label: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise DomainError("meeting point id must be non-empty")


@dataclass(frozen=True)
class MeetingMatch:
    """Best candidate found: the request rerouted through a meeting point."""

    meeting_point_id: str
    rerouted_request: Route
    sm: float


def evaluate_meeting_points(
    a: Route,
    r: Route,
    candidates: list[MeetingPoint],
    route_provider: RouteProvider,
    threshold_m: float = matching.DEFAULT_THRESHOLD_M,
    parallel: bool = False,
) -> MeetingMatch | None:
    """Score the request rerouted through each candidate pickup point.

    Each candidate's trial route runs from the meeting point to the
    request's original destination. Returns the candidate with the lowest
    similarity score if that score is within the threshold, otherwise None.
    Ties break on the smallest candidate id. A route provider failure skips
    the candidate (logged), it does not abort the search.
    """
    if threshold_m <= 0.0:
        raise DomainError(f"threshold must be positive, got {threshold_m}")
    destination = r.points[-1]

    def trial(m: MeetingPoint) -> MeetingMatch | None:
        try:
            rerouted = route_provider(m.location, destination)
        except Exception as exc:
            logger.warning("meeting point %s skipped: %s", m.id, exc)
            return None
        return MeetingMatch(
            meeting_point_id=m.id,
            rerouted_request=rerouted,
            sm=matching.score_pair(a, rerouted),
        )

    if parallel and len(candidates) > 1:
        with ThreadPoolExecutor() as pool:
            scored = list(pool.map(trial, candidates))
    else:
        scored = [trial(m) for m in candidates]

    best: MeetingMatch | None = None
    for match in scored:
        if match is None:
            continue
        if best is None or (match.sm, match.meeting_point_id) < (best.sm, best.meeting_point_id):
            best = match
    if best is None or not (math.isfinite(best.sm) and best.sm <= threshold_m):
        return None
    return best


def load_meeting_points(source: str | Path) -> list[MeetingPoint]:
    """Read meeting points from a CSV with header ``id,lat,lon,label``.

    ``label`` may be empty. Raises ParseError naming the offending row on
    duplicate ids, malformed rows, or invalid coordinates.
    """
    path = Path(source)
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames
        if fields is None or not {"id", "lat", "lon"}.issubset(fields):
            raise ParseError(f"{path}: header must contain id,lat,lon[,label]")
        points: list[MeetingPoint] = []
        seen: set[str] = set()
        for row_no, row in enumerate(reader, start=2):
            pid = (row.get("id") or "").strip()
            if not pid:
                raise ParseError(f"{path} row {row_no}: missing id")
            if pid in seen:
                raise ParseError(f"{path} row {row_no}: duplicate id {pid!r}")
            try:
                location = Coordinate(float(row["lat"]), float(row["lon"]))
            except (DomainError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{path} row {row_no}: {exc}") from exc
            label = (row.get("label") or "").strip() or None
            points.append(MeetingPoint(id=pid, location=location, label=label))
            seen.add(pid)
    return points
