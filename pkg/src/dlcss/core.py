"""Two-phase nearest-segment route matching and the similarity score built on it.

Given a vehicle route A and a requested route R, the matcher first assigns
every request point to its closest vehicle point, then walks the vehicle
route once, greedily picking for each vehicle point the shortest assigned
segment that does not step backwards along R. The surviving closed line
segments describe where and how tightly the two routes overlap, and they
aggregate into a single score: lower is better, 0 means R hugs A exactly.

The score is directional: A is the vehicle, R the request. Swapping the
arguments generally changes the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import geo
from .errors import DomainError
from .geo import Route

#: Sentinel score for pairs whose matched span has zero length (a single
#: matched point). Compares greater than every finite score.
NO_OVERLAP = math.inf


@dataclass(frozen=True)
class DlcssSegment:
    """One closed line segment linking vehicle point ``a_index`` to request point ``r_index``."""

    distance_m: float
    a_index: int
    r_index: int


@dataclass
class DistanceMatrix:
    """Sparse result of the per-request-point nearest assignment.

    Conceptually an I x J matrix with exactly one set cell per column j,
    at row ``min_row[j]`` with value ``min_dist[j]``; every other cell is
    unset. Only the J set cells are stored.
    """

    rows: int
    cols: int
    min_row: np.ndarray  # shape (J,), argmin vehicle index per request point
    min_dist: np.ndarray  # shape (J,), the minimised distance in metres

    def cell(self, i: int, j: int) -> float | None:
        """Value at (i, j), or None where the matrix is unset."""
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise DomainError(f"cell ({i}, {j}) outside {self.rows}x{self.cols} matrix")
        if int(self.min_row[j]) == i:
            return float(self.min_dist[j])
        return None

    def set_cells(self) -> Iterator[tuple[int, int, float]]:
        """Yield (i, j, distance) for every set cell, in column order."""
        for j in range(self.cols):
            yield int(self.min_row[j]), j, float(self.min_dist[j])


@dataclass(frozen=True)
class DlcssResult:
    """Full output of one route comparison."""

    segments: tuple[DlcssSegment, ...]
    sum_segments_m: float
    l_sub_a_m: float
    l_a_m: float
    sm: float  # NO_OVERLAP when the matched span is a single point


def nearest_assignment(a: Route, r: Route) -> DistanceMatrix:
    """Phase one: map every request point to its closest vehicle point.

    Ties go to the smallest vehicle index. Evaluates exactly
    ``len(a) * len(r)`` point distances.
    """
    d = geo.pairwise_distances_m(a, r)
    rows = np.argmin(d, axis=0)  # first occurrence wins, i.e. smallest i
    dists = d[rows, np.arange(d.shape[1])]
    return DistanceMatrix(rows=d.shape[0], cols=d.shape[1], min_row=rows, min_dist=dists)


def select_segments(dm: DistanceMatrix) -> list[DlcssSegment]:
    """Phase two: walk the vehicle route once, keeping temporal order along R.

    For each vehicle point i in order, the candidates are the set cells of
    row i at request indices j >= the cursor. The cursor starts at 0 and
    moves to the chosen j (inclusive, so the same request point may anchor
    segments of consecutive vehicle points). The shortest candidate wins,
    ties going to the smallest j; rows with no candidate are skipped.
    """
    cols_by_row: dict[int, list[int]] = {}
    for j in range(dm.cols):
        cols_by_row.setdefault(int(dm.min_row[j]), []).append(j)

    segments: list[DlcssSegment] = []
    start_j = 0
    for i in range(dm.rows):
        best_d = math.inf
        best_j = -1
        for j in cols_by_row.get(i, ()):
            if j < start_j:
                continue
            d = float(dm.min_dist[j])
            if d < best_d:  # strict: first (smallest) j kept on ties
                best_d, best_j = d, j
        if best_j < 0:
            continue
        segments.append(DlcssSegment(distance_m=best_d, a_index=i, r_index=best_j))
        start_j = best_j
    return segments


def similarity_metric(segments: Sequence[DlcssSegment], a: Route) -> float:
    """Score a segment list: (full length / matched span length) * segment sum.

    The matched span is the stretch of A between the first and last matched
    vehicle points. A longer overlap shrinks the penalty factor towards 1;
    large point-to-point distances grow the sum. Returns NO_OVERLAP when the
    span has zero length and the ratio is undefined.
    """
    if not segments:
        raise DomainError("cannot score an empty segment list")
    l_sub_a = geo.arc_length_between(a, segments[0].a_index, segments[-1].a_index)
    if l_sub_a == 0.0:
        return NO_OVERLAP
    l_a = geo.route_length(a)
    return (l_a / l_sub_a) * sum(s.distance_m for s in segments)


def compute_dlcss(a: Route, r: Route) -> DlcssResult:
    """Run both phases and the score for a (vehicle, request) route pair."""
    dm = nearest_assignment(a, r)
    segments = select_segments(dm)
    sum_ls = sum(s.distance_m for s in segments)
    l_a = geo.route_length(a)
    l_sub_a = geo.arc_length_between(a, segments[0].a_index, segments[-1].a_index)
    sm = similarity_metric(segments, a)
    return DlcssResult(
        segments=tuple(segments),
        sum_segments_m=sum_ls,
        l_sub_a_m=l_sub_a,
        l_a_m=l_a,
        sm=sm,
    )


def metric_sweep(
    overlap_fractions: Sequence[float], segment_sums: Sequence[float]
) -> np.ndarray:
    """Score grid over overlap fractions (rows) and segment sums (columns).

    Evaluates sum / fraction for every combination; useful for plotting how
    the score behaves across its two degrees of freedom.
    """
    fracs = np.asarray(overlap_fractions, dtype=np.float64)
    sums = np.asarray(segment_sums, dtype=np.float64)
    if fracs.ndim != 1 or sums.ndim != 1:
        raise DomainError("overlap_fractions and segment_sums must be 1-dimensional")
    if np.any(fracs <= 0.0) or np.any(fracs > 1.0):
        raise DomainError("overlap fractions must lie in (0, 1]")
    if np.any(sums < 0.0):
        raise DomainError("segment sums must be non-negative")
    return sums[None, :] / fracs[:, None]
