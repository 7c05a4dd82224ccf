"""Threshold filtering of route pools: which pairs merit a real routing check.

Scoring every ordered (vehicle, request) pair is cheap; the expensive
routing-based verification only needs to run for pairs that survive the
threshold. The default threshold is deliberately cautious so that genuine
matches are not filtered away.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .core import compute_dlcss
from .errors import DomainError
from .geo import Route

DEFAULT_THRESHOLD_M = 20_000.0


@dataclass(frozen=True)
class MatchDecision:
    """Outcome of scoring one ordered (vehicle, request) pair against a threshold."""

    a_id: str
    r_id: str
    sm: float  # NO_OVERLAP (inf) when the pair has no usable overlap
    threshold: float
    accepted: bool


def score_pair(a: Route, r: Route) -> float:
    """Similarity score with ``a`` as the vehicle and ``r`` as the request."""
    return compute_dlcss(a, r).sm


def _decide(a: Route, r: Route, threshold: float) -> MatchDecision:
    sm = score_pair(a, r)
    return MatchDecision(
        a_id=a.id,
        r_id=r.id,
        sm=sm,
        threshold=threshold,
        accepted=math.isfinite(sm) and sm <= threshold,
    )


def _score_chunk(pairs: list[tuple[Route, Route, float]]) -> list[MatchDecision]:
    return [_decide(a, r, t) for a, r, t in pairs]


def filter_pool(
    vehicle_routes: Sequence[Route],
    request_routes: Sequence[Route],
    threshold: float = DEFAULT_THRESHOLD_M,
    jobs: int = 1,
) -> list[MatchDecision]:
    """Score every ordered (vehicle, request) pair against the threshold.

    Output is sorted by (a_id, r_id) and is identical for any ``jobs`` value;
    with jobs > 1 the scoring is spread over worker processes. A zero
    threshold accepts only exact-zero scores.
    """
    if threshold < 0.0:
        raise DomainError(f"threshold must be non-negative, got {threshold}")
    if jobs < 1:
        raise DomainError(f"jobs must be >= 1, got {jobs}")
    vehicles = sorted(vehicle_routes, key=lambda x: x.id)
    requests = sorted(request_routes, key=lambda x: x.id)
    pairs = [(a, r, threshold) for a in vehicles for r in requests]
    if jobs == 1 or len(pairs) < 2 * jobs:
        return _score_chunk(pairs)
    chunks = [pairs[k::jobs] for k in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        scored = list(pool.map(_score_chunk, chunks))
    # re-interleave: chunk k holds pairs k, k+jobs, k+2*jobs, ...
    out: list[MatchDecision] = [None] * len(pairs)  # type: ignore[list-item]
    for k, chunk in enumerate(scored):
        out[k :: jobs] = chunk
    return out


def rank_candidates(
    request: Route,
    vehicle_routes: Sequence[Route],
    k: int,
    threshold: float = DEFAULT_THRESHOLD_M,
) -> list[MatchDecision]:
    """The k best vehicles for one request, ascending by score.

    Pairs without any usable overlap never rank; fewer than k decisions come
    back when the pool is small or mostly disjoint. Ties break on vehicle id.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    decisions = [_decide(a, request, threshold) for a in vehicle_routes]
    finite = [d for d in decisions if math.isfinite(d.sm)]
    finite.sort(key=lambda d: (d.sm, d.a_id))
    return finite[:k]
