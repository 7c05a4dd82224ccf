"""Evaluation harness: score all pairs, label with the oracle, report rates.

The pipeline mirrors a filter-then-verify matcher study: the cheap
similarity metric decides accept/reject, the grid routing oracle provides
the ground-truth compatible/incompatible label, and the report collects the
confusion matrix, the rejection rate, and the precision among accepted
pairs.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import matching, routing
from .errors import DomainError, ParseError
from .matching import DEFAULT_THRESHOLD_M
from .pools import RoutePool
from .routing import GridGraph

REPORT_FORMATS = ("json", "csv", "plot-data")

_REPORT_FIELDS = (
    "n_pairs",
    "threshold_m",
    "true_positives",
    "false_positives",
    "true_negatives",
    "false_negatives",
    "rejection_rate",
    "tp_rate_among_accepted",
)


@dataclass(frozen=True)
class PairOutcome:
    """One ordered (vehicle, request) pair: metric verdict vs ground truth."""

    a_id: str
    r_id: str
    sm: float
    detour_fraction: float
    accepted: bool
    compatible: bool


@dataclass
class EvalReport:
    """Confusion matrix and rates for one evaluation run.

    ``runtime_ms`` and ``pairs`` are diagnostics: excluded from equality and
    from the serialized JSON so that reruns with identical inputs produce
    byte-identical reports.
    """

    n_pairs: int
    threshold_m: float
    true_positives: int
    false_positives: int
    true_negatives: int
    false_negatives: int
    rejection_rate: float
    tp_rate_among_accepted: float
    runtime_ms: dict = field(default_factory=dict, compare=False)
    pairs: list[PairOutcome] = field(default_factory=list, compare=False, repr=False)


def _ordered_pairs(pool: RoutePool):
    routes = sorted(pool.routes, key=lambda r: r.id)
    for a in routes:
        for r in routes:
            if a.id != r.id:
                yield a, r


def calibrate_threshold(
    pool: RoutePool, g: GridGraph, default_m: float = DEFAULT_THRESHOLD_M
) -> float:
    """Smallest threshold with zero false negatives on this pool.

    That is the maximum finite sm over all oracle-compatible ordered pairs.
    Falls back to ``default_m`` when no pair is compatible (or every
    compatible pair has no overlap at all).
    """
    if len(pool.routes) < 2:
        raise DomainError("calibration needs a pool with at least 2 routes")
    best: float | None = None
    for a, r in _ordered_pairs(pool):
        if not routing.assess_shared_ride(g, a, r).compatible:
            continue
        sm = matching.score_pair(a, r)
        if math.isfinite(sm) and (best is None or sm > best):
            best = sm
    return default_m if best is None else best


def run_eval(pool: RoutePool, g: GridGraph, threshold_m: float) -> EvalReport:
    """Score every ordered pair (a != r), label with the oracle, aggregate.

    A zero threshold is legal (it accepts only exact-zero scores); a
    duplicate-heavy pool calibrates to exactly that.
    """
    if threshold_m < 0.0:
        raise DomainError(f"threshold_m must be non-negative, got {threshold_m}")
    pairs = list(_ordered_pairs(pool))

    t0 = time.perf_counter()
    sms = [matching.score_pair(a, r) for a, r in pairs]
    t1 = time.perf_counter()
    verdicts = [routing.assess_shared_ride(g, a, r) for a, r in pairs]
    t2 = time.perf_counter()

    outcomes = [
        PairOutcome(
            a_id=a.id,
            r_id=r.id,
            sm=sm,
            detour_fraction=verdict.detour_fraction,
            accepted=math.isfinite(sm) and sm <= threshold_m,
            compatible=verdict.compatible,
        )
        for (a, r), sm, verdict in zip(pairs, sms, verdicts)
    ]
    runtime_ms = {
        "scoring_ms": (t1 - t0) * 1e3,
        "labeling_ms": (t2 - t1) * 1e3,
        "total_ms": (t2 - t0) * 1e3,
    }
    return _aggregate(outcomes, threshold_m, runtime_ms)


def _aggregate(outcomes: list[PairOutcome], threshold_m: float, runtime_ms: dict) -> EvalReport:
    tp = sum(1 for o in outcomes if o.accepted and o.compatible)
    fp = sum(1 for o in outcomes if o.accepted and not o.compatible)
    tn = sum(1 for o in outcomes if not o.accepted and not o.compatible)
    fn = sum(1 for o in outcomes if not o.accepted and o.compatible)
    n = len(outcomes)
    return EvalReport(
        n_pairs=n,
        threshold_m=threshold_m,
        true_positives=tp,
        false_positives=fp,
        true_negatives=tn,
        false_negatives=fn,
        rejection_rate=(tn + fn) / n if n else 0.0,
        tp_rate_among_accepted=tp / (tp + fp) if tp + fp else 0.0,
        runtime_ms=runtime_ms,
        pairs=outcomes,
    )


def cross_validated_eval(
    pool: RoutePool,
    g: GridGraph,
    folds: int = 5,
    seed: int = 0,
    default_m: float = DEFAULT_THRESHOLD_M,
) -> EvalReport:
    """Generalization check: calibrate on k-1 folds, evaluate the held-out fold.

    Routes are partitioned into ``folds`` seeded random folds; each fold's
    ordered pairs are judged with the threshold calibrated on the remaining
    routes. Counts aggregate across folds; the reported threshold_m is the
    maximum fold threshold (the conservative choice a deployment would ship).
    """
    routes = sorted(pool.routes, key=lambda r: r.id)
    if folds < 2 or folds > len(routes) // 2:
        raise DomainError(f"folds must be in [2, n_routes/2], got {folds}")
    order = list(range(len(routes)))
    random.Random(seed).shuffle(order)
    fold_of = {routes[idx].id: i % folds for i, idx in enumerate(order)}

    outcomes: list[PairOutcome] = []
    thresholds: list[float] = []
    for f in range(folds):
        train = [r for r in routes if fold_of[r.id] != f]
        held = [r for r in routes if fold_of[r.id] == f]
        if len(held) < 2:
            continue
        thr = calibrate_threshold(RoutePool(routes=train), g, default_m)
        thresholds.append(thr)
        fold_report = run_eval(RoutePool(routes=held), g, thr)
        outcomes.extend(fold_report.pairs)
    if not thresholds:
        raise DomainError("cross-validation produced no usable folds")
    return _aggregate(outcomes, max(thresholds), runtime_ms={})


def report_to_json_dict(report: EvalReport) -> dict:
    return {name: getattr(report, name) for name in _REPORT_FIELDS}


def emit_report(report: EvalReport, fmt: str, path: str | Path) -> None:
    """Write the report as ``json``, ``csv``, or ``plot-data``.

    plot-data emits one ``sm,detour_fraction`` row per evaluated pair for
    correlation scatter plots, no header (row count equals n_pairs).
    """
    if fmt not in REPORT_FORMATS:
        raise DomainError(f"unknown report format {fmt!r}, expected one of {REPORT_FORMATS}")
    path = Path(path)
    if fmt == "json":
        doc = report_to_json_dict(report)
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    elif fmt == "csv":
        header = ",".join(_REPORT_FIELDS)
        row = ",".join(repr(getattr(report, name)) for name in _REPORT_FIELDS)
        path.write_text(header + "\n" + row + "\n", encoding="utf-8")
    else:
        lines = [f"{o.sm!r},{o.detour_fraction!r}" for o in report.pairs]
        path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_report(path: str | Path) -> EvalReport:
    """Read a JSON report written by emit_report; diagnostics come back empty."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object")
    try:
        kwargs = {name: doc[name] for name in _REPORT_FIELDS}
    except KeyError as exc:
        raise ParseError(f"{path}: missing report field {exc}") from exc
    return EvalReport(**kwargs)
