"""Synthetic road grid with shortest-path routing and ground-truth detour checks.

A small 4-neighbour lattice stands in for a real road network: cheap to
build, deterministic, and exact. It answers the expensive question the
similarity filter tries to avoid: how long would the shared ride actually
be, and is the vehicle's detour acceptable?
"""

from __future__ import annotations

import heapq
import json
import math
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import geo
from .errors import DomainError, NoRouteError, ParseError
from .geo import Coordinate, Route

#: A shared ride is compatible while the vehicle's detour stays within half
#: of its original route length.
DETOUR_LIMIT_FRACTION = 0.5


@dataclass(frozen=True)
class OracleAssessment:
    """Ground-truth verdict for one shared-ride candidate pair."""

    detour_m: float
    detour_fraction: float
    compatible: bool
    diagnostic: str | None = None


class GridGraph:
    """Connected 4-neighbour lattice of road nodes with haversine edge weights.

    Node index is ``row * cols + col``, row 0 at the south-west ``origin``.
    Construction via :meth:`build` (seeded random edge removal) or
    :meth:`read_json` / :meth:`from_json_dict`.
    """

    def __init__(
        self,
        rows: int,
        cols: int,
        origin: Coordinate,
        spacing_m: float,
        edges: list[tuple[int, int]],
        removal_fraction: float = 0.0,
        seed: int = 0,
    ) -> None:
        if rows < 1 or cols < 1 or rows * cols < 2:
            raise DomainError(f"grid needs at least 2 nodes, got {rows}x{cols}")
        if spacing_m <= 0.0:
            raise DomainError(f"spacing_m must be positive, got {spacing_m}")
        self.rows = rows
        self.cols = cols
        self.origin = origin
        self.spacing_m = spacing_m
        self.removal_fraction = removal_fraction
        self.seed = seed
        self.dlat_deg = math.degrees(spacing_m / geo.EARTH_RADIUS_M)
        self.dlon_deg = math.degrees(
            spacing_m / (geo.EARTH_RADIUS_M * math.cos(math.radians(origin.lat)))
        )
        n = rows * cols
        r_idx, c_idx = np.divmod(np.arange(n), cols)
        self.node_lats = origin.lat + r_idx * self.dlat_deg
        self.node_lons = origin.lon + c_idx * self.dlon_deg
        # validates the far corner stays on the globe
        Coordinate(float(self.node_lats[-1]), float(self.node_lons[-1]))

        self.edges = sorted((u, v) if u < v else (v, u) for u, v in edges)
        self._adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise DomainError(f"edge ({u}, {v}) invalid for {n} nodes")
            w = geo.distance(self.node(u), self.node(v))
            self._adj[u].append((v, w))
            self._adj[v].append((u, w))
        for nbrs in self._adj:
            nbrs.sort()
        if not self._is_connected():
            raise DomainError("grid graph is not connected")
        self._source_dists: dict[int, np.ndarray] = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def build(
        cls,
        rows: int = 20,
        cols: int = 20,
        origin: Coordinate = Coordinate(50.75, 6.08),
        spacing_m: float = 250.0,
        removal_fraction: float = 0.10,
        seed: int = 0,
    ) -> "GridGraph":
        """Build the full lattice, then remove a seeded random sample of edges.

        Each removal is kept only if the graph stays connected, so the
        achieved removal count can fall short of the target on extreme
        fractions. Same seed, same parameters: identical edge set.
        """
        if not 0.0 <= removal_fraction < 1.0:
            raise DomainError(f"removal_fraction must be in [0, 1), got {removal_fraction}")
        edges = []
        for r in range(rows):
            for c in range(cols):
                u = r * cols + c
                if c + 1 < cols:
                    edges.append((u, u + 1))
                if r + 1 < rows:
                    edges.append((u, u + cols))
        g = cls(rows, cols, origin, spacing_m, edges, removal_fraction, seed)
        target = round(removal_fraction * len(edges))
        if target == 0:
            return g
        rng = random.Random(seed)
        candidates = list(g.edges)
        rng.shuffle(candidates)
        removed = 0
        keep = set(g.edges)
        for cand in candidates:
            if removed == target:
                break
            keep.discard(cand)
            if _connected_with(rows * cols, keep):
                removed += 1
            else:
                keep.add(cand)
        return cls(rows, cols, origin, spacing_m, sorted(keep), removal_fraction, seed)

    def _is_connected(self) -> bool:
        n = self.rows * self.cols
        seen = [False] * n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for v, _ in self._adj[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == n

    # -- geometry ----------------------------------------------------------

    def node(self, index: int) -> Coordinate:
        return Coordinate(float(self.node_lats[index]), float(self.node_lons[index]))

    @property
    def num_nodes(self) -> int:
        return self.rows * self.cols

    def snap(self, c: Coordinate) -> int:
        """Index of the nearest node; the coordinate must lie inside the grid bbox."""
        eps = 1e-9
        if not (self.node_lats[0] - eps <= c.lat <= self.node_lats[-1] + eps):
            raise DomainError(f"latitude {c.lat} outside grid bounding box")
        if not (self.node_lons[0] - eps <= c.lon <= self.node_lons[-1] + eps):
            raise DomainError(f"longitude {c.lon} outside grid bounding box")
        fr = (c.lat - self.origin.lat) / self.dlat_deg
        fc = (c.lon - self.origin.lon) / self.dlon_deg
        best: tuple[float, int] | None = None
        for r in {_clip(math.floor(fr), self.rows), _clip(math.ceil(fr), self.rows)}:
            for col in {_clip(math.floor(fc), self.cols), _clip(math.ceil(fc), self.cols)}:
                idx = r * self.cols + col
                d = geo.distance(c, self.node(idx))
                if best is None or (d, idx) < best:
                    best = (d, idx)
        assert best is not None
        return best[1]

    # -- shortest paths ----------------------------------------------------

    def source_distances(self, source: int) -> np.ndarray:
        """Exact shortest-path distance from ``source`` to every node (memoized)."""
        cached = self._source_dists.get(source)
        if cached is not None:
            return cached
        dist = np.full(self.num_nodes, np.inf)
        dist[source] = 0.0
        heap: list[tuple[float, int]] = [(0.0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w in self._adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        self._source_dists[source] = dist
        return dist

    def path_nodes(self, source: int, destination: int) -> list[int]:
        """Shortest path as node indices; equal-cost ties break on smallest index.

        The path is reconstructed from the converged distances alone: walking
        back from the destination, the predecessor is the smallest-index
        neighbour u with dist[u] + w(u, v) == dist[v]. This keeps the route a
        pure function of the distance field, independent of visit order.
        """
        dist = self.source_distances(source)
        if not math.isfinite(dist[destination]):
            raise NoRouteError(f"nodes {source} and {destination} are disconnected")
        path = [destination]
        v = destination
        while v != source:
            pred = -1
            for u, w in self._adj[v]:  # neighbours sorted ascending
                if dist[u] + w == dist[v]:
                    pred = u
                    break
            if pred < 0:  # cannot happen on a converged distance field
                raise NoRouteError(f"no predecessor for node {v}")
            path.append(pred)
            v = pred
        path.reverse()
        return path

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "origin": {"lat": self.origin.lat, "lon": self.origin.lon},
            "spacing_m": self.spacing_m,
            "removal_fraction": self.removal_fraction,
            "seed": self.seed,
            "nodes": [[float(la), float(lo)] for la, lo in zip(self.node_lats, self.node_lons)],
            "edges": [[u, v] for u, v in self.edges],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "GridGraph":
        try:
            g = cls(
                rows=int(doc["rows"]),
                cols=int(doc["cols"]),
                origin=Coordinate(float(doc["origin"]["lat"]), float(doc["origin"]["lon"])),
                spacing_m=float(doc["spacing_m"]),
                edges=[(int(u), int(v)) for u, v in doc["edges"]],
                removal_fraction=float(doc.get("removal_fraction", 0.0)),
                seed=int(doc.get("seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise ParseError(f"malformed grid graph document: {exc}") from exc
        stored = doc.get("nodes")
        if stored is not None:
            if len(stored) != g.num_nodes or any(
                float(la) != g.node_lats[i] or float(lo) != g.node_lons[i]
                for i, (la, lo) in enumerate(stored)
            ):
                raise ParseError("node list inconsistent with grid parameters")
        return g

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def read_json(cls, path: str | Path) -> "GridGraph":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_json_dict(doc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridGraph):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.origin == other.origin
            and self.spacing_m == other.spacing_m
            and self.seed == other.seed
            and self.removal_fraction == other.removal_fraction
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return (
            f"GridGraph(rows={self.rows}, cols={self.cols}, spacing_m={self.spacing_m}, "
            f"edges={len(self.edges)}, seed={self.seed})"
        )


def _clip(v: int, n: int) -> int:
    return max(0, min(n - 1, int(v)))


def _connected_with(n: int, edges: set[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == n


def shortest_route(g: GridGraph, origin: Coordinate, destination: Coordinate) -> Route:
    """Shortest grid path between the snapped endpoints, as a Route.

    Raises NoRouteError when both endpoints snap to the same node (a route
    needs two distinct points).
    """
    u = g.snap(origin)
    v = g.snap(destination)
    if u == v:
        raise NoRouteError(f"origin and destination snap to the same node {u}")
    nodes = g.path_nodes(u, v)
    return Route(id=f"sp-{u}-{v}", points=[g.node(i) for i in nodes])


def _leg_length(g: GridGraph, u: int, v: int) -> float:
    if u == v:
        return 0.0
    return float(g.source_distances(u)[v])


def assess_shared_ride(g: GridGraph, a: Route, r: Route) -> OracleAssessment:
    """Exact detour verdict for vehicle route ``a`` picking up request ``r``.

    The shared ride is A.start -> R.start -> R.end -> A.end, each leg a
    shortest path on the grid. Unroutable endpoints (outside the grid) give
    an incompatible verdict with a diagnostic instead of raising.
    """
    l_a = geo.route_length(a)
    try:
        a0 = g.snap(a.points[0])
        a1 = g.snap(a.points[-1])
        r0 = g.snap(r.points[0])
        r1 = g.snap(r.points[-1])
    except DomainError as exc:
        return OracleAssessment(
            detour_m=math.inf, detour_fraction=math.inf, compatible=False, diagnostic=str(exc)
        )
    shared = _leg_length(g, a0, r0) + _leg_length(g, r0, r1) + _leg_length(g, r1, a1)
    detour = max(0.0, shared - l_a)
    if l_a == 0.0:
        return OracleAssessment(
            detour_m=detour,
            detour_fraction=math.inf,
            compatible=False,
            diagnostic="vehicle route has zero length",
        )
    fraction = detour / l_a
    return OracleAssessment(
        detour_m=detour,
        detour_fraction=fraction,
        compatible=fraction <= DETOUR_LIMIT_FRACTION,
    )
