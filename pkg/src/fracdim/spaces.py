"""Finite spaces the estimators work on.

Point-cloud and self-similar network generators, Euclidean and
shortest-path metrics, neighbourhoods, and seeded subsampling. All types
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial.distance import pdist, squareform

from .errors import ResourceLimitError

TRIANGLE_LEVEL_CAP = 12
CANTOR_LEVEL_CAP = 20
TRIANGLE_INEQ_TOL = 1e-9

_EQUILATERAL = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])


@dataclass(frozen=True)
class PointCloud:
    """Finite set of points in D-dimensional Euclidean space."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError("points must be a 2-d array of shape (n, dim)")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("need at least one point with at least one coordinate")
        if not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __eq__(self, other):
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.all(self.points == other.points)
        )


@dataclass(frozen=True)
class WeightedNetwork:
    """Undirected network with positive edge weights.

    Edges are stored as (u, v, w) with u < v, sorted; duplicates and
    self-loops are rejected.
    """

    node_count: int
    edges: tuple

    def __post_init__(self):
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        norm = []
        seen = set()
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u},{v}) outside node range")
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"edge ({u},{v}) has non-positive weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append((key[0], key[1], w))
        norm.sort()
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list:
        """Adjacency lists [(neighbour, weight), ...] per node."""
        adj = [[] for _ in range(self.node_count)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def min_weight(self) -> float:
        if not self.edges:
            raise ValueError("network has no edges")
        return min(w for _, _, w in self.edges)


@dataclass(frozen=True)
class MetricView:
    """Symmetric distance matrix over a finite index set.

    `dist` holds the actual distances (inf allowed for disconnected
    pairs); `scale` records the cumulative rescaling factor applied so
    errors can name the scale they occurred at.
    """

    dist: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("dist must be a square matrix")
        if d.size and not np.all(np.diag(d) == 0.0):
            raise ValueError("diagonal must be zero")
        if not np.array_equal(d, d.T):
            raise ValueError("dist must be symmetric")
        with np.errstate(invalid="ignore"):
            if np.any(np.isnan(d)) or np.any(d < 0):
                raise ValueError("distances must be non-negative and not NaN")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        d = np.ascontiguousarray(d)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def size(self) -> int:
        return self.dist.shape[0]

    def validate_triangle(self, tol: float = TRIANGLE_INEQ_TOL) -> None:
        """Check the triangle inequality on finite entries (O(n^3))."""
        d = self.dist
        for k in range(self.size):
            via = d[:, k : k + 1] + d[k : k + 1, :]
            if np.any(d > via + tol):
                i, j = np.argwhere(d > via + tol)[0]
                raise ValueError(
                    f"triangle inequality violated: d[{i},{j}]={d[i, j]} "
                    f"> d[{i},{k}]+d[{k},{j}]={via[i, j]}"
                )


@dataclass(frozen=True)
class SierpinskiTreeParams:
    """Parameters of the copy-scale-join tree recursion.

    `s` copies per level, existing weights scaled by `f`, a fresh hub
    joined to every copy's anchor by a weight-1 edge. The fresh hub of
    each level becomes the anchor of the next ("fresh" policy; the only
    one supported).
    """

    s: int = 3
    f: float = 0.5
    levels: int = 0
    anchor: str = "fresh"

    def __post_init__(self):
        if self.s <= 1:
            raise ValueError("s must be an integer > 1")
        if not (0.0 < self.f < 1.0):
            raise ValueError("f must lie in (0, 1)")
        if self.levels < 0:
            raise ValueError("levels must be non-negative")
        if self.anchor != "fresh":
            raise ValueError("only the 'fresh' anchor policy is supported")


def sierpinski_triangle(level: int) -> PointCloud:
    """IFS-orbit approximation of the Sierpinski triangle.

    Returns the 3^level images of the unit equilateral triangle's
    centroid under all level-fold compositions of the three half-scale
    corner contractions. Deterministic point order.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    if level > TRIANGLE_LEVEL_CAP:
        raise ResourceLimitError(
            f"level {level} exceeds cap {TRIANGLE_LEVEL_CAP} (3^level points)"
        )
    pts = _EQUILATERAL.mean(axis=0)[None, :]
    for _ in range(level):
        pts = np.concatenate([(pts + v) / 2.0 for v in _EQUILATERAL])
    return PointCloud(pts)


def cantor_set(level: int) -> PointCloud:
    """Left endpoints of the level-k middle-thirds construction (2^level points in R^1)."""
    if level < 0:
        raise ValueError("level must be non-negative")
    if level > CANTOR_LEVEL_CAP:
        raise ResourceLimitError(
            f"level {level} exceeds cap {CANTOR_LEVEL_CAP} (2^level points)"
        )
    pts = np.zeros(1)
    for _ in range(level):
        pts = np.concatenate([pts / 3.0, pts / 3.0 + 2.0 / 3.0])
    return PointCloud(pts[:, None])


def sierpinski_tree(params: SierpinskiTreeParams) -> WeightedNetwork:
    """Self-similar tree G_k: s rescaled copies of G_{k-1} joined to a fresh hub.

    Starts from the single-node network; after k levels the node count is
    s*n_{k-1} + 1 and the fresh hub (highest id) is the current anchor.
    """
    n = 1
    edges: list = []
    anchor = 0
    for _ in range(params.levels):
        new_edges = []
        for c in range(params.s):
            off = c * n
            new_edges.extend((u + off, v + off, w * params.f) for u, v, w in edges)
        hub = params.s * n
        for c in range(params.s):
            new_edges.append((anchor + c * n, hub, 1.0))
        edges = new_edges
        n = hub + 1
        anchor = hub
    return WeightedNetwork(n, tuple(edges))


def line_network(n: int) -> WeightedNetwork:
    """Path graph on n nodes, unit weights."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return WeightedNetwork(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))


def shortest_path_metric(net: WeightedNetwork) -> MetricView:
    """All-pairs shortest-path distances; inf between components."""
    n = net.node_count
    if n == 0:
        return MetricView(np.zeros((0, 0)))
    if not net.edges:
        d = np.full((n, n), np.inf)
        np.fill_diagonal(d, 0.0)
        return MetricView(d)
    u = np.fromiter((e[0] for e in net.edges), dtype=np.int64)
    v = np.fromiter((e[1] for e in net.edges), dtype=np.int64)
    w = np.fromiter((e[2] for e in net.edges), dtype=np.float64)
    graph = csr_matrix(
        (np.concatenate([w, w]), (np.concatenate([u, v]), np.concatenate([v, u]))),
        shape=(n, n),
    )
    d = dijkstra(graph, directed=False)
    # float summation order can differ between the i->j and j->i runs
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return MetricView(d)


def euclidean_metric(cloud: PointCloud) -> MetricView:
    """Pairwise Euclidean distances of a point cloud."""
    if cloud.n == 1:
        return MetricView(np.zeros((1, 1)))
    return MetricView(squareform(pdist(cloud.points)))


def rescale(metric: MetricView, t: float) -> MetricView:
    """Multiply every distance by t > 0; scale factors compose."""
    if not t > 0:
        raise ValueError("t must be positive")
    return MetricView(metric.dist * t, scale=metric.scale * t)


def diameter(metric: MetricView) -> float:
    """Largest distance; inf if any pair is disconnected."""
    if metric.size <= 1:
        return 0.0
    return float(np.max(metric.dist))


def epsilon_neighbourhood(metric: MetricView, x: int, eps: float) -> set:
    """Node ids at distance <= eps from x (always contains x)."""
    if not (0 <= x < metric.size):
        raise ValueError(f"node {x} outside metric of size {metric.size}")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return {int(i) for i in np.nonzero(metric.dist[x] <= eps)[0]}


def subsample(cloud: PointCloud, n: int, seed: int) -> PointCloud:
    """n distinct points drawn uniformly without replacement.

    Deterministic given (cloud, n, seed): indices come from a
    SeedSequence-seeded PCG64 generator and are sorted, so the full-size
    subsample returns the cloud in its original order.
    """
    if not (1 <= n <= cloud.n):
        raise ValueError(f"subsample size {n} outside [1, {cloud.n}]")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(cloud.n, size=n, replace=False))
    return PointCloud(cloud.points[idx])


def derive_seed(master: int, *parts: int) -> int:
    """Per-task seed from (master, task coordinates), stable across platforms."""
    ss = np.random.SeedSequence([int(master), *[int(p) for p in parts]])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
