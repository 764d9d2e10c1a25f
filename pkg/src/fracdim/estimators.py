"""Dimension estimators.

Every definitional limit (eps -> 0, n -> infinity, t -> infinity) is
realised as a windowed least-squares fit on log-log samples; estimates
carry their fit diagnostics and the full parameter record needed to
reproduce the run.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInputError,
    SingularSimilarityError,
    UndefinedDimensionError,
)
from .filtration import alpha_complex_2d, vietoris_rips, weight_rank_clique
from .magnitude import magnitude_function, persistent_magnitude, rescale_barcode
from .parallel import parallel_map
from .persistence import h0_union_find, persistence
from .spaces import (
    MetricView,
    PointCloud,
    WeightedNetwork,
    derive_seed,
    diameter,
    euclidean_metric,
    shortest_path_metric,
    subsample,
)

R2_WARN_THRESHOLD = 0.9


@dataclass(frozen=True)
class LogLogFit:
    """Least-squares line through log-transformed samples over a window."""

    xs: tuple  # log-transformed
    ys: tuple
    window: tuple  # half-open index range [lo, hi)
    slope: float
    intercept: float
    r2: float


@dataclass(frozen=True)
class DimensionEstimate:
    estimator: str
    value: float
    fit: LogLogFit
    points: tuple  # raw (x, y) samples, pre-log
    params: dict
    warnings: tuple = ()

    def to_json_dict(self) -> dict:
        window = self.params.get("window", list(self.fit.window))
        return {
            "estimator": self.estimator,
            "value": self.value,
            "slope": self.fit.slope,
            "intercept": self.fit.intercept,
            "r2": self.fit.r2,
            "window": list(window),
            "points": [list(p) for p in self.points],
            "params": dict(self.params),
            "warnings": list(self.warnings),
            "seed": self.params.get("seed"),
        }


def loglog_fit(xs, ys, window=None) -> LogLogFit:
    """Ordinary least squares on (log xs, log ys) over a half-open index window."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError("xs and ys must have equal length")
    if any(x <= 0 for x in xs) or any(y <= 0 for y in ys):
        raise ValueError("log-log fit requires positive inputs")
    if window is None:
        window = (0, len(xs))
    lo, hi = int(window[0]), int(window[1])
    if not (0 <= lo < hi <= len(xs)) or hi - lo < 2:
        raise ValueError(f"window {window} invalid for {len(xs)} samples")
    lx = np.log(xs)
    ly = np.log(ys)
    wx, wy = lx[lo:hi], ly[lo:hi]
    slope, intercept = np.polyfit(wx, wy, 1)
    resid = wy - (slope * wx + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((wy - wy.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-24 else 0.0
    else:
        r2 = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return LogLogFit(tuple(lx), tuple(ly), (lo, hi), float(slope), float(intercept), r2)


def _geometric_grid(hi, lo, count=12, decreasing=True):
    grid = np.geomspace(hi, lo, count) if decreasing else np.geomspace(lo, hi, count)
    return [float(g) for g in grid]


def _fit_warnings(fit):
    if fit.r2 < R2_WARN_THRESHOLD:
        return (f"low fit quality: r2={fit.r2:.3f} < {R2_WARN_THRESHOLD}",)
    return ()


# ---------------------------------------------------------------------------
# box counting


def grid_box_count(cloud: PointCloud, eps: float) -> int:
    """Occupied axis-aligned boxes of side eps, anchored at the bounding-box corner."""
    mins = cloud.points.min(axis=0)
    cells = np.floor((cloud.points - mins) / eps).astype(np.int64)
    return int(np.unique(cells, axis=0).shape[0])


def box_counting_pointcloud(cloud: PointCloud, eps_grid=None, window=None) -> DimensionEstimate:
    """Slope of log N(eps) against log(1/eps) for grid-box counts."""
    extent = float(np.max(cloud.points.max(axis=0) - cloud.points.min(axis=0)))
    if extent == 0.0:
        raise DegenerateInputError("all points identical; box counting undefined")
    if eps_grid is None:
        eps_grid = _geometric_grid(extent / 2.0, extent / 64.0)
    eps_grid = [float(e) for e in eps_grid]
    if any(e <= 0 for e in eps_grid):
        raise ValueError("eps grid must be positive")
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps grid must be strictly decreasing")
    counts = [grid_box_count(cloud, e) for e in eps_grid]
    inv_eps = [1.0 / e for e in eps_grid]
    fit = loglog_fit(inv_eps, counts, window)
    params = {
        "eps_grid": eps_grid,
        "window": list(fit.window),
        "n_points": cloud.n,
    }
    return DimensionEstimate(
        "box",
        fit.slope,
        fit,
        tuple(zip(inv_eps, [float(c) for c in counts])),
        params,
        _fit_warnings(fit),
    )


def _restricted_ball(adj, covered, centre, radius):
    """Nodes reachable from centre within radius, walking uncovered nodes only."""
    dist = {centre: 0.0}
    heap = [(0.0, centre)]
    ball = []
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, math.inf):
            continue
        ball.append(u)
        for v, w in adj[u]:
            nd = d + w
            if not covered[v] and nd <= radius and nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return ball

def greedy_cover(net: WeightedNetwork, eps: float) -> list:
    """Partition nodes into subnetworks of induced diameter <= eps.

    Greedy ball-growing: each round claims the radius-eps/2 ball (walked
    through uncovered nodes only, so parts stay internally connected)
    that covers the most uncovered nodes, ties broken by lowest centre
    id. Lazy re-evaluation: restricted balls only shrink as the cover
    grows, so stale queue entries are safe to refresh on demand.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = net.node_count
    adj = net.adjacency()
    covered = [False] * n
    radius = eps / 2.0
    parts = []
    heap = [(-n, c) for c in range(n)]
    fresh = [-1] * n  # round at which the queued size was computed
    cached = [None] * n
    rounds = 0
    while heap:
        _, centre = heapq.heappop(heap)
        if covered[centre]:
            continue
        if fresh[centre] == rounds:
            ball = cached[centre]
            for u in ball:
                covered[u] = True
            parts.append(sorted(ball))
            rounds += 1
        else:
            # stale upper bound: refresh and requeue; sizes only shrink
            ball = _restricted_ball(adj, covered, centre, radius)
            fresh[centre] = rounds
            cached[centre] = ball
            heapq.heappush(heap, (-len(ball), centre))
    return parts


def box_counting_network(net: WeightedNetwork, eps_grid=None, window=None) -> DimensionEstimate:
    """Greedy epsilon-node-covering count slope for a connected network."""
    metric = shortest_path_metric(net)
    diam = diameter(metric)
    if not math.isfinite(diam):
        raise ValueError("connected network required")
    if eps_grid is None:
        eps_grid = _geometric_grid(diam, net.min_weight())
    eps_grid = [float(e) for e in eps_grid]
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps grid must be strictly decreasing")
    counts = [len(greedy_cover(net, e)) for e in eps_grid]
    inv_eps = [1.0 / e for e in eps_grid]
    fit = loglog_fit(inv_eps, counts, window)
    params = {
        "eps_grid": eps_grid,
        "window": list(fit.window),
        "n_nodes": net.node_count,
    }
    return DimensionEstimate(
        "network-box",
        fit.slope,
        fit,
        tuple(zip(inv_eps, [float(c) for c in counts])),
        params,
        _fit_warnings(fit),
    )


# ---------------------------------------------------------------------------
# correlation dimension


def pair_correlation(cloud: PointCloud, eps_grid) -> list:
    """C(eps) = fraction of unordered point pairs at distance <= eps."""
    from scipy.spatial.distance import pdist

    d = np.sort(pdist(cloud.points))
    total = d.size
    return [float(np.searchsorted(d, e, side="right")) / total for e in eps_grid]


def correlation_dimension(cloud: PointCloud, eps_grid=None, window=None) -> DimensionEstimate:
    """Pair-counting estimator: slope of log C(eps) against log eps."""
    if cloud.n < 2:
        raise ValueError("correlation dimension requires at least 2 points")
    from scipy.spatial.distance import pdist

    d = pdist(cloud.points)
    d_max = float(d.max())
    if d_max == 0.0:
        raise DegenerateInputError("all points identical; correlation dimension undefined")
    if eps_grid is None:
        # mid-scale window: below d_max/6 boundary saturation sets in,
        # above d_max/48 lattice/discreteness artefacts do
        positive = d[d > 0]
        lo = max(float(np.min(positive)), d_max / 48.0)
        eps_grid = _geometric_grid(max(d_max / 6.0, lo * 2.0), lo, decreasing=False)
    eps_grid = [float(e) for e in eps_grid]
    if any(e <= 0 for e in eps_grid):
        raise ValueError("eps grid must be positive")
    if any(b <= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps grid must be strictly increasing")
    c = pair_correlation(cloud, eps_grid)
    if any(v == 0.0 for v in c):
        raise ValueError("eps grid extends below the smallest pairwise distance")
    fit = loglog_fit(eps_grid, c, window)
    params = {
        "eps_grid": eps_grid,
        "window": list(fit.window),
        "n_points": cloud.n,
    }
    return DimensionEstimate(
        "correlation",
        fit.slope,
        fit,
        tuple(zip(eps_grid, c)),
        params,
        _fit_warnings(fit),
    )


# ---------------------------------------------------------------------------
# persistent-homology dimension


@dataclass(frozen=True)
class PHDimensionConfig:
    """Subsample schedule and regression window for PH dimensions."""

    degree: int = 0
    alpha: float = 1.0
    n_schedule: tuple = tuple(range(5, 201, 5))
    repeats: int = 5
    seed: int = 42
    fit_tail: int = 36

    def __post_init__(self):
        object.__setattr__(self, "n_schedule", tuple(int(n) for n in self.n_schedule))
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if len(self.n_schedule) < 2:
            raise ValueError("n_schedule needs at least 2 sizes")
        if any(b <= a for a, b in zip(self.n_schedule, self.n_schedule[1:])):
            raise ValueError("n_schedule must be strictly increasing")
        if self.n_schedule[0] < 1:
            raise ValueError("subsample sizes must be positive")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if not (2 <= self.fit_tail <= len(self.n_schedule)):
            raise ValueError("fit_tail must lie in [2, len(n_schedule)]")

    def to_params(self) -> dict:
        return {
            "degree": self.degree,
            "alpha": self.alpha,
            "n_schedule": list(self.n_schedule),
            "repeats": self.repeats,
            "seed": self.seed,
            "fit_tail": self.fit_tail,
        }


def power_weighted_sum(barcode, alpha: float) -> float:
    """Sum of |interval|^alpha over the finite intervals of a barcode."""
    return float(sum(iv.length**alpha for iv in barcode.finite_intervals()))


def _ph_regression(estimator, cfg, means, extra_params, extra_warnings=()):
    schedule = list(cfg.n_schedule)
    lo = len(schedule) - cfg.fit_tail
    if any(e <= 0 for e in means[lo:]):
        raise UndefinedDimensionError(
            "power-weighted sums vanish inside the fit window; dimension undefined"
        )
    fit = loglog_fit(schedule[lo:], means[lo:])
    beta = fit.slope
    if beta >= 1.0:
        raise UndefinedDimensionError(
            f"growth exponent beta={beta:.4f} >= 1; dimension alpha/(1-beta) undefined",
            beta=beta,
        )
    value = cfg.alpha / (1.0 - beta)
    params = {**cfg.to_params(), **extra_params, "window": [lo, len(schedule)]}
    warnings = tuple(extra_warnings) + _fit_warnings(fit)
    return DimensionEstimate(
        estimator,
        value,
        fit,
        tuple(zip([float(n) for n in schedule], means)),
        params,
        warnings,
    )


def ph_dimension(cloud: PointCloud, cfg: PHDimensionConfig, threads=None) -> DimensionEstimate:
    """PH dimension alpha/(1-beta) from power-weighted barcode sums of subsamples.

    Degree 0 uses the union-find fast path; higher degrees reduce a
    Vietoris-Rips complex built to degree + 1.
    """
    if cfg.n_schedule[-1] > cloud.n:
        raise ValueError(
            f"largest subsample {cfg.n_schedule[-1]} exceeds cloud size {cloud.n}"
        )

    def task(nr):
        n, r = nr
        sample = subsample(cloud, n, derive_seed(cfg.seed, n, r))
        metric = euclidean_metric(sample)
        if cfg.degree == 0:
            bc = h0_union_find(metric)
        else:
            complex = vietoris_rips(metric, cfg.degree + 1, math.inf)
            bc = persistence(complex, cfg.degree)[cfg.degree]
        return power_weighted_sum(bc, cfg.alpha)

    tasks = [(n, r) for n in cfg.n_schedule for r in range(cfg.repeats)]
    sums = parallel_map(task, tasks, threads)
    means = [
        float(np.mean(sums[i : i + cfg.repeats]))
        for i in range(0, len(sums), cfg.repeats)
    ]
    return _ph_regression("ph-dim", cfg, means, {"input_points": cloud.n})


def induced_subnetwork(net: WeightedNetwork, nodes) -> WeightedNetwork:
    """Subnetwork on the given nodes (relabelled by sorted order) and the edges between them."""
    nodes = sorted(set(int(v) for v in nodes))
    relabel = {v: i for i, v in enumerate(nodes)}
    keep = set(nodes)
    edges = tuple(
        (relabel[u], relabel[v], w) for u, v, w in net.edges if u in keep and v in keep
    )
    return WeightedNetwork(len(nodes), edges)


def network_ph_dimension(
    net: WeightedNetwork, cfg: PHDimensionConfig, max_dim=None, threads=None
) -> DimensionEstimate:
    """PH dimension over node subsamples via weight-rank clique filtrations.

    Experimental: uniform node sampling, induced subnetworks (which may
    be disconnected; the resulting extra infinite degree-0 bars do not
    enter the power-weighted sums).
    """
    metric = shortest_path_metric(net)
    if not math.isfinite(diameter(metric)):
        raise ValueError("connected network required")
    if max_dim is None:
        max_dim = cfg.degree + 1
    if max_dim < cfg.degree + 1:
        raise ValueError("max_dim must be at least degree + 1 for death-completeness")
    if cfg.n_schedule[-1] > net.node_count:
        raise ValueError(
            f"largest subsample {cfg.n_schedule[-1]} exceeds node count {net.node_count}"
        )

    def task(nr):
        n, r = nr
        rng = np.random.default_rng(derive_seed(cfg.seed, n, r))
        nodes = rng.choice(net.node_count, size=n, replace=False)
        sub = induced_subnetwork(net, nodes)
        complex = weight_rank_clique(sub, min(max_dim, max(n - 1, 0)))
        bc = persistence(complex, cfg.degree)[cfg.degree]
        return power_weighted_sum(bc, cfg.alpha)

    tasks = [(n, r) for n in cfg.n_schedule for r in range(cfg.repeats)]
    sums = parallel_map(task, tasks, threads)
    means = [
        float(np.mean(sums[i : i + cfg.repeats]))
        for i in range(0, len(sums), cfg.repeats)
    ]
    return _ph_regression(
        "network-ph-dim",
        cfg,
        means,
        {"max_dim": max_dim, "experimental": True, "n_nodes": net.node_count},
        ("experimental estimator: no established ground truth",),
    )


# ---------------------------------------------------------------------------
# magnitude dimensions


def magnitude_dimension(
    metric: MetricView, t_grid=None, window=None, threads=None
) -> DimensionEstimate:
    """Slope of log Mag(tX) against log t over the window."""
    if t_grid is None:
        t_grid = [float(t) for t in range(1, 301)]
        if window is None:
            window = (40, 80)
    samples = magnitude_function(metric, t_grid, threads)
    accepted = samples.accepted()
    if not all(accepted):
        bad = [t for t, ok in zip(samples.t_grid, accepted) if not ok]
        worst = max(
            (r for r, ok in zip(samples.residuals, accepted) if not ok),
            default=math.inf,
        )
        raise SingularSimilarityError(bad[0], worst)
    fit = loglog_fit(samples.t_grid, samples.values, window)
    params = {
        "t_grid": [float(t) for t in samples.t_grid],
        "window": list(fit.window),
        "n_points": metric.size,
    }
    return DimensionEstimate(
        "magnitude-dim",
        fit.slope,
        fit,
        tuple(zip(samples.t_grid, samples.values)),
        params,
        _fit_warnings(fit),
    )


def alpha_magnitude_dimension(
    cloud: PointCloud, t_grid=None, window=None, max_degree: int = 1
) -> DimensionEstimate:
    """Slope of log alpha-magnitude of tX against log t.

    Barcodes are computed once and rescaled per grid entry. Grid entries
    where the signed sum is non-positive are excluded from the fit with
    a warning.
    """
    if t_grid is None:
        t_grid = [float(t) for t in range(1, 301)]
        if window is None:
            window = (40, 80)
    t_grid = [float(t) for t in t_grid]
    if any(t <= 0 for t in t_grid):
        raise ValueError("t grid must be positive")
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t grid must be strictly increasing")
    complex = alpha_complex_2d(cloud)
    barcodes = persistence(complex, max_degree)
    values = [
        persistent_magnitude([rescale_barcode(bc, t) for bc in barcodes]) for t in t_grid
    ]
    if window is None:
        window = (0, len(t_grid))
    lo, hi = int(window[0]), int(window[1])
    if not (0 <= lo < hi <= len(t_grid)):
        raise ValueError(f"window {window} invalid for {len(t_grid)} samples")
    kept = [k for k in range(lo, hi) if values[k] > 0.0]
    warnings = []
    if len(kept) < hi - lo:
        dropped = [t_grid[k] for k in range(lo, hi) if values[k] <= 0.0]
        warnings.append(
            f"excluded {len(dropped)} non-positive magnitude values at t={dropped}"
        )
    if len(kept) < 2:
        raise UndefinedDimensionError(
            "fewer than 2 positive alpha-magnitude values in the fit window"
        )
    fit = loglog_fit([t_grid[k] for k in kept], [values[k] for k in kept])
    params = {
        "t_grid": t_grid,
        "window": [lo, hi],
        "max_degree": max_degree,
        "n_points": cloud.n,
    }
    return DimensionEstimate(
        "alpha-magnitude-dim",
        fit.slope,
        fit,
        tuple(zip(t_grid, values)),
        params,
        tuple(warnings) + _fit_warnings(fit),
    )


# ---------------------------------------------------------------------------
# internal scaling dimension


def internal_scaling_dimension(
    net: WeightedNetwork, node=None, eps_grid=None, window=None, agreement_tol: float = 0.25
) -> DimensionEstimate:
    """Growth exponent of shortest-path ball cardinality around a node.

    `node=None` averages over all nodes: the fitted slope of the mean
    log-count equals the mean of the per-node slopes, and a warning is
    attached when per-node estimates spread beyond agreement_tol.
    """
    metric = shortest_path_metric(net)
    diam = diameter(metric)
    if not math.isfinite(diam):
        raise ValueError("connected network required")
    if eps_grid is None:
        lo = net.min_weight() if net.edges else 1.0
        eps_grid = _geometric_grid(max(diam / 2.0, lo * 2.0), lo, decreasing=False)
        if window is None and len(eps_grid) >= 6:
            # the definition is an eps -> infinity limit: read the top half
            window = (len(eps_grid) // 2, len(eps_grid))
    eps_grid = [float(e) for e in eps_grid]
    if any(e <= 0 for e in eps_grid):
        raise ValueError("eps grid must be positive")
    if any(b <= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps grid must be strictly increasing")

    sorted_rows = np.sort(metric.dist, axis=1)
    counts = np.stack(
        [np.searchsorted(row, eps_grid, side="right") for row in sorted_rows]
    ).astype(np.float64)

    if node is not None:
        if not (0 <= int(node) < net.node_count):
            raise ValueError(f"node {node} outside [0, {net.node_count})")
        ys = counts[int(node)]
        fit = loglog_fit(eps_grid, ys, window)
        params = {
            "node": int(node),
            "eps_grid": eps_grid,
            "window": list(fit.window),
            "n_nodes": net.node_count,
        }
        return DimensionEstimate(
            "internal-scaling",
            fit.slope,
            fit,
            tuple(zip(eps_grid, [float(c) for c in ys])),
            params,
            _fit_warnings(fit),
        )

    log_counts = np.log(counts)
    mean_log = np.exp(log_counts.mean(axis=0))  # geometric mean counts
    fit = loglog_fit(eps_grid, mean_log, window)
    lo, hi = fit.window
    lx = np.log(eps_grid)[lo:hi]
    lx_c = lx - lx.mean()
    per_node = (log_counts[:, lo:hi] @ lx_c) / float(lx_c @ lx_c)
    spread = float(per_node.max() - per_node.min())
    warnings = list(_fit_warnings(fit))
    has_dimension = spread <= agreement_tol
    if not has_dimension:
        warnings.append(
            f"per-node estimates spread {spread:.3f} exceeds tolerance {agreement_tol}; "
            "network has no single internal scaling dimension"
        )
    params = {
        "node": "all",
        "eps_grid": eps_grid,
        "window": list(fit.window),
        "agreement_tol": agreement_tol,
        "per_node_spread": spread,
        "has_internal_scaling_dimension": has_dimension,
        "n_nodes": net.node_count,
    }
    return DimensionEstimate(
        "internal-scaling",
        fit.slope,
        fit,
        tuple(zip(eps_grid, [float(c) for c in mean_log])),
        params,
        tuple(warnings),
    )
