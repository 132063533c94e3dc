#!/usr/bin/python3
"""
Regions Module

Achievable mutual-information regions of two-transmitter channels over
product (or, in cooperation mode, joint) input distributions, scaled-region
membership by linear programming, and the minimum source-channel rates built
on top of them.
"""

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from .config import Config
from .exception_handler import (
    CapExceededError,
    ConfigurationError,
    ModelError,
    OverlapError,
    UnachievableError,
)
from .prob_core import (
    ChannelKind,
    ChannelModel,
    JointPmf,
    Names,
    ProductInput,
    _as_names,
    entropy_cond,
    plogp_sum,
    rate_triples,
)
from .simplex_search import CoordinateAscent, simplex_grid, simplex_grid_size

EVALUATION_CHUNK = 50_000
COMPONENT_LABELS = ("i1", "i2", "isum")


@dataclass(frozen=True)
class RateVector:
    """Per-receiver (I1, I2, Isum) triples in bits per channel use."""

    values: Tuple[float, ...]

    @property
    def receivers(self) -> int:
        return len(self.values) // 3

    def triple(self, receiver: int) -> Tuple[float, float, float]:
        start = 3 * (receiver - 1)
        return self.values[start], self.values[start + 1], self.values[start + 2]


@dataclass(frozen=True)
class EntropyVector:
    """Per-receiver (h1, h2, hsum) requirements in bits per source symbol."""

    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) not in (3, 6):
            raise ModelError("An entropy vector has 3 or 6 components")
        for start in range(0, len(values), 3):
            h1, h2, hsum = values[start : start + 3]
            if min(h1, h2, hsum) < -1e-9:
                raise ModelError("Entropy vector components must be nonnegative")
            if max(h1, h2) > hsum + 1e-9:
                raise ModelError("hsum must be at least max(h1, h2)")
        object.__setattr__(self, "values", tuple(max(v, 0.0) for v in values))

    @classmethod
    def concat(cls, parts: Sequence["EntropyVector"]) -> "EntropyVector":
        values: Tuple[float, ...] = ()
        for part in parts:
            values += part.values
        return cls(values)

    @property
    def receivers(self) -> int:
        return len(self.values) // 3

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)


@dataclass(frozen=True, eq=False)
class RegionHull:
    """
    Pruned candidate set whose convex hull (with down-set closure) is the region.

    ``points`` holds the rate vectors kept after hull and dominance pruning;
    ``params`` the input distributions that produced them, either
    (p_x1 | p_x2) for product inputs or flattened p(x1, x2) in cooperation mode.
    """

    channel: ChannelModel
    receivers: int
    grid_resolution: float
    cooperation: bool
    points: np.ndarray
    params: np.ndarray
    candidate_count: int

    @property
    def dimension(self) -> int:
        return 3 * self.receivers

    def rate_vector(self, index: int) -> RateVector:
        return RateVector(tuple(float(v) for v in self.points[index]))

    def joint_inputs(self, indices: Sequence[int]) -> np.ndarray:
        """p(x1, x2) for the given candidates, shape (K, |X1|, |X2|)."""
        return params_to_joint(self.params[list(indices)], self.channel, self.cooperation)

    def max_component(self, component: int) -> float:
        if len(self.points) == 0:
            return 0.0
        return float(self.points[:, component].max())


@dataclass
class ScaleResult:
    """Minimum scale b and the time-sharing witness that achieves it."""

    b_min: float
    weights: Tuple[float, ...]
    points: np.ndarray
    params: np.ndarray
    cooperation: bool
    channel: ChannelModel
    truncated: bool = False
    iterations: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def witness_joint(self) -> np.ndarray:
        """p(x1, x2 | q) per time-sharing value."""
        return params_to_joint(self.params, self.channel, self.cooperation)

    @property
    def witness(self) -> Optional[ProductInput]:
        """Witness as a time-sharing product input (None in cooperation mode)."""
        if self.cooperation or len(self.weights) == 0:
            return None
        x1 = self.channel.input_cardinalities[0]
        return ProductInput(
            np.asarray(self.weights),
            self.params[:, :x1],
            self.params[:, x1:],
        )


def params_to_joint(
    params: np.ndarray, channel: ChannelModel, cooperation: bool
) -> np.ndarray:
    x1, x2 = channel.input_cardinalities
    if cooperation:
        return params.reshape(-1, x1, x2)
    return params[:, :x1, None] * params[:, None, x1:]


def evaluate_rates(
    p_x1x2: np.ndarray, tables: Sequence[np.ndarray], threads: Optional[int] = None
) -> np.ndarray:
    """Rate vectors (N, 3R) for a batch of input pmfs, computed in chunks."""

    def chunk(start: int) -> np.ndarray:
        batch = p_x1x2[start : start + EVALUATION_CHUNK]
        return np.concatenate([rate_triples(batch, t) for t in tables], axis=1)

    starts = range(0, len(p_x1x2), EVALUATION_CHUNK)
    if threads == 1 or len(starts) <= 1:
        parts = [chunk(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(chunk, starts))
    if not parts:
        return np.zeros((0, 3 * len(tables)))
    return np.concatenate(parts, axis=0)


def pareto_filter(points: np.ndarray, tol: float = Config.PRUNE_TOLERANCE) -> np.ndarray:
    """Indices of points not weakly dominated by another kept point."""
    order = np.argsort(-points.sum(axis=1), kind="stable")
    kept = np.empty((len(points), points.shape[1]))
    kept_index: List[int] = []
    for i in order:
        p = points[i]
        if kept_index and np.any(np.all(kept[: len(kept_index)] >= p - tol, axis=1)):
            continue
        kept[len(kept_index)] = p
        kept_index.append(int(i))
    return np.array(sorted(kept_index), dtype=int)


def prune_candidates(
    points: np.ndarray, params: np.ndarray, use_hull: bool = True
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Drop candidates that cannot change a membership answer.

    Exact duplicates go first, then (in up to three dimensions) points
    interior to the convex hull, then weakly dominated points.
    """
    if len(points) == 0:
        return points, params
    _, unique = np.unique(np.round(points, 12), axis=0, return_index=True)
    unique.sort()
    points, params = points[unique], params[unique]

    d = points.shape[1]
    if use_hull and d <= 3 and len(points) > d + 1:
        try:
            hull = ConvexHull(points, qhull_options="QJ")
            vertices = np.sort(hull.vertices)
            points, params = points[vertices], params[vertices]
        except (QhullError, ValueError) as e:
            logging.debug(f"Hull pruning skipped: {e}")

    keep = pareto_filter(points)
    return points[keep], params[keep]


def _input_grid(
    channel: ChannelModel, resolution: float, cooperation: bool, cap: int
) -> np.ndarray:
    x1, x2 = channel.input_cardinalities
    if cooperation:
        size = simplex_grid_size(x1 * x2, resolution)
        if size > cap:
            raise CapExceededError("Candidate grid", size, cap)
        return simplex_grid(x1 * x2, resolution)
    size = simplex_grid_size(x1, resolution) * simplex_grid_size(x2, resolution)
    if size > cap:
        raise CapExceededError("Candidate grid", size, cap)
    g1 = simplex_grid(x1, resolution)
    g2 = simplex_grid(x2, resolution)
    return np.concatenate(
        [np.repeat(g1, len(g2), axis=0), np.tile(g2, (len(g1), 1))], axis=1
    )


def _row_sizes(channel: ChannelModel, cooperation: bool) -> List[int]:
    x1, x2 = channel.input_cardinalities
    return [x1 * x2] if cooperation else [x1, x2]


def ascend_direction(
    channel: ChannelModel,
    tables: Sequence[np.ndarray],
    cooperation: bool,
    direction: np.ndarray,
    starts: np.ndarray,
    max_steps: int = Config.REFINE_STEPS,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Coordinate ascent on direction . rates from each start.

    Returns:
        Tuple of (rate vectors, params) of the end points
    """

    def objective(batch: np.ndarray) -> np.ndarray:
        p = params_to_joint(batch, channel, cooperation)
        return evaluate_rates(p, tables, threads=1) @ direction

    search = CoordinateAscent(
        objective, _row_sizes(channel, cooperation), max_steps=max_steps
    )
    found = np.array([search.run(start)[0] for start in starts])
    rates = evaluate_rates(params_to_joint(found, channel, cooperation), tables, threads=1)
    return rates, found


def refinement_directions(dimension: int, restarts: int, seed: int) -> np.ndarray:
    """Unit directions, all-ones, per-receiver sums and seeded random weights."""
    rng = np.random.default_rng(seed)
    directions = [np.eye(dimension)[j] for j in range(dimension)]
    directions.append(np.ones(dimension))
    if dimension == 6:
        directions.extend([np.r_[np.ones(3), np.zeros(3)], np.r_[np.zeros(3), np.ones(3)]])
    directions.extend(rng.dirichlet(np.ones(dimension), size=restarts))
    return np.array(directions)


def achievable_hull(
    channel: ChannelModel,
    receivers: Optional[int] = None,
    grid_resolution: float = Config.GRID_RESOLUTION,
    refine: bool = True,
    cooperation: bool = False,
    candidate_cap: int = Config.CANDIDATE_CAP,
    threads: Optional[int] = None,
    extra_directions: Optional[np.ndarray] = None,
) -> RegionHull:
    """
    Build the achievable region of a channel.

    Args:
        channel: Channel model
        receivers: 1 or 2; defaults to every receiver of the channel
        grid_resolution: Simplex grid step in (0, 0.5]
        refine: Run coordinate ascent along several directions
        cooperation: Enumerate joint p(x1, x2) instead of products
        candidate_cap: Maximum number of grid candidates
        threads: Worker threads for candidate evaluation
        extra_directions: Additional refinement directions

    Returns:
        RegionHull of pruned candidates
    """
    count = receivers if receivers is not None else channel.receiver_count
    if count not in (1, 2) or count > channel.receiver_count:
        raise ConfigurationError(
            f"A {channel.kind.value} channel does not support {count} receivers"
        )
    if not 0 < grid_resolution <= 0.5:
        raise ConfigurationError(
            f"Grid resolution must be in (0, 0.5], got {grid_resolution}"
        )
    tables = [channel.receiver_table(k) for k in range(1, count + 1)]

    params = _input_grid(channel, grid_resolution, cooperation, candidate_cap)
    points = evaluate_rates(
        params_to_joint(params, channel, cooperation), tables, threads=threads
    )
    candidate_count = len(points)
    logging.debug(
        f"Evaluated {candidate_count} candidates at resolution {grid_resolution} "
        f"({channel.kind.value}, receivers={count}, cooperation={cooperation})"
    )

    if refine and Config.REFINE_STEPS > 0:
        directions = refinement_directions(3 * count, Config.REFINE_RESTARTS, Config.REFINE_SEED)
        if extra_directions is not None:
            directions = np.concatenate([directions, np.atleast_2d(extra_directions)])
        new_points, new_params = [points], [params]
        for w in directions:
            top = np.argsort(-(points @ w), kind="stable")[:2]
            rates, found = ascend_direction(channel, tables, cooperation, w, params[top])
            new_points.append(rates)
            new_params.append(found)
        points = np.concatenate(new_points)
        params = np.concatenate(new_params)

    points, params = prune_candidates(points, params)
    logging.info(f"Region hull kept {len(points)} of {candidate_count} candidates")
    return RegionHull(
        channel, count, grid_resolution, cooperation, points, params, candidate_count
    )


def refine_hull(
    hull: RegionHull, direction: np.ndarray, start_params: np.ndarray
) -> RegionHull:
    """Add points found by ascending a direction from the given inputs."""
    tables = [hull.channel.receiver_table(k) for k in range(1, hull.receivers + 1)]
    rates, found = ascend_direction(
        hull.channel, tables, hull.cooperation, direction, start_params
    )
    points, params = prune_candidates(
        np.concatenate([hull.points, rates]), np.concatenate([hull.params, found])
    )
    return RegionHull(
        hull.channel,
        hull.receivers,
        hull.grid_resolution,
        hull.cooperation,
        points,
        params,
        hull.candidate_count,
    )


# ---------------------------------------------------------------------------
# Scaled-region membership
# ---------------------------------------------------------------------------


def _feasible(points: np.ndarray, h: np.ndarray, b: float, method: str = "highs"):
    n = len(points)
    return linprog(
        np.zeros(n),
        A_ub=-(b * points.T),
        b_ub=-h,
        A_eq=np.ones((1, n)),
        b_eq=np.ones(1),
        bounds=(0, None),
        method=method,
    )


def _ratio_lp(points: np.ndarray, h: np.ndarray) -> float:
    """Largest t with V lambda >= t h over convex weights lambda (0 if infeasible)."""
    n, d = points.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(
        c,
        A_ub=np.concatenate([-points.T, h[:, None]], axis=1),
        b_ub=np.zeros(d),
        A_eq=np.concatenate([np.ones((1, n)), np.zeros((1, 1))], axis=1),
        b_eq=np.ones(1),
        bounds=[(0, None)] * n + [(0, None)],
        method="highs",
    )
    return float(res.x[-1]) if res.status == 0 else 0.0


def _check_dimensions(hull: RegionHull, h: np.ndarray) -> None:
    if h.shape != (hull.dimension,):
        raise ModelError(
            f"Requirement has {h.size} components, region has {hull.dimension}"
        )


def _zero_directions(hull: RegionHull, h: np.ndarray) -> None:
    dead = [
        j
        for j in range(hull.dimension)
        if h[j] > 0 and hull.max_component(j) <= Config.PRUNE_TOLERANCE
    ]
    if dead:
        labels = [
            f"{COMPONENT_LABELS[j % 3]}_rx{j // 3 + 1}" for j in dead
        ]
        raise UnachievableError(
            f"positive requirement on {', '.join(labels)} where the region is 0",
            components=dead,
        )


def _reduce_support(
    points: np.ndarray, h: np.ndarray, b: float, support: np.ndarray, weights: np.ndarray,
    max_q: int,
) -> Tuple[np.ndarray, np.ndarray, bool]:
    if len(support) <= max_q:
        return support, weights, False
    for subset in combinations(range(len(support)), max_q):
        chosen = support[list(subset)]
        res = _feasible(points[chosen], h, b * (1 + 1e-9), method="highs-ds")
        if res.status == 0:
            return chosen, res.x, False
    logging.warning(
        f"Witness needs {len(support)} time-sharing points; keeping the "
        f"{max_q} heaviest"
    )
    top = np.argsort(-weights)[:max_q]
    kept = weights[top]
    return support[top], kept / kept.sum(), True


def min_scale_b(
    hull: RegionHull,
    h: EntropyVector,
    tol: float = Config.BISECTION_TOLERANCE,
    max_q: int = Config.MAX_TIME_SHARING,
) -> ScaleResult:
    """
    Smallest b such that b times a convex combination of hull points dominates h.

    Bisection on b with an LP feasibility check per step, then one ratio LP
    that pins b_min to the face of the hull inside the final bracket. The
    returned b_min is feasible and b_min - tol is not.

    Raises:
        ModelError: If the dimensions of h and the hull disagree
        UnachievableError: If h is positive where the hull is identically 0
    """
    req = h.as_array()
    _check_dimensions(hull, req)
    points = hull.points

    if np.all(req <= 0):
        first = np.array([0])
        return ScaleResult(
            0.0, (1.0,), points[first], hull.params[first], hull.cooperation, hull.channel
        )
    _zero_directions(hull, req)

    mean = points.mean(axis=0)
    positive = req > 0
    hi = float(np.max(req[positive] / mean[positive]))
    lo = 0.0
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _feasible(points, req, mid).status == 0:
            hi = mid
        else:
            lo = mid
        iterations += 1

    t = _ratio_lp(points, req)
    if t > 0 and lo - 1e-12 <= 1.0 / t <= hi:
        hi = 1.0 / t

    res = _feasible(points, req, hi, method="highs-ds")
    for slack in (1e-9, 1e-6):
        if res.status == 0:
            break
        res = _feasible(points, req, hi * (1 + slack))
    weights = np.asarray(res.x)
    support = np.nonzero(weights > 1e-12)[0]
    support, kept, truncated = _reduce_support(
        points, req, hi, support, weights[support], max_q
    )
    kept = np.asarray(kept)
    kept = kept / kept.sum()
    logging.debug(f"min_scale_b: b={hi:.6f} after {iterations} LPs, |Q|={len(support)}")
    result = ScaleResult(
        hi,
        tuple(float(w) for w in kept),
        points[support],
        hull.params[support],
        hull.cooperation,
        hull.channel,
        truncated=truncated,
        iterations=iterations,
    )
    if truncated:
        result.notes.append("witness truncated to the time-sharing bound")
    return result


def max_margin(hull: RegionHull, h: EntropyVector, b: float) -> Tuple[float, np.ndarray]:
    """
    Largest t with b * v - h >= t componentwise for some v in the hull.

    Returns:
        Tuple of (margin in bits, dual weights of the constraints)
    """
    req = h.as_array()
    _check_dimensions(hull, req)
    n, d = hull.points.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = np.concatenate([-(b * hull.points.T), np.ones((d, 1))], axis=1)
    a_eq = np.concatenate([np.ones((1, n)), np.zeros((1, 1))], axis=1)
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=-req,
        A_eq=a_eq,
        b_eq=np.ones(1),
        bounds=[(0, None)] * n + [(None, None)],
        method="highs",
    )
    if res.status != 0:
        raise ModelError(f"Margin LP failed: {res.message}")
    duals = -np.asarray(res.ineqlin.marginals)
    return float(res.x[-1]), duals


def binding_direction(hull: RegionHull, h: EntropyVector, b: float) -> np.ndarray:
    """Normal of the region face that limits b (dual weights of the margin LP)."""
    _, duals = max_margin(hull, h, b)
    duals = np.maximum(duals, 0.0)
    if duals.sum() <= 0:
        return h.as_array() / max(h.as_array().sum(), 1e-12)
    return duals / duals.sum()


# ---------------------------------------------------------------------------
# Source-side helpers and minimum rates
# ---------------------------------------------------------------------------


def sw_region_corner(
    joint: JointPmf, sources: Names = ("S1", "S2"), side: Names = ()
) -> EntropyVector:
    """(H(S1|S2,side), H(S2|S1,side), H(S1,S2|side))."""
    s1, s2 = _as_names(sources)
    given = _as_names(side)
    overlap = sorted({s1, s2} & set(given))
    if overlap:
        raise OverlapError(overlap)
    return EntropyVector(
        (
            entropy_cond(joint, (s1,), (s2,) + given),
            entropy_cond(joint, (s2,), (s1,) + given),
            entropy_cond(joint, (s1, s2), given),
        )
    )


def _require_mac(channel: ChannelModel) -> None:
    if channel.kind != ChannelKind.MAC:
        raise ConfigurationError(
            f"A mac channel is required, got {channel.kind.value}"
        )


def informational_separation(
    joint: JointPmf,
    channel: ChannelModel,
    side: Names = (),
    grid_resolution: float = Config.GRID_RESOLUTION,
    refine: bool = True,
    hull: Optional[RegionHull] = None,
) -> ScaleResult:
    """Slepian-Wolf corner scaled into the MAC region."""
    _require_mac(channel)
    h = sw_region_corner(joint, ("S1", "S2"), side)
    region = hull or achievable_hull(channel, 1, grid_resolution, refine)
    return min_scale_b(region, h)


def informational_separation_minrate(
    joint: JointPmf,
    channel: ChannelModel,
    side: Names = (),
    grid_resolution: float = Config.GRID_RESOLUTION,
    refine: bool = True,
) -> float:
    """Minimum b with separate Slepian-Wolf and MAC coding."""
    return informational_separation(joint, channel, side, grid_resolution, refine).b_min


def channel_capacity(
    table: np.ndarray,
    threshold: float = Config.BLAHUT_ARIMOTO_THRESHOLD,
    max_iter: int = Config.BLAHUT_ARIMOTO_MAX_ITER,
) -> Tuple[float, np.ndarray]:
    """
    Capacity of a single-input DMC by Blahut-Arimoto.

    Args:
        table: P(y|x), shape (|X|, |Y|)

    Returns:
        Tuple of (capacity in bits, capacity-achieving input pmf)
    """
    w = np.asarray(table, dtype=float)
    if w.ndim != 2 or np.max(np.abs(w.sum(axis=1) - 1.0)) > Config.PROB_TOLERANCE:
        raise ModelError("Channel rows must be probability vectors")
    r = np.full(w.shape[0], 1.0 / w.shape[0])
    log_w = np.log2(np.where(w > 0, w, 1.0))
    iteration = -1
    for iteration in range(max_iter):
        q = r @ w
        log_q = np.log2(np.where(q > 0, q, 1.0))
        divergence = np.sum(w * (log_w - log_q[None, :]), axis=1)
        new_r = r * np.exp2(divergence)
        new_r /= new_r.sum()
        if np.max(np.abs(new_r - r)) < threshold:
            r = new_r
            break
        r = new_r
    p_y = r @ w
    capacity = float(plogp_sum(p_y[None], (1,))[0] - np.dot(r, plogp_sum(w, (1,))))
    logging.debug(
        f"Blahut-Arimoto converged to {capacity:.9f} bits after {iteration + 1} iterations"
    )
    return max(capacity, 0.0), r


def full_coop_minrate(
    joint: JointPmf, channel: ChannelModel, side: Names = ()
) -> float:
    """
    H(S1,S2|side) over the capacity of the super-letter channel (X1,X2) -> Y1.

    Raises:
        UnachievableError: If the numerator is positive and the capacity is 0
    """
    _require_mac(channel)
    numerator = entropy_cond(joint, ("S1", "S2"), _as_names(side))
    if numerator <= 0:
        return 0.0
    x1, x2 = channel.input_cardinalities
    capacity, _ = channel_capacity(channel.receiver_table(1).reshape(x1 * x2, -1))
    if capacity <= Config.PRUNE_TOLERANCE:
        raise UnachievableError("the channel has zero capacity even with cooperation")
    return numerator / capacity


def oracle_min_b(
    channel: ChannelModel,
    h: EntropyVector,
    resolution: float = 1e-3,
    cooperation: bool = False,
    candidate_cap: int = Config.CANDIDATE_CAP,
    threads: Optional[int] = None,
) -> float:
    """
    Brute-force minimum b on an exhaustive simplex grid.

    No refinement and no bisection: a single LP maximizes t with
    V lambda >= t h over the grid points, and b = 1/t.
    """
    req = h.as_array()
    receivers = h.receivers
    if np.all(req <= 0):
        return 0.0
    tables = [channel.receiver_table(k) for k in range(1, receivers + 1)]
    params = _input_grid(channel, resolution, cooperation, candidate_cap)
    points = evaluate_rates(params_to_joint(params, channel, cooperation), tables, threads)
    if points.shape[1] <= 3:
        points, _ = prune_candidates(points, params)
    t = _ratio_lp(points, req)
    if t <= Config.PRUNE_TOLERANCE:
        raise UnachievableError("the oracle grid cannot meet the requirement")
    return 1.0 / t


def region_csv(hull: RegionHull) -> str:
    """
    CSV dump of the hull vertices with their witness pmfs.

    Header: i1_rx1,i2_rx1,isum_rx1[,i1_rx2,i2_rx2,isum_rx2],p_x1,p_x2
    (p_x1x2 in cooperation mode); pmfs are ';'-joined probabilities.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator=Config.CSV_LINE_TERMINATOR)
    header = [
        f"{label}_rx{k}" for k in range(1, hull.receivers + 1) for label in COMPONENT_LABELS
    ]
    header += ["p_x1x2"] if hull.cooperation else ["p_x1", "p_x2"]
    writer.writerow(header)

    x1 = hull.channel.input_cardinalities[0]
    fmt = f"{{:.{Config.DECIMALS}f}}"
    for point, param in zip(hull.points, hull.params):
        row = [fmt.format(v) for v in point]
        pieces = [param] if hull.cooperation else [param[:x1], param[x1:]]
        row += [";".join(fmt.format(p) for p in piece) for piece in pieces]
        writer.writerow(row)
    return buffer.getvalue()
