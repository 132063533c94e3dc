#!/usr/bin/python3
"""
Simplex Search Module

Grids over products of probability simplices and a batched coordinate
search that moves probability mass between entries of one row at a time.
Parameters are flat vectors made of consecutive probability rows.
"""

import logging
from itertools import combinations
from math import comb
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .config import Config
from .exception_handler import CapExceededError, ConfigurationError

# objective maps a batch (B, D) of parameter vectors to scores (B,)
BatchObjective = Callable[[np.ndarray], np.ndarray]


def grid_divisions(resolution: float) -> int:
    """Number of equal steps the unit mass is split into."""
    if not 0 < resolution <= 0.5:
        raise ConfigurationError(
            f"Grid resolution must be in (0, 0.5], got {resolution}"
        )
    return max(2, int(round(1.0 / resolution)))


def simplex_grid_size(k: int, resolution: float) -> int:
    """Number of points of the k-simplex grid."""
    divisions = grid_divisions(resolution)
    return comb(divisions + k - 1, k - 1)


def simplex_grid(k: int, resolution: float) -> np.ndarray:
    """
    All probability vectors of length k with entries on the grid.

    Args:
        k: Alphabet size
        resolution: Grid step (1/resolution is rounded to an integer)

    Returns:
        Array of shape (G, k), rows summing to one
    """
    divisions = grid_divisions(resolution)
    if k == 1:
        return np.ones((1, 1))
    # stars and bars: choose k-1 bar positions among divisions+k-1 slots
    bars = np.array(list(combinations(range(divisions + k - 1), k - 1)))
    edges = np.concatenate(
        [np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), divisions + k - 1)],
        axis=1,
    )
    counts = np.diff(edges, axis=1) - 1
    return counts / divisions


def row_slices(row_sizes: Sequence[int]) -> List[slice]:
    slices = []
    start = 0
    for size in row_sizes:
        slices.append(slice(start, start + size))
        start += size
    return slices


def product_grid(
    row_sizes: Sequence[int],
    resolution: float,
    cap: int,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """
    Product of per-row simplex grids as flat parameter vectors.

    When the product exceeds ``cap`` and an rng is given, a seeded uniform
    subsample of ``cap`` grid points is returned instead; without an rng the
    cap is a hard limit.

    Raises:
        CapExceededError: If the grid is too large and no rng was supplied
    """
    grids = [simplex_grid(k, resolution) for k in row_sizes]
    sizes = [len(g) for g in grids]
    total = int(np.prod(sizes, dtype=float))
    if total > cap:
        if rng is None or total >= 2**62:
            raise CapExceededError("Candidate grid", total, cap)
        logging.debug(f"Subsampling {cap} of {total} grid points")
        flat = np.unique(rng.integers(0, total, size=cap))
        indices = np.unravel_index(flat, sizes)
    else:
        indices = tuple(
            axis.ravel() for axis in np.meshgrid(*[np.arange(s) for s in sizes], indexing="ij")
        )
    return np.concatenate([g[i] for g, i in zip(grids, indices)], axis=1)


def random_point(
    row_sizes: Sequence[int], rng: np.random.Generator, count: int = 1
) -> np.ndarray:
    """Uniformly random points of the product of simplices."""
    return np.concatenate(
        [rng.dirichlet(np.ones(k), size=count) for k in row_sizes], axis=1
    )


class CoordinateAscent:
    """
    Maximize a batched objective over a product of probability simplices.

    Every sweep tries moving ``step`` of mass from entry i to entry j within
    each row, for all ordered pairs, evaluating all moves as one batch. The
    best improving move is taken and the step is multiplied by ``stepup``;
    a sweep without improvement multiplies the step by ``stepdn``.
    """

    def __init__(
        self,
        objective: BatchObjective,
        row_sizes: Sequence[int],
        max_steps: int = Config.REFINE_STEPS,
        step0: float = 0.1,
        stepup: float = 1.0,
        stepdn: float = 0.5,
        min_step: float = 1e-7,
    ) -> None:
        if stepup < 1:
            raise ConfigurationError("Step increase must be greater or equal 1")
        if not 0 < stepdn < 1:
            raise ConfigurationError("Step decrease must be between 0 and 1")
        if step0 <= 0:
            raise ConfigurationError("Initial step must be greater than 0")
        self.objective = objective
        self.row_sizes = list(row_sizes)
        self.max_steps = max_steps
        self.step0 = step0
        self.stepup = stepup
        self.stepdn = stepdn
        self.min_step = min_step

        # move table: (position losing mass, position gaining mass)
        moves = []
        for sl in row_slices(self.row_sizes):
            positions = range(sl.start, sl.stop)
            moves.extend((i, j) for i in positions for j in positions if i != j)
        self._moves = np.array(moves, dtype=int).reshape(-1, 2)
        self.evaluations = 0

    def _candidates(self, theta: np.ndarray, step: float) -> np.ndarray:
        src, dst = self._moves[:, 0], self._moves[:, 1]
        amount = np.minimum(step, theta[src])
        batch = np.repeat(theta[None, :], len(self._moves), axis=0)
        rows = np.arange(len(self._moves))
        batch[rows, src] -= amount
        batch[rows, dst] += amount
        return batch[amount > 0]

    def run(self, theta0: np.ndarray) -> Tuple[np.ndarray, float]:
        """
        Run the search from a starting point.

        Returns:
            Tuple of (best parameter vector, best objective value)
        """
        theta = np.array(theta0, dtype=float)
        value = float(self.objective(theta[None, :])[0])
        self.evaluations += 1
        step = self.step0
        if len(self._moves) == 0:
            return theta, value

        for _ in range(self.max_steps):
            if step < self.min_step:
                break
            batch = self._candidates(theta, step)
            if len(batch) == 0:
                step *= self.stepdn
                continue
            scores = np.asarray(self.objective(batch), dtype=float)
            self.evaluations += len(batch)
            best = int(np.argmax(scores))
            if scores[best] > value + 1e-15:
                theta = batch[best]
                value = float(scores[best])
                step = min(step * self.stepup, 1.0)
            else:
                step *= self.stepdn

        logging.debug(
            f"Coordinate ascent finished at {value:.6g} after {self.evaluations} evaluations"
        )
        return theta, value

    def run_many(self, starts: np.ndarray) -> Tuple[np.ndarray, float]:
        """Run from several starting points, returning the overall best."""
        best_theta, best_value = None, -np.inf
        for start in starts:
            theta, value = self.run(start)
            if value > best_value:
                best_theta, best_value = theta, value
        assert best_theta is not None
        return best_theta, best_value
